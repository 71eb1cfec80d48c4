"""Lie bialgebras over the rationals, their twists, their crossed
(action + coaction) modules, and a normal-ordering engine for the
enveloping algebra that lets the module identities be checked exactly
even when intermediate degrees exceed any chosen truncation.

Conventions, fixed once and used everywhere:

  * bracket is a matrix B: V (x) V -> V, columns indexed row-major;
  * cobracket is a matrix D: V -> V (x) V;
  * the cyclic rotation C sends v1 (x) v2 (x) v3 to v2 (x) v3 (x) v1,
    and Alt = 1 + C + C^2;
  * the adjoint action on a tensor square is
    ad2 = B (x) 1 + (1 (x) B)(tau (x) 1) as a map V^3 -> V^2, reading the
    first factor as the actor;
  * a module/comodule pair (pi, pistar) is crossed when identity (1)
    [action is a module], identity (2) [coaction is a comodule] and
    identity (3) [the mixed relation below] all hold:

      (2)  (tau (x) 1)(1 (x) pistar) pistar - (1 (x) pistar) pistar
             = (D (x) 1) pistar                on V;

      (3)  pistar . pi = (B (x) 1)(1 (x) pistar)
                       + (1 (x) pi)(tau (x) 1)(1 (x) pistar)
                       - (1 (x) pi)(D (x) 1)   on b (x) V.

    The orientation of (2) is the one forced by (3): on the enveloping
    algebra the mixed relation propagates the coaction from
    pistar(1) = 0, generators then coact by -D, and such a coaction
    satisfies (2) as written (swap minus identity), not its negative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .coalg import LawRecord
from .linalg import Matrix, mat_kron
from .scalars import RATIONAL


class DegreeOverflow(Exception):
    """A computation left the chosen truncation of the enveloping algebra."""


# ---------------------------------------------------------------------------
# permutation matrices on tensor powers


def swap_matrix(n):
    """tau: V (x) V -> V (x) V, e_i (x) e_j -> e_j (x) e_i."""
    zero, one = Fraction(0), Fraction(1)
    ent = [zero] * (n * n * n * n)
    for i in range(n):
        for j in range(n):
            ent[(j * n + i) * n * n + (i * n + j)] = one
    return Matrix(n * n, n * n, RATIONAL, tuple(ent))


def cycle_matrix(n):
    """C: V^3 -> V^3, e_i (x) e_j (x) e_k -> e_j (x) e_k (x) e_i."""
    m = n ** 3
    zero, one = Fraction(0), Fraction(1)
    ent = [zero] * (m * m)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                src = (i * n + j) * n + k
                dst = (j * n + k) * n + i
                ent[dst * m + src] = one
    return Matrix(m, m, RATIONAL, tuple(ent))


def alt_matrix(n):
    c = cycle_matrix(n)
    return Matrix.identity(n ** 3, RATIONAL) + c + c * c


# ---------------------------------------------------------------------------
# the structure


@dataclass(frozen=True)
class LieBialgebra:
    dim: int
    bracket: Matrix    # dim x dim^2
    cobracket: Matrix  # dim^2 x dim
    names: tuple = None

    def __post_init__(self):
        n = self.dim
        if (self.bracket.rows, self.bracket.cols) != (n, n * n):
            raise ValueError("bracket must be dim x dim^2")
        if (self.cobracket.rows, self.cobracket.cols) != (n * n, n):
            raise ValueError("cobracket must be dim^2 x dim")
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"e{i}" for i in range(n)))

    def bracket_of(self, i, j):
        """[e_i, e_j] as a list of (index, coefficient), zeros skipped."""
        col = i * self.dim + j
        return [(k, self.bracket[k, col]) for k in range(self.dim)
                if self.bracket[k, col]]

    def cobracket_of(self, i):
        """delta(e_i) as a list of ((a, b), coefficient), zeros skipped."""
        out = []
        for row in range(self.dim * self.dim):
            v = self.cobracket[row, i]
            if v:
                out.append(((row // self.dim, row % self.dim), v))
        return out

    def ad2(self):
        n = self.dim
        ident = Matrix.identity(n, RATIONAL)
        return (mat_kron(self.bracket, ident)
                + mat_kron(ident, self.bracket) * mat_kron(swap_matrix(n), ident))


def check_lie_bialgebra(lb: LieBialgebra):
    """Antisymmetry and Jacobi on both sides, plus the mixed 1-cocycle
    condition tying bracket to cobracket.
    """
    n = lb.dim
    ident = Matrix.identity(n, RATIONAL)
    ident2 = Matrix.identity(n * n, RATIONAL)
    tau = swap_matrix(n)
    alt = alt_matrix(n)
    records = []

    records.append(LawRecord(
        "lie.antisym", (lb.bracket * (ident2 + tau)).is_zero()))
    records.append(LawRecord(
        "lie.jacobi", (lb.bracket * mat_kron(ident, lb.bracket) * alt).is_zero()))
    records.append(LawRecord(
        "lie.co_antisym", ((ident2 + tau) * lb.cobracket).is_zero()))
    records.append(LawRecord(
        "lie.co_jacobi", (alt * mat_kron(lb.cobracket, ident) * lb.cobracket).is_zero()))

    ad2 = lb.ad2()
    lhs = lb.cobracket * lb.bracket
    act = ad2 * mat_kron(ident, lb.cobracket)
    rhs = act - act * tau
    records.append(LawRecord("lie.cocycle", lhs == rhs))
    return records


# ---------------------------------------------------------------------------
# twists


def vec_twist(j: Matrix) -> Matrix:
    """Flatten an antisymmetric coefficient matrix to a tensor-square
    column vector."""
    n = j.rows
    return Matrix(n * n, 1, RATIONAL,
                  tuple(j[a, b] for a in range(n) for b in range(n)))


def double_bracket(lb: LieBialgebra, j: Matrix) -> Matrix:
    """[[j, j]] in the tensor cube: the sum of the brackets taken in the
    slot the two copies of j share.
    """
    n = lb.dim
    out = [Fraction(0)] * (n ** 3)
    pairs = [(a, b) for a in range(n) for b in range(n) if j[a, b]]
    for a, b in pairs:
        for c, d in pairs:
            coef = j[a, b] * j[c, d]
            for k, br in lb.bracket_of(a, c):   # shared first slot
                out[(k * n + b) * n + d] += coef * br
            for k, br in lb.bracket_of(b, c):   # shared middle slot
                out[(a * n + k) * n + d] += coef * br
            for k, br in lb.bracket_of(b, d):   # shared last slot
                out[(a * n + c) * n + k] += coef * br
    return Matrix(n ** 3, 1, RATIONAL, tuple(out))


def check_twist(lb: LieBialgebra, j: Matrix):
    """j must be antisymmetric and satisfy the twist equation
    Alt (D (x) 1) vec(j) + [[j, j]] = 0."""
    n = lb.dim
    records = []
    records.append(LawRecord(
        "twist.antisym",
        all(j[a, b] == -j[b, a] for a in range(n) for b in range(n))))
    lhs = alt_matrix(n) * mat_kron(lb.cobracket, Matrix.identity(n, RATIONAL)) * vec_twist(j)
    records.append(LawRecord("twist.equation", (lhs + double_bracket(lb, j)).is_zero()))
    return records


def twist_bialgebra(lb: LieBialgebra, j: Matrix) -> LieBialgebra:
    """Same bracket; the cobracket gains the adjoint derivative of j."""
    n = lb.dim
    correction = lb.ad2() * mat_kron(Matrix.identity(n, RATIONAL), vec_twist(j))
    return LieBialgebra(n, lb.bracket, lb.cobracket + correction, lb.names)


# ---------------------------------------------------------------------------
# crossed modules


def check_dy_module(lb: LieBialgebra, pi: Matrix, pistar: Matrix):
    """The three crossed-module identities for (pi, pistar) on V = Q^d."""
    n = lb.dim
    if pi.cols % n or pi.rows != pi.cols // n:
        raise ValueError("action must map b (x) V -> V")
    d = pi.rows
    if (pistar.rows, pistar.cols) != (n * d, d):
        raise ValueError("coaction must map V -> b (x) V")
    id_b = Matrix.identity(n, RATIONAL)
    id_v = Matrix.identity(d, RATIONAL)
    tau_bb = swap_matrix(n)
    records = []

    # (1) module law
    lhs = pi * mat_kron(lb.bracket, id_v)
    act_twice = pi * mat_kron(id_b, pi)
    rhs = act_twice - act_twice * mat_kron(tau_bb, id_v)
    records.append(LawRecord("dy.module", lhs == rhs))

    # (2) comodule law; the orientation matches the coaction the mixed
    # relation induces on the enveloping algebra, where generators
    # coact by the negated cobracket
    both = mat_kron(id_b, pistar) * pistar
    lhs2 = mat_kron(tau_bb, id_v) * both - both
    rhs2 = mat_kron(lb.cobracket, id_v) * pistar
    records.append(LawRecord("dy.comodule", lhs2 == rhs2))

    # (3) mixed relation
    lhs3 = pistar * pi
    t1 = mat_kron(lb.bracket, id_v) * mat_kron(id_b, pistar)
    t2 = mat_kron(id_b, pi) * mat_kron(tau_bb, id_v) * mat_kron(id_b, pistar)
    t3 = mat_kron(id_b, pi) * mat_kron(lb.cobracket, id_v)
    records.append(LawRecord("dy.mixed", lhs3 == t1 + t2 - t3))
    return records


def twist_dy_module(lb: LieBialgebra, j: Matrix, pi: Matrix, pistar: Matrix):
    """Coaction of the twisted structure: feed j through the action.
    The action is unchanged.  Twisting by -j undoes the change exactly.
    """
    n = lb.dim
    d = pi.rows
    correction = mat_kron(Matrix.identity(n, RATIONAL), pi) \
        * mat_kron(vec_twist(j), Matrix.identity(d, RATIONAL))
    return pi, pistar + correction


# ---------------------------------------------------------------------------
# enveloping algebra: exact normal ordering on words


class EnvelopingEngine:
    """Words in the generators with rational coefficients, rewritten to
    the basis of non-decreasing words.  No degree bound: intermediate
    terms may grow and later cancel, which is exactly what the truncated
    checks need to avoid lying about high-degree laws.

    Elements are dicts word-tuple -> Fraction with no zero values.
    """

    def __init__(self, lb: LieBialgebra):
        self.lb = lb
        self._nf_cache = {}
        self._coact_cache = {}

    # -- element helpers

    @staticmethod
    def scalar(c=1):
        c = Fraction(c)
        return {(): c} if c else {}

    @staticmethod
    def generator(i):
        return {(i,): Fraction(1)}

    @staticmethod
    def add(*elems):
        out = {}
        for e in elems:
            for w, c in e.items():
                nc = out.get(w, Fraction(0)) + c
                if nc:
                    out[w] = nc
                elif w in out:
                    del out[w]
        return out

    @staticmethod
    def scale(e, c):
        c = Fraction(c)
        if not c:
            return {}
        return {w: v * c for w, v in e.items()}

    def normal_word(self, word):
        """Normal form of a single word as an element dict."""
        word = tuple(word)
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        # find the first descent
        pos = -1
        for t in range(len(word) - 1):
            if word[t] > word[t + 1]:
                pos = t
                break
        if pos < 0:
            result = {word: Fraction(1)}
        else:
            a, b = word[pos], word[pos + 1]
            head, tail = word[:pos], word[pos + 2:]
            swapped = self.normal_word(head + (b, a) + tail)
            result = dict(swapped)
            for k, coef in self.lb.bracket_of(a, b):
                piece = self.normal_word(head + (k,) + tail)
                result = self.add(result, self.scale(piece, coef))
        self._nf_cache[word] = result
        return result

    def normalize(self, e):
        out = {}
        for w, c in e.items():
            out = self.add(out, self.scale(self.normal_word(w), c))
        return out

    def mul(self, e1, e2):
        out = {}
        for w1, c1 in e1.items():
            for w2, c2 in e2.items():
                out = self.add(out, self.scale(self.normal_word(w1 + w2), c1 * c2))
        return out

    # -- tensor-square elements: dict (word, word) -> Fraction

    @staticmethod
    def t_add(*elems):
        out = {}
        for e in elems:
            for k, c in e.items():
                nc = out.get(k, Fraction(0)) + c
                if nc:
                    out[k] = nc
                elif k in out:
                    del out[k]
        return out

    def t_mul(self, e1, e2):
        out = {}
        for (a1, b1), c1 in e1.items():
            for (a2, b2), c2 in e2.items():
                left = self.normal_word(a1 + a2)
                right = self.normal_word(b1 + b2)
                for wl, cl in left.items():
                    for wr, cr in right.items():
                        key = (wl, wr)
                        nc = out.get(key, Fraction(0)) + c1 * c2 * cl * cr
                        if nc:
                            out[key] = nc
                        elif key in out:
                            del out[key]
        return out

    def coproduct(self, e):
        """The splitting with primitive generators, extended as an algebra
        map; exact on any element."""
        out = {}
        for word, coef in e.items():
            term = {((), ()): Fraction(1)}
            for letter in word:
                prim = {((letter,), ()): Fraction(1), ((), (letter,)): Fraction(1)}
                term = self.t_mul(term, prim)
            out = self.t_add(out, {k: c * coef for k, c in term.items()})
        return out

    def counit(self, e):
        return e.get((), Fraction(0))

    def antipode(self, e):
        """Reverse each word with a sign, then renormalize."""
        out = {}
        for word, coef in e.items():
            sign = Fraction(-1) ** len(word)
            piece = self.normal_word(tuple(reversed(word)))
            out = self.add(out, self.scale(piece, sign * coef))
        return out

    # -- the crossed structure on the enveloping algebra
    #    elements of b (x) U are dicts (index, word) -> Fraction

    @staticmethod
    def b_add(*elems):
        out = {}
        for e in elems:
            for k, c in e.items():
                nc = out.get(k, Fraction(0)) + c
                if nc:
                    out[k] = nc
                elif k in out:
                    del out[k]
        return out

    def act(self, i, e):
        """pi(e_i (x) u) = e_i u: left multiplication by a generator."""
        return self.mul(self.generator(i), e)

    def coact(self, e, twist=None):
        """pistar on the enveloping algebra, defined by the mixed relation
        read as a recursion on the leading letter, seeded on 1 by the
        twist (zero when untwisted).

        Returns a dict (index, word) -> Fraction.
        """
        out = {}
        for word, coef in e.items():
            piece = self._coact_word(word, twist)
            out = self.b_add(out, {k: c * coef for k, c in piece.items()})
        return out

    def _coact_word(self, word, twist):
        key = (word, twist)
        cache = self._coact_cache
        if key in cache:
            return cache[key]
        n = self.lb.dim
        if not word:
            if twist is None:
                result = {}
            else:
                result = {}
                for a in range(n):
                    for b in range(n):
                        if twist[a, b]:
                            result[(a, (b,))] = twist[a, b]
        else:
            x, rest = word[0], word[1:]
            inner = self._coact_word(rest, twist)
            result = {}
            # (B (x) 1)(x (x) pistar(u))
            for (a, w), c in inner.items():
                for k, br in self.lb.bracket_of(x, a):
                    result = self.b_add(result, {(k, w): c * br})
            # (1 (x) pi)(tau (x) 1): keep the comodule leg, multiply in x
            for (a, w), c in inner.items():
                prod = self.act(x, {w: Fraction(1)})
                result = self.b_add(result,
                                    {(a, w2): c * c2 for w2, c2 in prod.items()})
            # -(1 (x) pi)(D (x) 1)(x (x) u)
            for (a, b), c in self.lb.cobracket_of(x):
                prod = self.act(b, {rest: Fraction(1)})
                result = self.b_add(result,
                                    {(a, w2): -c * c2 for w2, c2 in prod.items()})
        cache[key] = result
        return result


def check_uea_dy_identities(lb: LieBialgebra, max_degree, twist=None):
    """The three crossed-module identities for the enveloping algebra's
    action and coaction, checked exactly on all basis words of degree up
    to max_degree, with no truncation anywhere in the middle.
    """
    eng = EnvelopingEngine(lb)
    n = lb.dim
    words = pbw_words(n, max_degree)
    records = []

    ok = True
    for i in range(n):
        for j in range(n):
            for w in words:
                u = {w: Fraction(1)}
                lhs = {}
                for k, br in lb.bracket_of(i, j):
                    lhs = eng.add(lhs, eng.scale(eng.act(k, u), br))
                rhs = eng.add(eng.act(i, eng.act(j, u)),
                              eng.scale(eng.act(j, eng.act(i, u)), -1))
                if lhs != rhs:
                    ok = False
    records.append(LawRecord("uea.module", ok, f"degree <= {max_degree}"))

    ok = True
    for w in words:
        u = {w: Fraction(1)}
        first = eng.coact(u, twist)
        # (1 (x) pistar) then antisymmetrize the two outer legs,
        # swap-minus-identity orientation as in check_dy_module
        lhs = {}
        for (a, w1), c in first.items():
            inner = eng.coact({w1: Fraction(1)}, twist)
            for (b, w2), c2 in inner.items():
                for key, sgn in (((b, a, w2), 1), ((a, b, w2), -1)):
                    nc = lhs.get(key, Fraction(0)) + sgn * c * c2
                    if nc:
                        lhs[key] = nc
                    elif key in lhs:
                        del lhs[key]
        rhs = {}
        for (a, w1), c in first.items():
            for (p, q), c2 in lb.cobracket_of(a):
                key = (p, q, w1)
                nc = rhs.get(key, Fraction(0)) + c * c2
                if nc:
                    rhs[key] = nc
                elif key in rhs:
                    del rhs[key]
        if lhs != rhs:
            ok = False
    records.append(LawRecord("uea.comodule", ok, f"degree <= {max_degree}"))

    ok = True
    for i in range(n):
        for w in words:
            u = {w: Fraction(1)}
            lhs = eng.coact(eng.act(i, u), twist)
            inner = eng.coact(u, twist)
            rhs = {}
            for (a, w1), c in inner.items():
                for k, br in lb.bracket_of(i, a):
                    rhs = eng.b_add(rhs, {(k, w1): c * br})
                prod = eng.act(i, {w1: Fraction(1)})
                rhs = eng.b_add(rhs, {(a, w2): c * c2 for w2, c2 in prod.items()})
            for (a, b), c in lb.cobracket_of(i):
                prod = eng.act(b, {w: Fraction(1)})
                rhs = eng.b_add(rhs, {(a, w2): -c * c2 for w2, c2 in prod.items()})
            if lhs != rhs:
                ok = False
    records.append(LawRecord("uea.mixed", ok, f"degree <= {max_degree}"))
    return records


# ---------------------------------------------------------------------------
# truncated enveloping algebra with explicit matrices


def pbw_words(n, max_degree):
    """Non-decreasing words, ordered by (length, letters)."""
    out = []
    for deg in range(max_degree + 1):
        out.extend(itertools.combinations_with_replacement(range(n), deg))
    return tuple(out)


@dataclass
class TruncatedUEA:
    """Matrices of the enveloping structure on words of bounded degree.

    Maps that can leave the truncation (multiplication, and the coaction
    when twisted) are materialized on the sub-basis of words short enough
    to stay inside; the *_overflow flags say whether anything was cut.
    Asking for the unrestricted matrix of an overflowing map raises
    DegreeOverflow.
    """

    lb: LieBialgebra
    order: int
    twist: Matrix = None
    engine: EnvelopingEngine = None
    basis: tuple = None
    index: dict = None

    def __post_init__(self):
        self.engine = EnvelopingEngine(self.lb)
        self.basis = pbw_words(self.lb.dim, self.order)
        self.index = {w: i for i, w in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def vector_of(self, elem):
        col = [Fraction(0)] * self.dim
        for w, c in elem.items():
            if len(w) > self.order:
                raise DegreeOverflow(f"word of degree {len(w)} exceeds order {self.order}")
            col[self.index[w]] = c
        return Matrix(self.dim, 1, RATIONAL, tuple(col))

    @property
    def pi_overflow(self):
        return True  # left multiplication always raises the degree

    @property
    def pistar_overflow(self):
        return self.twist is not None

    def _sub_basis(self, max_deg):
        return [w for w in self.basis if len(w) <= max_deg]

    def pi_matrix(self):
        """b (x) U_{order-1} -> U_order; the full domain would overflow."""
        sub = self._sub_basis(self.order - 1)
        n = self.lb.dim
        cols = []
        for i in range(n):
            for w in sub:
                cols.append(self.vector_of(self.engine.act(i, {w: Fraction(1)})))
        return _cols_to_matrix(cols, self.dim)

    def pistar_matrix(self):
        """U -> b (x) U.  Untwisted this preserves degree and is total;
        twisted it raises degree, so the domain shrinks by one degree."""
        sub = self.basis if self.twist is None else self._sub_basis(self.order - 1)
        n = self.lb.dim
        cols = []
        for w in sub:
            img = self.engine.coact({w: Fraction(1)}, self.twist)
            col = [Fraction(0)] * (n * self.dim)
            for (a, w2), c in img.items():
                if len(w2) > self.order:
                    raise DegreeOverflow("coaction output exceeds the truncation")
                col[a * self.dim + self.index[w2]] = c
            cols.append(Matrix(n * self.dim, 1, RATIONAL, tuple(col)))
        return _cols_to_matrix(cols, n * self.dim)

    def delta_matrix(self):
        """U_order -> U_order (x) U_order; degree is preserved, total."""
        cols = []
        for w in self.basis:
            img = self.engine.coproduct({w: Fraction(1)})
            col = [Fraction(0)] * (self.dim * self.dim)
            for (w1, w2), c in img.items():
                col[self.index[w1] * self.dim + self.index[w2]] = c
            cols.append(Matrix(self.dim * self.dim, 1, RATIONAL, tuple(col)))
        return _cols_to_matrix(cols, self.dim * self.dim)

    def eps_matrix(self):
        row = [Fraction(0)] * self.dim
        row[self.index[()]] = Fraction(1)
        return Matrix(1, self.dim, RATIONAL, tuple(row))

    def antipode_matrix(self):
        cols = [self.vector_of(self.engine.antipode({w: Fraction(1)}))
                for w in self.basis]
        return _cols_to_matrix(cols, self.dim)


def _cols_to_matrix(cols, rows):
    ent = []
    for r in range(rows):
        for col in cols:
            ent.append(col[r, 0])
    return Matrix(rows, len(cols), RATIONAL, tuple(ent))
