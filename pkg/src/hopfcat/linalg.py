"""Exact matrices over the scalar rings, with the eliminations the rest of
the package leans on.

Everything here is deterministic: row echelon always picks the leftmost
column with a usable pivot and the first row that provides one.  Over the
truncated series ring a usable pivot is a unit (nonzero constant term);
inversion there succeeds exactly when the degree-0 part is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import RATIONAL, HSeries, Ring, RingMismatch, as_fraction


class Singular(Exception):
    """Matrix has no inverse; carries a nonzero kernel vector as witness."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    ring: Ring
    entries: tuple  # row-major, length rows * cols

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, ring, rows):
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(ring.coerce(x) for x in row)
        return cls(r, c, ring, tuple(flat))

    @classmethod
    def identity(cls, n, ring):
        z, o = ring.zero(), ring.one()
        return cls(n, n, ring, tuple(o if i == j else z for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows, cols, ring):
        z = ring.zero()
        return cls(rows, cols, ring, (z,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingMismatch("matrices over different rings")

    def __add__(self, other):
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return Matrix(self.rows, self.cols, self.ring,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in subtraction")
        return Matrix(self.rows, self.cols, self.ring,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return Matrix(self.rows, self.cols, self.ring, tuple(-a for a in self.entries))

    def scale(self, c):
        c = self.ring.coerce(c)
        return Matrix(self.rows, self.cols, self.ring, tuple(c * a for a in self.entries))

    def __mul__(self, other):
        """Matrix product self @ other."""
        self._check_ring(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch in product: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        zero = self.ring.zero()
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            acc = [zero] * m
            for t, x in enumerate(arow):
                if not x:
                    continue
                brow = b[t * m:(t + 1) * m]
                for j, y in enumerate(brow):
                    if y:
                        acc[j] = acc[j] + x * y
            out.extend(acc)
        return Matrix(n, m, self.ring, tuple(out))

    def transpose(self):
        e = self.entries
        c = self.cols
        return Matrix(c, self.rows, self.ring,
                      tuple(e[i * c + j] for j in range(c) for i in range(self.rows)))

    def is_zero(self):
        is_zero = self.ring.is_zero
        return all(is_zero(x) for x in self.entries)

    def to_json(self):
        enc = self.ring.to_json
        return [[enc(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, ring, data):
        return cls.from_rows(ring, data)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.ring.kind})"


def mat_kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product in the row-major index convention.

    Entry ((ra*b.rows + rb), (ca*b.cols + cb)) = a[ra,ca] * b[rb,cb], so
    kron is strictly associative with the composite-index convention used
    for tensor products of objects.
    """
    a._check_ring(b)
    rows, cols = a.rows * b.rows, a.cols * b.cols
    zero = a.ring.zero()
    out = [zero] * (rows * cols)
    for ra in range(a.rows):
        for ca in range(a.cols):
            x = a[ra, ca]
            if not x:
                continue
            for rb in range(b.rows):
                base = (ra * b.rows + rb) * cols + ca * b.cols
                brow = b.entries[rb * b.cols:(rb + 1) * b.cols]
                for cb, y in enumerate(brow):
                    if y:
                        out[base + cb] = x * y
    return Matrix(rows, cols, a.ring, tuple(out))


def hstack(mats):
    if not mats:
        raise ValueError("nothing to stack")
    rows = mats[0].rows
    ring = mats[0].ring
    for m in mats[1:]:
        if m.rows != rows:
            raise ValueError("row count mismatch in hstack")
        if m.ring != ring:
            raise RingMismatch("hstack over mixed rings")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.row(i))
    return Matrix(rows, sum(m.cols for m in mats), ring, tuple(out))


def _rref(rows):
    """Reduced row echelon form over the rationals, leftmost pivots.

    Mutates and returns (rows, pivot_cols).  rows is a list of lists of
    Fractions.
    """
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != 1:
            inv = 1 / pv
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [a - f * b for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rational_kernel_vector(m: Matrix):
    """Some nonzero v with m @ v = 0, or None if the columns are independent.

    Deterministic: the free column chosen is the leftmost one.
    """
    if m.ring != RATIONAL:
        raise RingMismatch("kernel search is rational-only")
    rows = [list(m.row(i)) for i in range(m.rows)]
    rows, pivots = _rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * m.cols
    v[f] = Fraction(1)
    for r, c in enumerate(pivots):
        v[c] = -rows[r][f]
    return tuple(v)


def mat_invert(m: Matrix) -> Matrix:
    """Exact inverse; raises Singular with a nonzero kernel-vector witness.

    Over the truncated series ring the pivots must be units, so inversion
    succeeds iff the degree-0 part is invertible; the witness in that case
    is a degree-0 kernel vector placed at top degree, which multiplies the
    matrix to zero exactly in the truncated ring.
    """
    if m.rows != m.cols:
        raise ValueError("inverse needs a square matrix")
    n = m.rows
    ring = m.ring
    aug = [list(m.row(i)) + [ring.one() if i == j else ring.zero() for j in range(n)]
           for i in range(n)]
    for c in range(n):
        pr = None
        for i in range(c, n):
            if ring.is_unit(aug[i][c]):
                pr = i
                break
        if pr is None:
            return _raise_singular(m)
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = ring.inv(aug[c][c])
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c:
                f = aug[i][c]
                if not ring.is_zero(f):
                    rc = aug[c]
                    aug[i] = [a - f * b for a, b in zip(aug[i], rc)]
    out = []
    for i in range(n):
        out.extend(aug[i][n:])
    return Matrix(n, n, ring, tuple(out))


def _raise_singular(m: Matrix):
    if m.ring == RATIONAL:
        w = rational_kernel_vector(m)
        raise Singular("matrix is singular", w)
    k = m.ring.order
    m0 = Matrix(m.rows, m.cols, RATIONAL, tuple(x.constant_term() for x in m.entries))
    w0 = rational_kernel_vector(m0)
    # v * hbar^K is a genuine kernel vector in the truncated ring: every
    # product entry is (degree-0 part @ v) * hbar^K = 0.
    witness = tuple(
        HSeries(k, tuple(Fraction(0) for _ in range(k)) + (x,)) for x in w0
    )
    raise Singular("degree-0 part is singular", witness)


def cokernel_projection(relations: Matrix, ambient_dim=None):
    """Quotient data for span(columns of relations) inside Q^n.

    Returns (p, s): p is r x n with p @ relations = 0 and p @ s = identity,
    r = n - rank(relations).  The quotient basis is the classes of the
    non-pivot coordinates of the column space's echelon form (leftmost
    pivots), and s sections by those coordinates.  Rational ring only.
    """
    if relations.ring != RATIONAL:
        raise RingMismatch("cokernel_projection is rational-only")
    n = relations.rows
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError("ambient dimension disagrees with relation rows")
    # Echelonize the span of the columns, viewed as vectors in Q^n.
    rows = [[relations[i, j] for i in range(n)] for j in range(relations.cols)]
    rows, pivots = _rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    r = len(free)
    zero, one = Fraction(0), Fraction(1)
    p_rows = [[zero] * n for _ in range(r)]
    for t, f in enumerate(free):
        p_rows[t][f] = one
        # e_pivot = -sum(R[row, free] e_free) modulo the relation span
        for row, c in enumerate(pivots):
            p_rows[t][c] = -rows[row][f]
    s_rows = [[zero] * r for _ in range(n)]
    for t, f in enumerate(free):
        s_rows[f][t] = one
    p = Matrix.from_rows(RATIONAL, p_rows)
    s = Matrix.from_rows(RATIONAL, s_rows)
    return p, s


def lift_matrix(m: Matrix, ring: Ring) -> Matrix:
    """Entrywise embedding of a rational matrix into a series ring."""
    if m.ring != RATIONAL:
        raise RingMismatch("can only lift rational matrices")
    if ring.kind == "rational":
        return m
    return Matrix(m.rows, m.cols, ring,
                  tuple(HSeries.from_rational(x, ring.order) for x in m.entries))


def reduce_matrix(m: Matrix) -> Matrix:
    """Degree-0 reduction of a series matrix back to the rationals."""
    if m.ring.kind == "rational":
        return m
    return Matrix(m.rows, m.cols, RATIONAL, tuple(x.constant_term() for x in m.entries))
