"""Comonoids and Hopf monoids inside a backend, with law checking.

A comonoid is an object with a splitting map into two copies of itself
and a map to the unit, subject to coassociativity and counit laws.
Cocommutativity is tracked as a flag and verified.

Checks return LawRecord lists so callers can aggregate into reports; a
structure is accepted only if every record holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backends import Backend, MorphismRep, ObjectRef


@dataclass(frozen=True)
class LawRecord:
    rule: str
    holds: bool
    detail: str = ""


def all_hold(records):
    return all(r.holds for r in records)


def failures(records):
    return [r for r in records if not r.holds]


@dataclass(frozen=True)
class Comonoid:
    obj: ObjectRef
    delta: MorphismRep  # obj -> obj (x) obj
    eps: MorphismRep    # obj -> unit
    name: str = ""


def diagonal_comonoid(backend, obj, name=""):
    """Finset: every object splits along the diagonal, with the unique
    map to the point as counit.  This is the terminal comonoid structure
    and is always cocommutative.
    """
    if backend.kind != "finset":
        raise ValueError("diagonal comonoids live in the finset backend")
    n = backend.obj_size(obj)
    delta = backend.mor_from_table(obj, obj.tensor(obj),
                                   tuple(i * n + i for i in range(n)))
    eps = backend.mor_from_table(obj, backend.unit(), (0,) * n)
    return Comonoid(obj, delta, eps, name or obj.label())


def group_like_comonoid(backend, obj, name=""):
    """Linear: the basis is declared group-like, so the splitting map
    sends basis vector i to i (x) i and the counit sends every basis
    vector to 1.
    """
    if backend.kind == "finset":
        raise ValueError("group-like comonoids need a linear backend")
    from .linalg import Matrix
    n = backend.obj_size(obj)
    ring = backend.ring
    zero, one = ring.zero(), ring.one()
    ent = [zero] * (n * n * n)
    for i in range(n):
        ent[(i * n + i) * n + i] = one
    delta = backend.mor_from_matrix(obj, obj.tensor(obj), Matrix(n * n, n, ring, tuple(ent)))
    eps = backend.mor_from_matrix(obj, backend.unit(),
                                  Matrix(1, n, ring, (one,) * n))
    return Comonoid(obj, delta, eps, name or obj.label())


def unit_comonoid(backend):
    """The unit object with its unique comonoid structure."""
    u = backend.unit()
    ident = backend.identity_mor(u)
    return Comonoid(u, MorphismRep(u, u.tensor(u), table=ident.table, matrix=ident.matrix),
                    ident, "1")


def check_comonoid(backend, c: Comonoid, cocommutative=None):
    """Coassociativity, both counit laws, equivariance of the structure
    maps, and (optionally) cocommutativity.
    """
    records = []
    obj = c.obj
    ident = backend.identity_mor(obj)
    if c.delta.dom != obj or c.delta.cod != obj.tensor(obj):
        return [LawRecord("comonoid.shape", False, "splitting map has wrong endpoints")]
    if c.eps.dom != obj or c.eps.cod != backend.unit():
        return [LawRecord("comonoid.shape", False, "counit has wrong endpoints")]

    lhs = backend.compose(c.delta, backend.tensor_mor(c.delta, ident))
    rhs = backend.compose(c.delta, backend.tensor_mor(ident, c.delta))
    records.append(LawRecord("comonoid.coassoc", backend.equal_mor(lhs, rhs)))

    left_counit = backend.compose(c.delta, backend.tensor_mor(c.eps, ident))
    right_counit = backend.compose(c.delta, backend.tensor_mor(ident, c.eps))
    records.append(LawRecord("comonoid.counit.left", backend.equal_mor(left_counit, ident)))
    records.append(LawRecord("comonoid.counit.right", backend.equal_mor(right_counit, ident)))

    for tag, f in (("split", c.delta), ("counit", c.eps)):
        bad = backend.check_equivariant(f)
        records.append(LawRecord(f"comonoid.equivariant.{tag}", not bad, "; ".join(bad)))

    if cocommutative:
        sw = backend.braiding(obj, obj)
        records.append(LawRecord(
            "comonoid.cocommutative",
            backend.equal_mor(backend.compose(c.delta, sw), c.delta)))
    return records


def tensor_comonoid(backend, c1: Comonoid, c2: Comonoid):
    """Tensor product comonoid: split both factors and shuffle the middle
    pair past each other.
    """
    x, y = c1.obj, c2.obj
    ident_x = backend.identity_mor(x)
    ident_y = backend.identity_mor(y)
    both = backend.tensor_mor(c1.delta, c2.delta)  # xy -> x x y y
    shuffle = backend.tensor_all([ident_x, backend.braiding(x, y), ident_y])
    delta = backend.compose(both, shuffle)
    eps = backend.tensor_mor(c1.eps, c2.eps)  # -> unit (x) unit = unit
    name = f"{c1.name}(x){c2.name}" if (c1.name and c2.name) else ""
    return Comonoid(x.tensor(y), delta, eps, name)


def check_comonoid_morphism(backend, f: MorphismRep, src: Comonoid, dst: Comonoid, tag=""):
    """f respects the splitting maps and counits of src and dst."""
    prefix = f"comorphism{'.' + tag if tag else ''}"
    records = []
    if f.dom != src.obj or f.cod != dst.obj:
        return [LawRecord(prefix + ".shape", False, "endpoints disagree with comonoids")]
    lhs = backend.compose(f, dst.delta)
    rhs = backend.compose(src.delta, backend.tensor_mor(f, f))
    records.append(LawRecord(prefix + ".split", backend.equal_mor(lhs, rhs)))
    records.append(LawRecord(
        prefix + ".counit",
        backend.equal_mor(backend.compose(f, dst.eps), src.eps)))
    return records


# ---------------------------------------------------------------------------
# Hopf monoids


@dataclass(frozen=True)
class HopfMonoidData:
    """An object with multiplication, unit, splitting, counit, antipode.

    unit is a morphism from the backend unit object; mult from obj (x) obj.
    """

    obj: ObjectRef
    mult: MorphismRep
    unit: MorphismRep
    delta: MorphismRep
    eps: MorphismRep
    antipode: MorphismRep
    name: str = ""


def check_hopf_monoid(backend, h: HopfMonoidData, check_equivariance=True):
    """The full law set: associativity and unitality of mult, the comonoid
    laws, bialgebra compatibility (mult and unit are comonoid morphisms),
    and the antipode identities on both sides.
    """
    records = []
    obj = h.obj
    ident = backend.identity_mor(obj)
    u = backend.unit()

    records.append(LawRecord(
        "hopf.assoc",
        backend.equal_mor(
            backend.compose(backend.tensor_mor(h.mult, ident), h.mult),
            backend.compose(backend.tensor_mor(ident, h.mult), h.mult))))
    records.append(LawRecord(
        "hopf.unit.left",
        backend.equal_mor(backend.compose(backend.tensor_mor(h.unit, ident), h.mult), ident)))
    records.append(LawRecord(
        "hopf.unit.right",
        backend.equal_mor(backend.compose(backend.tensor_mor(ident, h.unit), h.mult), ident)))

    comon = Comonoid(obj, h.delta, h.eps, h.name)
    records.extend(check_comonoid(backend, comon))

    # mult and unit must respect the comonoid structure
    square = tensor_comonoid(backend, comon, comon)
    records.extend(check_comonoid_morphism(backend, h.mult, square, comon, "mult"))
    records.extend(check_comonoid_morphism(backend, h.unit, unit_comonoid(backend), comon, "unit"))

    # antipode: split, hit one side, multiply; both orders land on eps-then-unit
    absorb = backend.compose(h.eps, h.unit)
    left = backend.compose(h.delta, backend.tensor_mor(h.antipode, ident), h.mult)
    right = backend.compose(h.delta, backend.tensor_mor(ident, h.antipode), h.mult)
    records.append(LawRecord("hopf.antipode.left", backend.equal_mor(left, absorb)))
    records.append(LawRecord("hopf.antipode.right", backend.equal_mor(right, absorb)))

    if check_equivariance:
        for tag, f in (("mult", h.mult), ("unit", h.unit), ("antipode", h.antipode)):
            bad = backend.check_equivariant(f)
            records.append(LawRecord(f"hopf.equivariant.{tag}", not bad, "; ".join(bad)))
    return records


def group_algebra_hopf(backend, obj, group=None):
    """The regular-representation object as a Hopf monoid: basis vectors
    multiply by the group law, split group-like, and the antipode inverts.

    obj must be a single atom whose basis is the group itself under left
    translation (size == group order, action = translation), which is what
    regular_linear_atom builds.
    """
    from .linalg import Matrix
    if backend.kind == "finset":
        raise ValueError("group algebra needs a linear backend")
    group = group or backend.group
    n = group.order
    if backend.obj_size(obj) != n:
        raise ValueError("object size must equal the group order")
    ring = backend.ring
    zero, one = ring.zero(), ring.one()

    ent = [zero] * (n * n * n)
    for g in range(n):
        for h2 in range(n):
            ent[group.mul(g, h2) * n * n + (g * n + h2)] = one
    mult = backend.mor_from_matrix(obj.tensor(obj), obj, Matrix(n, n * n, ring, tuple(ent)))

    unit_ent = [zero] * n
    unit_ent[0] = one
    unit = backend.mor_from_matrix(backend.unit(), obj, Matrix(n, 1, ring, tuple(unit_ent)))

    glike = group_like_comonoid(backend, obj)

    anti_ent = [zero] * (n * n)
    for g in range(n):
        anti_ent[group.inv(g) * n + g] = one
    antipode = backend.mor_from_matrix(obj, obj, Matrix(n, n, ring, tuple(anti_ent)))

    return HopfMonoidData(obj, mult, unit, glike.delta, glike.eps, antipode,
                          name=f"k[{obj.label()}]")
