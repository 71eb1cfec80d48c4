"""Batch driver: load an instance file, run law suites or constructions,
emit a machine-readable report.

Two operations.  `verify` runs the selected checks and reports one record
per law; `build` runs a constructor, re-verifies the output, and writes
the structure maps only when every check passes.  Exit codes are a stable
contract: 0 all checks passed (or nothing applied), 1 a law failed, 2 the
input could not be parsed.

Reports are JSON with sorted keys, so two runs on the same file are
byte-identical except for the "timing" field.  An instance with nothing
to check gets the verdict "vacuous".  HOPFCAT_SEED picks the subsample
used when an instance has more objects than a check wants to touch; the
default of 0 keeps runs reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from .coalg import LawRecord, check_comonoid, check_hopf_monoid
from .backends import BackendError, ObjectRef, check_braiding_coherence, check_dy_tensor_closure
from .cofunctor import NotAdapted, certify_adapted, check_comonoidal
from .hopfcategory import (
    NotCocommutative,
    build_hopf_category,
    build_hopf_monoid,
    check_hopf_category,
    extract_set_groupoid,
)
from .liebialg import (
    TruncatedUEA,
    check_dy_module,
    check_lie_bialgebra,
    check_twist,
    check_uea_dy_identities,
    twist_bialgebra,
    twist_dy_module,
)
from .deform import (
    PreCartierData,
    PreCartierViolation,
    build_deformed_hopf_category,
    check_pre_cartier,
    reduce_order0,
)
from .linalg import Singular
from .instances import (
    InstanceError,
    dump_document,
    groupoid_to_json,
    hopf_category_to_json,
    hopf_monoid_to_json,
    load_instance,
)

TARGETS = ("hopf-monoid", "hopf-category", "deformed", "groupoid")

SAMPLE_CAP = 4  # objects per sampled law suite; keeps tensor cubes small

CONSTRUCTION_ERRORS = (NotAdapted, NotCocommutative, PreCartierViolation,
                       Singular, BackendError)


def _suffix(records, tag):
    return [LawRecord(f"{r.rule}[{tag}]", r.holds, r.detail) for r in records]


def _sample_objects(inst, rng):
    """Comonoid carriers first, then atoms to fill the cap."""
    backend = inst.backend
    objects = []
    seen = set()
    for c in inst.comonoids:
        if c.obj.factors not in seen:
            seen.add(c.obj.factors)
            objects.append(c.obj)
    pool = [name for name in sorted(backend.atoms)
            if backend.kind != "dy" or name != backend.base]
    pool = [name for name in pool if (name,) not in seen]
    room = max(0, SAMPLE_CAP - len(objects))
    if len(pool) > room:
        pool = sorted(rng.sample(pool, room))
    objects.extend(ObjectRef.atom(name) for name in pool)
    return objects[:SAMPLE_CAP] if objects else objects


# ---------------------------------------------------------------------------
# the check registry; each entry returns LawRecords (empty = not applicable)


def _check_braiding(inst, rng):
    backend = inst.backend
    if backend is None or not backend.atoms:
        return []
    bad = check_braiding_coherence(backend)
    records = [LawRecord("braiding.coherence", not bad, "; ".join(bad[:3]))]
    if backend.kind == "dy":
        bad = check_dy_tensor_closure(backend)
        records.append(LawRecord("braiding.dy_closure", not bad, "; ".join(bad[:3])))
    return records


def _check_comonoids(inst, rng):
    records = []
    for i, c in enumerate(inst.comonoids):
        tag = c.name or f"#{i}"
        records.extend(_suffix(
            check_comonoid(inst.backend, c, cocommutative=True), tag))
    return records


def _check_functor(inst, rng):
    if inst.functor is None:
        return []
    objects = _sample_objects(inst, rng)
    if not objects:
        return []
    return check_comonoidal(inst.functor, objects)


def _adapted_pairs(inst):
    ends = [inst.backend.unit()] + [c.obj for c in inst.comonoids]
    uniq = []
    for obj in ends:
        if obj.factors not in {o.factors for o in uniq}:
            uniq.append(obj)
    return [(x, z) for x in uniq for z in uniq]


def _check_adapted(inst, rng):
    if inst.functor is None or not inst.comonoids:
        return []
    records = []
    pairs = _adapted_pairs(inst)
    for i, m in enumerate(inst.comonoids):
        tag = m.name or f"#{i}"
        try:
            certify_adapted(inst.functor, m, pairs)
            records.append(LawRecord(f"adapted[{tag}]", True))
        except (NotAdapted, Singular) as exc:
            records.append(LawRecord(f"adapted[{tag}]", False, str(exc)))
    return records


def _check_build(inst, rng):
    if inst.functor is None or not inst.comonoids:
        return []
    try:
        data = build_hopf_category(inst.functor, inst.comonoids)
    except CONSTRUCTION_ERRORS as exc:
        return [LawRecord("build.constructor", False, str(exc))]
    return check_hopf_category(data.backend, data)


def _check_groupoid(inst, rng):
    if (inst.functor is None or not inst.comonoids
            or inst.backend.kind != "finset"):
        return []
    try:
        data = build_hopf_category(inst.functor, inst.comonoids)
        _, records = extract_set_groupoid(inst.functor.target, data)
    except CONSTRUCTION_ERRORS as exc:
        return [LawRecord("groupoid.constructor", False, str(exc))]
    return records


def _check_lie(inst, rng):
    if inst.lie is None:
        return []
    return check_lie_bialgebra(inst.lie)


def _check_twists(inst, rng):
    if inst.lie is None or not inst.twists:
        return []
    lb = inst.lie
    records = []
    for i, j in enumerate(inst.twists):
        records.extend(_suffix(check_twist(lb, j), i))
        twisted = twist_bialgebra(lb, j)
        records.extend(_suffix(check_lie_bialgebra(twisted), f"twist{i}"))
        back = twist_bialgebra(twisted, j.scale(-1))
        records.append(LawRecord(f"twist.roundtrip[{i}]",
                                 back.cobracket == lb.cobracket))
        for mod in inst.modules:
            pi1, ps1 = twist_dy_module(lb, j, mod.pi, mod.pistar)
            records.extend(_suffix(check_dy_module(twisted, pi1, ps1),
                                   f"{mod.label},{i}"))
            _, ps0 = twist_dy_module(twisted, j.scale(-1), pi1, ps1)
            records.append(LawRecord(f"twist.module_roundtrip[{mod.label},{i}]",
                                     ps0 == mod.pistar))
    return records


def _check_dy_modules(inst, rng):
    if inst.lie is None or not inst.modules:
        return []
    records = []
    for mod in inst.modules:
        records.extend(_suffix(check_dy_module(inst.lie, mod.pi, mod.pistar),
                               mod.label))
    return records


def _acc(d, key, v):
    nv = d.get(key, Fraction(0)) + v
    if nv:
        d[key] = nv
    elif key in d:
        del d[key]


def _uea_comonoid_records(uea, tag):
    """Coassociativity, counit, and cocommutativity of the truncated
    coproduct, expanded word-by-word (the coproduct preserves degree, so
    nothing is cut)."""
    eng = uea.engine
    coassoc = counit = cocomm = True
    for w in uea.basis:
        dw = eng.coproduct({w: Fraction(1)})
        left, right, first = {}, {}, {}
        for (w1, w2), c in dw.items():
            for (a, b), c2 in eng.coproduct({w1: Fraction(1)}).items():
                _acc(left, (a, b, w2), c * c2)
            for (a, b), c2 in eng.coproduct({w2: Fraction(1)}).items():
                _acc(right, (w1, a, b), c * c2)
            if w1 == ():
                _acc(first, w2, c)
            if dw.get((w2, w1)) != c:
                cocomm = False
        if left != right:
            coassoc = False
        if first != {w: Fraction(1)}:
            counit = False
    return [LawRecord(f"uea.coassoc[{tag}]", coassoc),
            LawRecord(f"uea.counit[{tag}]", counit),
            LawRecord(f"uea.cocommutative[{tag}]", cocomm)]


def _uea_seed_record(uea, j, tag):
    """The coaction of the empty word must be the twist, nothing else."""
    ps = uea.pistar_matrix()
    n = uea.lb.dim
    col = uea.index[()]
    ok = True
    for a in range(n):
        for k in range(uea.dim):
            expect = Fraction(0)
            word = uea.basis[k]
            if j is not None and len(word) == 1:
                expect = j[a, word[0]]
            if ps[a * uea.dim + k, col] != expect:
                ok = False
    return LawRecord(f"uea.seed[{tag}]", ok)


def _check_uea(inst, rng):
    if inst.lie is None or inst.uea is None:
        return []
    lb = inst.lie
    order = inst.uea["order"]
    deg = inst.uea["identity_degree"]
    records = _suffix(check_uea_dy_identities(lb, deg), "j=0")
    plain = TruncatedUEA(lb, order)
    records.extend(_uea_comonoid_records(plain, "j=0"))
    records.append(_uea_seed_record(plain, None, "j=0"))
    for i, j in enumerate(inst.twists):
        tag = f"j{i}"
        records.extend(_suffix(check_uea_dy_identities(lb, deg, twist=j), tag))
        twisted = TruncatedUEA(lb, order, twist=j)
        records.append(_uea_seed_record(twisted, j, tag))
        records.append(LawRecord(
            f"uea.comonoid_unchanged[{tag}]",
            twisted.delta_matrix() == plain.delta_matrix()
            and twisted.eps_matrix() == plain.eps_matrix()))
    return records


def _check_precartier(inst, rng):
    if inst.deformation is None:
        return []
    sample = _sample_objects(inst, rng)
    if not sample:
        return []
    functor = None
    if inst.functor is not None and inst.functor.source is inst.backend:
        functor = inst.functor
    return check_pre_cartier(
        inst.deformation["pc"], sample,
        commutation=True, antisymmetry=True,
        inf_cocommutative=inst.comonoids,
        convention=inst.deformation["convention"],
        inf_braided=functor)


def _hopf_data_equal(a, b):
    if a.labels != b.labels:
        return False
    for da, db in ((a.hom, b.hom), (a.mult, b.mult), (a.unit, b.unit),
                   (a.delta, b.delta), (a.eps, b.eps), (a.antipode, b.antipode)):
        if set(da) != set(db):
            return False
        for key, fa in da.items():
            fb = db[key]
            if isinstance(fa, ObjectRef):
                if fa != fb:
                    return False
            elif (fa.dom, fa.cod, fa.table, fa.matrix) != (fb.dom, fb.cod,
                                                           fb.table, fb.matrix):
                return False
    return True


def _build_deformed(inst, order=None):
    block = inst.deformation or {}
    if order is None:
        order = block.get("order", 0)
    pc = block.get("pc")
    convention = block.get("convention", "t_delta_zero")
    data = build_deformed_hopf_category(
        inst.functor, inst.comonoids, order, pc, convention=convention)
    return data, order


def _check_deformed(inst, rng):
    if inst.deformation is None or inst.functor is None or not inst.comonoids:
        return []
    try:
        data, order = _build_deformed(inst)
    except CONSTRUCTION_ERRORS as exc:
        return [LawRecord("deformed.constructor", False, str(exc))]
    records = _suffix(check_hopf_category(data.backend, data), f"order{order}")
    plain = build_hopf_category(inst.functor, inst.comonoids)
    reduced = reduce_order0(data) if order > 0 else data
    records.append(LawRecord("deformed.reduction",
                             _hopf_data_equal(reduced, plain)))
    return records


CHECKS = {
    "braiding": _check_braiding,
    "comonoids": _check_comonoids,
    "functor": _check_functor,
    "adapted": _check_adapted,
    "build": _check_build,
    "groupoid": _check_groupoid,
    "lie": _check_lie,
    "twists": _check_twists,
    "dy-modules": _check_dy_modules,
    "uea": _check_uea,
    "precartier": _check_precartier,
    "deformed": _check_deformed,
}

CHECK_ORDER = tuple(CHECKS)


def _parse_selector(checks):
    if checks in (None, "all", ""):
        return CHECK_ORDER
    if isinstance(checks, str):
        checks = [c.strip() for c in checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise InstanceError(
            f"unknown checks {unknown}; available: {', '.join(CHECK_ORDER)}")
    return tuple(c for c in CHECK_ORDER if c in set(checks))


def _seed():
    raw = os.environ.get("HOPFCAT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InstanceError(f"HOPFCAT_SEED must be an integer, got {raw!r}")


def _report(inst, results, started):
    failed = sum(1 for _, r in results if not r.holds)
    report = {
        "digest": inst.digest(),
        "checks": [{"check": name, "rule": r.rule, "holds": bool(r.holds),
                    "detail": r.detail} for name, r in results],
        "counts": {"total": len(results), "failed": failed},
        "verdict": ("vacuous" if not results
                    else "pass" if failed == 0 else "fail"),
        "timing": round(time.monotonic() - started, 6),
    }
    if "name" in inst.doc:
        report["name"] = inst.doc["name"]
    return report, (0 if failed == 0 else 1)


def run_verify(path, checks="all", seed=None):
    """Run the selected law suites on one instance file.

    Returns (report, exit_code); schema problems give an error report and
    code 2, mathematical failures code 1.
    """
    started = time.monotonic()
    try:
        selected = _parse_selector(checks)
        rng = random.Random(_seed() if seed is None else seed)
        inst = load_instance(path)
        results = []
        for name in selected:
            results.extend((name, r) for r in CHECKS[name](inst, rng))
    except (InstanceError, OSError) as exc:
        return {"error": str(exc), "verdict": "error"}, 2
    return _report(inst, results, started)


def run_build(path, target, order=None, seed=None):
    """Run one constructor and re-verify its output.

    The structure maps appear in the report only when every verification
    record holds; a failed construction reports the witness and exits 1.
    """
    started = time.monotonic()
    try:
        if target not in TARGETS:
            raise InstanceError(f"unknown target {target!r}; expected one of {TARGETS}")
        inst = load_instance(path)
        if target != "deformed" and order is not None:
            raise InstanceError("--order only applies to the deformed target")
        if inst.functor is None or not inst.comonoids:
            raise InstanceError(f"target {target!r} needs a functor and comonoids")
        if target == "groupoid" and inst.backend.kind != "finset":
            raise InstanceError("groupoid extraction needs a finset-gset backend")
    except (InstanceError, OSError) as exc:
        return {"error": str(exc), "verdict": "error"}, 2

    structure = None
    try:
        if target == "hopf-monoid":
            h = build_hopf_monoid(inst.functor, inst.comonoids[0])
            records = check_hopf_monoid(inst.functor.target, h)
            structure = hopf_monoid_to_json(h)
        elif target == "hopf-category":
            data = build_hopf_category(inst.functor, inst.comonoids)
            records = check_hopf_category(data.backend, data)
            structure = hopf_category_to_json(data)
        elif target == "groupoid":
            data = build_hopf_category(inst.functor, inst.comonoids)
            gt, records = extract_set_groupoid(inst.functor.target, data)
            structure = groupoid_to_json(gt)
        else:
            data, built_order = _build_deformed(inst, order)
            records = check_hopf_category(data.backend, data)
            plain = build_hopf_category(inst.functor, inst.comonoids)
            reduced = reduce_order0(data) if built_order > 0 else data
            records.append(LawRecord("deformed.reduction",
                                     _hopf_data_equal(reduced, plain)))
            structure = hopf_category_to_json(data)
    except CONSTRUCTION_ERRORS as exc:
        records = [LawRecord(f"{target}.constructor", False, str(exc))]

    report, code = _report(inst, [(target, r) for r in records], started)
    report["target"] = target
    if target == "deformed":
        report["order"] = order if order is not None else (
            inst.deformation["order"] if inst.deformation else 0)
    if code == 0:
        report["structure"] = structure
    return report, code


# ---------------------------------------------------------------------------
# entry point


def _emit(report, code, args):
    text = dump_document(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if code == 2:
        print(f"error: {report['error']}", file=sys.stderr)
        return code
    if args.json:
        sys.stdout.write(text)
        return code
    for rec in report["checks"]:
        status = "PASS" if rec["holds"] else "FAIL"
        detail = f"  {rec['detail']}" if rec["detail"] and not rec["holds"] else ""
        print(f"{status} {rec['check']}: {rec['rule']}{detail}")
    counts = report["counts"]
    print(f"verdict: {report['verdict']} "
          f"({counts['total']} checks, {counts['failed']} failed)")
    if "structure" in report and args.out:
        print(f"structure written to {args.out}")
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hopfcat",
        description="verify and build exact Hopf-category instances")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run law suites on an instance file")
    pv.add_argument("instance", help="path to an instance JSON file")
    pv.add_argument("--checks", default="all",
                    help=f"comma list from: {', '.join(CHECK_ORDER)} (default all)")
    pv.add_argument("--out", help="also write the JSON report here")
    pv.add_argument("--json", action="store_true",
                    help="print the JSON report instead of the summary")

    pb = sub.add_parser("build", help="run a constructor and verify its output")
    pb.add_argument("instance", help="path to an instance JSON file")
    pb.add_argument("--target", required=True, choices=TARGETS)
    pb.add_argument("--order", type=int, default=None,
                    help="truncation order for the deformed target")
    pb.add_argument("--out", help="also write the JSON report here")
    pb.add_argument("--json", action="store_true",
                    help="print the JSON report instead of the summary")

    args = parser.parse_args(argv)
    if args.command == "verify":
        report, code = run_verify(args.instance, checks=args.checks)
    else:
        report, code = run_build(args.instance, args.target, order=args.order)
    return _emit(report, code, args)


if __name__ == "__main__":
    sys.exit(main())
