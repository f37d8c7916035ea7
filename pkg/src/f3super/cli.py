"""Command line: ``f3super build SPEC`` and ``f3super verify SUITE``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Callable

import numpy as np

from . import tables
from .algebra import Algebra, check_composition, check_jacobi, derivations, skew_transformations
from .exactf3 import random_splitting

log = logging.getLogger("f3super")

SUITES = ("composition", "recipes", "derivations", "triality", "jacobi", "all")


class UsageError(Exception):
    pass


# -- build ------------------------------------------------------------------


def _case(tok: str) -> int:
    tok = tok.strip().lower().removeprefix("case")
    if tok not in ("1", "2", "3", "4"):
        raise UsageError(f"unknown automorphism class {tok!r}")
    return int(tok)


def build(spec: str) -> tuple[Algebra, str, str]:
    """Object named by ``spec`` as ``(presentation, kind, provenance)``."""
    from .cayley import cayley_splitting, order3_automorphism, split_cayley
    from .ssfunctor import semisimplify_algebra
    from .square import cayley_square, extended_square, para_cayley, triality_algebra
    from .superalg import der_semisimplified

    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    if name == "cayley" and not arg:
        return split_cayley(), "algebra", "split Cayley algebra, canonical basis"
    if name in ("b42", "b12") and not arg:
        case = 1 if name == "b42" else 3
        alg = semisimplify_algebra(split_cayley(), order3_automorphism(case), cayley_splitting(case))
        return alg, "superalgebra", f"semisimplified split Cayley algebra, class {case}, tabulated chain heads"
    if name == "der":
        if not arg:
            return derivations(split_cayley()).algebra, "lie", "derivations of the split Cayley algebra"
        case = _case(arg)
        alg = der_semisimplified(case)
        return alg, "liesuper", f"semisimplified Cayley derivations, class {case}"
    if name == "so8" and not arg:
        return skew_transformations(split_cayley().form).algebra, "lie", "so of the Cayley norm"
    if name == "tri" and not arg:
        return triality_algebra(para_cayley()).lie, "lie", "triality algebra of the para-Cayley algebra"
    if name == "square":
        sides = [s.strip().lower() for s in arg.split(",")]
        if sides != ["cayley", "cayley"]:
            raise UsageError("square supports only square:cayley,cayley")
        return cayley_square().algebra, "lie", "g(C, C) for the para-Cayley algebra"
    if name == "ext":
        sides = [s.strip().lower() for s in arg.split(",")]
        if len(sides) != 2:
            raise UsageError("ext expects ext:L,R with L, R in 1, 2, 3, 4, unit")
        parsed = [s if s == "unit" else _case(s) for s in sides]
        ext = extended_square(*parsed)
        blocks = ", ".join(f"{k}={v[0]}|{v[1]}" for k, v in ext.block_sdims.items())
        return ext.algebra, "liesuper", f"semisimplified g(C, C), sides {sides[0]},{sides[1]}; {blocks}"
    raise UsageError(f"unknown build spec {spec!r}")


def _text_table(alg: Algebra, kind: str, meta: str) -> str:
    lines = [f"# {kind} of dimension {alg.even_dim}|{alg.odd_dim}: {meta}"]
    lab = alg.labels
    for i, j in sorted({(int(i), int(j)) for i, j, _ in np.argwhere(alg.mult)}):
        terms = []
        for k in np.nonzero(alg.mult[i, j])[0]:
            c = int(alg.mult[i, j, k])
            terms.append(("+ " if c == 1 else "- ") + lab[k])
        rhs = " ".join(terms).removeprefix("+ ")
        lines.append(f"{lab[i]} * {lab[j]} = {rhs}")
    if alg.form is not None:
        for i, j in np.argwhere(alg.form):
            lines.append(f"n({lab[i]}, {lab[j]}) = {int(alg.form[i, j])}")
    return "\n".join(lines) + "\n"


# -- verify -----------------------------------------------------------------


Check = tuple[str, bool, int]


def _report(name: str, rep) -> Check:
    return (name + ("" if rep.ok else f" [{rep.detail}: {rep.witness}]"), bool(rep.ok), rep.checked)


def suite_composition(args) -> list[Check]:
    from .cayley import split_cayley
    from .superalg import check_composition_super

    out = [_report("Cayley linearized multiplicativity", check_composition(split_cayley()))]
    for spec in ("b42", "b12"):
        alg = build(spec)[0]
        out.append(_report(f"{spec} super composition axioms", check_composition_super(alg)))
    return out


def suite_recipes(args) -> list[Check]:
    from .cayley import order3_automorphism, split_cayley
    from .ssfunctor import roundtrip_check, semisimplify_algebra
    from .superalg import check_composition_super

    c = split_cayley()
    b42, b12 = build("b42")[0], build("b12")[0]
    out = []
    for k, want in ((1, (4, 2)), (2, (2, 0)), (3, (1, 2)), (4, (1, 2))):
        got = semisimplify_algebra(c, order3_automorphism(k)).sdim
        out.append((f"class {k} graded dimension {got} == {want}", got == want, 1))
    for name, alg in (("b42", b42), ("b12", b12)):
        out.append((f"{name} inflate/semisimplify round trip", roundtrip_check(alg), 1))
    rng = np.random.default_rng(args.seed)
    sigma = order3_automorphism(1)
    good = 0
    for _ in range(10):
        sp = random_splitting(sigma.delta, rng)
        alg = semisimplify_algebra(c, sigma, sp)
        if alg.sdim == (4, 2) and alg.unit is not None and check_composition_super(alg).ok:
            good += 1
    out.append((f"random splittings of class 1 (seed {args.seed})", good == 10, 10))
    return out


def suite_derivations(args) -> list[Check]:
    from .cayley import cayley_splitting, order3_automorphism, split_cayley
    from .ssfunctor import semisimplify_algebra
    from .superalg import cayley_derivations, der_semisimplified, der_splitting, osp, semisimplify_action, super_derivations

    c = split_cayley()
    der = cayley_derivations()
    so = skew_transformations(c.form)
    out = [(f"dim Der(C) = {der.dim}", der.dim == 14, 1)]
    want_counts = {1: (3, 4, 1), 3: (5, 0, 3), 4: (1, 2, 3)}
    want_sdim = {1: (3, 4), 3: (5, 0), 4: (1, 2)}
    for k in (1, 3, 4):
        counts = der_splitting(k).counts
        out.append((f"class {k} chain counts {counts}", counts == want_counts[k], 1))
        sd = der_semisimplified(k).sdim
        out.append((f"class {k} semisimplified Der graded dimension {sd}", sd == want_sdim[k], 1))
        sigma = order3_automorphism(k)
        css = semisimplify_algebra(c, sigma, cayley_splitting(k))
        act = semisimplify_action(so, sigma, None, cayley_splitting(k), css)
        tgt = osp(css.form, css.parity)
        ok = act.is_homomorphism() and act.image_in(tgt) and act.rank() == tgt.dim == act.source.dim
        out.append((f"class {k} so/osp correspondence {act.source.sdim}", ok, act.source.dim ** 2))
        dact = semisimplify_action(der, sigma, der_splitting(k), cayley_splitting(k), css)
        ok = dact.is_homomorphism() and dact.image_in(super_derivations(css))
        out.append((f"class {k} Der action is a homomorphism into Der(C^ss)", ok, dact.source.dim ** 2))
    return out


def suite_triality(args) -> list[Check]:
    from .square import check_spin_diagrams, check_theta_diagram, para_cayley, triality_algebra

    tri = triality_algebra(para_cayley())
    return [
        (f"dim tri = {tri.dim}", tri.dim == 28, 1),
        _report("theta/vartheta diagram", check_theta_diagram(tri)),
        _report("half-spin diagrams", check_spin_diagrams(tri)),
    ]


def suite_jacobi(args) -> list[Check]:
    from .square import cayley_square

    alg = cayley_square().algebra
    return [_report(f"Jacobi on g(C, C), dim {alg.dim}", check_jacobi(alg, workers=args.threads))]


SUITE_FUNCS: dict[str, Callable] = {
    "composition": suite_composition,
    "recipes": suite_recipes,
    "derivations": suite_derivations,
    "triality": suite_triality,
    "jacobi": suite_jacobi,
}


def verify_document(doc: dict, threads: int) -> list[Check]:
    alg = tables.from_document(doc)
    kind = doc["kind"]
    if kind in ("lie", "liesuper"):
        return [_report(f"Jacobi on input {kind}", check_jacobi(alg, workers=threads))]
    if alg.form is None:
        return [("input algebra has a form", False, 0)]
    from .superalg import check_composition_super

    return [_report(f"composition axioms on input {kind}", check_composition_super(alg))]


# -- entry point ------------------------------------------------------------


def _common(defaults: bool) -> argparse.ArgumentParser:
    sup = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    ap = argparse.ArgumentParser(add_help=False)
    ap.add_argument("--format", choices=("json", "text"), default=sup(None))
    ap.add_argument("--threads", type=int, default=sup(1))
    ap.add_argument("--seed", type=int, default=sup(0))
    ap.add_argument("-v", "--verbose", action="store_true", default=sup(False))
    return ap


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="f3super", description=__doc__.splitlines()[0],
                                 parents=[_common(True)])
    sub = ap.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", help="print a structure-constant table", parents=[_common(False)])
    b.add_argument("spec", help="cayley | b42 | b12 | der[:caseK] | so8 | tri | square:cayley,cayley | ext:L,R")
    v = sub.add_parser("verify", help="run a verification suite", parents=[_common(False)])
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--input", help="verify a table document instead of the built-in objects")
    return ap


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.threads < 1:
        print("--threads must be positive", file=sys.stderr)
        return 2
    try:
        if args.command == "build":
            alg, kind, meta = build(args.spec)
            if (args.format or "json") == "json":
                sys.stdout.write(tables.dumps(tables.to_document(alg, kind, meta)))
            else:
                sys.stdout.write(_text_table(alg, kind, meta))
            return 0
        return _verify(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _verify(args) -> int:
    results: list[tuple[str, list[Check], float]] = []
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from exc
        t0 = time.perf_counter()
        try:
            checks = verify_document(doc, args.threads)
        except (ValueError, KeyError, TypeError) as exc:
            checks = [(f"document is well formed ({exc})", False, 0)]
        results.append(("input", checks, time.perf_counter() - t0))
    else:
        names = list(SUITE_FUNCS) if args.suite == "all" else [args.suite]
        for name in names:
            t0 = time.perf_counter()
            checks = SUITE_FUNCS[name](args)
            results.append((name, checks, time.perf_counter() - t0))
            log.info("%s finished in %.2fs", name, results[-1][2])
    ok = all(c[1] for _, cs, _ in results for c in cs)
    if args.format == "json":
        doc = {
            "ok": ok,
            "suites": [
                {"name": n, "seconds": round(dt, 3),
                 "checks": [{"name": c[0], "ok": c[1], "count": c[2]} for c in cs]}
                for n, cs, dt in results
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        for name, cs, dt in results:
            for label, good, count in cs:
                print(f"{'PASS' if good else 'FAIL'}  {name}: {label} ({count} checks)")
        total = sum(c[2] for _, cs, _ in results for c in cs)
        print(f"{'OK' if ok else 'FAILED'}: {total} checks")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
