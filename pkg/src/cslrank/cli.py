"""Command-line front end.

Exit status: 0 when everything checks out, 1 when the map is refuted or a
check fails (evidence is printed), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .algebra import mask, span_check
from .demos import DEMOS, run_demo
from .errors import CSLError, InputError, RefutationError
from .fileio import load_implementation, load_lattice, load_map, save_implementation
from .lattice import interesting_family, validate_cdl
from .rankmap import Tag, check_rank_preserving, classify_all, decompose, validate
from .reconstruct import assemble, chain_graph, cycle_check, verify

OK, REFUTED, BAD_INPUT = 0, 1, 2


def _set(E) -> str:
    return repr(E)


def run_analyze(args, out) -> int:
    L = load_lattice(args.lattice)
    F = interesting_family(L)
    M = mask(L)
    print(f"n = {L.n}, lattice has {len(L)} elements", file=out)
    print("elements: " + " ".join(_set(E) for E in L), file=out)
    print(f"interesting family ({len(F)} members):", file=out)
    width = max((len(_set(N)) for N in F), default=1)
    print(f"  {'N'.ljust(width)}  N_-", file=out)
    for N in F:
        print(f"  {_set(N).ljust(width)}  {_set(F.pred[N])}", file=out)
    print("mask:", file=out)
    for line in M.star_pattern().splitlines():
        print("  " + line, file=out)
    cdl, span = validate_cdl(L), span_check(L)
    print(f"validate_cdl: {cdl}", file=out)
    print(f"span_check: {span}", file=out)
    return OK if cdl and span else REFUTED


def _load_valid_map(path):
    spec = load_map(path)
    rep = validate(spec)
    if not rep.ok:
        raise InputError("map does not validate: " + "; ".join(rep.problems))
    return spec


def _rank_check(spec, args, out) -> bool:
    if args.trials <= 0:
        return True
    max_rank = args.max_rank if args.max_rank is not None else min(4, spec.n1, spec.n2)
    v = check_rank_preserving(spec, trials=args.trials, max_rank=max_rank, seed=args.seed)
    if v.refuted:
        print(f"rank check: refuted after {v.trials_run} trials ({v.stage})", file=out)
        print(f"  A = {v.counterexample}", file=out)
        print(f"  rank A = {v.source_rank}, rank Phi(A) = {v.image_rank}", file=out)
        return False
    print(f"rank check: probable ({v.trials_run} random trials, ranks up to {max_rank})", file=out)
    return True


def summary_line(c, components: int) -> str:
    total = len(c.family)
    counts = c.counts()
    parts = [f"{k}/{total} {t}" for t, k in counts.items() if k]
    shape = "irreducible" if components == 1 else "reducible"
    noun = "component" if components == 1 else "components"
    return f"{', '.join(parts) or '0/0'}, {shape} ({components} {noun})"


def _analysis(spec, args, out):
    c = classify_all(spec, parallel=args.parallel)
    print("classification:", file=out)
    width = max((len(_set(N)) for N in c.family), default=1)
    for N in c.family:
        e = c.entries[N]
        extra = f"  [{'; '.join(e.trace)}]" if e.trace else ""
        print(f"  {_set(N).ljust(width)}  {e.tag}{extra}", file=out)
    for w in c.warnings:
        print(f"  note: {w}", file=out)
    d = decompose(spec, c)
    print(f"decomposition: M_i = {d.M_i}, M_c = {d.M_c}, M_t = {d.M_t}", file=out)
    g = chain_graph(spec, c)
    print(f"chain components: {len(g.components)}", file=out)
    for comp in g.components:
        print(f"  root {comp.root} ({comp.mode}): G = {comp.G}, F = {comp.F}", file=out)
        print("    members: " + " ".join(_set(M) for M in comp.members), file=out)
        for (lo, hi), lam in sorted(g.edges.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())):
            if lo in comp.members:
                print(f"    lambda {lo} <= {hi}: {lam}", file=out)
    cyc = cycle_check(g)
    if cyc:
        print("cycle check: all products equal 1", file=out)
    else:
        print("cycle check: violated", file=out)
        for v in cyc.violations:
            path = " -> ".join(_set(M) for M in v["cycle"])
            print(f"  cycle {path} has product {v['product']}", file=out)
    return c, g, cyc


def run_classify(args, out) -> int:
    spec = _load_valid_map(args.map)
    probable = _rank_check(spec, args, out)
    c, g, cyc = _analysis(spec, args, out)
    print(summary_line(c, len(g.components)), file=out)
    return OK if probable and cyc else REFUTED


def run_reconstruct(args, out) -> int:
    spec = _load_valid_map(args.map)
    probable = _rank_check(spec, args, out)
    c, g, cyc = _analysis(spec, args, out)
    impl = assemble(spec, g, cyc)
    impl.report = verify(spec, impl)
    _print_verify(impl.report, out)
    for b in impl.blocks:
        print(f"block G = {list(b.coords_G)}, F = {list(b.coords_F)}, {b.mode}", file=out)
        print(f"  U = {b.U}", file=out)
        print(f"  V = {b.V}", file=out)
        rule = "U A^T V*" if b.mode is Tag.TWISTED else "U A V*"
        print(f"  Phi(A) restricted to this block = {rule}", file=out)
    for f in impl.flags:
        print(f"flag: {f}", file=out)
    if args.out:
        save_implementation(impl, args.out)
        print(f"implementation written to {args.out}", file=out)
    else:
        print(save_implementation(impl), file=out, end="")
    return OK if probable and impl.report.certificate == "exact" else REFUTED


def _print_verify(rep, out):
    passed = rep.units_checked - len(rep.failures)
    print(f"verified {passed}/{rep.units_checked} allowed units", file=out)
    for f in rep.failures:
        print(f"  unit E{f['unit']} fails: expected {f['expected']}, got {f['got']}", file=out)
    for br in rep.block_ranks:
        print(f"  block {list(br['G'])}: rank U = {br['rank_U']}, rank V = {br['rank_V']}", file=out)
    print(f"image dimension {rep.image_dim} of {rep.target_algebra_dim}: "
          + ("onto" if rep.surjective else "not onto"), file=out)
    print(f"certificate: {rep.certificate}", file=out)


def run_verify(args, out) -> int:
    spec = _load_valid_map(args.map)
    impl = load_implementation(args.impl)
    if impl.n_source != spec.n1 or impl.n_target != spec.n2:
        raise InputError(
            f"implementation is {impl.n_target}x{impl.n_source}, map needs {spec.n2}x{spec.n1}"
        )
    rep = verify(spec, impl)
    _print_verify(rep, out)
    return OK if rep.ok else REFUTED


def run_demo_cmd(args, out) -> int:
    names = list(DEMOS) if args.name == "all" else [args.name]
    status = OK
    for name in names:
        res = run_demo(name)
        print(res.report(), file=out)
        if res.reconstruction is not None and args.out and len(names) == 1:
            save_implementation(res.reconstruction.implementation, args.out)
            print(f"implementation written to {args.out}", file=out)
        if not res.ok:
            status = REFUTED
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trials", type=int, default=64, help="random trials per stage of the rank check (0 skips it)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-rank", type=int, default=None, help="largest rank tried (default min(4, n))")
    common.add_argument("--out", default=None, help="where to write the implementation file")
    common.add_argument("--parallel", action="store_true", help="classify members concurrently")

    p = argparse.ArgumentParser(prog="cslrank", description="Rank-preserving maps between CSL algebras.")
    sub = p.add_subparsers(dest="verb", required=True)
    a = sub.add_parser("analyze", parents=[common], help="lattice closure, interesting family and mask")
    a.add_argument("lattice")
    a.set_defaults(fn=run_analyze)
    c = sub.add_parser("classify", parents=[common], help="classify a map and check chain cycles")
    c.add_argument("map")
    c.set_defaults(fn=run_classify)
    r = sub.add_parser("reconstruct", parents=[common], help="recover implementing U, V")
    r.add_argument("map")
    r.set_defaults(fn=run_reconstruct)
    v = sub.add_parser("verify", parents=[common], help="check an implementation against a map")
    v.add_argument("map")
    v.add_argument("impl")
    v.set_defaults(fn=run_verify)
    d = sub.add_parser("demo", parents=[common], help="run a built-in example")
    d.add_argument("name", choices=[*DEMOS, "all"])
    d.set_defaults(fn=run_demo_cmd)
    return p


def main(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except RefutationError as exc:
        print(f"refuted: {exc}", file=out)
        for key, val in exc.evidence.items():
            print(f"  {key}: {val}", file=out)
        return REFUTED
    except CSLError as exc:
        print(f"error: {exc}", file=out)
        return REFUTED


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
