"""Command-line front end: ``epi {analyze,sample,geometry,family,search,witness}``.

Exit codes: 0 when every checked inequality holds, 2 when any is violated,
1 on bad input or usage.
"""
from __future__ import annotations

import argparse
import os
import sys
from math import sqrt

import numpy as np

from . import families, io, polytope, verifier
from .measures import Measure, marginal_vector

OK, INPUT_ERROR, VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    return args.seed if args.seed is not None else io.RunConfig.default_seed()


def cmd_analyze(args) -> int:
    measures = [Measure(m) for m in (args.measure or ["Y", "S", "C", "N"])]
    if args.point is not None:
        try:
            pt = [float(v) for v in args.point.split(",")]
        except ValueError:
            print(f"bad --point {args.point!r}", file=sys.stderr)
            return INPUT_ERROR
        rep = polytope.polygon_slack(pt, args.tol)
        _emit(io.dumps({"point": pt, "slack": rep}), args.out)
        return OK if rep.satisfied else VIOLATION
    if args.statefile is None:
        print("analyze needs a state file or --point", file=sys.stderr)
        return INPUT_ERROR
    try:
        state, label = io.read_state(args.statefile, renormalize=args.renormalize)
    except (OSError, io.StateFileError) as exc:
        print(f"cannot read state: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if not state.is_qubits():
        print("analyze supports qubit states only; use `search` for qudits", file=sys.stderr)
        return INPUT_ERROR
    result = {"label": label, "dims": list(state.dims), "measures": {}}
    ok = True
    for m in measures:
        vec = marginal_vector(state, m)
        rep = polytope.polygon_slack(vec, args.tol)
        ok &= rep.satisfied
        result["measures"][m.value] = {"values": vec.values, "slack": rep}
    if state.n_parties >= 3:
        sw = verifier.sandwich_for_state(state)
        sw["satisfied"] = min(min(sw["lower_slack"]), min(sw["upper_slack"])) >= -args.tol
        ok &= sw["satisfied"]
        result["sandwich"] = sw
    result["satisfied"] = ok
    _emit(io.dumps(result), args.out)
    return OK if ok else VIOLATION


def cmd_sample(args) -> int:
    rep = verifier.verify_polygon(args.N, args.measure, args.trials, _seed(args), args.tol, args.threads)
    d = rep.to_dict()
    d.pop("elapsed")
    _emit(io.dumps(d), args.out)
    return OK if rep.passed else VIOLATION


def cmd_geometry(args) -> int:
    N = args.N
    curve = polytope.capacity_curve(N, args.grid)
    seed = _seed(args)
    summary = {"N": N, "V_N": polytope.available_volume(N), "excluded_simplex": polytope.excluded_simplex_volume(N)}
    mc = polytope.mc_volume(N, args.samples, seed)
    summary["V_N_mc"] = {"value": mc.value, "stderr": mc.stderr, "within_3sigma": mc.within(summary["V_N"])}
    if N >= 3:
        checks = []
        for t in sorted({1.0, 2.0, (N + 2) / 2.0}):
            exact = polytope.capacity_general(N, t)
            est = polytope.mc_capacity(N, t, args.slab, args.samples, seed)
            checks.append({"E_T": t, "exact": exact, "mc": est.value, "stderr": est.stderr})
        summary["capacity_checks"] = checks
        summary["diagonal_volume"] = polytope.diagonal_volume(N)
    summary["peak"] = curve.peak()
    if args.format == "json":
        summary["curve"] = curve.samples
        _emit(io.dumps(summary), args.out)
    else:
        _emit(io.rows_to_csv(["E_T", "A"], curve.samples), args.out)
        if args.out:
            with open(args.out + ".summary.json", "w", encoding="utf-8") as fh:
                fh.write(io.dumps(summary))
        else:
            sys.stderr.write(io.dumps(summary))
    return OK


def _param_cells(p) -> list:
    if isinstance(p, families.GhzParams):
        return [p.theta]
    if isinstance(p, families.WParams):
        return list(p.weights)
    return list(p.angles)


def cmd_family(args) -> int:
    rows = families.family_sweep(args.family, args.grid, args.measure)
    ok = all(r.slack.satisfied for r in rows)
    if args.format == "json":
        _emit(io.dumps([{"params": _param_cells(r.params), "values": r.vector.values, "slack": r.slack} for r in rows]), args.out)
    else:
        pnames = {"ghz": ["theta"], "w": ["a2", "b2", "c2"], "product": ["t1", "t2", "t3"]}[args.family]
        header = pnames + ["E1", "E2", "E3", "min_slack", "satisfied"]
        table = [_param_cells(r.params) + list(r.vector.values) + [r.slack.min_slack, int(r.slack.satisfied)] for r in rows]
        _emit(io.rows_to_csv(header, table), args.out)
    return OK if ok else VIOLATION


def cmd_search(args) -> int:
    res = verifier.conjecture_search(
        args.M, args.N, args.restarts, args.iters, _seed(args), witness_dir=args.witness_dir or os.getcwd()
    )
    _emit(io.dumps(res), args.out)
    return VIOLATION if res.counterexample else OK


def cmd_witness(args) -> int:
    if args.statefile:
        try:
            state, _ = io.read_state(args.statefile, renormalize=args.renormalize)
        except (OSError, io.StateFileError) as exc:
            print(f"cannot read state: {exc}", file=sys.stderr)
            return INPUT_ERROR
    else:
        from .state import haar_random

        state = haar_random([2] * args.N, _seed(args))
    try:
        rep = verifier.appendix_witness(state, args.tol)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return INPUT_ERROR
    _emit(io.dumps(rep), args.out)
    return OK if rep.passed else VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="epi", description="Entanglement polygon inequality toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol=1e-9):
        sp.add_argument("--seed", type=int, default=None, help="default: $EPI_SEED or 42")
        sp.add_argument("--tol", type=float, default=tol)
        sp.add_argument("--out", default=None)
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    a = sub.add_parser("analyze", help="marginal entanglements and slack of a state file")
    a.add_argument("statefile", nargs="?")
    a.add_argument("--measure", action="append", choices=[m.value for m in Measure])
    a.add_argument("--point", help="comma-separated entanglement vector to check instead of a state")
    a.add_argument("--renormalize", action="store_true")
    a.add_argument("--format", choices=["json"], default="json")
    common(a)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sample", help="polygon suite on Haar-random qubit states")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--measure", choices=[m.value for m in Measure], default="Y")
    s.add_argument("--trials", type=int, default=10**5)
    s.add_argument("--format", choices=["json"], default="json")
    common(s)
    s.set_defaults(func=cmd_sample)

    g = sub.add_parser("geometry", help="capacity curve, volumes and Monte Carlo cross-checks")
    g.add_argument("--N", type=int, required=True)
    g.add_argument("--grid", type=int, default=301)
    g.add_argument("--slab", type=float, default=0.005)
    g.add_argument("--samples", type=int, default=10**6)
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    common(g)
    g.set_defaults(func=cmd_geometry)

    f = sub.add_parser("family", help="closed-form sweep of a three-qubit family")
    f.add_argument("--family", choices=["ghz", "w", "product"], required=True)
    f.add_argument("--grid", type=int, default=101)
    f.add_argument("--measure", choices=[m.value for m in Measure], default="Y")
    f.add_argument("--format", choices=["csv", "json"], default="csv")
    common(f)
    f.set_defaults(func=cmd_family)

    q = sub.add_parser("search", help="counterexample search for the qudit inequality")
    q.add_argument("--M", type=int, required=True)
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--restarts", type=int, default=50)
    q.add_argument("--iters", type=int, default=20000, help="objective evaluations per restart")
    q.add_argument("--witness-dir", default=None)
    q.add_argument("--format", choices=["json"], default="json")
    common(q)
    q.set_defaults(func=cmd_search)

    w = sub.add_parser("witness", help="appendix identities for a state file or a seeded random state")
    w.add_argument("statefile", nargs="?")
    w.add_argument("--N", type=int, default=3)
    w.add_argument("--renormalize", action="store_true")
    w.add_argument("--format", choices=["json"], default="json")
    common(w)
    w.set_defaults(func=cmd_witness)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
