"""``tsvf`` command line: run scenarios, evaluate weak values, LHV search, pointer sweeps.

Exit status: 0 when every requested check passes, 1 when a report fails,
2 on usage errors, 3 on computation errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import catalog, lhv, pointer, qcore, tsvf
from .errors import (
    BadN,
    BadParams,
    BadTriplet,
    DuplicateSite,
    ObservableSyntaxError,
    PostSelError,
    SiteOutOfRange,
    TooLarge,
    UnknownScenario,
)
from .scenarios import registry
from .scenarios.parser import parse_observable
from .tsvf import GeneralizedTwoStateVector

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


def _g_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad g list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tsvf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered scenarios")

    run = sub.add_parser("run", help="run one scenario, or all of them")
    run.add_argument("scenario", nargs="?", help="scenario name (default: whole registry)")
    run.add_argument("--n", type=int)
    run.add_argument("--g", type=_g_list, help="coupling, or comma list for pointer-sweep")
    run.add_argument("--delta", type=float)
    run.add_argument("--v", type=float)
    run.add_argument("--variant", choices=["same-box", "literal"])
    run.add_argument("--json", type=Path, metavar="PATH", help="write the report as JSON")

    wv = sub.add_parser("wv", help="weak value of an observable on a catalog entry")
    wv.add_argument("entry", help=f"one of {', '.join(catalog.CATALOG_NAMES)}")
    wv.add_argument("--obs", required=True)
    wv.add_argument("--n", type=int)

    lh = sub.add_parser("lhv", help="exhaustive local hidden-variable search")
    lh.add_argument("--n", type=int, default=3)
    lh.add_argument("--drop", type=int, help="index (0-3) of a constraint to drop")

    sw = sub.add_parser("sweep", help="pointer response over couplings")
    sw.add_argument("entry")
    sw.add_argument("--obs", required=True)
    sw.add_argument("--g", type=_g_list, default=[1e-3, 1e-2, 1e-1])
    sw.add_argument("--delta", type=float, default=1.0)
    sw.add_argument("--n", type=int)
    sw.add_argument("--csv", type=Path, metavar="PATH")

    pw = sub.add_parser("pointer", help="export one post-selected pointer wavefunction")
    pw.add_argument("entry")
    pw.add_argument("--obs", required=True)
    pw.add_argument("--g", type=float, default=0.01)
    pw.add_argument("--delta", type=float, default=1.0)
    pw.add_argument("--n", type=int)
    pw.add_argument("--csv", type=Path, metavar="PATH", required=True)
    return p


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _print_report(rep: registry.ScenarioReport, out) -> None:
    status = "PASS" if rep.overall_pass else "FAIL"
    print(f"== {rep.scenario} [{status}] params={rep.params}", file=out)
    for r in rep.rows:
        mark = "ok  " if r.passed else "FAIL"
        line = (f"  {mark} {r.label}: expected {_fmt(r.expected)}, computed {_fmt(r.computed)}"
                f" (err {r.abs_error:.2e}, tol {r.tol:.0e}, {r.provenance})")
        if r.note:
            line += f"  # {r.note}"
        print(line, file=out)


def _cmd_run(args, out) -> int:
    names = [args.scenario] if args.scenario else registry.scenario_names()
    if args.json and len(names) != 1:
        raise BadParams("--json needs a single scenario")
    ok = True
    for name in names:
        params = {}
        if args.scenario:
            given = {"n": args.n, "delta": args.delta, "v": args.v,
                     "variant": args.variant}
            if args.g is not None:
                given["g"] = args.g if name == "pointer-sweep" else args.g[0]
            params = {k: v for k, v in given.items() if v is not None}
        rep = registry.run_scenario(name, params)
        _print_report(rep, out)
        if args.json:
            registry.export_report(rep, args.json)
        ok &= rep.overall_pass
    return EXIT_OK if ok else EXIT_FAIL


def _entry_and_obs(name: str, text: str, n):
    entry = catalog.lookup(name, n)
    if isinstance(entry, GeneralizedTwoStateVector):
        return entry, parse_observable(text, entry.n_sites, catalog.box_maps(name))
    return entry, parse_observable(text, entry.n_sites, entry.to_box)


def _cmd_wv(args, out) -> int:
    entry, obs = _entry_and_obs(args.entry, args.obs, args.n)
    if isinstance(entry, GeneralizedTwoStateVector):
        res = tsvf.weak_value_generalized(entry, obs)
        print(f"weak value: {_fmt(res.value)}", file=out)
        return EXIT_OK
    res = tsvf.weak_value(entry.tsv, obs)
    print(f"weak value: {_fmt(res.value)}", file=out)
    if qcore.is_hermitian(obs, entry.n_sites):
        spectral = qcore.eigendecompose(obs, entry.n_sites)
        abl = tsvf.abl_probabilities(entry.tsv, spectral.projectors, spectral.eigenvalues,
                                     validate=False)
        for value, p in abl.outcomes:
            print(f"  ABL P(outcome {value:.12g}) = {p:.12g}", file=out)
        cert = tsvf.check_certainty(entry.tsv, obs)
        print(f"certain outcome: {'none' if cert is None else f'{cert:.12g}'}", file=out)
    return EXIT_OK


def _cmd_lhv(args, out) -> int:
    cons = lhv.ghz_constraints(args.n)
    if args.drop is not None:
        if not 0 <= args.drop < len(cons):
            raise BadParams(f"--drop must be in 0..{len(cons) - 1}")
        cons = cons[: args.drop] + cons[args.drop + 1:]
    for c in cons:
        print(f"  constraint: {c}", file=out)
    res = lhv.exhaustive_search(args.n, cons)
    print("SAT" if res.satisfiable else "UNSAT", file=out)
    if res.witness is not None:
        print(f"witness: sx={list(res.witness.sx)} sy={list(res.witness.sy)}", file=out)
    cert = lhv.parity_obstruction(cons)
    if cert is None:
        print("certificate: none", file=out)
    else:
        counts = ", ".join(f"s{a}({p})x{k}" for (p, a), k in cert.counts)
        print(f"certificate: rhs product {cert.rhs_product:+d}, even counts [{counts}]", file=out)
    print(f"assignments checked: {res.assignments_checked}", file=out)
    return EXIT_OK


def _pointer_entry(args):
    entry, obs = _entry_and_obs(args.entry, args.obs, args.n)
    if isinstance(entry, GeneralizedTwoStateVector):
        raise BadParams("pointer simulation needs a plain two-state vector")
    return entry, obs, qcore.eigendecompose(obs, entry.n_sites)


def _cmd_sweep(args, out) -> int:
    entry, obs, spectral = _pointer_entry(args)
    if not args.g or any(g == 0 for g in args.g):
        raise BadParams("--g needs nonzero couplings")
    rows = []
    for g in args.g:
        cfg = pointer.PointerConfig.covering(g, spectral.eigenvalues, args.delta)
        pt = pointer.coupling_sweep(entry.tsv, spectral, [g], cfg)[0]
        rows.append(pt)
    wv = tsvf.weak_value(entry.tsv, obs).value
    print(f"weak value: {_fmt(wv)}", file=out)
    print("g_over_delta,mean_x_over_g,mean_p", file=out)
    for pt in rows:
        print(f"{pt.ratio!r},{pt.mean_x_over_g!r},{pt.mean_p!r}", file=out)
    if args.csv:
        with args.csv.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["g_over_delta", "mean_x_over_g", "mean_p"])
            for pt in rows:
                w.writerow([repr(pt.ratio), repr(pt.mean_x_over_g), repr(pt.mean_p)])
    return EXIT_OK


def _cmd_pointer(args, out) -> int:
    entry, obs, spectral = _pointer_entry(args)
    cfg = pointer.PointerConfig.covering(args.g, spectral.eigenvalues, args.delta)
    res = pointer.simulate_measurement(entry.tsv, spectral, cfg)
    res.to_csv(args.csv)
    print(f"mean_x={res.mean_x!r} var_x={res.var_x!r} mean_p={res.mean_p!r} "
          f"weight={res.total_weight!r}", file=out)
    return EXIT_OK


_USAGE_ERRORS = (
    UnknownScenario, BadParams, BadN, BadTriplet, TooLarge,
    ObservableSyntaxError, DuplicateSite, SiteOutOfRange,
)

_COMMANDS = {
    "run": _cmd_run,
    "wv": _cmd_wv,
    "lhv": _cmd_lhv,
    "sweep": _cmd_sweep,
    "pointer": _cmd_pointer,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command == "list":
        for name, sc in registry.REGISTRY.items():
            print(f"{name:24s} {sc.description}  defaults={sc.defaults}", file=out)
        return EXIT_OK
    try:
        return _COMMANDS[args.command](args, out)
    except _USAGE_ERRORS as exc:
        print(f"tsvf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PostSelError as exc:
        print(f"tsvf: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, IndexError) as exc:
        print(f"tsvf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry_point() -> None:
    sys.exit(main())
