"""Command-line front end: classify, scan, bisect, lyap, simulate, population.

Output is deterministic: fixed 15-significant-digit formatting, '.' decimal,
rows emitted in parameter order regardless of worker completion order.
Exit codes: 0 success, 2 config error, 3 predicate/bracket error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bifurcate import (BifurcationReport, ScanRow, bisect_bifurcation, sweep,
                        transcritical_flip)
from .branches import branch_set, first_crossing
from .config import ExperimentConfig, load_config
from .errors import (BracketError, BudgetExceededError, ConfigError,
                     CubicbifError)
from .field import classify_regime
from .integrate import rk4_integrate
from .lyapunov import lyap_bounds
from .popmodel import critical_intensity, simulate_population
from .svg import line_plot

__all__ = ["main"]


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x, ".15g")


def _write(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-c", "--config", required=True, help="experiment config (JSON)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    for flag, key in (("--h", "h"), ("--t-run", "t_run"), ("--t-eval", "t_eval"),
                      ("--x-max", "x_max"), ("--delta-sep", "delta_sep"),
                      ("--delta-match", "delta_match"),
                      ("--target-width", "target_width")):
        p.add_argument(flag, dest=f"num_{key}", type=float, default=None)


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    overrides = {key[4:]: val for key, val in vars(args).items()
                 if key.startswith("num_") and val is not None}
    if overrides:
        cfg = ExperimentConfig(cfg.field, cfg.scenario,
                               cfg.numerics.with_(**overrides))
    return cfg


def _scan_row_csv(row: ScanRow) -> str:
    cells = [fmt(row.epsilon), str(row.count), fmt(row.l0), fmt(row.m0), fmt(row.u0),
             fmt(row.sep_upper_middle), fmt(row.sep_middle_lower)]
    for lb in (row.lyap_lower, row.lyap_middle, row.lyap_upper):
        cells += [fmt(lb.gamma_lo) if lb else "", fmt(lb.gamma_hi) if lb else ""]
    cells += [row.note.replace(",", ";"), row.error.replace(",", ";")]
    return ",".join(cells)


_SCAN_HEADER = ("eps,count,l0,m0,u0,sep_upper_middle,sep_middle_lower,"
                "lyap_l_lo,lyap_l_hi,lyap_m_lo,lyap_m_hi,lyap_u_lo,lyap_u_hi,"
                "note,error")


def cmd_classify(args) -> int:
    cfg = _load(args)
    regime = classify_regime(cfg.any_field)
    print(f"kind: {regime.kind}")
    for name, val in regime.flags.items():
        print(f"flag {name}: {val}")
    print(f"c bounds: [{fmt(regime.c_minus)}, {fmt(regime.c_plus)}]")
    print(f"threshold -a/b bounds: [{fmt(regime.s_minus)}, {fmt(regime.s_plus)}]")
    print("frequencies:", " ".join(fmt(f) for f in regime.frequencies) or "(constant)")
    return 0


def cmd_scan(args) -> int:
    cfg = _load(args)
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    if args.steps == 1:
        grid = [args.eps_from]
    else:
        step = (args.eps_to - args.eps_from) / (args.steps - 1)
        grid = [args.eps_from + i * step for i in range(args.steps)]
    rows = sweep(cfg.any_field, grid, cfg.numerics, jobs=args.jobs)
    out = Path(args.out)
    _write(out / "scan.csv", [_SCAN_HEADER] + [_scan_row_csv(r) for r in rows])
    _scan_svg(out / "scan.svg", rows)
    failed = sum(1 for r in rows if r.error)
    for r in rows:
        if r.error:
            print(f"row eps={fmt(r.epsilon)} failed: {r.error}", file=sys.stderr)
    print(f"scan: {len(rows) - failed}/{len(rows)} rows ok -> {out / 'scan.csv'}")
    return 0 if failed <= 0.1 * len(rows) else 4


def _scan_svg(path: Path, rows: list[ScanRow]) -> None:
    series = []
    for attr, stab_attr in (("l0", "lyap_lower"), ("m0", "lyap_middle"),
                            ("u0", "lyap_upper")):
        solid = {"x": [], "y": [], "style": "solid"}
        dashed = {"x": [], "y": [], "style": "dashed"}
        marks = {"x": [], "y": [], "style": "markers"}
        for row in rows:
            val = getattr(row, attr)
            lb = getattr(row, stab_attr)
            sign = lb.sign if lb is not None else "straddles_zero"
            for target, want in ((solid, "negative"), (dashed, "positive"),
                                 (marks, "straddles_zero")):
                target["x"].append(row.epsilon)
                target["y"].append(val if sign == want else math.nan)
        series += [solid, dashed, marks]
    line_plot(path, series, title="branch values at t=0",
              xlabel="eps", ylabel="x")


def _print_report(rep: BifurcationReport) -> None:
    print(f"predicate: {rep.predicate}")
    print(f"bracket: [{fmt(rep.bracket[0])}, {fmt(rep.bracket[1])}]")
    print(f"midpoint: {fmt(rep.midpoint)}")
    print(f"width: {fmt(rep.width)}")
    print(f"iterations: {rep.iterations}")
    if rep.flagged:
        print(f"flagged midpoints: {len(rep.flagged)}")


def cmd_bisect(args) -> int:
    cfg = _load(args)
    if args.flip:
        rep = transcritical_flip(cfg.any_field, args.eps_a, args.eps_b,
                                 target_width=cfg.numerics.target_width
                                 if args.num_target_width else 1.0e-4,
                                 T=3.0 * cfg.numerics.t_run,
                                 tau=cfg.numerics.t_run,
                                 num=cfg.numerics)
    else:
        rep = bisect_bifurcation(cfg.any_field, args.eps_a, args.eps_b,
                                 num=cfg.numerics, reduced=not args.headline)
    _print_report(rep)
    out = Path(args.out)
    lines = ["predicate,eps_lo,eps_hi,midpoint,width,iterations,flagged",
             ",".join([rep.predicate, fmt(rep.bracket[0]), fmt(rep.bracket[1]),
                       fmt(rep.midpoint), fmt(rep.width), str(rep.iterations),
                       str(len(rep.flagged))])]
    _write(out / "bisect.csv", lines)
    _write(out / "bisect.json", [json.dumps(_report_dict(rep), indent=2,
                                            sort_keys=True)])
    return 0


def _report_dict(rep: BifurcationReport) -> dict:
    def num(v):
        return None if (isinstance(v, float) and math.isnan(v)) else v

    def witness(w):
        if isinstance(w, ScanRow):
            return {"eps": w.epsilon, "count": w.count, "l0": num(w.l0),
                    "m0": num(w.m0), "u0": num(w.u0), "note": w.note}
        if hasattr(w, "gamma_lo"):
            return {"gamma_lo": w.gamma_lo, "gamma_hi": w.gamma_hi,
                    "T": w.T, "tau": w.tau, "sign": w.sign}
        return {"kind": getattr(w, "kind", str(w))}

    return {
        "predicate": rep.predicate,
        "bracket": list(rep.bracket),
        "midpoint": rep.midpoint,
        "width": rep.width,
        "iterations": rep.iterations,
        "flagged_midpoints": list(rep.flagged),
        "witness_lo": witness(rep.witness_lo),
        "witness_hi": witness(rep.witness_hi),
    }


def cmd_lyap(args) -> int:
    cfg = _load(args)
    field = cfg.any_field
    eps = args.eps
    bs = branch_set(field, eps, cfg.numerics, strict=False)
    branch = {"upper": bs.upper, "middle": bs.middle, "lower": bs.lower}[args.branch]
    if branch is None:
        raise BracketError(f"no {args.branch} branch at eps={fmt(eps)}")
    lines = ["T,tau,gamma_lo,gamma_hi"]
    for T, tau in args.windows or [(1e3, 1e2)]:
        lb = lyap_bounds(field, eps, branch, T, tau)
        lines.append(",".join([fmt(T), fmt(tau), fmt(lb.gamma_lo), fmt(lb.gamma_hi)]))
        print(f"T={fmt(T)} tau={fmt(tau)}: gamma in [{fmt(lb.gamma_lo)}, "
              f"{fmt(lb.gamma_hi)}] ({lb.sign})")
    _write(Path(args.out) / "lyap.csv", lines)
    return 0


def cmd_simulate(args) -> int:
    cfg = _load(args)
    field = cfg.any_field
    out = Path(args.out)
    horizon = args.horizon
    rows = ["eps,x0,final_t,final_x,status,zero_crossing"]
    for x0 in args.x0:
        traj = rk4_integrate(field, args.eps, 0.0, x0, horizon,
                             h=cfg.numerics.h, x_max=cfg.numerics.x_max)
        cross = first_crossing(traj, 0.0)
        name = f"traj_eps{fmt(args.eps)}_x0{fmt(x0)}.csv"
        ts = traj.times()
        _write(out / name, ["t,x"] + [f"{fmt(t)},{fmt(x)}"
                                      for t, x in zip(ts, traj.samples)])
        rows.append(",".join([fmt(args.eps), fmt(x0), fmt(traj.final_t),
                              fmt(traj.final_x), traj.status,
                              fmt(cross) if cross is not None else ""]))
        print(f"x0={fmt(x0)}: {traj.status}, final x={fmt(traj.final_x)}"
              + (f", crosses 0 at t={fmt(cross)}" if cross is not None else ""))
    _write(out / "simulate.csv", rows)
    return 0


def cmd_population(args) -> int:
    cfg = _load(args)
    if cfg.scenario is None:
        raise ConfigError("'population' subcommand needs a population config")
    sc = cfg.scenario
    out = Path(args.out)
    if args.critical is not None:
        lo, hi = args.critical
        rep = critical_intensity(sc, args.x0[0] if args.x0 else sc.x0, lo, hi,
                                 cfg.numerics)
        _print_report(rep)
        _write(out / "critical.csv",
               ["predicate,eps_lo,eps_hi,midpoint,iterations",
                ",".join([rep.predicate, fmt(rep.bracket[0]), fmt(rep.bracket[1]),
                          fmt(rep.midpoint), str(rep.iterations)])])
        return 0
    eps_list = args.eps_list or [sc.eps]
    x0_list = args.x0 or [sc.x0]
    grid = [(eps, x0) for eps in eps_list for x0 in x0_list]

    def run(point):
        eps, x0 = point
        return simulate_population(replace(sc, eps=eps, x0=x0), cfg.numerics)

    if args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(run, grid))
    else:
        outcomes = [run(p) for p in grid]
    rows = ["eps,x0,outcome,extinction_time,attained_level"]
    for (eps, x0), o in zip(grid, outcomes):
        rows.append(",".join([fmt(eps), fmt(x0), o.kind,
                              fmt(o.time) if o.time is not None else "",
                              fmt(o.attained_level)]))
        print(f"eps={fmt(eps)} x0={fmt(x0)}: {o.kind}"
              + (f" at t={fmt(o.time)}" if o.time is not None else ""))
    _write(out / "population.csv", rows)
    return 0


def _window_pair(text: str) -> tuple[float, float]:
    try:
        t_str, tau_str = text.split(",")
        return float(t_str), float(tau_str)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected T,tau got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubicbif",
        description="Bifurcation diagrams for coercive cubic ODEs with "
                    "quasiperiodic coefficients")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="report the coefficient regime")
    _add_common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("scan", help="epsilon sweep to CSV + SVG diagram")
    _add_common(p)
    p.add_argument("--from", dest="eps_from", type=float, required=True)
    p.add_argument("--to", dest="eps_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("bisect", help="bisect a bifurcation value")
    _add_common(p)
    p.add_argument("--eps-a", type=float, required=True)
    p.add_argument("--eps-b", type=float, required=True)
    p.add_argument("--headline", action="store_true",
                   help="full windows at every midpoint (slow)")
    p.add_argument("--flip", action="store_true",
                   help="bisect the constant-branch Lyapunov sign instead of "
                        "the branch count (constant-threshold regime)")
    p.set_defaults(fn=cmd_bisect)

    p = sub.add_parser("lyap", help="truncated Lyapunov bounds table")
    _add_common(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--branch", choices=("lower", "middle", "upper"),
                   default="upper")
    p.add_argument("--tw", dest="windows", action="append", type=_window_pair,
                   metavar="T,TAU", help="repeatable truncation window")
    p.set_defaults(fn=cmd_lyap)

    p = sub.add_parser("simulate", help="raw trajectories from given x0")
    _add_common(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--x0", type=float, action="append", required=True)
    p.add_argument("--horizon", type=float, default=2.0e4)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("population", help="survival/extinction outcomes")
    _add_common(p)
    p.add_argument("--eps", dest="eps_list", action="append", type=float)
    p.add_argument("--x0", type=float, action="append")
    p.add_argument("--critical", nargs=2, type=float, metavar=("LO", "HI"),
                   help="bisect the critical migration intensity in [LO, HI]")
    p.set_defaults(fn=cmd_population)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (BracketError, BudgetExceededError) as exc:
        print(f"bracket error: {exc}", file=sys.stderr)
        return 3
    except CubicbifError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
