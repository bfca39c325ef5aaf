"""Command-line front end.

Exit codes: 0 success, 1 channel not entanglement breaking (``check-eb``),
2 invalid flags or malformed input, 3 I/O failure, 4 sweep budget exceeded,
5 unsupported dimension, 6 property check failed (``verify``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, channels, depol, sweep, verify
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvalidChannel,
    InvalidConfig,
    OutOfRange,
    UnsupportedDimension,
)
from .hull import fmt, write_table
from .qnum import TOL_HERM, TOL_NUM, TOL_PSD, TOL_TRACE

EXIT_OK = 0
EXIT_NOT_EB = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_BUDGET = 4
EXIT_UNSUPPORTED = 5
EXIT_PROPERTY = 6


class _Usage(Exception):
    pass


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _manifest(command: str, params: dict, outputs: list, inputs: dict | None = None,
              seed: int | None = None, started: float = 0.0) -> dict:
    return {
        "toolkit": "ebcap",
        "version": __version__,
        "command": command,
        "parameters": params,
        "seed": seed,
        "tolerances": {"herm": TOL_HERM, "trace": TOL_TRACE, "psd": TOL_PSD, "num": TOL_NUM,
                       "gap": depol.TOL_GAP},
        "inputs": {k: {"path": str(v), "sha256": _digest(v)} for k, v in (inputs or {}).items()},
        "outputs": [Path(p).name for p in outputs],
        "duration_s": round(time.perf_counter() - started, 6),
    }


def _write_manifest(path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def manifest_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


def _eps(value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise _Usage(f"--eps must lie in [0, 1], got {value}")
    return value


def _positive(value: int, flag: str) -> int:
    if value < 1:
        raise _Usage(f"{flag} must be a positive integer, got {value}")
    return value


def _print_endpoints(eps: float) -> None:
    print(f"unassisted capacity C = {fmt(depol.unassisted_capacity(eps))}")
    print(f"assisted capacity C_EA = {fmt(depol.ea_capacity(eps))}")


def cmd_depol_region(args) -> int:
    started = time.perf_counter()
    eps = _eps(args.eps)
    grid = _positive(args.grid, "--grid")
    frontier = depol.spc_frontier(eps, grid)
    rep = depol.gap_report(eps, (grid, 65))
    depol.write_spc_csv(frontier, args.out)
    _write_manifest(manifest_path(args.out), _manifest(
        "depol-region", {"eps": eps, "grid": grid, "annotation": frontier.annotation},
        [args.out], started=started))
    _print_endpoints(eps)
    print(f"hull vertices: {len(frontier.hull)}")
    print(f"max vertical gap over time division: {fmt(rep.max_vertical_gap)} "
          f"(alpha = {fmt(rep.argmax_alpha)})")
    if frontier.annotation:
        print(frontier.annotation)
    return EXIT_OK


def cmd_td_region(args) -> int:
    started = time.perf_counter()
    eps = _eps(args.eps)
    grid = _positive(args.grid, "--grid")
    frontier = depol.time_division_frontier(eps, grid)
    depol.write_td_csv(frontier, args.out)
    _write_manifest(manifest_path(args.out), _manifest(
        "td-region", {"eps": eps, "grid": grid, "annotation": frontier.annotation},
        [args.out], started=started))
    _print_endpoints(eps)
    if frontier.annotation:
        print(frontier.annotation)
    return EXIT_OK


def _eb_annotation(ch) -> str:
    try:
        verdict = channels.is_entanglement_breaking_qubit(ch)
    except UnsupportedDimension:
        return "achievable inner bound only (entanglement breaking not certified)"
    return "" if verdict is channels.EBVerdict.BREAKING else depol.INNER_BOUND_NOTE


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    ch = channels.load_channel(args.channel)
    cfg = sweep.load_config(args.config)
    frontier = sweep.frontier_sweep(ch, cfg)
    out = Path(args.out)
    hull_path = out.with_name(out.name + ".hull.json")
    frontier.write_csv(out)
    note = _eb_annotation(ch)
    record = {"annotation": note, "config": cfg.to_dict(),
              "hull": sweep.hull_vertices_record(frontier)}
    hull_path.write_text(json.dumps(record, indent=1) + "\n")
    _write_manifest(manifest_path(out), _manifest(
        "sweep", {"config": cfg.to_dict(), "annotation": note}, [out, hull_path],
        inputs={"channel": args.channel, "config": args.config}, seed=cfg.seed, started=started))
    print(f"corners evaluated: {len(frontier.points)}")
    print(f"hull vertices: {len(frontier.hull)}")
    print(f"max R = {fmt(frontier.max_r)}, max R' = {fmt(frontier.max_rp)}")
    if note:
        print(note)
    return EXIT_OK


def cmd_check_eb(args) -> int:
    ch = channels.load_channel(args.channel)
    verdict = channels.is_entanglement_breaking_qubit(ch)
    print(verdict.value)
    print(f"min partial-transpose eigenvalue: {fmt(channels.min_pt_eigenvalue(ch))}")
    return EXIT_OK if verdict is channels.EBVerdict.BREAKING else EXIT_NOT_EB


def cmd_verify(args) -> int:
    trials = _positive(args.trials, "--trials")
    results = verify.run_suite(args.suite, args.seed, trials)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}  worst={r.worst:.3e}  tol={r.tol:.0e}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def cmd_report(args) -> int:
    started = time.perf_counter()
    eps = _eps(args.eps)
    grid = _positive(args.grid, "--grid")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spc = depol.spc_frontier(eps, grid)
    td = depol.time_division_frontier(eps, 65)
    rep = depol.gap_report(eps, (grid, 65))

    spc_path, td_path = out / "spc.csv", out / "td.csv"
    gap_path, table_path = out / "gap.json", out / "combined.csv"
    depol.write_spc_csv(spc, spc_path)
    depol.write_td_csv(td, td_path)
    gap = {
        "eps": eps,
        "unassisted_capacity": depol.unassisted_capacity(eps),
        "ea_capacity": depol.ea_capacity(eps),
        "max_vertical_gap": rep.max_vertical_gap,
        "argmax_alpha": rep.argmax_alpha,
        "dominated": rep.dominated,
        "annotation": spc.annotation,
    }
    gap_path.write_text(json.dumps(gap, indent=2) + "\n")
    r = np.linspace(0.0, spc.max_r, 256)
    write_table(table_path, ("R", "Rp_spc", "Rp_td"), zip(r, spc.rp_at(r), td.rp_at(r)))
    _write_manifest(out / "manifest.json", _manifest(
        "report", {"eps": eps, "grid": grid}, [spc_path, td_path, gap_path, table_path],
        started=started))
    _print_endpoints(eps)
    print(f"max vertical gap: {fmt(rep.max_vertical_gap)} at alpha = {fmt(rep.argmax_alpha)}")
    print(f"dominated: {str(rep.dominated).lower()}")
    if spc.annotation:
        print(spc.annotation)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ebcap",
        description="Capacity regions of entanglement-breaking channels with unreliable entanglement assistance.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("depol-region", help="closed-form superposition region of the depolarizing channel")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--grid", type=int, default=512, help="number of alpha values in [0, 1/2]")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_depol_region)

    s = sub.add_parser("td-region", help="time-division baseline of the depolarizing channel")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--grid", type=int, default=65, help="number of lambda values in [0, 1]")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_td_region)

    s = sub.add_parser("sweep", help="numerical frontier of a channel given as a Kraus file")
    s.add_argument("--channel", required=True)
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("check-eb", help="PPT certificate for a qubit channel")
    s.add_argument("--channel", required=True)
    s.set_defaults(func=cmd_check_eb)

    s = sub.add_parser("verify", help="randomised property suites")
    s.add_argument("--suite", choices=sorted(verify.SUITES), default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("report", help="superposition vs time-division tables and gap report")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--grid", type=int, default=512)
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnsupportedDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidChannel, InvalidConfig, DimensionMismatch, OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
