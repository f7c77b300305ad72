"""Command-line entry point: simulate scenarios, validate them, spot-check
single solver instances against the exhaustive oracle.

Exit codes: 0 success, 1 validation/usage error, 2 solver divergence, 3 I/O.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .constraints import AugmentedSystem, RowTag
from .oracle import OracleBudgetError, oracle_solve
from .sim import ScenarioError, load_scenario_file, run, write_log
from .solver import SolverDivergenceError, TaskRef, sns_solve


def _cmd_run(args):
    scenario = load_scenario_file(args.scenario)
    if args.duration_override is not None:
        scenario.duration = args.duration_override
        scenario.__post_init__()
    out = args.out or (Path(args.scenario).stem + ".csv")
    started = time.perf_counter()
    log = run(scenario)
    elapsed = time.perf_counter() - started
    write_log(log, out, scenario)
    scaled = sum(1 for rec in log if rec.s_star < 1.0)
    final_err = float(np.linalg.norm(log[-1].ee_err)) if log else float("nan")
    print(
        f"{scenario.name}: {len(log)} ticks in {elapsed:.2f} s, "
        f"{scaled} scaled ticks, final error {final_err:.3e} m -> {out}"
    )
    return 0


def _cmd_check(args):
    scenario = load_scenario_file(args.scenario)
    n = scenario.robot.joint_count
    print(
        f"{scenario.name}: valid ({scenario.robot.kind} {n}R, "
        f"{len(scenario.cartesian_constraints)} cartesian constraints, "
        f"duration {scenario.duration:g} s at T = {scenario.sample_time:g} s)"
    )
    return 0


def _cmd_oracle(args):
    try:
        with open(args.instance, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{args.instance}: {exc}") from None
    try:
        jac = np.asarray(data["jacobian"], dtype=float)
        x_dot = np.asarray(data["x_dot"], dtype=float)
        b_min = np.asarray(data["b_min"], dtype=float)
        b_max = np.asarray(data["b_max"], dtype=float)
        extra = np.asarray(data.get("extra_rows", []), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{args.instance}: bad instance field ({exc})") from None
    n = jac.shape[1] if jac.ndim == 2 else 0
    rows = [np.eye(n)]
    tags = [RowTag("joint", j) for j in range(n)]
    if extra.size:
        rows.append(extra.reshape(-1, n))
        tags += [RowTag("cp", i, "r") for i in range(extra.reshape(-1, n).shape[0])]
    try:
        task = TaskRef(x_dot, jac)
        system = AugmentedSystem(np.vstack(rows), b_min, b_max, tuple(tags))
    except ValueError as exc:
        raise ScenarioError(f"{args.instance}: {exc}") from None
    try:
        verdict = oracle_solve(task, system)
    except OracleBudgetError as exc:
        raise ScenarioError(str(exc)) from None
    sol = sns_solve(task, system)
    agrees = (sol.status in ("exact", "task_saturated")) == verdict.feasible_exact
    print(f"oracle: feasible_exact={verdict.feasible_exact} best_scale={verdict.best_scale:.6f}")
    print(f"solver: status={sol.status} s_star={sol.s_star:.6f} iterations={sol.iterations}")
    print(f"agreement: {'yes' if agrees else 'NO'}; scale gap {verdict.best_scale - sol.s_star:+.2e}")
    return 0


def _cmd_version(args):
    print(__version__)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="snsik",
        description="Kinematic control with saturation of joint and Cartesian limits in the null space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and write its CSV log")
    p_run.add_argument("scenario", help="scenario file path")
    p_run.add_argument("--out", help="output CSV path (default: <scenario stem>.csv)")
    p_run.add_argument(
        "--duration-override", type=float, default=None, help="replace the scenario duration [s]"
    )
    p_run.add_argument(
        "--seed", type=int, default=None,
        help="reserved for future stochastic features; runs are deterministic",
    )
    p_run.set_defaults(handler=_cmd_run)

    p_check = sub.add_parser("check", help="validate a scenario file")
    p_check.add_argument("scenario", help="scenario file path")
    p_check.set_defaults(handler=_cmd_check)

    p_oracle = sub.add_parser(
        "oracle", help="cross-check one solver instance against the exhaustive oracle"
    )
    p_oracle.add_argument(
        "instance",
        help="JSON file with jacobian, x_dot, b_min, b_max, optional extra_rows",
    )
    p_oracle.set_defaults(handler=_cmd_oracle)

    p_version = sub.add_parser("version", help="print the package version")
    p_version.set_defaults(handler=_cmd_version)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        return args.handler(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverDivergenceError as exc:
        print(f"solver divergence: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
