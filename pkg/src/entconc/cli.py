"""Command-line front end: plan, sweep, simulate, schmidt, fmin, multi.

All angles are radians given as decimal flags. Result data goes to stdout or
to the CSV file named with ``-o``; diagnostics go to stderr. Floats are
printed with 17 significant digits so output is reproducible bit for bit.
Relative ``-o`` paths resolve under ``$ENTCONC_OUTDIR`` when that is set.

Exit codes: 0 ok, 1 verification failure, 2 domain error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .gate import GateParams
from .planner import StepMode, f_min, make_plan, plan_record, step_count
from .simulator import run_exact, run_monte_carlo, run_multipartite, run_record_row
from .states import entanglement, parse_amplitudes, reconstruct, schmidt_decompose

PLAN_COLUMNS = ["theta0", "xi", "eta", "delta", "step", "mode", "T", "Gamma", "F", "theta_final"]
SIM_COLUMNS = ["seed", "trials", "successes", "empirical_prob", "gamma_analytic"]
VERIFY_TOL = 1e-9

_MODES = [m.value for m in StepMode]


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _fmt_matrix(m: np.ndarray) -> str:
    return ";".join(",".join(_fmt_complex(z) for z in row) for row in np.asarray(m))


def _print_kv(key: str, value: object) -> None:
    print(f"{key} = {_fmt(value)}")


def _print_list(key: str, values) -> None:
    print(f"{key} = {','.join(_fmt(v) for v in values)}")


def _resolve_output(path_str: str) -> Path:
    path = Path(path_str)
    if not path.is_absolute():
        base = os.environ.get("ENTCONC_OUTDIR", "")
        if base:
            path = Path(base) / path
    return path


def _emit_csv(columns: list[str], rows: list[dict], output: str | None) -> None:
    if output is None:
        _write_rows(sys.stdout, columns, rows)
        return
    path = _resolve_output(output)
    with open(path, "w", newline="") as fh:
        _write_rows(fh, columns, rows)


def _write_rows(fh, columns: list[str], rows: list[dict]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])


def _cmd_plan(args: argparse.Namespace) -> int:
    params = GateParams(args.xi, args.eta)
    plan = make_plan(args.theta0, params, StepMode(args.mode))
    record = plan_record(plan)
    for key in PLAN_COLUMNS:
        _print_kv(key, record[key])
    _print_list("thetas", plan.thetas)
    _print_list("gammas", plan.step_probs)

    if args.output:
        _emit_csv(PLAN_COLUMNS, [record], args.output)

    if args.verify:
        run = run_exact(plan.theta0, params, plan.steps)
        theta_dev = float(np.max(np.abs(run.thetas - plan.thetas)))
        gamma_dev = abs(float(np.prod(run.branch_probs)) - plan.total_prob)
        simulated_f = abs(run.final_state[0] + run.final_state[3]) ** 2 / 2.0
        fid_dev = abs(simulated_f - plan.fidelity)
        worst = max(theta_dev, gamma_dev, fid_dev)
        print(f"verify: max analytic/simulated disagreement = {worst:.3e}", file=sys.stderr)
        if worst > VERIFY_TOL:
            print(f"error: verification failed (disagreement > {VERIFY_TOL})", file=sys.stderr)
            return 1
    return 0


@dataclass
class SweepSpec:
    """One-dimensional grid over theta0 or over the concentration step."""

    variable: str
    start: float
    stop: float
    points: int
    mode: StepMode
    xi: float | None = None
    eta: float | None = None
    theta0: float | None = None
    output: str | None = None

    def validate(self) -> None:
        if self.variable not in ("theta0", "delta"):
            raise ValueError(f"sweep variable must be 'theta0' or 'delta', got {self.variable!r}")
        if not self.start < self.stop:
            raise ValueError(f"sweep needs start < stop, got [{self.start}, {self.stop}]")
        if self.points < 2:
            raise ValueError(f"sweep needs at least 2 points, got {self.points}")
        if self.variable == "theta0":
            if self.xi is None or self.eta is None:
                raise ValueError("theta0 sweep requires --xi and --eta")
            GateParams(self.xi, self.eta)
            if self.start <= 0.0 or self.stop > math.pi / 4 + 1e-9:
                raise ValueError("theta0 sweep range must lie inside (0, pi/4]")
        else:
            if self.xi is None or self.theta0 is None:
                raise ValueError("delta sweep requires --xi and --theta0")
            if self.start <= 1.0:
                raise ValueError(f"delta sweep must start above 1, got {self.start}")
            if self.stop * math.tan(self.xi) >= 1.0:
                raise ValueError(
                    "delta sweep out of range: need stop * tan(xi) < 1 so that eta < pi/4"
                )


def _sweep_spec_from_args(args: argparse.Namespace) -> SweepSpec:
    config: dict = {}
    if args.config:
        with open(_resolve_output(args.config), "rb") as fh:
            config = tomllib.load(fh)

    def pick(flag, key, default=None):
        return flag if flag is not None else config.get(key, default)

    missing = [k for k in ("variable", "start", "stop", "points") if pick(getattr(args, k), k) is None]
    if missing:
        raise ValueError(f"sweep is missing required settings: {', '.join(missing)}")
    return SweepSpec(
        variable=pick(args.variable, "variable"),
        start=float(pick(args.start, "start")),
        stop=float(pick(args.stop, "stop")),
        points=int(pick(args.points, "points")),
        mode=StepMode(pick(args.mode, "mode", StepMode.NEAREST.value)),
        xi=pick(args.xi, "xi"),
        eta=pick(args.eta, "eta"),
        theta0=pick(args.theta0, "theta0"),
        output=pick(args.output, "output"),
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _sweep_spec_from_args(args)
    spec.validate()
    grid = np.linspace(spec.start, spec.stop, spec.points)

    rows = []
    if spec.variable == "theta0":
        params = GateParams(spec.xi, spec.eta)
        for value in grid:
            rows.append(plan_record(make_plan(float(value), params, spec.mode)))
        columns = PLAN_COLUMNS
    else:
        # The swept "delta" is the concentration step tan(eta)/tan(xi) > 1;
        # eta is derived per grid point from the fixed xi.
        tan_xi = math.tan(spec.xi)
        for value in grid:
            params = GateParams(spec.xi, math.atan(float(value) * tan_xi))
            record = plan_record(make_plan(spec.theta0, params, spec.mode))
            record["f_min"] = f_min(params.step)
            rows.append(record)
        columns = PLAN_COLUMNS + ["f_min"]

    _emit_csv(columns, rows, spec.output)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    params = GateParams(args.xi, args.eta)
    mode = StepMode(args.mode)
    plan = make_plan(args.theta0, params, mode)
    record = run_monte_carlo(args.theta0, params, mode, trials=args.trials, seed=args.seed)

    sigma = math.sqrt(plan.total_prob * (1.0 - plan.total_prob) / args.trials)
    deviation = record.empirical_prob - plan.total_prob
    z_score = deviation / sigma if sigma > 0.0 else (0.0 if deviation == 0.0 else math.inf)

    _print_kv("seed", record.seed)
    _print_kv("trials", record.trials)
    _print_kv("successes", record.successes)
    _print_kv("empirical_prob", record.empirical_prob)
    _print_kv("gamma_analytic", plan.total_prob)
    _print_kv("z_score", z_score)
    _print_kv("mean_steps_on_success", record.mean_steps_on_success)

    if args.output:
        _emit_csv(SIM_COLUMNS, [run_record_row(record, plan.total_prob)], args.output)
    return 0


def _cmd_schmidt(args: argparse.Namespace) -> int:
    amps = parse_amplitudes(args.amps)
    state = schmidt_decompose(amps)
    rebuilt = reconstruct(state)
    overlap = abs(np.vdot(rebuilt, amps / np.linalg.norm(amps))) ** 2
    _print_kv("theta", state.theta)
    _print_kv("entropy", entanglement(state.theta))
    print(f"frame_a = {_fmt_matrix(state.frame_a)}")
    print(f"frame_b = {_fmt_matrix(state.frame_b)}")
    _print_kv("reconstruction_overlap", overlap)
    return 0


def _cmd_fmin(args: argparse.Namespace) -> int:
    if args.step is not None:
        value = f_min(args.step)
    elif args.xi is not None and args.eta is not None:
        value = f_min(GateParams(args.xi, args.eta).step)
    else:
        raise ValueError("fmin requires --step, or both --xi and --eta")
    _print_kv("f_min", value)
    return 0


def _cmd_multi(args: argparse.Namespace) -> int:
    params = GateParams(args.xi, args.eta)
    steps = args.steps
    if steps is None:
        steps = step_count(args.theta0, params, StepMode(args.mode))
    run = run_multipartite(args.parties, args.theta0, params, steps)
    _print_kv("parties", run.final.parties)
    _print_kv("theta0", args.theta0)
    _print_kv("T", steps)
    _print_list("thetas", run.thetas)
    _print_list("gammas", run.branch_probs)
    _print_kv("total_prob", float(np.prod(run.branch_probs)))
    print(f"c1 = {_fmt_complex(run.final.c1)}")
    print(f"c0 = {_fmt_complex(run.final.c0)}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entconc",
        description="Plan, simulate and validate iterated entanglement concentration runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_gate_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--xi", type=float, required=required, help="gate angle xi (rad), 0 < xi < eta")
        p.add_argument("--eta", type=float, required=required, help="gate angle eta (rad), xi < eta < pi/4")

    plan = sub.add_parser("plan", help="closed-form plan for one run, optionally cross-checked")
    plan.add_argument("--theta0", type=float, required=True, help="initial canonical angle (rad)")
    add_gate_flags(plan)
    plan.add_argument("--mode", choices=_MODES, default=StepMode.NEAREST.value)
    plan.add_argument("--verify", action="store_true",
                      help="cross-check against the exact simulator; nonzero exit on disagreement")
    plan.add_argument("-o", "--output", help="write the flat plan record as CSV")
    plan.set_defaults(handler=_cmd_plan)

    sweep = sub.add_parser("sweep", help="grid over theta0 or the concentration step, CSV out")
    sweep.add_argument("--config", help="TOML file with sweep settings; flags override it")
    sweep.add_argument("--variable", choices=["theta0", "delta"],
                       help="'delta' sweeps the concentration step tan(eta)/tan(xi)")
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--points", type=int)
    add_gate_flags(sweep, required=False)
    sweep.add_argument("--theta0", type=float, help="fixed theta0 for delta sweeps")
    sweep.add_argument("--mode", choices=_MODES, default=None)
    sweep.add_argument("-o", "--output", help="CSV output path (stdout when omitted)")
    sweep.set_defaults(handler=_cmd_sweep)

    simulate = sub.add_parser("simulate", help="seeded Monte Carlo estimate of the success probability")
    simulate.add_argument("--theta0", type=float, required=True)
    add_gate_flags(simulate)
    simulate.add_argument("--mode", choices=_MODES, default=StepMode.NEAREST.value)
    simulate.add_argument("--trials", type=int, default=100_000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("-o", "--output", help="append-free CSV output path for the run record")
    simulate.set_defaults(handler=_cmd_simulate)

    schmidt = sub.add_parser("schmidt", help="canonical angle, frames and entropy of four amplitudes")
    schmidt.add_argument("--amps", required=True,
                         help="four comma-separated complex amplitudes for |00>,|01>,|10>,|11>")
    schmidt.set_defaults(handler=_cmd_schmidt)

    fmin = sub.add_parser("fmin", help="worst-case fidelity for a concentration step")
    fmin.add_argument("--step", type=float, help="concentration step (>= 1)")
    add_gate_flags(fmin, required=False)
    fmin.set_defaults(handler=_cmd_fmin)

    multi = sub.add_parser("multi", help="n-party run in the two-amplitude representation")
    multi.add_argument("--parties", "-n", type=int, required=True)
    multi.add_argument("--theta0", type=float, required=True)
    add_gate_flags(multi)
    multi.add_argument("--mode", choices=_MODES, default=StepMode.NEAREST.value)
    multi.add_argument("--steps", type=int, default=None, help="override the planned step count")
    multi.set_defaults(handler=_cmd_multi)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
