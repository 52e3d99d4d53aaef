"""Command line: ``rlinv [--seed N] [--jobs N] [--tol X] [--out DIR] <command> scenario.yaml``.

Exit codes: 0 success, 2 invalid scenario, 3 empty feasible region,
4 solver failure (including an optimum on the search-box edge).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .model import DecisionVector, ParameterError, check_feasibility, inventory_cost, parallel_flow_cost
from .oracle import build_trace, random_instance, simulated_cost
from .pareto import compute_front
from .scenario import ScenarioError, load_scenario
from .sensitivity import SweepSpec, default_values, run_sweep, sweep_table
from .solver import BoundsTooTight, EmptyFeasibleRegion, solve_model1, solve_model2

EXIT_OK, EXIT_SCENARIO, EXIT_EMPTY, EXIT_SOLVER = 0, 2, 3, 4


def _write(out: Path | None, name: str, text: str):
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _breakdown_dict(c):
    return {
        "setup_rate": c.setup_rate,
        "supply_holding_rate": c.supply_holding_rate,
        "repair_holding_rate": c.repair_holding_rate,
        "total_rate": c.total_rate,
    }


def _decision(args, sc) -> DecisionVector:
    if args.from_solution:
        doc = json.loads(Path(args.from_solution).read_text())
        d = doc["decision"]
        return DecisionVector(d["Qp"], d["Qr"], d["m"], d["n"], d["s"])
    base = sc.decision
    given = {k: getattr(args, k) for k in ("Qp", "Qr", "m", "n", "s") if getattr(args, k) is not None}
    if base is None:
        if "s" not in given and sc.params.s_fixed is not None:
            given["s"] = sc.params.s_fixed
        missing = {"Qp", "Qr", "m", "n", "s"} - set(given)
        if missing:
            raise ScenarioError(f"decision incomplete, missing {sorted(missing)}")
        return DecisionVector(**given)
    return replace(base, **given) if given else base


def cmd_evaluate(args, sc, out):
    d = _decision(args, sc)
    cost = inventory_cost(sc.params, d)
    par = parallel_flow_cost(sc.params, d)
    feas = check_feasibility(sc.params, d, sc.model)
    print(f"decision  Qp={d.Qp} Qr={d.Qr} m={d.m} n={d.n} s={d.s:.4f}")
    print(f"total     {cost.total_rate:.2f}")
    print(f"  setup   {cost.setup_rate:.2f}")
    print(f"  supply  {cost.supply_holding_rate:.2f}")
    print(f"  repair  {cost.repair_holding_rate:.2f}")
    print(f"parallel  {par.total_rate:.2f}")
    print("feasible  " + ("yes" if feas.feasible else f"no {list(feas.violations)}"))
    doc = {
        "decision": {"Qp": d.Qp, "Qr": d.Qr, "m": d.m, "n": d.n, "s": d.s},
        "cost": _breakdown_dict(cost),
        "parallel_cost": _breakdown_dict(par),
        "violations": [list(v) for v in feas.violations],
    }
    _write(out, "evaluate.json", json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_solve(args, sc, out):
    solve = solve_model1 if sc.model == 1 else solve_model2
    sol = solve(sc.params, sc.solver)
    print(sol.report())
    _write(out, "solution.json", sol.to_json())
    return EXIT_OK


def cmd_pareto(args, sc, out):
    moo = sc.moo
    method = (args.method or moo.method).upper()
    K = args.grid or moo.K
    norm = args.normalization or moo.normalization
    params = sc.params.with_(s_fixed=None)
    front = compute_front(params, method, K, moo.utopia, sc.solver, norm, moo.tol_eq)
    print(front.summary())
    o = front.objectives()
    if len(o):
        print(f"f1 in [{o[:, 0].min():.2f}, {o[:, 0].max():.2f}]  f2 in [{o[:, 1].min():.2f}, {o[:, 1].max():.2f}]")
    _write(out, "front.csv", front.to_text())
    _write(out, "summary.txt", front.summary() + "\n")
    return EXIT_OK


def cmd_sweep(args, sc, out):
    spec = sc.sweep
    if args.parameter:
        values = args.values or None
        if values is None:
            values = default_values(getattr(sc.params, args.parameter))
        spec = SweepSpec(args.parameter, tuple(values), sc.params, sc.model)
    if spec is None:
        raise ScenarioError("no sweep in scenario; pass --parameter")
    rows = run_sweep(spec, sc.solver)
    text = sweep_table(rows, spec.parameter)
    for row in rows:
        if row.solution is None:
            print(f"{spec.parameter}={row.value:.4g}  {row.error}")
        else:
            d = row.solution.decision
            print(f"{spec.parameter}={row.value:.4g}  cost={row.cost:.2f}  Qp={d.Qp} Qr={d.Qr} m={d.m} n={d.n} s={d.s:.4f}")
    _write(out, "sweep.csv", text)
    return EXIT_OK


def cmd_simulate(args, sc, out):
    variant = args.variant
    analytic = inventory_cost if variant == "serial" else parallel_flow_cost
    if args.samples:
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.samples):
            params, d = random_instance(rng)
            sim = simulated_cost(build_trace(params, d, variant), params, d)
            ref = analytic(params, d).total_rate
            worst = max(worst, abs(sim - ref) / abs(ref))
        print(f"{args.samples} random instances ({variant}), worst relative residual {worst:.3e}")
        return EXIT_OK
    d = _decision(args, sc)
    trace = build_trace(sc.params, d, variant)
    sim = simulated_cost(trace, sc.params, d)
    ref = analytic(sc.params, d).total_rate
    print(f"simulated {sim:.2f}  analytic {ref:.2f}  residual {abs(sim - ref) / abs(ref):.3e}")
    if not trace.consistent:
        print(f"note: schedule dips to {trace.min_level:.2f} units (negative or partial stock)")
    _write(out, f"trace_{variant}.csv", trace.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rlinv", description="Reverse-logistics lot sizing and cost/waste fronts.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    ap.add_argument("--jobs", type=int, default=None, help="worker processes for box searches")
    ap.add_argument("--tol", type=float, default=None, help="relative tie tolerance")
    ap.add_argument("--out", type=Path, default=None, help="directory for machine-readable artifacts")
    sub = ap.add_subparsers(dest="command", required=True)

    def decision_flags(p):
        p.add_argument("--Qp", type=int)
        p.add_argument("--Qr", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--s", type=float)
        p.add_argument("--from-solution", help="solution.json written by solve")

    p = sub.add_parser("evaluate", help="cost of an explicit decision")
    p.add_argument("scenario")
    decision_flags(p)
    p = sub.add_parser("solve", help="optimal lot sizes and cycle counts")
    p.add_argument("scenario")
    p = sub.add_parser("pareto", help="inventory cost vs waste cost front")
    p.add_argument("scenario")
    p.add_argument("--method", choices=["ps", "fvc", "PS", "FVC"])
    p.add_argument("--grid", type=int)
    p.add_argument("--normalization", choices=["plain", "boundary-scaled"])
    p = sub.add_parser("sweep", help="one-factor sensitivity sweep")
    p.add_argument("scenario")
    p.add_argument("--parameter")
    p.add_argument("--values", type=float, nargs="+")
    p = sub.add_parser("simulate", help="trace one cycle and compare with the closed form")
    p.add_argument("scenario")
    p.add_argument("--variant", choices=["serial", "parallel"], default="serial")
    p.add_argument("--samples", type=int, default=0, help="check N random instances instead")
    decision_flags(p)
    return ap


COMMANDS = {
    "evaluate": cmd_evaluate,
    "solve": cmd_solve,
    "pareto": cmd_pareto,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        overrides = {}
        if args.jobs is not None:
            overrides["jobs"] = args.jobs
        if args.tol is not None:
            overrides["tol"] = args.tol
        if overrides:
            sc.solver = replace(sc.solver, **overrides)
        return COMMANDS[args.command](args, sc, args.out)
    except (ParameterError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except EmptyFeasibleRegion as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except BoundsTooTight as exc:
        print(exc.solution.report())
        print(f"solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (RuntimeError, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
