"""One-factor parameter sweeps that re-solve the lot-sizing model per value."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .model import ParameterError, SystemParameters
from .solver import BoundsTooTight, EmptyFeasibleRegion, Solution, SolverConfig, solve_model1, solve_model2

__all__ = ["SWEEPABLE", "SweepSpec", "SweepRow", "default_values", "run_sweep", "sweep_table", "endpoint_change"]

SWEEPABLE = ("Sp", "Sr", "hp", "hr", "p", "q", "r", "Dp", "Dr")


def default_values(base_value: float, points: int = 10, lo: float = 0.2, hi: float = 3.0) -> list[float]:
    """Log-spaced values from ``lo`` to ``hi`` times the base value."""
    return list(base_value * np.geomspace(lo, hi, points))


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    base: SystemParameters
    model: int = 2

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ParameterError(f"cannot sweep {self.parameter!r}; choose from {SWEEPABLE}")
        if len(self.values) == 0:
            raise ParameterError("sweep needs at least one value")
        if self.model not in (1, 2):
            raise ParameterError("sweeps re-solve model 1 or 2")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for v in self.values:
            self.params_at(v)

    def params_at(self, value: float) -> SystemParameters:
        return self.base.with_(**{self.parameter: value})


@dataclass
class SweepRow:
    value: float
    solution: Solution | None
    error: str | None = None

    @property
    def cost(self):
        return None if self.solution is None else self.solution.cost.total_rate


def run_sweep(spec: SweepSpec, cfg: SolverConfig | None = None) -> list[SweepRow]:
    """Solve once per value, in input order; infeasible rows keep their error."""
    cfg = cfg or SolverConfig()
    solve = solve_model1 if spec.model == 1 else solve_model2
    rows = []
    for v in spec.values:
        try:
            rows.append(SweepRow(v, solve(spec.params_at(v), cfg)))
        except EmptyFeasibleRegion as exc:
            rows.append(SweepRow(v, None, f"infeasible: {exc}"))
        except BoundsTooTight as exc:
            rows.append(SweepRow(v, exc.solution, f"bounds: {exc}"))
    return rows


def sweep_table(rows, parameter: str, delimiter: str = ",") -> str:
    buf = io.StringIO()
    buf.write(delimiter.join((parameter, "Qp", "Qr", "m", "n", "s", "cost", "note")) + "\n")
    for row in rows:
        if row.solution is None:
            cells = (repr(row.value), "", "", "", "", "", "", row.error or "")
        else:
            d = row.solution.decision
            cells = (
                repr(row.value), str(d.Qp), str(d.Qr), str(d.m), str(d.n), repr(d.s),
                repr(row.solution.cost.total_rate), row.error or "",
            )
        buf.write(delimiter.join(cells) + "\n")
    return buf.getvalue()


def endpoint_change(rows) -> float:
    """Relative cost change from the largest to the smallest swept value.

    Negative when the cost falls as the parameter decreases.
    """
    solved = [r for r in rows if r.solution is not None]
    lo = min(solved, key=lambda r: r.value)
    hi = max(solved, key=lambda r: r.value)
    return lo.cost / hi.cost - 1.0
