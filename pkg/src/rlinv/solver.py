"""Global search over batch sizes and cycle counts.

Every ``(m, n)`` pair in the box is visited.  For fixed ``(m, n, s)`` and a
fixed repair batch ``Qr`` the cost is a quadratic in ``Qp`` divided by a
positive linear function of ``Qp``, hence unimodal in ``Qp``; the integer
optimum is the floor or ceiling of the stationary point, clipped to the
feasible range.  All ``Qr`` in range are scanned, so each ``(m, n)``
subproblem is solved exactly.

For a fixed integer decision the cost is affine in the recovery proportion
``s``, so the optimal cost over the box is a concave function of ``s`` and
its minimum over ``[s_min, 1]`` sits at an endpoint.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import (
    CostBreakdown,
    DecisionVector,
    DerivedSchedule,
    FeasibilityReport,
    ParameterError,
    SystemParameters,
    check_feasibility,
    cost_terms,
    derive,
    inventory_cost,
    min_recovery,
)

__all__ = [
    "EmptyFeasibleRegion",
    "BoundsTooTight",
    "SolverConfig",
    "Solution",
    "optimize_inner",
    "scan_boxes",
    "best_at",
    "solve_model1",
    "solve_model2",
    "cost_profile",
]


class EmptyFeasibleRegion(RuntimeError):
    pass


class BoundsTooTight(RuntimeError):
    """The optimum sits on an upper edge of the search box."""

    def __init__(self, msg, solution):
        super().__init__(msg)
        self.solution = solution


@dataclass(frozen=True)
class SolverConfig:
    """Search box and tolerances.

    ``min_repair_time`` is a lower bound on the repaired-items phase ``Tr``
    (one time unit by default, which pins the cycle to the planning unit);
    ``None`` disables it.
    """

    m_max: int = 64
    n_max: int = 64
    q_max: int | None = None
    s_grid: int = 101
    tol: float = 1e-8
    min_repair_time: float | None = 1.0
    jobs: int = 1

    def __post_init__(self):
        if self.m_max < 1 or self.n_max < 1:
            raise ParameterError("m_max and n_max must be >= 1")
        if self.q_max is not None and self.q_max < 1:
            raise ParameterError("q_max must be >= 1")
        if self.s_grid < 2:
            raise ParameterError("s_grid must be >= 2")
        if not self.tol > 0:
            raise ParameterError("tol must be positive")
        if self.min_repair_time is not None and self.min_repair_time < 0:
            raise ParameterError("min_repair_time must be nonnegative")
        if self.jobs < 1:
            raise ParameterError("jobs must be >= 1")

    def batch_bound(self, params: SystemParameters) -> int:
        if self.q_max is not None:
            return int(self.q_max)
        return int(math.ceil(4 * max(params.Dp, params.Dr)))


@dataclass
class Solution:
    decision: DecisionVector
    cost: CostBreakdown
    schedule: DerivedSchedule
    feasibility: FeasibilityReport
    subproblems: int
    wall_time: float
    # per-(m, n) optimum: columns m, n, Qp, Qr, s, cost
    table: np.ndarray = field(repr=False, default=None)
    model: int = 1

    def to_dict(self) -> dict:
        d = self.decision
        return {
            "model": self.model,
            "decision": {"Qp": d.Qp, "Qr": d.Qr, "m": d.m, "n": d.n, "s": d.s},
            "cost": {
                "setup_rate": self.cost.setup_rate,
                "supply_holding_rate": self.cost.supply_holding_rate,
                "repair_holding_rate": self.cost.repair_holding_rate,
                "total_rate": self.cost.total_rate,
            },
            "schedule": {
                "Tp": self.schedule.Tp,
                "Tr": self.schedule.Tr,
                "T": self.schedule.T,
                "R1": self.schedule.R1,
                "R2": self.schedule.R2,
            },
            "certificate_size": 0 if self.table is None else int(len(self.table)),
            "subproblems": self.subproblems,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def report(self) -> str:
        d, c, t = self.decision, self.cost, self.schedule
        return "\n".join([
            f"Model {self.model} optimum",
            f"  Qp={d.Qp}  Qr={d.Qr}  m={d.m}  n={d.n}  s={d.s:.4f}",
            f"  cost         {c.total_rate:.2f}",
            f"    setup      {c.setup_rate:.2f}",
            f"    supply     {c.supply_holding_rate:.2f}",
            f"    repair     {c.repair_holding_rate:.2f}",
            f"  Tp={t.Tp:.4f}  Tr={t.Tr:.4f}  T={t.T:.4f}",
            f"  (m, n) subproblems {self.subproblems}, {self.wall_time:.2f} s",
        ])


def _qr_range(params, m, n, qmax, tr_min):
    lo = 1
    if tr_min:
        lo = max(lo, math.ceil(tr_min * params.Dr / m * (1 - 1e-12)))
    # Tr <= Tp with Qp <= qmax
    hi = min(qmax, math.floor(n * qmax * params.Dr / (m * params.Dp) * (1 + 1e-12)))
    return lo, hi


def _inner_arrays(params: SystemParameters, m: int, n: int, s: float, qmax: int, tr_min):
    """Best ``Qp`` for every feasible ``Qr``; returns ``(Qp, Qr, cost)`` arrays."""
    lo, hi = _qr_range(params, m, n, qmax, tr_min)
    if lo > hi:
        return None
    Dp, Dr = params.Dp, params.Dr
    b = np.arange(lo, hi + 1, dtype=float)
    Tr = m * b / Dr
    a_lo = np.maximum(1.0, np.ceil(m * b * Dp / (n * Dr) * (1 - 1e-12)))
    a_hi = float(qmax)
    ok = a_lo <= a_hi
    if not ok.any():
        return None
    b, Tr, a_lo = b[ok], Tr[ok], a_lo[ok]

    R1 = params.R1
    R2 = s * params.r * Dr
    short = 1 - R2 / Dr
    delta = n / Dp
    alpha = params.hp * delta / 2 + params.hr * R1 * delta**2 / 2
    beta = params.hr * Tr * R1 * delta
    gamma = (
        m * params.Sr + n * params.Sp
        + params.hp * b * Tr / 2
        + params.hr * Tr * b * (R2 / (2 * Dr) - 1 - (m - 1) * short / 2)
    )
    eps = Tr
    # stationary point of (alpha a^2 + beta a + gamma) / (delta a + eps)
    if alpha > 0:
        disc = alpha**2 * eps**2 - alpha * delta * (beta * eps - delta * gamma)
        root = (-alpha * eps + np.sqrt(np.maximum(disc, 0.0))) / (alpha * delta)
        astar = np.where(disc > 0, root, a_lo)
    else:
        astar = np.where(beta * eps - delta * gamma > 0, a_lo, a_hi)
    astar = np.clip(astar, a_lo, a_hi)
    lo_c = np.floor(astar)
    hi_c = np.minimum(lo_c + 1, a_hi)
    lo_c = np.maximum(lo_c, a_lo)

    def f(a):
        return ((alpha * a + beta) * a + gamma) / (delta * a + eps)

    c_lo, c_hi = f(lo_c), f(hi_c)
    take_hi = c_hi < c_lo - 1e-12 * np.abs(c_lo)
    qp = np.where(take_hi, hi_c, lo_c)
    best = np.where(take_hi, c_hi, c_lo)
    return qp.astype(np.int64), b.astype(np.int64), best


def _pick(qp, qr, cost, tol):
    cmin = cost.min()
    idx = np.flatnonzero(cost <= cmin + tol * abs(cmin))
    order = np.lexsort((qr[idx], qp[idx]))
    i = idx[order[0]]
    return int(qp[i]), int(qr[i]), float(cost[i])


def optimize_inner(params: SystemParameters, m: int, n: int, s: float, cfg: SolverConfig | None = None):
    """Integer-optimal ``(Qp, Qr, cost)`` for fixed ``(m, n, s)``."""
    cfg = cfg or SolverConfig()
    res = _inner_arrays(params, m, n, s, cfg.batch_bound(params), cfg.min_repair_time)
    if res is None:
        raise EmptyFeasibleRegion(f"no feasible (Qp, Qr) for m={m}, n={n}")
    return _pick(*res, cfg.tol)


def _scan_row(args):
    params, m, n_max, s, qmax, tr_min, tol = args
    rows = []
    for n in range(1, n_max + 1):
        res = _inner_arrays(params, m, n, s, qmax, tr_min)
        if res is None:
            continue
        qp, qr, c = _pick(*res, tol)
        rows.append((m, n, qp, qr, s, c))
    return rows


def scan_boxes(params: SystemParameters, s: float, cfg: SolverConfig) -> np.ndarray:
    """Per-``(m, n)`` optimum at recovery ``s``; columns m, n, Qp, Qr, s, cost."""
    qmax = cfg.batch_bound(params)
    work = [(params, m, cfg.n_max, s, qmax, cfg.min_repair_time, cfg.tol) for m in range(1, cfg.m_max + 1)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            parts = list(ex.map(_scan_row, work))
    else:
        parts = [_scan_row(w) for w in work]
    rows = [r for part in parts for r in part]
    if not rows:
        return np.empty((0, 6))
    return np.array(rows, dtype=float)


def _best_row(table: np.ndarray, tol: float) -> np.ndarray:
    cost = table[:, 5]
    cmin = cost.min()
    idx = np.flatnonzero(cost <= cmin + tol * abs(cmin))
    # tie-break: smallest (n, m, Qp, Qr, s)
    sub = table[idx]
    order = np.lexsort((sub[:, 4], sub[:, 3], sub[:, 2], sub[:, 0], sub[:, 1]))
    return sub[order[0]]


def _row_decision(row) -> DecisionVector:
    m, n, qp, qr, s, _ = row
    return DecisionVector(int(qp), int(qr), int(m), int(n), float(s))


def best_at(params: SystemParameters, s: float, cfg: SolverConfig):
    """Cheapest decision at fixed ``s`` and the per-box table behind it."""
    table = scan_boxes(params, s, cfg)
    if len(table) == 0:
        raise EmptyFeasibleRegion("no decision in the search box satisfies the constraints")
    return _row_decision(_best_row(table, cfg.tol)), table


def _finish(params, decision, table, model, cfg, t0, nsub) -> Solution:
    sol = Solution(
        decision=decision,
        cost=inventory_cost(params, decision),
        schedule=derive(params, decision),
        feasibility=check_feasibility(params, decision, model, cfg.min_repair_time),
        subproblems=nsub,
        wall_time=time.perf_counter() - t0,
        table=table,
        model=model,
    )
    qmax = cfg.batch_bound(params)
    d = decision
    edges = [name for name, hit in (
        ("m_max", d.m >= cfg.m_max), ("n_max", d.n >= cfg.n_max),
        ("q_max", d.Qp >= qmax or d.Qr >= qmax),
    ) if hit]
    if edges:
        raise BoundsTooTight(f"optimum on box edge ({', '.join(edges)}); enlarge the bounds", sol)
    return sol


def solve_model1(params: SystemParameters, cfg: SolverConfig | None = None) -> Solution:
    """Minimise the cost rate at the fixed recovery proportion ``params.s_fixed``."""
    cfg = cfg or SolverConfig()
    if params.s_fixed is None:
        raise ParameterError("model 1 needs s_fixed")
    t0 = time.perf_counter()
    decision, table = best_at(params, params.s_fixed, cfg)
    return _finish(params, decision, table, 1, cfg, t0, len(table))


def solve_model2(params: SystemParameters, cfg: SolverConfig | None = None) -> Solution:
    """Minimise the cost rate with the recovery proportion as a decision."""
    cfg = cfg or SolverConfig()
    if params.s_fixed is not None:
        raise ParameterError("model 2 treats s as a decision; drop s_fixed")
    params.require_variable_recovery()
    s_min = min_recovery(params)
    if s_min is None:
        raise EmptyFeasibleRegion("q*p*Dp + r*Dr < Dr: demand Dr cannot be covered even at s=1")
    t0 = time.perf_counter()
    tables = []
    for s in sorted({s_min, 1.0}):
        tables.append(scan_boxes(params, s, cfg))
    table = np.vstack(tables)
    if len(table) == 0:
        raise EmptyFeasibleRegion("no decision in the search box satisfies the constraints")
    decision = _row_decision(_best_row(table, cfg.tol))
    return _finish(params, decision, table, 2, cfg, t0, len(table))


def cost_profile(params: SystemParameters, cfg: SolverConfig | None = None, s_values=None):
    """Optimal cost over the box at each ``s`` (``cfg.s_grid`` points on ``[s_min, 1]``).

    Returns ``(s_values, costs, decisions)``.
    """
    cfg = cfg or SolverConfig()
    if s_values is None:
        s_min = min_recovery(params)
        if s_min is None:
            raise EmptyFeasibleRegion("demand Dr cannot be covered even at s=1")
        s_values = np.linspace(s_min, 1.0, cfg.s_grid)
    costs, decisions = [], []
    for s in s_values:
        d, _ = best_at(params, float(s), cfg)
        decisions.append(d)
        costs.append(inventory_cost(params, d).total_rate)
    return np.asarray(s_values, dtype=float), np.array(costs), decisions
