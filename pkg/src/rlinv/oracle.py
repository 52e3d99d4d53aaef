"""Piecewise-linear inventory trajectories and their integrated holding cost.

The traces are built by stepping through replenishment and dispatch events
with constant demand/return rates between them, so the holding areas come
from the stock levels themselves rather than from the closed-form cost.
Integration over the breakpoints is exact for piecewise-linear levels.

Levels can jump, so every breakpoint carries a left and a right limit.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .model import DecisionVector, SystemParameters, check_feasibility, derive

__all__ = [
    "TraceInconsistency",
    "InventoryTrace",
    "build_trace",
    "simulated_cost",
    "trace_areas",
    "refine",
    "random_instance",
]

EPS = 1e-9


class TraceInconsistency(ValueError):
    """The schedule cannot be realised without negative or partial stock."""


@dataclass(frozen=True)
class InventoryTrace:
    times: np.ndarray
    supply_left: np.ndarray
    supply_right: np.ndarray
    repair_left: np.ndarray
    repair_right: np.ndarray
    variant: str
    # False when a dispatch found fewer than Qr repairables or a level went negative
    consistent: bool = True
    min_level: float = 0.0

    @property
    def T(self) -> float:
        return float(self.times[-1])

    def to_text(self, delimiter: str = ",") -> str:
        """Delimited ``time,supply,repair`` rows; jumps appear as repeated times."""
        buf = io.StringIO()
        buf.write(delimiter.join(("time", "supply", "repair")) + "\n")
        last = len(self.times) - 1
        for k, t in enumerate(self.times):
            rows = []
            if k > 0:
                rows.append((self.supply_left[k], self.repair_left[k]))
            if k < last:
                right = (self.supply_right[k], self.repair_right[k])
                if not rows or rows[0] != right:
                    rows.append(right)
            for sup, rep in rows:
                buf.write(delimiter.join((repr(float(t)), repr(float(sup)), repr(float(rep)))) + "\n")
        return buf.getvalue()


def _events(params: SystemParameters, d: DecisionVector, variant: str):
    """Yield ``(time, supply_jump, repair_jump)`` plus per-interval rates."""
    Dp, Dr = params.Dp, params.Dr
    sch = derive(params, d)
    tau_p = d.Qp / Dp
    tau_r = d.Qr / Dr
    jumps: dict[float, list[float]] = {}

    def add(t, sup=0.0, rep=0.0):
        slot = jumps.setdefault(t, [0.0, 0.0])
        slot[0] += sup
        slot[1] += rep

    if variant == "serial":
        for i in range(d.n):
            add(i * tau_p, sup=d.Qp)
        for j in range(d.m):
            add(sch.Tp + j * tau_r, sup=d.Qr, rep=-d.Qr)
        add(sch.T)

        def rates(t):
            if t < sch.Tp:
                return -Dp, sch.R1
            return -Dr, sch.R2

        start_repair = 0.0
        clear_at = None
    elif variant == "parallel":
        # both streams run concurrently inside the procurement phase; the
        # repair depot opens with the primary-market returns of one phase
        # and ships m+1 batches, the last one when the repaired stream ends
        R = sch.R1 + sch.R2
        for i in range(d.n):
            add(i * tau_p, sup=d.Qp)
        for j in range(d.m):
            add(j * tau_r, sup=d.Qr)
        for j in range(d.m + 1):
            add(j * tau_r, rep=-d.Qr)
        add(sch.Tp)
        add(sch.T)

        def rates(t):
            sup = (-Dp if t < sch.Tp else 0.0) + (-Dr if t < sch.Tr else 0.0)
            return sup, (R if t < sch.Tp else 0.0)

        start_repair = sch.R1 * sch.Tp
        # the accounting window idles after the procurement phase
        clear_at = sch.Tp
    else:
        raise ValueError(f"unknown flow variant {variant!r}")
    return jumps, rates, start_repair, clear_at, sch


def build_trace(
    params: SystemParameters,
    d: DecisionVector,
    variant: str = "serial",
    model: int | None = None,
    strict: bool = False,
) -> InventoryTrace:
    """Simulate one cycle of stock levels at both depots.

    ``model`` (1, 2 or 3) checks the decision against that model's
    constraints first.  With ``strict`` a dispatch that finds fewer than
    ``Qr`` repairables, or any negative level, raises
    :class:`TraceInconsistency`; otherwise the trace is returned flagged.
    """
    if model is not None:
        rep = check_feasibility(params, d, model)
        if not rep.feasible:
            raise TraceInconsistency(f"infeasible decision: {rep.violations}")
    jumps, rates, start_repair, clear_at, sch = _events(params, d, variant)

    times = np.array(sorted(jumps))
    # merge event times that differ only by rounding
    keep = np.concatenate(([True], np.diff(times) > EPS * max(1.0, sch.T)))
    merged: list[float] = []
    merged_jumps: list[list[float]] = []
    for t, k in zip(times, keep):
        if k:
            merged.append(float(t))
            merged_jumps.append(list(jumps[t]))
        else:
            merged_jumps[-1][0] += jumps[t][0]
            merged_jumps[-1][1] += jumps[t][1]
    merged[-1] = sch.T
    times = np.array(merged)

    K = len(times)
    s_left = np.zeros(K)
    s_right = np.zeros(K)
    r_left = np.zeros(K)
    r_right = np.zeros(K)
    sup, rep = 0.0, start_repair
    consistent = True
    for k in range(K):
        s_left[k], r_left[k] = sup, rep
        dsup, drep = merged_jumps[k] if k < K - 1 else (0.0, 0.0)
        if drep < 0 and rep + drep < -EPS * max(1.0, abs(rep)):
            consistent = False
        sup += dsup
        rep += drep
        if clear_at is not None and abs(times[k] - clear_at) <= EPS * max(1.0, sch.T):
            rep = 0.0
        s_right[k], r_right[k] = sup, rep
        if k < K - 1:
            dt = times[k + 1] - times[k]
            # midpoint lookup: event times can sit an ulp off the phase ends
            rs, rr = rates(0.5 * (times[k] + times[k + 1]))
            sup += rs * dt
            rep += rr * dt
            # demand drains the depot exactly; clear rounding residue
            if abs(sup) < EPS * max(1.0, d.Qp, d.Qr):
                sup = 0.0
    lo = float(min(s_left.min(), s_right.min(), r_left.min(), r_right.min()))
    if lo < -EPS * max(1.0, d.Qp, d.Qr):
        consistent = False
    if strict and not consistent:
        raise TraceInconsistency(
            f"schedule needs negative or partial stock (lowest level {lo:.6g})"
        )
    return InventoryTrace(times, s_left, s_right, r_left, r_right, variant, consistent, lo)


def trace_areas(trace: InventoryTrace) -> tuple[float, float]:
    """Exact areas under the supply and repair curves (trapezoid per segment)."""
    dt = np.diff(trace.times)
    supply = float(np.sum((trace.supply_right[:-1] + trace.supply_left[1:]) / 2 * dt))
    repair = float(np.sum((trace.repair_right[:-1] + trace.repair_left[1:]) / 2 * dt))
    return supply, repair


def simulated_cost(trace: InventoryTrace, params: SystemParameters, d: DecisionVector) -> float:
    """Average cost rate over the traced cycle."""
    supply, repair = trace_areas(trace)
    setup = d.m * params.Sr + d.n * params.Sp
    return (setup + params.hp * supply + params.hr * repair) / trace.T


def refine(trace: InventoryTrace, k: int) -> InventoryTrace:
    """Split every segment into ``k`` pieces; areas must not change."""
    if k < 1:
        raise ValueError("k must be >= 1")
    t, sl, sr, rl, rr = [trace.times[:1]], [trace.supply_left[:1]], [trace.supply_right[:1]], [trace.repair_left[:1]], [trace.repair_right[:1]]
    frac = np.arange(1, k + 1) / k
    for i in range(len(trace.times) - 1):
        t0, t1 = trace.times[i], trace.times[i + 1]
        ts = t0 + (t1 - t0) * frac
        ts[-1] = t1
        s_lin = trace.supply_right[i] + (trace.supply_left[i + 1] - trace.supply_right[i]) * frac
        r_lin = trace.repair_right[i] + (trace.repair_left[i + 1] - trace.repair_right[i]) * frac
        s_r = s_lin.copy()
        r_r = r_lin.copy()
        s_r[-1] = trace.supply_right[i + 1]
        r_r[-1] = trace.repair_right[i + 1]
        t.append(ts)
        sl.append(s_lin)
        sr.append(s_r)
        rl.append(r_lin)
        rr.append(r_r)
    return InventoryTrace(
        np.concatenate(t), np.concatenate(sl), np.concatenate(sr),
        np.concatenate(rl), np.concatenate(rr),
        trace.variant, trace.consistent, trace.min_level,
    )


def random_instance(rng: np.random.Generator, variable_recovery: bool = True):
    """Random valid ``(params, decision)`` with ``Tr <= Tp`` and ``Dr <= R1 + R2``."""
    while True:
        Dp = float(rng.uniform(10, 3000))
        Dr = float(rng.uniform(10, 3000))
        p, q, r = (float(x) for x in rng.uniform(0.05, 1.0, 3))
        hp, hr = (float(x) for x in rng.uniform(0.1, 20, 2))
        Sp, Sr = (float(x) for x in rng.uniform(1, 3000, 2))
        params = SystemParameters(Dp, Dr, p, q, r, hp, hr, Sp, Sr, cw=float(rng.uniform(0, 5)))
        gap = Dr - params.R1
        s_lo = 0.0 if gap <= 0 else gap / (r * Dr)
        if s_lo > 1:
            continue
        s = float(rng.uniform(s_lo, 1.0)) if variable_recovery else float(rng.uniform(0, 1))
        m, n = (int(x) for x in rng.integers(1, 12, 2))
        Qr = int(rng.integers(1, 3 * int(Dr) + 2))
        # smallest Qp with n*Qp/Dp >= m*Qr/Dr, plus slack
        qp_lo = max(1, int(np.ceil(m * Qr * Dp / (n * Dr))))
        Qp = qp_lo + int(rng.integers(0, qp_lo + 1))
        d = DecisionVector(Qp, Qr, m, n, s)
        if check_feasibility(params, d, 2 if variable_recovery else 1).feasible:
            return params, d
