"""Reverse-logistics inventory model: parameters, decisions and cost rates.

A supply depot serves a primary market (new items, demand ``Dp``) and a
secondary market (repaired items, demand ``Dr``).  Over one cycle of length
``T = Tp + Tr`` the depot first runs ``n`` procurement batches of ``Qp`` new
items, then ``m`` batches of ``Qr`` repaired items shipped from the repair
depot.  Returns flow into the repair depot at ``R1 = p*q*Dp`` (primary market)
and ``R2 = s*r*Dr`` (secondary market).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "ParameterError",
    "SystemParameters",
    "DecisionVector",
    "DerivedSchedule",
    "CostBreakdown",
    "FeasibilityReport",
    "derive",
    "inventory_cost",
    "parallel_flow_cost",
    "waste_cost",
    "area_decomposition",
    "check_feasibility",
    "min_recovery",
    "cost_terms",
    "parallel_cost_terms",
]

_FEAS_RTOL = 1e-9


class ParameterError(ValueError):
    """Raised when parameters or a decision violate their invariants."""


@dataclass(frozen=True)
class SystemParameters:
    """Market, return and cost data of the two-depot system.

    Rates are per unit time; ``Sp``/``Sr`` are per setup and ``cw`` per
    wasted unit.  ``s_fixed`` is set only when the recovery proportion is
    a given (single-objective model with fixed ``s``).
    """

    Dp: float
    Dr: float
    p: float
    q: float
    r: float
    hp: float
    hr: float
    Sp: float
    Sr: float
    cw: float = 0.0
    s_fixed: float | None = None

    def __post_init__(self):
        if not (self.Dp > 0 and self.Dr > 0):
            raise ParameterError("demand rates Dp and Dr must be positive")
        if not 0 < self.p <= 1:
            raise ParameterError("p must lie in (0, 1]")
        for name in ("q", "r"):
            if not 0 <= getattr(self, name) <= 1:
                raise ParameterError(f"{name} must lie in [0, 1]")
        if self.s_fixed is not None and not 0 <= self.s_fixed <= 1:
            raise ParameterError("s_fixed must lie in [0, 1]")
        for name in ("hp", "hr", "Sp", "Sr", "cw"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be nonnegative")

    @property
    def R1(self) -> float:
        """Accepted returns from the primary market."""
        return self.p * self.q * self.Dp

    def R2(self, s):
        return s * self.r * self.Dr

    def with_(self, **changes) -> "SystemParameters":
        return replace(self, **changes)

    def require_variable_recovery(self):
        # s is unidentifiable when nothing returns from the secondary market
        if self.r * self.Dr <= 0:
            raise ParameterError(
                "r*Dr must be positive when the recovery proportion is a decision"
            )


@dataclass(frozen=True)
class DecisionVector:
    Qp: int
    Qr: int
    m: int
    n: int
    s: float

    def __post_init__(self):
        for name in ("Qp", "Qr", "m", "n"):
            v = getattr(self, name)
            if isinstance(v, (bool, np.bool_)) or int(v) != v:
                raise ParameterError(f"{name} must be an integer, got {v!r}")
            if v < 1:
                raise ParameterError(f"{name} must be >= 1, got {v}")
            object.__setattr__(self, name, int(v))
        if not 0 <= self.s <= 1:
            raise ParameterError(f"s must lie in [0, 1], got {self.s}")
        object.__setattr__(self, "s", float(self.s))

    def astuple(self):
        return (self.Qp, self.Qr, self.m, self.n, self.s)


@dataclass(frozen=True)
class DerivedSchedule:
    Tp: float
    Tr: float
    T: float
    R1: float
    R2: float


@dataclass(frozen=True)
class CostBreakdown:
    setup_rate: float
    supply_holding_rate: float
    repair_holding_rate: float
    total_rate: float


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.feasible


def derive(params: SystemParameters, d: DecisionVector) -> DerivedSchedule:
    Tp = d.n * d.Qp / params.Dp
    Tr = d.m * d.Qr / params.Dr
    return DerivedSchedule(Tp=Tp, Tr=Tr, T=Tp + Tr, R1=params.R1, R2=params.R2(d.s))


def cost_terms(params: SystemParameters, Qp, Qr, m, n, s):
    """Cycle totals ``(setup, supply_area, repair_area, T)``; broadcasts.

    Dividing ``setup + hp*supply_area + hr*repair_area`` by ``T`` gives the
    serial-flow cost rate.  Works elementwise on numpy arrays.
    """
    Dp, Dr = params.Dp, params.Dr
    Tp = n * Qp / Dp
    Tr = m * Qr / Dr
    R1 = params.R1
    R2 = s * params.r * Dr
    short = 1.0 - R2 / Dr
    setup = m * params.Sr + n * params.Sp
    supply = Qp * Tp / 2 + Qr * Tr / 2
    repair = (
        R1 * Tp**2 / 2
        + R2 * Tr * Qr / (2 * Dr)
        + (m - 1) / 2 * Tr * Qr * short
        + Tr * (Tp * R1 - Qr - (m - 1) * short * Qr)
    )
    return setup, supply, repair, Tp + Tr


def parallel_cost_terms(params: SystemParameters, Qp, Qr, m, n, s):
    """As :func:`cost_terms` for the parallel-flow layout."""
    Dp, Dr = params.Dp, params.Dr
    Tp = n * Qp / Dp
    Tr = m * Qr / Dr
    R1 = params.R1
    R = R1 + s * params.r * Dr
    setup = m * params.Sr + n * params.Sp
    supply = Qp * Tp / 2 + Qr * Tr / 2
    gap = Tp - Tr
    repair = (
        Tr**2 * R / (2 * m)
        + (m - 1) / 2 * Tr * Qr * (R / Dr - 1)
        + gap**2 * R / 2
        + gap * (Tr * R + R1 * Tp - (m + 1) * Qr)
        + (R1 * Tp - Qr) * Tr
    )
    return setup, supply, repair, Tp + Tr


def _breakdown(params, terms) -> CostBreakdown:
    setup, supply, repair, T = terms
    a = setup / T
    b = params.hp * supply / T
    c = params.hr * repair / T
    return CostBreakdown(float(a), float(b), float(c), float(a + b + c))


def inventory_cost(params: SystemParameters, d: DecisionVector) -> CostBreakdown:
    """Serial-flow inventory cost rate of decision ``d``."""
    return _breakdown(params, cost_terms(params, d.Qp, d.Qr, d.m, d.n, d.s))


def parallel_flow_cost(params: SystemParameters, d: DecisionVector) -> CostBreakdown:
    """Cost rate when new and repaired items flow through the depot in parallel."""
    return _breakdown(params, parallel_cost_terms(params, d.Qp, d.Qr, d.m, d.n, d.s))


def waste_cost(params: SystemParameters, s) -> float:
    """Disposal cost rate of rejected returns at recovery proportion ``s``."""
    s_arr = np.asarray(s, dtype=float)
    if np.any((s_arr < 0) | (s_arr > 1)):
        raise ParameterError(f"s must lie in [0, 1], got {s}")
    val = params.cw * ((1 - params.q) * params.p * params.Dp + (1 - s_arr) * params.r * params.Dr)
    return float(val) if val.ndim == 0 else val


def area_decomposition(params: SystemParameters, d: DecisionVector) -> list[tuple[str, float]]:
    """Geometric holding areas of one cycle.

    Returns the six elementary areas followed by the weighted ``supply`` and
    ``repair`` totals.  Repair-side weights: one XYF ramp, ``m`` ABC
    triangles, ``m(m-1)/2`` BCDE rectangles (cycle ``j`` sits ``m-j`` steps
    above the final level) and ``m`` DEGF base rectangles.
    """
    Dp, Dr, Qp, Qr, m, n = params.Dp, params.Dr, d.Qp, d.Qr, d.m, d.n
    sch = derive(params, d)
    R1, R2 = sch.R1, sch.R2
    short = 1 - R2 / Dr
    klm = Qp**2 / (2 * Dp)
    nos = Qr**2 / (2 * Dr)
    xyf = R1 * sch.Tp**2 / 2
    abc = Qr**2 * R2 / (2 * Dr**2)
    bcde = Qr**2 / Dr * short
    degf = Qr / Dr * (sch.Tp * R1 - (Qr + (m - 1) * Qr * short))
    supply = n * klm + m * nos
    repair = xyf + m * abc + m * (m - 1) / 2 * bcde + m * degf
    return [
        ("KLM", klm),
        ("NOS", nos),
        ("XYF", xyf),
        ("ABC", abc),
        ("BCDE", bcde),
        ("DEGF", degf),
        ("supply", supply),
        ("repair", repair),
    ]


def min_recovery(params: SystemParameters) -> float | None:
    """Smallest ``s`` with ``R1 + R2 >= Dr``; ``None`` when even ``s=1`` fails."""
    gap = params.Dr - params.R1
    if gap <= 0:
        return 0.0
    cap = params.r * params.Dr
    if cap <= 0 or gap > cap * (1 + _FEAS_RTOL):
        return None
    return min(1.0, gap / cap)


def check_feasibility(
    params: SystemParameters,
    d: DecisionVector,
    model: int,
    min_repair_time: float | None = None,
) -> FeasibilityReport:
    """Constraint check for model 1 (fixed ``s``) or models 2/3 (variable ``s``).

    ``min_repair_time`` optionally enforces ``Tr >= min_repair_time``.
    """
    if model not in (1, 2, 3):
        raise ValueError(f"model must be 1, 2 or 3, got {model}")
    sch = derive(params, d)
    out = []
    if sch.Tr > sch.Tp * (1 + _FEAS_RTOL):
        out.append(("Tr<=Tp", sch.Tr - sch.Tp))
    if min_repair_time is not None and sch.Tr < min_repair_time * (1 - _FEAS_RTOL):
        out.append(("Tr>=min_repair_time", min_repair_time - sch.Tr))
    if model == 1 and params.s_fixed is not None and not math.isclose(d.s, params.s_fixed):
        out.append(("s=s_fixed", abs(d.s - params.s_fixed)))
    if model in (2, 3):
        supply = sch.R1 + sch.R2
        if params.Dr > supply * (1 + _FEAS_RTOL):
            out.append(("Dr<=R1+R2", params.Dr - supply))
        if not 0 <= d.s <= 1:
            out.append(("0<=s<=1", max(-d.s, d.s - 1)))
    return FeasibilityReport(tuple(out))
