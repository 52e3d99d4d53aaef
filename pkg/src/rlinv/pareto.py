"""Bi-objective inventory cost vs. waste cost: scalarizations and fronts.

For any fixed integer decision ``(Qp, Qr, m, n)`` the inventory cost is
affine and nondecreasing in the recovery proportion ``s`` while the waste
cost is affine and decreasing.  The smallest attainable inventory cost at a
given ``s`` is therefore the lower envelope of finitely many lines, a
concave piecewise-affine function :class:`CostEnvelope`.  Every scalarized
subproblem below is solved exactly on that envelope, and the envelope itself
is assembled from exact box searches at a handful of ``s`` values.
"""
from __future__ import annotations

import io
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .model import (
    DecisionVector,
    ParameterError,
    SystemParameters,
    inventory_cost,
    min_recovery,
    waste_cost,
)
from .solver import EmptyFeasibleRegion, SolverConfig, best_at

__all__ = [
    "CouplingUnattainable",
    "WeightVector",
    "ParetoPoint",
    "ParetoFront",
    "CostEnvelope",
    "cost_envelope",
    "individual_minima",
    "generate_weight_grid",
    "locate_reference",
    "solve_fvc",
    "solve_ps",
    "weighted_sum_reference",
    "compute_front",
    "dominance_filter",
    "dominates",
    "REFERENCE_UTOPIA",
]

REFERENCE_UTOPIA = (-70.0, -1000.0)


class CouplingUnattainable(RuntimeError):
    """No feasible point equalises the weighted objectives."""


@dataclass(frozen=True)
class WeightVector:
    w1: float
    w2: float

    def __post_init__(self):
        if not (self.w1 > 0 and self.w2 > 0):
            raise ParameterError("weights must be positive")
        if abs(self.w1 + self.w2 - 1) > 1e-12:
            raise ParameterError("weights must sum to one")

    @classmethod
    def from_first(cls, w1: float) -> "WeightVector":
        return cls(w1, 1.0 - w1)

    def __getitem__(self, i):
        return (self.w1, self.w2)[i]


@dataclass(frozen=True)
class ParetoPoint:
    decision: DecisionVector
    f1: float
    f2: float
    weight: WeightVector | None = None
    method: str = ""
    alpha: float | None = None
    dominated: bool = False
    k: int | None = None
    # FVC only: right-hand side of the cut, in weighted objective units
    cut: float | None = None

    @property
    def objectives(self):
        return (self.f1, self.f2)


@dataclass
class ParetoFront:
    points: list
    dominated: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def objectives(self) -> np.ndarray:
        return np.array([p.objectives for p in self.points]).reshape(-1, 2)

    def to_text(self, delimiter: str = ",") -> str:
        cols = ("w1", "method", "Qp", "Qr", "m", "n", "s", "f1", "f2", "alpha", "dominated")
        buf = io.StringIO()
        buf.write(delimiter.join(cols) + "\n")
        for p in list(self.points) + list(self.dominated):
            d = p.decision
            row = (
                "" if p.weight is None else repr(p.weight.w1),
                p.method, str(d.Qp), str(d.Qr), str(d.m), str(d.n), repr(d.s),
                repr(p.f1), repr(p.f2), "" if p.alpha is None else repr(p.alpha),
                str(int(p.dominated)),
            )
            buf.write(delimiter.join(row) + "\n")
        return buf.getvalue()

    def summary(self) -> str:
        pv = self.provenance
        head = ("method", "grid points", "subproblems", "seconds", "Pareto points", "non-Pareto points")
        vals = (
            pv.get("method", ""), pv.get("grid", ""), pv.get("subproblems", ""),
            f"{pv.get('seconds', 0.0):.2f}", len(self.points), len(self.dominated),
        )
        return "\n".join((" | ".join(head), " | ".join(str(v) for v in vals)))


def dominates(a, b, tol: float = 1e-9) -> bool:
    """``a`` is no worse than ``b`` in both objectives and better in one."""
    return (
        a[0] <= b[0] + tol and a[1] <= b[1] + tol
        and (a[0] < b[0] - tol or a[1] < b[1] - tol)
    )


def dominance_filter(points, tol: float = 1e-9, block: int = 512) -> ParetoFront:
    """Split ``points`` into nondominated (sorted by f1, then f2) and dominated."""
    points = list(points)
    if not points:
        return ParetoFront([], [])
    F = np.array([p.objectives for p in points], dtype=float)
    N = len(F)
    dom = np.zeros(N, dtype=bool)
    for start in range(0, N, block):
        b = F[start:start + block]
        le = (F[:, None, 0] <= b[None, :, 0] + tol) & (F[:, None, 1] <= b[None, :, 1] + tol)
        lt = (F[:, None, 0] < b[None, :, 0] - tol) | (F[:, None, 1] < b[None, :, 1] - tol)
        dom[start:start + block] = (le & lt).any(axis=0)
    keep = np.flatnonzero(~dom)
    keep = keep[np.lexsort((F[keep, 1], F[keep, 0]))]
    front = [replace(points[i], dominated=False) for i in keep]
    dropped = [replace(points[i], dominated=True) for i in np.flatnonzero(dom)]
    return ParetoFront(front, dropped)


@dataclass(frozen=True)
class _Line:
    decision: DecisionVector
    a: float
    b: float

    def __call__(self, s):
        return self.a + self.b * s


def _line_for(params: SystemParameters, d: DecisionVector) -> _Line:
    c0 = inventory_cost(params, replace(d, s=0.0)).total_rate
    c1 = inventory_cost(params, replace(d, s=1.0)).total_rate
    return _Line(replace(d, s=0.0), c0, c1 - c0)


@dataclass
class CostEnvelope:
    """Lowest inventory cost over the search box as a function of ``s``."""

    params: SystemParameters
    s_min: float
    pieces: list  # (s_lo, s_hi, _Line)
    evaluations: int = 0

    def _piece(self, s):
        for lo, hi, line in self.pieces:
            if s <= hi + 1e-12:
                return lo, hi, line
        return self.pieces[-1]

    def value(self, s) -> float:
        return float(self._piece(s)[2](s))

    def decision(self, s) -> DecisionVector:
        s = float(min(max(s, self.s_min), 1.0))
        # round-off from line intersections
        if abs(s - self.s_min) < 1e-12:
            s = self.s_min
        elif abs(1.0 - s) < 1e-12:
            s = 1.0
        return replace(self._piece(s)[2].decision, s=s)

    @property
    def breakpoints(self) -> list[float]:
        return [self.pieces[0][0]] + [hi for _, hi, _ in self.pieces]

    def waste(self, s):
        return waste_cost(self.params, s)

    def waste_line(self):
        """``f2(s) = c0 - c1*s``."""
        p = self.params
        c0 = p.cw * ((1 - p.q) * p.p * p.Dp + p.r * p.Dr)
        return c0, p.cw * p.r * p.Dr

    def root(self, w1, w2, u1=0.0, u2=0.0):
        """Largest ``s`` with ``w1*(g(s)-u1) <= w2*(f2(s)-u2)``, or ``None``.

        The difference of the two sides is nondecreasing in ``s``.
        """
        c0, c1 = self.waste_line()
        best = None
        for lo, hi, line in self.pieces:
            # w1*(a + b s - u1) - w2*(c0 - c1 s - u2) = k0 + k1 s
            k0 = w1 * (line.a - u1) - w2 * (c0 - u2)
            k1 = w1 * line.b + w2 * c1
            if k0 + k1 * lo > _atol(k0, w1 * line.a):
                continue
            if k1 <= 0:
                s = hi
            else:
                s = min(hi, max(lo, -k0 / k1))
            best = s if best is None else max(best, s)
        return best

    def max_s_below(self, bound: float):
        """Largest ``s`` with ``g(s) <= bound``, or ``None``."""
        best = None
        for lo, hi, line in self.pieces:
            tol = _atol(bound)
            if line(lo) > bound + tol:
                continue
            if line.b <= 0 or line(hi) <= bound + tol:
                s = hi
            else:
                s = min(hi, max(lo, (bound - line.a) / line.b))
            best = s if best is None else max(best, s)
        return best


def _atol(*vals) -> float:
    return 1e-9 * max(1.0, *(abs(v) for v in vals))


def cost_envelope(params: SystemParameters, cfg: SolverConfig | None = None) -> CostEnvelope:
    """Exact lower envelope of the inventory cost over ``s`` in ``[s_min, 1]``."""
    cfg = cfg or SolverConfig()
    params.require_variable_recovery()
    s_min = min_recovery(params)
    if s_min is None:
        raise EmptyFeasibleRegion("demand Dr cannot be covered even at s=1")
    calls = 0

    def oracle(s):
        nonlocal calls
        calls += 1
        d, _ = best_at(params, s, cfg)
        return _line_for(params, d)

    La = oracle(s_min)
    if s_min >= 1.0:
        return CostEnvelope(params, s_min, [(s_min, 1.0, La)], calls)
    Lb = oracle(1.0)

    def build(sa, la, sb, lb, depth=0):
        tol = _atol(la(sb), lb(sb))
        if la.decision == lb.decision or la(sb) <= lb(sb) + tol:
            return [(sa, sb, la)]
        if lb(sa) <= la(sa) + tol:
            return [(sa, sb, lb)]
        sc = (lb.a - la.a) / (la.b - lb.b)
        sc = min(max(sc, sa), sb)
        lc = oracle(sc)
        if lc(sc) >= la(sc) - _atol(la(sc)) or depth > 60:
            return [(sa, sc, la), (sc, sb, lb)]
        return build(sa, la, sc, lc, depth + 1) + build(sc, lc, sb, lb, depth + 1)

    pieces = build(s_min, La, 1.0, Lb)
    # merge neighbours that carry the same line
    merged = [pieces[0]]
    for lo, hi, line in pieces[1:]:
        plo, _, pline = merged[-1]
        if line.decision == pline.decision:
            merged[-1] = (plo, hi, pline)
        else:
            merged.append((lo, hi, line))
    return CostEnvelope(params, s_min, merged, calls)


def _point(env: CostEnvelope, s, **kw) -> ParetoPoint:
    d = env.decision(s)
    f1 = inventory_cost(env.params, d).total_rate
    f2 = waste_cost(env.params, d.s)
    return ParetoPoint(d, f1, f2, **kw)


def _last_s_at_level(env: CostEnvelope, s):
    """Move right along a flat stretch of the envelope (same f1, less waste)."""
    s2 = env.max_s_below(env.value(s))
    return s if s2 is None else max(s, s2)


def individual_minima(params: SystemParameters, cfg: SolverConfig | None = None, envelope=None):
    """``((f1*, decision), (f2*, decision))``; ties broken lexicographically."""
    env = envelope or cost_envelope(params, cfg)
    c0, c1 = env.waste_line()
    s1 = _last_s_at_level(env, env.s_min)
    p1 = _point(env, s1)
    # waste is minimised at s=1 unless it does not depend on s
    s2 = 1.0 if c1 > 0 else s1
    p2 = _point(env, s2)
    return (p1.f1, p1.decision), (p2.f2, p2.decision)


def generate_weight_grid(K: int, normalization: str = "plain", anchors=None, reference=(0.0, 0.0)):
    """Weights ``(w1, 1 - w1)`` for a sweep of ``K`` subproblems.

    ``plain``: ``w1 = i/(K+1)``, ``i = 1..K``.

    ``boundary-scaled``: ``K`` equally spaced targets on the segment joining
    the two individual minima (``anchors``, objective vectors, endpoints
    included); each weight makes the weighted distances from ``reference``
    to its target equal, ``w_i`` proportional to ``1 / (y_i - reference_i)``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if normalization == "plain":
        return [WeightVector.from_first(i / (K + 1)) for i in range(1, K + 1)]
    if normalization != "boundary-scaled":
        raise ValueError(f"unknown normalization {normalization!r}")
    if anchors is None:
        raise ValueError("boundary-scaled weights need the individual minima")
    y1 = np.asarray(anchors[0], dtype=float)
    y2 = np.asarray(anchors[1], dtype=float)
    ref = np.asarray(reference, dtype=float)
    ts = np.array([0.5]) if K == 1 else np.linspace(0.0, 1.0, K)
    out = []
    for t in ts:
        gap = y1 + t * (y2 - y1) - ref
        if np.any(gap <= 0):
            raise ValueError("reference point must lie strictly below the anchors")
        inv = 1.0 / gap
        w1 = float(inv[0] / inv.sum())
        out.append(WeightVector.from_first(w1))
    return out


def locate_reference(params, w: WeightVector, k: int = 1, cfg=None, envelope=None, tol_eq: float = 1e-4):
    """Point minimising the common weighted value ``w1*f1 = w2*f2``.

    Along the coupling the common value equals ``w2*f2(s)``, which falls
    with ``s``; the answer is the largest ``s`` where the weighted envelope
    meets the weighted waste line.  ``k`` selects which weighted objective is
    reported as minimised; both coincide on the coupling.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    env = envelope or cost_envelope(params, cfg)
    s = env.root(w.w1, w.w2)
    if s is None:
        raise CouplingUnattainable(f"w1*f1 > w2*f2 everywhere for {w}")
    d = env.decision(s)
    g1 = w.w1 * inventory_cost(params, d).total_rate
    g2 = w.w2 * waste_cost(params, d.s)
    if abs(g1 - g2) > tol_eq * max(abs(g1), abs(g2), 1e-12):
        raise CouplingUnattainable(
            f"closest coupling leaves w1*f1={g1:.6g} vs w2*f2={g2:.6g} for {w}"
        )
    return d


def weighted_sum_reference(params, w: WeightVector, cfg=None, envelope=None) -> DecisionVector:
    """Minimiser of ``w1*f1 + w2*f2`` (concave in ``s``: checked at breakpoints)."""
    env = envelope or cost_envelope(params, cfg)
    c0, c1 = env.waste_line()
    cands = env.breakpoints
    vals = [w.w1 * env.value(s) + w.w2 * (c0 - c1 * s) for s in cands]
    return env.decision(cands[int(np.argmin(vals))])


def solve_fvc(params, w: WeightVector, x_hat: DecisionVector, k: int, cfg=None, envelope=None):
    """Feasible-value-constraint subproblem anchored at ``x_hat``.

    ``k=1``: min ``w1*f1`` s.t. ``w2*f2 <= w1*f1(x_hat)``;
    ``k=2``: min ``w2*f2`` s.t. ``w1*f1 <= w2*f2(x_hat)``.
    Returns ``None`` when the cut leaves nothing feasible.
    """
    env = envelope or cost_envelope(params, cfg)
    c0, c1 = env.waste_line()
    f1_hat = inventory_cost(params, x_hat).total_rate
    f2_hat = waste_cost(params, x_hat.s)
    if k == 1:
        bound = w.w1 * f1_hat / w.w2
        if c0 - c1 * 1.0 > bound + _atol(bound):
            return None
        if c1 > 0:
            s = max(env.s_min, min(1.0, (c0 - bound) / c1))
        else:
            s = env.s_min
        s = _last_s_at_level(env, s)
    elif k == 2:
        bound = w.w2 * f2_hat / w.w1
        s = env.max_s_below(bound)
        if s is None:
            return None
    else:
        raise ValueError("k must be 1 or 2")
    cut = w.w1 * f1_hat if k == 1 else w.w2 * f2_hat
    return _point(env, s, weight=w, method="FVC", k=k, cut=cut)


def solve_ps(params, w: WeightVector, u, cfg=None, envelope=None) -> ParetoPoint:
    """Minimise ``alpha`` s.t. ``w_i*(f_i - u_i) <= alpha`` (as a minimax over x)."""
    env = envelope or cost_envelope(params, cfg)
    u1, u2 = u
    s = env.root(w.w1, w.w2, u1, u2)
    if s is None:
        # weighted inventory gap dominates everywhere: alpha grows with s
        s = env.s_min
    s = _last_s_at_level(env, s) if s < 1.0 and _flat_alpha(env, w, u, s) else s
    pt = _point(env, s, weight=w, method="PS")
    alpha = max(w.w1 * (pt.f1 - u1), w.w2 * (pt.f2 - u2))
    return replace(pt, alpha=alpha)


def _flat_alpha(env, w, u, s) -> bool:
    # alpha is flat to the right of s only when the inventory term binds
    c0, c1 = env.waste_line()
    return w.w1 * (env.value(s) - u[0]) >= w.w2 * (c0 - c1 * s - u[1]) - _atol(env.value(s))


def _same(a: ParetoPoint, b: ParetoPoint) -> bool:
    da, db = a.decision, b.decision
    return da.astuple()[:4] == db.astuple()[:4] and abs(da.s - db.s) <= 1e-12


def _dedupe(points, tol=1e-9):
    out = []
    for p in points:
        if not any(abs(p.f1 - q.f1) <= tol * max(1, abs(q.f1)) and abs(p.f2 - q.f2) <= tol * max(1, abs(q.f2)) for q in out):
            out.append(p)
    return out


def default_utopia(minima_objectives):
    """Individual minima shifted down by 10% of the objective range."""
    (a1, a2), (b1, b2) = minima_objectives
    r1, r2 = abs(b1 - a1), abs(a2 - b2)
    lo1, lo2 = min(a1, b1), min(a2, b2)
    return (lo1 - 0.1 * (r1 or max(1.0, abs(lo1))), lo2 - 0.1 * (r2 or max(1.0, abs(lo2))))


def compute_front(
    params: SystemParameters,
    method: str = "PS",
    K: int = 200,
    u=None,
    cfg: SolverConfig | None = None,
    normalization: str = "plain",
    tol_eq: float = 1e-4,
) -> ParetoFront:
    """Approximate the Pareto front with ``K`` weights.

    ``PS`` solves one minimax subproblem per weight.  ``FVC`` locates a
    reference point per weight and solves both cut subproblems from it,
    keeping one point when they agree and the nondominated ones otherwise.
    If the reference coupling cannot be met, the weighted-sum minimiser is
    used instead and counted under ``fallback_references``.
    """
    method = method.upper()
    if method not in ("PS", "FVC"):
        raise ValueError(f"method must be PS or FVC, got {method}")
    t0 = time.perf_counter()
    cfg = cfg or SolverConfig()
    env = cost_envelope(params, cfg)
    (f1s, d1), (f2s, d2) = individual_minima(params, cfg, env)
    anchors = (
        (f1s, waste_cost(params, d1.s)),
        (inventory_cost(params, d2).total_rate, f2s),
    )
    if method == "PS":
        if u is None:
            u = default_utopia(anchors)
        u = (float(u[0]), float(u[1]))
        if not (u[0] < f1s and u[1] < f2s):
            raise ParameterError(f"utopia point {u} must lie strictly below ({f1s}, {f2s})")
    ref = u if method == "PS" else (0.0, 0.0)
    weights = generate_weight_grid(K, normalization, anchors, ref)

    raw, subproblems, fallbacks, empty_cuts = [], 0, 0, 0
    for w in weights:
        if method == "PS":
            subproblems += 1
            raw.append(solve_ps(params, w, u, cfg, env))
            continue
        subproblems += 1
        try:
            x_hat = locate_reference(params, w, 1, cfg, env, tol_eq)
        except CouplingUnattainable:
            fallbacks += 1
            x_hat = weighted_sum_reference(params, w, cfg, env)
        found = []
        for k in (1, 2):
            subproblems += 1
            pt = solve_fvc(params, w, x_hat, k, cfg, env)
            if pt is None:
                empty_cuts += 1
            else:
                found.append(pt)
        if len(found) == 2 and _same(*found):
            found = found[:1]
        elif len(found) == 2:
            a, b = found
            if dominates(a.objectives, b.objectives):
                found = [a]
            elif dominates(b.objectives, a.objectives):
                found = [b]
        raw.extend(found)

    unique = _dedupe(raw)
    front = dominance_filter(unique)
    front.provenance = {
        "method": method,
        "grid": K,
        "normalization": normalization,
        "utopia": u if method == "PS" else None,
        "subproblems": subproblems,
        "raw_points": len(raw),
        "duplicates_merged": len(raw) - len(unique),
        "fallback_references": fallbacks,
        "empty_cuts": empty_cuts,
        "envelope_pieces": len(env.pieces),
        "box_searches": env.evaluations,
        "individual_minima": anchors,
        "seconds": time.perf_counter() - t0,
    }
    return front
