"""Independent reference implementations used only by the tests.

Plain-Python arithmetic, written from the model statement rather than from
the package, so agreement is a real cross-check.
"""
from fractions import Fraction
import math


def serial_cost(P, Qp, Qr, m, n, s):
    Dp, Dr = P["Dp"], P["Dr"]
    Tp = n * Qp / Dp
    Tr = m * Qr / Dr
    T = Tp + Tr
    R1 = P["p"] * P["q"] * Dp
    R2 = s * P["r"] * Dr
    short = 1 - R2 / Dr
    supply = Qp * Tp / 2 + Qr * Tr / 2
    repair = (
        R1 * Tp**2 / 2
        + R2 * Tr * Qr / (2 * Dr)
        + (m - 1) / 2 * Tr * Qr * short
        + Tr * (Tp * R1 - Qr - (m - 1) * short * Qr)
    )
    return (m * P["Sr"] + n * P["Sp"] + supply * P["hp"] + repair * P["hr"]) / T


def parallel_cost(P, Qp, Qr, m, n, s):
    Dp, Dr = P["Dp"], P["Dr"]
    Tp, Tr = n * Qp / Dp, m * Qr / Dr
    T = Tp + Tr
    R1 = P["p"] * P["q"] * Dp
    R = R1 + s * P["r"] * Dr
    repair = (
        Tr**2 * R / (2 * m)
        + (m - 1) / 2 * Tr * Qr * (R / Dr - 1)
        + 0.5 * (Tp - Tr) ** 2 * R
        + (Tp - Tr) * (Tr * R + R1 * Tp - (m + 1) * Qr)
        + (R1 * Tp - Qr) * Tr
    )
    supply = Qp * Tp / 2 + Qr * Tr / 2
    return (m * P["Sr"] + n * P["Sp"] + supply * P["hp"] + repair * P["hr"]) / T


def waste(P, s):
    return P.get("cw", 0.0) * ((1 - P["q"]) * P["p"] * P["Dp"] + (1 - s) * P["r"] * P["Dr"])


def brute_inner(P, m, n, s, qmax, tr_min=1.0):
    """Exhaustive (Qp, Qr) scan with ``Tr <= Tp`` and ``Tr >= tr_min``."""
    best = (math.inf, None, None)
    for Qr in range(1, qmax + 1):
        Tr = m * Qr / P["Dr"]
        if tr_min is not None and Tr < tr_min * (1 - 1e-9):
            continue
        qp0 = max(1, math.ceil(Tr * P["Dp"] / n * (1 - 1e-12)))
        for Qp in range(qp0, qmax + 1):
            if n * Qp / P["Dp"] < Tr * (1 - 1e-9):
                continue
            c = serial_cost(P, Qp, Qr, m, n, s)
            if c < best[0] - 1e-12 * abs(c):
                best = (c, Qp, Qr)
    return best


def dominance_brute(points):
    """Indices of points not dominated by any other point (O(N^2))."""
    keep = []
    for i, a in enumerate(points):
        dominated = False
        for j, b in enumerate(points):
            if i != j and b[0] <= a[0] and b[1] <= a[1] and (b[0] < a[0] or b[1] < a[1]):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def trapezoid(times, levels_left, levels_right):
    """Area under a piecewise-linear path given left/right limits at each time."""
    area = Fraction(0)
    for k in range(len(times) - 1):
        dt = Fraction(times[k + 1]) - Fraction(times[k])
        area += dt * (Fraction(levels_right[k]) + Fraction(levels_left[k + 1])) / 2
    return float(area)
