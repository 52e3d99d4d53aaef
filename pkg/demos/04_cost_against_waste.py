# Inventory cost against waste cost
# ----------------------------------
# Recovering more returns cuts waste but raises the inventory bill.
import numpy as np

from rlinv import SystemParameters, compute_front
from rlinv.pareto import REFERENCE_UTOPIA, WeightVector, cost_envelope, individual_minima, solve_ps

P = SystemParameters(Dp=200, Dr=50, p=0.3, q=0.9, r=0.8, hp=1, hr=1, Sp=4, Sr=1, cw=1)

# the cheapest cost over all plans, as a function of s
env = cost_envelope(P)
for lo, hi, line in env.pieces:
    print("s in [%.3f, %.3f]: f1 = %.3f + %.3f s  via %s" % (lo, hi, line.a, line.b, line.decision))

(f1, d1), (f2, d2) = individual_minima(P, envelope=env)
print("cheapest inventory %.2f at s=%.2f, least waste %.2f at s=%.2f" % (f1, d1.s, f2, d2.s))

# one goal-attainment subproblem
pt = solve_ps(P, WeightVector(0.9, 0.1), REFERENCE_UTOPIA, envelope=env)
print(pt.f1, pt.f2, pt.alpha)

for method in ("PS", "FVC"):
    for norm in ("plain", "boundary-scaled"):
        front = compute_front(P, method, 200, REFERENCE_UTOPIA if method == "PS" else None, normalization=norm)
        o = front.objectives()
        print("%-3s %-15s %3d points  f1 %.2f..%.2f  f2 %.2f..%.2f" % (
            method, norm, len(front), o[:, 0].min(), o[:, 0].max(), o[:, 1].min(), o[:, 1].max()))

print(front.summary())
print("\n".join(front.to_text().splitlines()[:4]))
