# Cost of a fixed replenishment plan
# -----------------------------------
# A plan is four integers (Qp, Qr, m, n) plus the recovery proportion s.
# Run from the repo root: python demos/01_cost_of_a_plan.py
import numpy as np

from rlinv import DecisionVector, SystemParameters, area_decomposition, inventory_cost, parallel_flow_cost
from rlinv.model import derive

# tyre retreading data, 70% of secondary returns recovered
P = SystemParameters(Dp=100, Dr=43, p=0.4, q=0.8, r=0.4, hp=1.6, hr=1.2, Sp=10, Sr=1, s_fixed=0.7)
plan = DecisionVector(Qp=35, Qr=15, m=3, n=3, s=0.7)

sch = derive(P, plan)
print("Tp = %.4f  Tr = %.4f  (45/43 = %.4f)" % (sch.Tp, sch.Tr, 45 / 43))

c = inventory_cost(P, plan)
print("setup %.2f + supply %.2f + repair %.2f = %.2f" % (
    c.setup_rate, c.supply_holding_rate, c.repair_holding_rate, c.total_rate))

# the same plan if new and repaired items flow at the same time
print("parallel flow: %.2f" % parallel_flow_cost(P, plan).total_rate)

# holding areas piece by piece; supply and repair are the weighted totals
for label, area in area_decomposition(P, plan):
    print("  %-7s %10.4f" % (label, area))

# cost is affine in s for a fixed plan
s = np.linspace(0, 1, 5)
print([round(inventory_cost(P, DecisionVector(35, 15, 3, 3, x)).total_rate, 3) for x in s])
