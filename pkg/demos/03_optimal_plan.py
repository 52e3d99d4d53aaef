# Searching for the cheapest plan
# --------------------------------
import time

from rlinv import SolverConfig, SystemParameters, solve_model1, solve_model2
from rlinv.solver import cost_profile, optimize_inner

# fixed recovery: every (m, n) up to 64 is visited and each inner
# problem over (Qp, Qr) is solved exactly
P = SystemParameters(Dp=100, Dr=43, p=0.4, q=0.8, r=0.4, hp=10, hr=1.2, Sp=1.6, Sr=1, s_fixed=0.7)
sol = solve_model1(P)
print(sol.report())

# the table behind the answer: best cost for every (m, n)
t = sol.table
print("certificate rows:", len(t), " min cost %.4f" % t[:, 5].min())

# one inner problem on its own
print("m=15, n=21 ->", optimize_inner(P, 15, 21, 0.7))

# without the one-time-unit floor on Tr the optimum collapses to tiny cycles
loose = solve_model1(P, SolverConfig(min_repair_time=None, m_max=64, n_max=64))
print("no Tr floor:", loose.decision, round(loose.cost.total_rate, 2))

# recovery proportion as a decision
Q = SystemParameters(Dp=1500, Dr=2500, p=0.8, q=0.8, r=0.8, hp=5, hr=2, Sp=2400, Sr=1400)
t0 = time.time()
sol = solve_model2(Q)
print(sol.report())

# the best cost as a function of s is concave, so the optimum sits at an end
s, c, _ = cost_profile(Q, SolverConfig(s_grid=6))
for a, b in zip(s, c):
    print("  s=%.3f  %.2f" % (a, b))
