# One parameter at a time
# ------------------------
# Each swept value gets its own full solve with s free.
from rlinv import SystemParameters, SweepSpec, run_sweep
from rlinv.sensitivity import default_values, endpoint_change, sweep_table

base = SystemParameters(Dp=1500, Dr=2500, p=0.8, q=0.8, r=0.8, hp=5, hr=2, Sp=2400, Sr=1400)

rows = run_sweep(SweepSpec("hp", (5.0, 15.0), base))
print(sweep_table(rows, "hp"))
print("hp 5 -> 15: +%.2f%%" % (100 * (rows[1].cost / rows[0].cost - 1)))

# cheaper setups: more procurement cycles (Sp) or more repair cycles (Sr)
for name in ("Sp", "Sr"):
    rows = run_sweep(SweepSpec(name, tuple(default_values(getattr(base, name))), base))
    print(sweep_table(rows, name))
    print("%s lowest vs highest: %.2f%%" % (name, 100 * endpoint_change(rows)))

# repair holding cost: the closed form credits negative repair stock, so
# past hr ~ 2.5 the optimum switches plan and the cost falls
rows = run_sweep(SweepSpec("hr", (0.5, 1, 2, 4, 6), base))
print(sweep_table(rows, "hr"))
