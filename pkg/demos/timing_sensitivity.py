# # How precise must the pulse timing be?
#
# Every interval is stretched by the same error eps, so pulse k fires k*eps
# late.  The fidelity drop is tracked against J_1 * eps.

from pathlib import Path

import spinforge as sf
from spinforge import formats

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

for N in (10, 20):
    curve = sf.fidelity_curve(sf.w_state_profile(N), 1.0, sf.make_grid(0.4 / N, 100), label=f"W{N}")
    th = sf.tolerance_threshold(curve, 0.99)
    print(f"N={N}: F drops to 0.99 at J1*eps = {th.eps_scaled:.5f}")
    formats.atomic_write(out / f"sweep_w{N}.csv", formats.curve_csv(curve, th, 0.99))

# ## Scaling with N
#
# The tolerated error shrinks roughly like 1/N, so N * eps* is nearly flat.

report = sf.scaling_analysis(sf.w_state_profile, [10, 20, 40, 80])
for row in report.rows:
    print(f"N={row.n:3d}  eps*={row.eps_star:.5f}  N*eps*={row.n_times_eps_star:.4f}")
print("spread:", round(report.spread, 3))
formats.atomic_write(out / "scaling_w.csv", formats.scaling_csv(report))
