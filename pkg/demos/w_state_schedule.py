# # Preparing a W state on a ten-chain network
#
# Start from an excitation on site 1 and spread it evenly over the even leg.
# Output goes to ./out next to this script.

from pathlib import Path

import numpy as np

import spinforge as sf
from spinforge import formats

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# ## The target and its schedule

N = 10
P = sf.w_state_profile(N)
schedule = sf.synthesize(P, j1=1.0)

print("J_k / J_1:", np.round(schedule.couplings / schedule.couplings[0], 4))
print("t_k * J_1:", np.round(schedule.intervals, 4))
print("total time:", round(schedule.total_time, 4))

# Coupling ratios stay inside (e^-1/2, e) however large N gets.

print(sf.coupling_bounds_check(schedule)["pass"])

# ## Checking it on the full 2N-site network

psi = sf.prepared_state(schedule)
print("fidelity:", sf.fidelity(np.sqrt(P), psi))

# Probabilities over time, sampled ten times per interval, show the
# excitation being dropped off chain by chain.

times, probs = sf.sample_evolution(schedule.couplings, schedule.intervals, samples_per_interval=10)
formats.atomic_write(out / "w10_schedule.csv", formats.schedule_table_csv(schedule))
formats.atomic_write(out / "w10_trace.csv", formats.trace_csv(times, probs))
formats.write_schedule(out / "w10_schedule.json", schedule)
