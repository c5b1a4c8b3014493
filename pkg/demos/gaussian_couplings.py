# # Gaussian packets and how their couplings approach the W couplings
#
# A narrow packet needs strongly varying couplings; a very wide one looks like
# the W state, and so do its couplings.

from pathlib import Path

import numpy as np

import spinforge as sf
from spinforge import formats

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

N = 20
w = sf.synthesize(sf.w_state_profile(N))

for sigma in (1.0, 2.5, 5.0, 100.0):
    P = sf.gaussian_state_profile(N, sigma)
    s = sf.synthesize(P)
    gap = np.max(np.abs(s.couplings - w.couplings)) / s.couplings[0]
    psi = sf.prepared_state(s)
    print(f"sigma={sigma:6.1f}  max J/J1={np.max(s.couplings):.4f}  "
          f"sup|J-J_W|/J1={gap:.2e}  fidelity={sf.fidelity(np.sqrt(P), psi):.12f}")
    formats.atomic_write(out / f"gauss{N}_sigma{sigma:g}.csv", formats.schedule_table_csv(s))

# The peak site of the sigma=1 packet:
P = sf.gaussian_state_profile(10, 1.0)
print("N=10, sigma=1 peak:", P.max())
