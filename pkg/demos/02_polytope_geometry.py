# %% [markdown]
# Geometry of the allowed region inside the unit N-cube: its volume, and the
# area of constant-total-entanglement slices (the sharing capacity).

# %%
import numpy as np

from epi.polytope import available_volume, capacity_curve, diagonal_volume, mc_capacity, mc_volume

for N in range(3, 8):
    est = mc_volume(N, 10**5, seed=N)
    print(f"N={N}  V={available_volume(N):.6f}  diagonal={diagonal_volume(N):.6f}  MC={est.value:.4f}+-{est.stderr:.4f}")

# %% [markdown]
# For N = 3 and 4 the capacity peaks at the kink E_T = 2. Past the kink no
# slice point can violate the inequality, so the slice is the bare cube
# cross-section, and from N = 5 on its maximum at E_T = N/2 takes over.

# %%
for N in (3, 4, 5, 6):
    curve = capacity_curve(N, 100 * N + 1)
    t, a = curve.peak()
    print(f"N={N}  peak A={a:.5f} at E_T={t:.3f}")

est = mc_capacity(3, 2.0, slab=0.005, samples=10**6, seed=0)
print("MC capacity at E_T=2, N=3:", round(est.value, 4), "vs", round(np.sqrt(3) / 2, 4))
