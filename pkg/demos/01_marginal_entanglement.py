# %% [markdown]
# Marginal entanglement of a few three-qubit states, and how the four
# measures line up as functions of the normalized Schmidt weight Y.

# %%
import numpy as np

from epi import GhzParams, WParams, ghz_state, haar_random, marginal_vector, polygon_slack, w_state

states = {
    "GHZ": ghz_state(GhzParams(np.pi / 4)),
    "W": w_state(WParams(*(1 / np.sqrt(3),) * 3)),
    "random": haar_random([2, 2, 2], seed=1),
}

# %%
for name, s in states.items():
    for m in "YSCN":
        v = marginal_vector(s, m)
        print(f"{name:7s} {m}  {np.round(v.values, 4)}  slack {polygon_slack(v).min_slack:+.4f}")

# %% [markdown]
# Every row has nonnegative slack: no party holds more entanglement than all
# the others together. Y is the only measure for which the W state sits on a face.

# %%
from epi.measures import measure_of_y

y = np.linspace(0, 1, 6)
for m in "SCN":
    print(m, np.round(measure_of_y(m, y), 4))
