# %% [markdown]
# Does the Y polygon inequality survive for qutrits? A short random-restart
# search says no, and a three-term state shows why.

# %%
import numpy as np

from epi import make_state
from epi.verifier import conjecture_search, qudit_marginals, qudit_polygon_slack

res = conjecture_search(3, 3, restarts=12, seed=1)
print("best slack", round(res.best_slack, 5), "restart slacks", np.round(res.restart_slacks, 3))

# %% [markdown]
# (|000> + |101> + |210>)/sqrt(3): party 0 is maximally mixed, Y_0 = 1, while
# each of the other two only reaches 1 - 1/sqrt(3).

# %%
amps = np.zeros(27)
amps[[0, 10, 21]] = 1
s = make_state([3, 3, 3], amps, renormalize=True)
print("Y =", np.round(qudit_marginals(s.amps, s.dims), 4), "slack", round(qudit_polygon_slack(s), 4))

# %%
qubits = conjecture_search(2, 3, restarts=6, seed=0)
print("qubit search best slack", qubits.best_slack)
