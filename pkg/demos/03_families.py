# %% [markdown]
# The GHZ family runs along the cube diagonal; the W family fills the faces
# Y_j = sum of the others and the plane sum(Y) = 2.

# %%
import numpy as np

from epi.families import family_sweep

for row in family_sweep("ghz", 7):
    print(f"theta={row.params.theta:.3f}  Y={row.vector.values[0]:.4f}")

# %%
rows = family_sweep("w", 11)
faces = sum(1 for r in rows if any(r.slack.boundary))
plane = sum(1 for r in rows if abs(r.vector.total - 2) < 1e-12)
print(f"{len(rows)} W points: {faces} on a face, {plane} on the plane sum(Y)=2")

# %% [markdown]
# Concurrence does not share those faces. With one dominant coefficient the
# Y vector is on a face while the concurrence vector keeps a clear margin.

# %%
from epi.families import WParams, w_y
from epi.polytope import polygon_slack

p = WParams.from_weights(0.75, 0.125)
for m in "YC":
    v = w_y(p, m)
    print(m, np.round(v.values, 4), "slack", round(polygon_slack(v).min_slack, 4))
