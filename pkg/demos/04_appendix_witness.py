# %% [markdown]
# The Y-inequality rests on a handful of identities between the Schmidt
# partners of party 0 and the product of the other parties' Schmidt bases.
# Recompute them for random states and look at the residuals.

# %%
import numpy as np

from epi import haar_random
from epi.verifier import appendix_witness, witness_suite

rep = appendix_witness(haar_random([2] * 4, seed=3))
for key, val in rep.residuals.items():
    print(f"{key:18s} {val:.2e}")
print("Delta", rep.delta, "sum of squares", rep.delta_sum_of_squares)

# %% [markdown]
# A closed form with conjugated cross terms only matches for real
# amplitudes; the sum-of-squares form matches always.

# %%
print("conjugated form", rep.delta_conjugated_form)

suite = witness_suite(3, 500, seed=0)
print(suite.failures, "failures,", suite.extra["vacuous"], "vacuous, min Delta", suite.extra["min_delta"])
