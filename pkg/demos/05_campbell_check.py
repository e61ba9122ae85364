# %% [markdown]
# Campbell's theorem as an oracle
#
# For a Poisson process of density lambda, the mean of sum h(x) is
# lambda times the integral of h. We compare Monte Carlo sums with closed
# forms for a node count, the path law on a ring and the path law on the
# Wi-Fi region.

# %%
import numpy as np

from coexsim.interference import campbell_cases

rng = np.random.default_rng(1)
for name, case in campbell_cases().items():
    res = case.run(rng, trials=20_000)
    print(f"{name:7s} MC {res.empirical_mean:.5g} +- {res.standard_error:.2g}  "
          f"closed form {case.closed_form:.5g}  z={res.z_score:+.2f}")
