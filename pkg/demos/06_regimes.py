# %% [markdown]
# Access scheme and mitigation compared
#
# All four regimes share deployments, priorities and beam targets (each
# random purpose has its own stream), so differences come from the rules.

# %%
import numpy as np

from coexsim import SimConfig, run

base = SimConfig(d=2000.0, n_drops=200)
for scheme in ("EDCA", "CSMA"):
    for mitigation in (False, True):
        r = run(base.replace(scheme=scheme, mitigation=mitigation))
        print(f"{scheme} mitigation={'on ' if mitigation else 'off'}  INR {r.inr_mean_db:6.2f} dB  "
              f"median NPPI {np.median(r.nppi_db):7.2f} dB  fallbacks {100 * r.fallback_rate:.2f}%")

# %% The threshold trades protection for throughput
for theta in (30, 90, 180):
    r = run(base.replace(mitigation=True, theta_deg=theta))
    print(f"theta {theta:3d} deg  INR {r.inr_mean_db:6.2f} dB  median NPPI {np.median(r.nppi_db):7.2f} dB")
