# %% [markdown]
# Who transmits?
#
# Without mitigation EDCA picks the highest priority and CSMA a uniform node.
# During the radar sweep the mitigated rule keeps only nodes whose beams point
# well away from the radar (theta_w > threshold) and, for EDCA, intersects them
# with the same number of top-priority nodes.

# %%
import numpy as np

from coexsim.geometry import RadarState, RegionSpec
from coexsim.mac import Node, build_sweep_schedule, eligibility_sets

priority = {6: 7, 5: 6, 3: 5, 7: 4, 1: 3, 2: 2, 4: 1, 8: 0, 9: 0, 10: 0}
theta_deg = {7: 170, 6: 150, 4: 120, 3: 100, 1: 60, 2: 50, 5: 40, 8: 30, 9: 20, 10: 10}
net = [Node(i, "STA", np.zeros(2), priority[i]) for i in range(1, 11)]
theta = np.deg2rad([theta_deg[i] for i in range(1, 11)])

for scheme in ("EDCA", "CSMA"):
    sets = eligibility_sets(net, scheme, theta, np.deg2rad(90), np.random.default_rng(0))
    print(scheme, "by priority", sets.by_priority[:sets.m], "by angle", sets.by_angle[:sets.m],
          "-> order", sets.selected_order)

# %% Raising the threshold to 180 deg leaves nobody eligible; the widest beam transmits anyway
sets = eligibility_sets(net, "EDCA", theta, np.pi, np.random.default_rng(0))
print("fallback:", sets.fallback, "winner", sets.selected_order[0])

# %% When is the sweep? The region 2 km away subtends 60 deg, plus a 2 deg margin
sched = build_sweep_schedule(RegionSpec.at_distance(2000, 1000, 112.84), RadarState(15), np.deg2rad(2))
print(f"sweep {sched.sweep_duration:.3f} s of every {sched.rotation_period:.0f} s rotation")
