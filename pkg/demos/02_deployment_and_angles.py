# %% [markdown]
# One deployment ("drop") and its off-axis angles
#
# The radar sits at the origin; the Wi-Fi region is a 1 km disc centred at
# (d, 0). Each AP gets its STAs inside a small network disc.

# %%
import numpy as np

from coexsim import SimConfig
from coexsim.geometry import RadarState, off_axis_radar, off_axis_wifi, sample_drop

cfg = SimConfig(d=2000.0)
layout = sample_drop(cfg, np.random.default_rng(7))
print(layout.n_ap, "APs,", int(layout.sta_mask.sum()), "STAs")
print("AP x range:", layout.ap_positions[:, 0].min().round(), "to", layout.ap_positions[:, 0].max().round())

# %% An STA beaming at its AP: how far off the radar axis does it point?
ap = layout.ap_positions[0]
sta = layout.sta_positions[0, 0]
theta_w = off_axis_wifi(sta, ap)
print(f"theta_w of the first STA: {np.rad2deg(theta_w):.1f} deg")

# %% Radar off-axis angle of that AP as the beam turns (15 rpm, so 4 s per turn)
radar = RadarState(rpm=15)
for t in (0.0, 0.5, 1.0, 2.0):
    print(f"t={t:3.1f} s  theta_r={np.rad2deg(off_axis_radar(ap, radar.at(t))):6.1f} deg")
