# %% [markdown]
# Antenna patterns
#
# The Wi-Fi side uses a 4-element half-wave linear array; the radar a narrow
# high-gain dish whose gain falls parabolically (in dB) to a flat floor.

# %%
import numpy as np

from coexsim.antenna import RadarPattern, WifiArrayPattern, linear_to_db

wifi = WifiArrayPattern()
radar = RadarPattern()
print(f"Wi-Fi peak {wifi.peak_gain_dbi:.2f} dBi, radar peak {radar.peak_gain_dbi} dBi")

# %% Wi-Fi gain across the front hemisphere. Nulls sit where 2 sin(theta) is an integer.
for deg in (0, 10, 20, 30, 45, 60, 90, 120, 180):
    print(f"{deg:4d} deg  {linear_to_db(wifi.gain(np.deg2rad(deg))):8.2f} dBi")

# %% Behind the panel the gain is flat; the bare array would repeat its main beam at 180 deg
bare = WifiArrayPattern(front_to_back_db=None)
print("bare array at 180 deg:", round(float(linear_to_db(bare.gain(np.pi))), 2), "dBi")

# %% Radar mainlobe: -3 dB at half the 2 deg beamwidth, floor at -10 dBi
for deg in (0, 0.5, 1, 2, 3, 4, 90):
    print(f"{deg:5.1f} deg  {radar.gain_db(np.deg2rad(deg)):7.2f} dBi")
print(f"mainlobe reaches the floor at {np.rad2deg(radar.mainlobe_halfwidth):.2f} deg")
