# %% [markdown]
# Figure presets as CSV
#
# Each preset writes a table with a commented header (config hash, seed) and
# a JSON manifest. The same thing is available as ``coexsim preset fig3``.

# %%
from pathlib import Path
import tempfile

from coexsim import SimConfig
from coexsim.presets import run_preset

out = Path(tempfile.mkdtemp())
csv, manifest = run_preset("fig3", out, SimConfig(n_drops=20), values=[2000, 5000, 10000])
print(csv.read_text())
print("manifest:", manifest)
