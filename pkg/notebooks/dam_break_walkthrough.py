# Dam break over an erodible bed, step by step.
# Runs a coarse version of the academic setup for the three model variants
# and compares the scour they produce.
import tempfile

import numpy as np

from swemed import scenarios

base = scenarios.builtin("academic")
print(base.name, base.n_cells, "cells, order", base.order, "material", base.material)

# coarser mesh and shorter run so the script finishes in a few seconds
cfg = scenarios.scenario_to_config(base)
cfg.update(n_cells=300, end_time=0.5)
cfg["output"]["snapshot_times"] = [0.0, 0.25, 0.5]

out = tempfile.mkdtemp(prefix="swemed-")
beds = {}
for model in ("sweed", "hswemed", "hswem"):
    s = scenarios.scenario_from_dict({**cfg, "model": model})
    res = scenarios.run(s, f"{out}/{model}")
    rep = res.manifest["report"]
    print(f"{model:8s} steps={res.manifest['stats']['steps']:5d}  min h_b={rep['min_h_b']:+.5f}"
          f"  at x={rep['x_min_h_b']:+.3f}")
    final = scenarios.read_snapshot(f"{out}/{model}/snapshots/t_0.500000.csv")
    beds[model] = final["h_b"]

x = final["x"]
# exchange with the water column deepens the scour hole
print("scour volume (m^2):", {m: round(float(-np.sum(np.minimum(b, 0)) * (x[1] - x[0])), 6)
                              for m, b in beds.items()})

# vertical velocity profile just behind the initial dam position
prof = np.genfromtxt(f"{out}/hswemed/profiles/t_0.500000_x_0.csv", delimiter=",", names=True)
print("u(zeta=0) =", prof["u"][0], " u(zeta=1) =", prof["u"][-1])
print("outputs in", out)
