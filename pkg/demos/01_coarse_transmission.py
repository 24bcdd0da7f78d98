"""
Coarse transmission from a hazy image
=====================================

Builds the DCP map, the luminance map and their sigmoid fusion on the
synthetic outdoor scene, and shows how the weight separates sky from
foreground.
"""
import numpy as np

from vardehaze import fixtures
from vardehaze.airlight import estimate_airlight
from vardehaze.coarse import coarse_transmission

clean, hazy, t_true, A_true = fixtures.hazy_pair(128)

# airlight from the haziest dark-channel pixels
A = estimate_airlight(hazy)
print("estimated A:", np.round(A, 3), " true A:", A_true)

t_bar, maps = coarse_transmission(hazy, A, return_maps=True)

sky = slice(0, 38)          # the scene's top 30% is sky
ground = slice(60, None)
print("mean chi   sky / ground: %.3f / %.3f" % (maps.chi[sky].mean(), maps.chi[ground].mean()))
print("mean t_dcp sky / ground: %.3f / %.3f" % (maps.t_dcp[sky].mean(), maps.t_dcp[ground].mean()))
for c, name in enumerate("rgb"):
    err = np.abs(t_bar[c] - t_true[c]).mean()
    print(f"channel {name}: mean |t_bar - t_true| = {err:.3f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(1, 4, figsize=(12, 3))
    for a, (title, img) in zip(ax, [("hazy", hazy), ("t_dcp", maps.t_dcp),
                                    ("chi", maps.chi), ("t_bar (g)", t_bar[1])]):
        a.imshow(img, cmap=None if img.ndim == 3 else "gray", vmin=0, vmax=1)
        a.set_title(title)
        a.axis("off")
    fig.savefig("coarse_maps.png", dpi=80, bbox_inches="tight")
    print("wrote coarse_maps.png")
except ImportError:
    pass
