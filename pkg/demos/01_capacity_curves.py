"""How many bits does each photon buy?

Sweeps the mean photon number per pixel and prints, for every transmitter /
receiver pair, the capacity per pixel and the photon information efficiency
(PIE, bits per photon). At low photon numbers the on-off direct-detection
curve saturates near 1/(e ln 2), the BPSK receivers saturate too, while the
Holevo, Green Machine and W-state curves keep climbing.

Run:  python demos/01_capacity_curves.py [out.svg]
"""
import sys

import numpy as np

from photon_reader import SchemeId, capacity, holevo_g
from photon_reader.svg import line_plot

grid = np.logspace(-4, 1, 11)
series = {}
print(f"{'scheme':<20}" + "".join(f"{n:>9.0e}" for n in grid))
for scheme in SchemeId:
    xs, ys = [], []
    for n in grid:
        if scheme is SchemeId.W_STATE and n > 0.5:
            continue
        pt = capacity(scheme, n)
        xs.append(n)
        ys.append(pt.pie_bits_per_photon)
    series[scheme.value] = (xs, ys)
    cells = [f"{y:9.3f}" for y in ys] + [f"{'-':>9}"] * (len(grid) - len(ys))
    print(f"{scheme.value:<20}" + "".join(cells))

print("\nHolevo bound g(n) per pixel at the same points:")
print("".join(f"{holevo_g(n):9.4f}" for n in grid))

gm = capacity(SchemeId.GM_HADAMARD, 1e-4)
print(f"\nGreen Machine at n_s=1e-4 uses M* = {gm.aux['m_star']} pixels per codeword "
      f"(asymptotic estimate {gm.aux['m_star_asymptotic']:.0f}).")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(line_plot(series, "PIE vs photons per pixel", "N_S", "bits/photon"))
    print(f"wrote {sys.argv[1]}")
