"""Random-coding bound on the number of pixels for a reliable read.

For BPSK coherent-state pixels read by an optimal joint-detection receiver,
the random-coding exponent E_LB(N, R) bounds how fast the word error falls
with block length. M_UB = -ln(eps)/E_LB is then a block length that
suffices. Along a fixed bits-per-photon line R = pie * N the bound is
minimized over N.

Run:  python demos/04_error_exponent.py [out.svg]
"""
import sys

import numpy as np

from photon_reader import exponent_contours, min_pixels_for_pie, random_coding_bound
from photon_reader.svg import contour_plot

for n_s, rate in [(0.01, 0.02), (0.1, 0.2), (1.0, 0.5)]:
    b = random_coding_bound(n_s, rate)
    print(f"N={n_s:<5g} R={rate:<4g} bits: E_LB={b.e_lb:.3e} nats (s*={b.s_star:.3f}, p*={b.p_star:.3f})")

print()
for pie in (1.0, 2.0, 3.0, 5.0):
    b = min_pixels_for_pie(pie, 1e-3)
    print(f"{pie:g} bits/photon at eps=1e-3: M_UB = {b.m_ub} at N = {b.n_s:.4f} (R/C = {b.rate_over_capacity:.2f})")

if len(sys.argv) > 1:
    ns = np.logspace(-3, 0, 40)
    table = exponent_contours(np.linspace(1, 8, 36), ns, 1e-3)
    svg = contour_plot(table.n_s, table.pie, table.m_ub, [30, 100, 300, 1000, 4800],
                       "M_UB contours", "N_S", "bits/photon",
                       extra_lines={"capacity boundary": (list(ns), list(table.boundary_pie))})
    with open(sys.argv[1], "w") as fh:
        fh.write(svg)
    print(f"wrote {sys.argv[1]}")
