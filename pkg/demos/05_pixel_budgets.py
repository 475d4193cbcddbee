"""Pixel budgets for a 5 bits-per-photon read at word error 1e-3.

A coherent probe with a Green Machine needs an enormous block; a lossless
W-state probe needs only 32 pixels. Loss takes the W-state advantage away:
repeating the photon until one survives costs 1/kappa photons per read, so
the bits per detected photon fall back to the coherent-state budget.
"""
from photon_reader import InfeasibleTarget, ReadScheme, min_pixels_for_pie, pixels_for_target

pie, eps = 5.0, 1e-3
gm = pixels_for_target(ReadScheme.COHERENT_GM, pie, eps)
print(f"Green Machine:        M = 2^{gm.log2_m}, N per pixel = {gm.n_s:.3e}, P_e = {gm.p_e:.2e}")
print(f"random-coding bound:  M_UB = {min_pixels_for_pie(pie, eps).m_ub}")

for kappa in (1.0, 0.999, 0.99, 0.5, 0.01):
    k = pixels_for_target(ReadScheme.W_STATE, pie, eps, kappa=kappa)
    try:
        single = pixels_for_target(ReadScheme.W_STATE, pie, eps, kappa=kappa, k_copies=1)
        shot = f"M = {single.m}"
    except InfeasibleTarget:
        shot = "infeasible"
    print(f"W state kappa={kappa:<6g} K-copy: M = 2^{k.log2_m} with K = {k.k_copies:<4d} single shot: {shot}")
