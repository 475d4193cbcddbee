"""Simulated word-error rates against the closed-form laws.

The coherent Green Machine errs only when no detector clicks and the random
guess is wrong, giving (M-1)/M * exp(-kappa M N). The K-copy W-state reader
errs only when every copy is lost, giving (M-1)/M * (1-kappa)^K. Each row
below runs an independent simulation and reports the z-score.
"""
import math

from photon_reader import ReadScheme, TrialPlan, estimate_induced_channel, estimate_word_error

plans = [
    TrialPlan(ReadScheme.COHERENT_GM, 64, 200_000, master_seed=1, n_s=math.log(100) / 64),
    TrialPlan(ReadScheme.COHERENT_GM, 256, 100_000, master_seed=2, n_s=2.0 / 256, kappa=0.8),
    TrialPlan(ReadScheme.W_STATE, 32, 200_000, master_seed=3, kappa=0.7, k_copies=3),
    TrialPlan(ReadScheme.W_STATE, 128, 50_000, master_seed=4),
]
print(f"{'scheme':<12}{'M':>6}{'kappa':>7}{'K':>3}{'p_hat':>12}{'analytic':>12}{'z':>8}")
for plan in plans:
    est = estimate_word_error(plan)
    p = plan.analytic_word_error()
    sigma = math.sqrt(p * (1 - p) / plan.trials)
    z = (est.p_e_hat - p) / sigma if sigma else float("nan")
    print(f"{plan.scheme.value:<12}{plan.m:>6}{plan.kappa:>7.2f}{plan.k_copies:>3}"
          f"{est.p_e_hat:>12.3e}{p:>12.3e}{z:>8.2f}")

ch = estimate_induced_channel(TrialPlan(ReadScheme.COHERENT_GM, 8, 16_000, master_seed=5, n_s=math.log(4) / 8))
print("\ninduced channel, M=8, M*N = ln 4 (last column = erasure):")
for row in ch.p:
    print("  " + " ".join(f"{v:.2f}" for v in row))
