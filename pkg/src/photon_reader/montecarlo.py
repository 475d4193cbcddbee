"""Monte Carlo word-error estimation over simulated read cycles, plus the
analytic error laws and pixel-budget solver they are checked against.

Randomness: trials are grouped into fixed-size blocks and block ``b`` draws
from ``SeedSequence(master_seed, spawn_key=(b,))``. Block size depends only on
M, so results are identical for any number of worker threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dmc import TransitionMatrix
from .optics import (
    ReadScheme,
    butterfly,
    hadamard_signs,
    probe_state,
    sample_coherent,
    sample_single_photon,
)

THREADS_ENV = "PHOTON_READER_THREADS"
MAX_SIM_M = 1 << 20
# amplitudes simulated per block; small enough to stay cache resident
_BLOCK_ELEMENTS = 1 << 16


class InfeasibleTarget(ValueError):
    pass


@dataclass(frozen=True)
class TrialPlan:
    scheme: ReadScheme
    m: int
    trials: int
    master_seed: int = 0
    n_s: float | None = None
    kappa: float = 1.0
    k_copies: int = 1

    def __post_init__(self):
        object.__setattr__(self, "scheme", ReadScheme(self.scheme))
        m = int(self.m)
        if m < 2 or m & (m - 1):
            raise ValueError(f"m must be a power of 2 >= 2, got {m}")
        if m > MAX_SIM_M:
            raise ValueError(f"simulation is capped at M = 2^20; got M = {m}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.k_copies < 1:
            raise ValueError("k_copies must be >= 1")
        if not 0.0 < self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")
        if self.scheme is ReadScheme.COHERENT_GM:
            if self.n_s is None or self.n_s < 0:
                raise ValueError("the coherent Green Machine plan needs n_s >= 0")
            if self.k_copies != 1:
                raise ValueError("k_copies applies to the W-state scheme only")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @property
    def block_size(self) -> int:
        return max(1, _BLOCK_ELEMENTS // self.m)

    def analytic_word_error(self) -> float:
        if self.scheme is ReadScheme.COHERENT_GM:
            return gm_word_error(self.m, self.n_s, self.kappa)
        return wstate_word_error(self.m, self.kappa, self.k_copies)

    def analytic_erasure(self) -> float:
        if self.scheme is ReadScheme.COHERENT_GM:
            return math.exp(-self.kappa * self.m * self.n_s)
        return (1.0 - self.kappa) ** self.k_copies


@dataclass(frozen=True)
class ErrorEstimate:
    p_e_hat: float
    stderr: float
    erasure_rate: float
    trials: int
    errors: int
    erasures: int
    multi_clicks: int = 0


def gm_word_error(m: int, n_s: float, kappa: float = 1.0) -> float:
    """Erasure probability times the chance a random guess is wrong."""
    return (m - 1) / m * math.exp(-kappa * m * n_s)


def wstate_word_error(m: int, kappa: float = 1.0, k_copies: int = 1) -> float:
    return (m - 1) / m * (1.0 - kappa) ** k_copies


def thread_count() -> int:
    n = int(os.environ.get(THREADS_ENV, "0") or 0)
    return n if n > 0 else (os.cpu_count() or 1)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(block,)))


def _received(plan: TrialPlan, codewords: np.ndarray) -> np.ndarray:
    """Amplitudes at the detector array for each codeword (0-based), shape (B, M)."""
    probe = probe_state(plan.scheme, plan.m, plan.n_s).amps
    # uniform real probe and unit-reflectivity {0, pi} pixels: e^{i theta} = +-1
    # exactly, so the whole block is simulated in real arithmetic
    probe = probe.real * math.sqrt(plan.kappa)
    return butterfly(hadamard_signs(plan.m, codewords) * probe)


def _run_block(plan: TrialPlan, rng: np.random.Generator, codewords: np.ndarray):
    """Simulate one block of read cycles. Returns (raw_port, decoded, multi_click).

    ``raw_port`` is the detected port before erasure resolution, -1 on erasure.
    """
    n = codewords.size
    out = _received(plan, codewords)
    if plan.scheme is ReadScheme.COHERENT_GM:
        decoded, erasure, multi, _ = sample_coherent(out, rng)
        raw = np.where(erasure, -1, decoded)
        return raw, decoded, multi
    raw = np.full(n, -1, dtype=np.int64)
    pending = np.arange(n)
    for _ in range(plan.k_copies):
        if pending.size == 0:
            break
        port, erased = sample_single_photon(out[pending], rng)
        hit = ~erased
        raw[pending[hit]] = port[hit]
        pending = pending[erased]
    decoded = raw.copy()
    lost = raw < 0
    decoded[lost] = (rng.random(int(lost.sum())) * plan.m).astype(np.int64)
    return raw, decoded, np.zeros(n, dtype=bool)


def _blocks(plan: TrialPlan):
    bs = plan.block_size
    return [(b, min(bs, plan.trials - b * bs)) for b in range(-(-plan.trials // bs))]


def _map_blocks(fn, blocks, threads: int | None):
    threads = threads or thread_count()
    if threads == 1 or len(blocks) == 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def estimate_word_error(plan: TrialPlan, threads: int | None = None) -> ErrorEstimate:
    """Word-error rate over ``plan.trials`` read cycles with uniformly random codewords."""

    def work(block):
        b, size = block
        rng = _block_rng(plan.master_seed, b)
        sent = rng.integers(plan.m, size=size)
        raw, decoded, multi = _run_block(plan, rng, sent)
        return int((decoded != sent).sum()), int((raw < 0).sum()), int(multi.sum())

    parts = _map_blocks(work, _blocks(plan), threads)
    errors = sum(p[0] for p in parts)
    erasures = sum(p[1] for p in parts)
    multi = sum(p[2] for p in parts)
    p_hat = errors / plan.trials
    return ErrorEstimate(
        p_e_hat=p_hat,
        stderr=math.sqrt(p_hat * (1.0 - p_hat) / plan.trials),
        erasure_rate=erasures / plan.trials,
        trials=plan.trials,
        errors=errors,
        erasures=erasures,
        multi_clicks=multi,
    )


def estimate_induced_channel(plan: TrialPlan, threads: int | None = None) -> TransitionMatrix:
    """Empirical M x (M+1) channel; the last column counts erasures.

    Trial ``t`` sends codeword ``t mod M`` so every row gets the same count.
    """
    per = plan.trials // plan.m
    if per < 100:
        raise ValueError(f"need at least 100 trials per codeword, got {per}")
    total = per * plan.m

    def work(block):
        b, size = block
        start = b * plan.block_size
        sent = np.arange(start, start + size) % plan.m
        rng = _block_rng(plan.master_seed, b)
        raw, _, _ = _run_block(plan, rng, sent)
        col = np.where(raw < 0, plan.m, raw)
        counts = np.zeros((plan.m, plan.m + 1), dtype=np.int64)
        np.add.at(counts, (sent, col), 1)
        return counts

    sized = TrialPlan(**{**plan.__dict__, "trials": total})
    counts = sum(_map_blocks(work, _blocks(sized), threads))
    p = counts / counts.sum(axis=1, keepdims=True)
    return TransitionMatrix(p)


@dataclass(frozen=True)
class PixelRequirement:
    scheme: ReadScheme
    m: int
    log2_m: int
    pie: float
    p_e: float
    kappa: float
    n_s: float | None = None
    k_copies: int | None = None
    pie_unit: str = "bits_per_detected_photon"


def _gm_detected_for_pie(log2_m: int, pie: float) -> float:
    """Detected photons per codeword x with log2(M)(1 - e^-x)/x = pie."""
    f = lambda x: log2_m * -math.expm1(-x) / x - pie  # noqa: E731
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    return brentq(f, 1e-300, hi, xtol=1e-14, rtol=1e-15)


def pixels_for_target(
    scheme: ReadScheme | str,
    pie_target: float,
    epsilon: float,
    kappa: float = 1.0,
    k_copies: int | None = None,
    max_log2_m: int = 256,
) -> PixelRequirement:
    """Smallest power-of-two M meeting a PIE target at word error <= epsilon.

    Coherent Green Machine: at each M the photon number is chosen so the PIE
    (bits per detected photon) equals the target exactly, then the erasure law
    is checked. W state: at each M the fewest copies K meeting epsilon are
    used (or ``k_copies`` when given) and PIE is log2(M) / (kappa K).
    """
    scheme = ReadScheme(scheme)
    if pie_target <= 0:
        raise ValueError("pie_target must be positive")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0.0 < kappa <= 1.0:
        raise ValueError("kappa must lie in (0, 1]")

    for L in range(1, max_log2_m + 1):
        m = 2**L
        frac = (m - 1) / m
        if scheme is ReadScheme.COHERENT_GM:
            if L <= pie_target:
                continue
            x = _gm_detected_for_pie(L, pie_target)
            p_e = frac * math.exp(-x)
            if p_e <= epsilon:
                return PixelRequirement(scheme, m, L, pie_target, p_e, kappa, n_s=x / (kappa * m))
            continue
        if k_copies is not None:
            k = int(k_copies)
        elif kappa == 1.0:
            k = 1
        else:
            k = max(1, math.ceil(math.log(epsilon / frac) / math.log1p(-kappa) - 1e-12))
        p_e = frac * (1.0 - kappa) ** k
        pie = L / (kappa * k)
        if p_e <= epsilon and pie >= pie_target:
            unit = "bits_per_transmitted_photon" if kappa == 1.0 else "bits_per_detected_photon"
            return PixelRequirement(scheme, m, L, pie, p_e, kappa, k_copies=k, pie_unit=unit)
    raise InfeasibleTarget(
        f"no M <= 2^{max_log2_m} reaches {pie_target} bits/photon at word error {epsilon} "
        f"({scheme.value}, kappa={kappa}, k_copies={k_copies})"
    )
