"""Discrete memoryless channel primitives.

Entropies are in bits. Natural-log intermediates are converted once at the
end of each computation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

LN2 = math.log(2.0)

# entropy terms with probability below this are dropped (0 log 0 = 0)
_TINY = 1e-300
_ROW_TOL = 1e-12


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix ``p[x, y] = P(y | x)``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError(f"transition matrix must be 2-D and non-empty, got shape {p.shape}")
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("transition probabilities must lie in [0, 1]")
        dev = np.abs(p.sum(axis=1) - 1.0).max()
        if dev > _ROW_TOL:
            raise ValueError(f"rows must sum to 1 (max deviation {dev:.3e})")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def rows(self) -> int:
        return self.p.shape[0]

    @property
    def cols(self) -> int:
        return self.p.shape[1]


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    maximizer: np.ndarray
    iterations: int = 0
    converged: bool = True
    gap_bits: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def on_fraction(self) -> float:
        """Probability of the second input symbol (the "on" pixel for OOK)."""
        return float(self.maximizer[1])


def _check_prob(x: float, name: str = "x") -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0) or math.isnan(x):
        raise ValueError(f"{name} must be a probability in [0, 1], got {x!r}")
    return x


def binary_entropy(x: float) -> float:
    x = _check_prob(x)
    h = 0.0
    for v in (x, 1.0 - x):
        if v > _TINY:
            h -= v * math.log(v)
    return h / LN2


def entropy(p) -> float:
    """Shannon entropy (bits) of a probability vector."""
    p = np.asarray(p, dtype=float)
    nz = p[p > _TINY]
    return float(-(nz * np.log(nz)).sum() / LN2)


def _as_distribution(px, n: int) -> np.ndarray:
    px = np.asarray(px, dtype=float)
    if px.shape != (n,):
        raise ValueError(f"input distribution has shape {px.shape}, channel expects ({n},)")
    if np.any(px < 0) or abs(px.sum() - 1.0) > _ROW_TOL:
        raise ValueError("input distribution must be non-negative and sum to 1")
    return px


def _xlogx_rows(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > _TINY
    out[mask] = p[mask] * np.log(p[mask])
    return out


def mutual_information(ch: TransitionMatrix, px) -> float:
    """I(X;Y) = H(Y) - H(Y|X) in bits."""
    px = _as_distribution(px, ch.rows)
    py = px @ ch.p
    h_y = -_xlogx_rows(py).sum()
    h_y_x = -(px * _xlogx_rows(ch.p).sum(axis=1)).sum()
    return max(float(h_y - h_y_x) / LN2, 0.0)


def _divergences(ch: np.ndarray, py: np.ndarray) -> np.ndarray:
    """D(P(.|x) || py) in nats for every input x."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(ch > _TINY, ch * (np.log(ch) - np.log(np.where(py > 0, py, 1.0))), 0.0)
    return terms.sum(axis=1)


def blahut_arimoto(ch: TransitionMatrix, tol: float = 1e-10, max_iter: int = 100_000) -> CapacityResult:
    """Channel capacity by Blahut-Arimoto iteration.

    Stops once ``max_x D(x) - sum_x r(x) D(x)`` (an upper minus a lower bound
    on capacity) falls below ``tol`` bits. On hitting ``max_iter`` the best
    iterate is returned with ``converged=False`` and a ConvergenceWarning.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = ch.p
    r = np.full(ch.rows, 1.0 / ch.rows)
    tol_nats = tol * LN2
    lower = upper = 0.0
    for it in range(1, int(max_iter) + 1):
        d = _divergences(w, r @ w)
        lower = float(r @ d)
        upper = float(d.max())
        if upper - lower < tol_nats:
            return CapacityResult(lower / LN2, r, it, True, (upper - lower) / LN2)
        # multiplicative update, shifted for numerical safety
        r = r * np.exp(d - upper)
        r /= r.sum()
    warnings.warn(
        f"Blahut-Arimoto did not converge in {max_iter} iterations (gap {(upper - lower) / LN2:.3e} bits)",
        ConvergenceWarning,
        stacklevel=2,
    )
    return CapacityResult(lower / LN2, r, int(max_iter), False, (upper - lower) / LN2)


def ook_channel(n_s: float) -> TransitionMatrix:
    """Binary asymmetric channel of on-off pixels read by direct detection.

    Input 0 (off pixel) never clicks. Input 1 clicks with probability
    ``1 - exp(-n_s)``. Outputs are ordered (no-click, click).
    """
    if n_s < 0:
        raise ValueError("n_s must be non-negative")
    miss = math.exp(-n_s)
    return TransitionMatrix(np.array([[1.0, 0.0], [miss, -math.expm1(-n_s)]]))


def ook_mutual_information(n_s: float, p: float) -> float:
    """Closed form H(p(1 - e^-n)) - p H(e^-n) for the on-off channel."""
    return binary_entropy(p * -math.expm1(-n_s)) - p * binary_entropy(math.exp(-n_s))


def ook_optimal_prior(n_s: float) -> float:
    """Capacity-achieving fraction of "on" pixels for the on-off channel."""
    if n_s < 0:
        raise ValueError("n_s must be non-negative")
    if n_s == 0:
        return 1.0 / math.e
    click = -math.expm1(-n_s)
    expo = binary_entropy(math.exp(-n_s)) / click
    return 1.0 / (click * (1.0 + 2.0 ** expo))


def bac_capacity(n_s: float) -> CapacityResult:
    if n_s < 0:
        raise ValueError("n_s must be non-negative")
    p = ook_optimal_prior(n_s)
    c = ook_mutual_information(n_s, p) if n_s > 0 else 0.0
    return CapacityResult(c, np.array([1.0 - p, p]))


def bsc_capacity(q: float) -> CapacityResult:
    q = _check_prob(q, "q")
    return CapacityResult(1.0 - binary_entropy(q), np.array([0.5, 0.5]))


def bsc_channel(q: float) -> TransitionMatrix:
    q = _check_prob(q, "q")
    return TransitionMatrix(np.array([[1.0 - q, q], [q, 1.0 - q]]))


def erasure_superchannel(m: int, p_erase: float) -> TransitionMatrix:
    """M-ary symmetric erasure channel; the last output column is the erasure."""
    m = int(m)
    if m < 2 or m & (m - 1):
        raise ValueError(f"m must be a power of 2 >= 2, got {m}")
    p_erase = _check_prob(p_erase, "p_erase")
    w = np.zeros((m, m + 1))
    w[np.arange(m), np.arange(m)] = 1.0 - p_erase
    w[:, m] = p_erase
    return TransitionMatrix(w)


def erasure_capacity(m: int, p_erase: float) -> CapacityResult:
    return CapacityResult(math.log2(m) * (1.0 - p_erase), np.full(m, 1.0 / m))
