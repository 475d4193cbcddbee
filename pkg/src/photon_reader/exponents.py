"""Random-coding lower bound on the reliability function of BPSK coherent-state
reading, and the pixel budgets it implies.

For a pure-state ensemble {p_i, |psi_i>} the bound is

    E_LB(R) = max_{0<=s<=1} max_p [ -ln Tr(G_p^{1+s}) - s R ln 2 ]

with G_p = sum_i p_i |psi_i><psi_i|. For the two states |+-sqrt(n_s)> the
trace reduces to lambda_+^{1+s} + lambda_-^{1+s}, where lambda_+- are the
eigenvalues of G_p and depend only on the prior and the overlap
gamma = exp(-2 n_s). Exponents are in nats per pixel, rates in bits per pixel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dmc import LN2
from .montecarlo import InfeasibleTarget
from .transceivers import bpsk_holevo_capacity

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_S_TOL = 1e-10
_P_TOL = 1e-10
_P_GRID = 17


@dataclass(frozen=True)
class ExponentBound:
    n_s: float
    rate_bits: float
    e_lb: float
    s_star: float
    p_star: float


@dataclass(frozen=True)
class PixelBudget:
    m_ub: int
    epsilon: float
    n_s: float = math.nan
    e_lb: float = math.nan
    m_ub_exact: float = math.nan
    rate_over_capacity: float = math.nan


def gram_overlap(n_s: float) -> float:
    if n_s < 0:
        raise ValueError("n_s must be non-negative")
    return math.exp(-2.0 * n_s)


def _eigenvalues(prior, gamma):
    prior = np.asarray(prior, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    det = prior * (1.0 - prior) * (1.0 - gamma * gamma)
    d = np.sqrt(np.maximum(0.25 - det, 0.0))
    hi = 0.5 + d
    # small eigenvalue as det / hi to avoid cancellation
    return hi, det / hi


def _e0(s, prior, gamma):
    hi, lo = _eigenvalues(prior, gamma)
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_hi = hi * np.expm1(s * np.log(hi))
        t_lo = np.where(lo > 0, lo * np.expm1(s * np.log(np.where(lo > 0, lo, 1.0))), 0.0)
    return -np.log1p(t_hi + t_lo)


def _entropy_nats(prior, gamma):
    hi, lo = _eigenvalues(prior, gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -(hi * np.log(hi)) - np.where(lo > 0, lo * np.log(np.where(lo > 0, lo, 1.0)), 0.0)


def e0_pure_binary(s: float, prior: float, gamma: float) -> float:
    """-ln(lambda_+^{1+s} + lambda_-^{1+s}) in nats."""
    for name, v in (("s", s), ("prior", prior), ("gamma", gamma)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return float(_e0(s, prior, gamma))


def _max_over_s(prior, gamma, rate_nats):
    """Golden-section maximization of E0(s) - s R over s in [0, 1], vectorized.

    E0 is concave in s, so the golden-section bracket converges to the
    constrained maximizer. Where dE0/ds at s = 0 (the ensemble entropy) does
    not exceed R the optimum is s = 0 with value 0.
    """
    prior, gamma, rate_nats = np.broadcast_arrays(
        np.asarray(prior, float), np.asarray(gamma, float), np.asarray(rate_nats, float)
    )

    def f(s):
        return _e0(s, prior, gamma) - s * rate_nats

    a = np.zeros(prior.shape)
    b = np.ones(prior.shape)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(int(math.ceil(math.log(_S_TOL) / math.log(_GOLDEN)))):
        left = fc > fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = b - _GOLDEN * (b - a)
        d_new = a + _GOLDEN * (b - a)
        # reuse the surviving interior point
        c, d = np.where(left, c_new, d), np.where(left, c, d_new)
        fc_old, fd_old = fc, fd
        fc = np.where(left, f(c), fd_old)
        fd = np.where(left, fc_old, f(d))
    s = 0.5 * (a + b)
    val = f(s)
    at_one = f(np.ones(prior.shape))
    s = np.where(at_one > val, 1.0, s)
    val = np.maximum(val, at_one)
    dead = _entropy_nats(prior, gamma) <= rate_nats
    return np.where(dead, 0.0, np.maximum(val, 0.0)), np.where(dead, 0.0, s)


def _bound_arrays(n_s, rate_bits):
    """Vectorized bound: coarse prior grid, then repeated local refinement."""
    n_s = np.atleast_1d(np.asarray(n_s, float))
    rate = np.atleast_1d(np.asarray(rate_bits, float)) * LN2
    n_s, rate = np.broadcast_arrays(n_s, rate)
    gamma = np.exp(-2.0 * n_s)[..., None]
    r = rate[..., None]

    grid = np.linspace(0.0, 1.0, _P_GRID)
    priors = np.broadcast_to(grid, n_s.shape + grid.shape)
    step = grid[1] - grid[0]
    while True:
        vals, ss = _max_over_s(priors, gamma, r)
        k = np.argmax(vals, axis=-1)[..., None]
        best_p = np.take_along_axis(priors, k, -1)
        best_v = np.take_along_axis(vals, k, -1)
        best_s = np.take_along_axis(ss, k, -1)
        if step < _P_TOL:
            break
        lo = np.clip(best_p - step, 0.0, 1.0)
        hi = np.clip(best_p + step, 0.0, 1.0)
        priors = lo + (hi - lo) * grid
        step = step * 2.0 / (_P_GRID - 1)
    return best_v[..., 0], best_s[..., 0], best_p[..., 0]


def random_coding_bound(n_s: float, rate_bits: float) -> ExponentBound:
    if n_s <= 0:
        raise ValueError("n_s must be positive")
    if rate_bits < 0:
        raise ValueError("rate must be non-negative")
    e, s, p = _bound_arrays(n_s, rate_bits)
    e, s, p = float(e[0]), float(s[0]), float(p[0])
    if e == 0.0:
        # bound vanishes for every prior; the maximizer is degenerate
        s, p = 0.0, 0.5
    return ExponentBound(float(n_s), float(rate_bits), e, s, p)


def _m_ub(e_lb, epsilon):
    neg_log = -math.log(epsilon)
    with np.errstate(divide="ignore"):
        return np.where(e_lb > 0, neg_log / np.where(e_lb > 0, e_lb, 1.0), np.inf)


def _golden_min(f, a, b, tol):
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def min_pixels_for_pie(
    pie_target: float,
    epsilon: float,
    n_s_min: float = 1e-7,
    n_s_max: float = 10.0,
    grid_points: int = 241,
) -> PixelBudget:
    """Smallest random-coding pixel budget -ln(eps)/E_LB along the line R = pie * n_s."""
    if pie_target <= 0:
        raise ValueError("pie_target must be positive")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if epsilon == 1.0:
        return PixelBudget(1, epsilon, m_ub_exact=0.0)

    logs = np.linspace(math.log(n_s_min), math.log(n_s_max), grid_points)
    n_s = np.exp(logs)
    e, _, _ = _bound_arrays(n_s, pie_target * n_s)
    if not np.any(e > 0):
        raise InfeasibleTarget(f"random-coding exponent is zero along the whole {pie_target} bits/photon line")
    m = _m_ub(e, epsilon)
    k = int(np.argmin(m))
    lo, hi = logs[max(k - 1, 0)], logs[min(k + 1, logs.size - 1)]

    def objective(log_ns):
        ns = math.exp(log_ns)
        return float(_m_ub(random_coding_bound(ns, pie_target * ns).e_lb, epsilon))

    x, m_best = _golden_min(objective, lo, hi, 1e-6)
    if m_best > m[k]:
        x, m_best = logs[k], float(m[k])
    ns = math.exp(x)
    bound = random_coding_bound(ns, pie_target * ns)
    cap = bpsk_holevo_capacity(ns).capacity_bits_per_pixel
    return PixelBudget(
        max(1, math.ceil(m_best)),
        epsilon,
        n_s=ns,
        e_lb=bound.e_lb,
        m_ub_exact=m_best,
        rate_over_capacity=pie_target * ns / cap,
    )


@dataclass(frozen=True)
class ContourTable:
    """M_UB over a (pie, n_s) grid; ``m_ub[i, j]`` is at pie[i], n_s[j].

    Unbounded entries (zero exponent, at or beyond capacity) are ``inf``.
    """

    n_s: np.ndarray
    pie: np.ndarray
    epsilon: float
    e_lb: np.ndarray
    m_ub: np.ndarray
    boundary_pie: np.ndarray

    def rows(self):
        for i, pie in enumerate(self.pie):
            for j, ns in enumerate(self.n_s):
                yield float(ns), float(pie), float(self.e_lb[i, j]), float(self.m_ub[i, j])

    def line_minimum(self, i: int) -> tuple[float, float]:
        """(n_s, m_ub) minimizing M_UB along row ``i``."""
        j = int(np.argmin(self.m_ub[i]))
        return float(self.n_s[j]), float(self.m_ub[i, j])


def exponent_contours(pie_values, n_s_values, epsilon: float) -> ContourTable:
    pie = np.asarray(pie_values, float)
    n_s = np.asarray(n_s_values, float)
    if pie.ndim != 1 or n_s.ndim != 1 or pie.size == 0 or n_s.size == 0:
        raise ValueError("pie and n_s grids must be non-empty 1-D sequences")
    if np.any(pie <= 0) or np.any(n_s <= 0):
        raise ValueError("pie and n_s grid values must be positive")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    ns_grid, pie_grid = np.meshgrid(n_s, pie)
    e, _, _ = _bound_arrays(ns_grid.ravel(), (pie_grid * ns_grid).ravel())
    e = e.reshape(pie_grid.shape)
    boundary = np.array([bpsk_holevo_capacity(x).capacity_bits_per_pixel / x for x in n_s])
    return ContourTable(n_s, pie, epsilon, e, _m_ub(e, epsilon), boundary)
