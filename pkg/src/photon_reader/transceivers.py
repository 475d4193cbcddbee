"""Capacity and photon information efficiency of every probe/code/receiver pair.

Each ``*_capacity`` function returns a :class:`TransceiverCurvePoint` for a mean
photon number per pixel ``n_s``. PIE is capacity divided by the photon count it
is normalized to; the unit is carried in ``aux["pie_unit"]``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dmc import LN2, bac_capacity, binary_entropy, bsc_capacity, entropy

PER_TRANSMITTED = "bits_per_transmitted_photon"
PER_DETECTED = "bits_per_detected_photon"

_HOLEVO_SLACK = 1e-12


class SchemeId(str, enum.Enum):
    OOK_DIRECT = "OOK_DIRECT"
    BPSK_HOMODYNE = "BPSK_HOMODYNE"
    BPSK_DOLINAR = "BPSK_DOLINAR"
    QUBIT_PROBE = "QUBIT_PROBE"
    HOLEVO_UNRESTRICTED = "HOLEVO_UNRESTRICTED"
    BPSK_HOLEVO = "BPSK_HOLEVO"
    PSK_HOLEVO = "PSK_HOLEVO"
    GM_HADAMARD = "GM_HADAMARD"
    W_STATE = "W_STATE"

    @classmethod
    def parse(cls, name: str) -> "SchemeId":
        try:
            return cls[name.strip().upper().replace("-", "_")]
        except KeyError:
            raise ValueError(f"unknown scheme {name!r}; choose from {[s.name for s in cls]}") from None


@dataclass(frozen=True)
class LossModel:
    kappa: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.kappa <= 1.0):
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")


@dataclass(frozen=True)
class TransceiverCurvePoint:
    n_s: float
    capacity_bits_per_pixel: float
    pie_bits_per_photon: float
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.capacity_bits_per_pixel < 0:
            raise ValueError("capacity must be non-negative")
        g = holevo_g(self.aux.get("detected_n_s", self.n_s))
        if self.capacity_bits_per_pixel > g + _HOLEVO_SLACK:
            raise ArithmeticError(
                f"capacity {self.capacity_bits_per_pixel!r} exceeds the Holevo bound {g!r} at n_s={self.n_s}"
            )


def _point(n_s: float, capacity: float, **aux) -> TransceiverCurvePoint:
    aux.setdefault("pie_unit", PER_TRANSMITTED)
    pie = capacity / n_s if n_s > 0 else math.nan
    return TransceiverCurvePoint(float(n_s), float(capacity), pie, aux)


def _check_ns(n_s: float, strict: bool = False) -> float:
    n_s = float(n_s)
    if math.isnan(n_s) or n_s < 0 or (strict and n_s == 0):
        raise ValueError(f"n_s must be {'positive' if strict else 'non-negative'}, got {n_s}")
    return n_s


def holevo_g(x: float) -> float:
    """Holevo capacity of the pure-loss channel, (1+x)log2(1+x) - x log2 x."""
    x = float(x)
    if x < 0 or math.isnan(x):
        raise ValueError(f"x must be non-negative, got {x}")
    if x == 0:
        return 0.0
    return ((1.0 + x) * math.log1p(x) - x * math.log(x)) / LN2


def ook_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s, strict=True)
    res = bac_capacity(n_s)
    return _point(n_s, res.capacity_bits, p_star=res.on_fraction)


def homodyne_crossover(n_s: float) -> float:
    return 0.5 * math.erfc(math.sqrt(2.0 * n_s))


def bpsk_homodyne_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s)
    q = homodyne_crossover(n_s)
    return _point(n_s, bsc_capacity(q).capacity_bits, crossover=q)


def helstrom_error(n_s: float) -> float:
    """Minimum error probability for {|sqrt(n)>, |-sqrt(n)>} with equal priors."""
    # 1 - sqrt(1 - e^{-4n}) written to stay accurate at large n
    overlap2 = math.exp(-4.0 * n_s)
    return 0.5 * overlap2 / (1.0 + math.sqrt(-math.expm1(-4.0 * n_s))) if n_s > 0 else 0.5


def bpsk_dolinar_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s)
    q = helstrom_error(n_s)
    return _point(n_s, bsc_capacity(q).capacity_bits, crossover=q)


def qubit_probe_error(n_s: float) -> float:
    """Minimum error of the single-rail qubit probe on a {0, pi} pixel."""
    if n_s >= 0.5:
        return 0.0
    u = 1.0 - 2.0 * n_s
    return 0.5 * u * u / (1.0 + math.sqrt(1.0 - u * u))


def qubit_probe_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s)
    q = qubit_probe_error(n_s)
    cap = 1.0 if q == 0.0 else bsc_capacity(q).capacity_bits
    return _point(n_s, cap, crossover=q)


def holevo_unrestricted_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s)
    return _point(n_s, holevo_g(n_s))


def psk_y_distribution(n_s: float, q_ary: int) -> np.ndarray:
    """Eigenvalue distribution {y_q}, q = 1..Q, of the Q-PSK coherent-state ensemble.

    Entry ``q - 1`` of the returned array is y_q; at ``n_s = 0`` all the mass
    sits on the last entry.
    """
    n_s = _check_ns(n_s)
    q_ary = int(q_ary)
    if q_ary < 2:
        raise ValueError("q_ary must be at least 2")
    k = np.arange(1, q_ary + 1)
    phase = 2.0 * np.pi * k / q_ary
    weight = np.exp(-n_s * (1.0 - np.cos(phase)))
    q = np.arange(1, q_ary + 1)[:, None]
    y = (weight * np.cos(n_s * np.sin(phase) - phase * q)).sum(axis=1) / q_ary

    if y.min() < -1e-9 or abs(y.sum() - 1.0) >= 1e-9:
        raise ArithmeticError(f"y_q distribution invalid (min {y.min():.3e}, sum {y.sum()!r})")
    y = np.clip(y, 0.0, None)
    return y / y.sum()


def _powers_of_two(upper: int) -> list[int]:
    upper = int(upper)
    if upper < 2 or upper & (upper - 1):
        raise ValueError(f"sweep bound must be a power of 2 >= 2, got {upper}")
    return [1 << b for b in range(1, upper.bit_length())]


def psk_holevo_capacity(n_s: float, q_max: int = 32) -> TransceiverCurvePoint:
    """Max over Q in {2, 4, ..., q_max} of the Q-PSK Holevo quantity."""
    n_s = _check_ns(n_s, strict=True)
    best_q, best = 2, -1.0
    for q in _powers_of_two(q_max):
        c = entropy(psk_y_distribution(n_s, q))
        if c > best:
            best_q, best = q, c
    return _point(n_s, best, q_star=best_q)


def bpsk_holevo_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s)
    return _point(n_s, binary_entropy(0.5 * (1.0 + math.exp(-2.0 * n_s))))


def gm_rate(n_s: float, m: int) -> float:
    """Bits per pixel of the M-pixel Hadamard code read by the Green Machine."""
    return math.log2(m) * -math.expm1(-m * n_s) / m


def gm_asymptotic_m_star(n_s: float) -> float:
    """Small-n_s estimate of the optimal block length, 5 / (2 n_s ln(1/n_s))."""
    if not (0 < n_s < 1):
        return math.nan
    return 5.0 / (2.0 * n_s * math.log(1.0 / n_s))


def gm_capacity(n_s: float, m_max: int = 1 << 62) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s, strict=True)
    best_m, best = 2, -1.0
    for m in _powers_of_two(m_max):
        c = gm_rate(n_s, m)
        if c > best:
            best_m, best = m, c
    return _point(
        n_s,
        best,
        m_star=best_m,
        m_star_asymptotic=gm_asymptotic_m_star(n_s),
        truncated=best_m == m_max,
    )


def wstate_capacity(n_s: float) -> TransceiverCurvePoint:
    n_s = _check_ns(n_s, strict=True)
    if n_s > 0.5:
        raise ValueError(f"a W state spreads one photon over M >= 2 pixels, so n_s <= 1/2; got {n_s}")
    pie = -math.log2(n_s)
    aux = {"pie_unit": PER_TRANSMITTED}
    m = 1.0 / n_s
    if m == round(m) and int(m) & (int(m) - 1) == 0:
        aux["m"] = int(m)
    return TransceiverCurvePoint(n_s, n_s * pie, pie, aux)


CAPACITY_FUNCTIONS = {
    SchemeId.OOK_DIRECT: ook_capacity,
    SchemeId.BPSK_HOMODYNE: bpsk_homodyne_capacity,
    SchemeId.BPSK_DOLINAR: bpsk_dolinar_capacity,
    SchemeId.QUBIT_PROBE: qubit_probe_capacity,
    SchemeId.HOLEVO_UNRESTRICTED: holevo_unrestricted_capacity,
    SchemeId.BPSK_HOLEVO: bpsk_holevo_capacity,
    SchemeId.PSK_HOLEVO: psk_holevo_capacity,
    SchemeId.GM_HADAMARD: gm_capacity,
    SchemeId.W_STATE: wstate_capacity,
}

COHERENT_SCHEMES = frozenset(CAPACITY_FUNCTIONS) - {SchemeId.QUBIT_PROBE, SchemeId.W_STATE}


def capacity(scheme: SchemeId | str, n_s: float) -> TransceiverCurvePoint:
    if isinstance(scheme, str) and not isinstance(scheme, SchemeId):
        scheme = SchemeId.parse(scheme)
    return CAPACITY_FUNCTIONS[scheme](n_s)


def apply_loss(scheme: SchemeId | str, n_s: float, loss: LossModel) -> TransceiverCurvePoint:
    """Coherent-state scheme evaluated at the detected photon number kappa * n_s.

    Capacity stays per pixel; PIE is per detected photon.
    """
    if isinstance(scheme, str) and not isinstance(scheme, SchemeId):
        scheme = SchemeId.parse(scheme)
    if scheme not in COHERENT_SCHEMES:
        raise ValueError(f"{scheme.name} is not a coherent-state scheme; its loss model lives in montecarlo")
    n_s = _check_ns(n_s, strict=True)
    detected = loss.kappa * n_s
    pt = CAPACITY_FUNCTIONS[scheme](detected)
    aux = dict(pt.aux, pie_unit=PER_DETECTED, kappa=loss.kappa, detected_n_s=detected)
    return TransceiverCurvePoint(n_s, pt.capacity_bits_per_pixel, pt.capacity_bits_per_pixel / detected, aux)
