"""Linear-optics simulator for Hadamard-coded optical reading.

Mode amplitudes are complex vectors over M spatial modes. For coherent light
they are the coherent-state amplitudes (sqrt photons); for a single photon they
are the photon's wavefunction over modes, whose squared norm may drop below one
when loss is applied.

Codeword and port indices in the public API are 1-based, matching the way the
Hadamard codewords h_1 ... h_M are usually labelled. ``h_1`` is the all-ones
word.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

SQRT_HALF = math.sqrt(0.5)
TWO_PI = 2.0 * math.pi


class Kind(str, enum.Enum):
    COHERENT = "COHERENT"
    SINGLE_PHOTON = "SINGLE_PHOTON"


def _check_power_of_two(m: int, name: str = "m") -> int:
    m = int(m)
    if m < 2 or m & (m - 1):
        raise ValueError(f"{name} must be a power of 2 >= 2, got {m}")
    return m


@dataclass(frozen=True)
class ModeAmplitudes:
    amps: np.ndarray
    kind: Kind

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amps must be a 1-D vector")
        _check_power_of_two(amps.size, "number of modes")
        if self.kind is Kind.SINGLE_PHOTON and self.norm2(amps) > 1.0 + 1e-9:
            raise ValueError("single-photon wavefunction has squared norm above 1")
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "kind", Kind(self.kind))

    @staticmethod
    def norm2(amps) -> float:
        return float(np.vdot(amps, amps).real)

    @property
    def m(self) -> int:
        return self.amps.size

    @property
    def total(self) -> float:
        """Mean photon number (coherent) or detection probability (single photon)."""
        return self.norm2(self.amps)

    @classmethod
    def coherent_uniform(cls, m: int, n_s: float) -> "ModeAmplitudes":
        return cls(np.full(_check_power_of_two(m), math.sqrt(n_s), dtype=complex), Kind.COHERENT)


@dataclass(frozen=True)
class PixelPattern:
    """Per-pixel power reflectivity and carrier phase."""

    etas: np.ndarray
    thetas: np.ndarray

    def __post_init__(self):
        etas = np.asarray(self.etas, dtype=float)
        thetas = np.asarray(self.thetas, dtype=float)
        if etas.shape != thetas.shape or etas.ndim != 1:
            raise ValueError("etas and thetas must be 1-D and of equal length")
        if np.any(etas < 0) or np.any(etas > 1):
            raise ValueError("reflectivities must lie in [0, 1]")
        object.__setattr__(self, "etas", etas)
        object.__setattr__(self, "thetas", thetas)

    @property
    def factors(self) -> np.ndarray:
        return np.sqrt(self.etas) * np.exp(1j * self.thetas)

    @classmethod
    def bpsk(cls, signs) -> "PixelPattern":
        """Unit-reflectivity pattern: +1 -> phase 2*pi, -1 -> phase pi."""
        signs = np.asarray(signs)
        return cls(np.ones(signs.shape), np.where(signs > 0, TWO_PI, math.pi))


def hadamard_signs(m: int, rows) -> np.ndarray:
    """Sylvester-Hadamard rows (0-based indices) as int8 arrays of +1/-1.

    Entry (i, k) is (-1)^popcount(i & k).
    """
    rows = np.atleast_1d(np.asarray(rows, dtype=np.int64))
    cols = np.arange(m, dtype=np.int64)
    parity = np.bitwise_count(rows[:, None] & cols[None, :]) & 1
    return (1 - 2 * parity).astype(np.int8)


@dataclass(frozen=True)
class HadamardCodebook:
    m: int

    def __post_init__(self):
        _check_power_of_two(self.m)

    def codeword(self, j: int) -> np.ndarray:
        """Codeword h_j, 1 <= j <= m."""
        if not 1 <= j <= self.m:
            raise IndexError(f"codeword index {j} outside 1..{self.m}")
        return hadamard_signs(self.m, j - 1)[0]

    @cached_property
    def rows(self) -> np.ndarray:
        h = np.array([[1]], dtype=np.int8)
        while h.shape[0] < self.m:
            h = np.block([[h, h], [h, -h]])
        return h


def hadamard_codebook(m: int) -> HadamardCodebook:
    return HadamardCodebook(_check_power_of_two(m))


def modulate_array(amps: np.ndarray, factors: np.ndarray) -> np.ndarray:
    return amps * factors


def modulate(state: ModeAmplitudes, pattern: PixelPattern) -> ModeAmplitudes:
    if pattern.etas.size != state.m:
        raise ValueError(f"pattern has {pattern.etas.size} pixels, state has {state.m} modes")
    return ModeAmplitudes(modulate_array(state.amps, pattern.factors), state.kind)


def butterfly(amps: np.ndarray) -> np.ndarray:
    """Normalized Walsh-Hadamard transform along the last axis.

    log2(M) identical stages of M/2 balanced beam splitters. Each stage mixes
    neighbouring modes (2i, 2i+1) into ((a+b)/sqrt2, (a-b)/sqrt2) and routes
    the sum to output i and the difference to output i + M/2 (a perfect
    shuffle between stages). The result is H_M x / sqrt(M) in Sylvester
    order. Real input stays real. Works on batches.
    """
    x = np.asarray(amps)
    if not np.iscomplexobj(x):
        x = x.astype(float)
    m = x.shape[-1]
    _check_power_of_two(m, "number of modes")
    half = m // 2
    x = x.copy()
    out = np.empty_like(x)
    for _ in range(m.bit_length() - 1):
        even, odd = x[..., 0::2], x[..., 1::2]
        np.add(even, odd, out=out[..., :half])
        np.subtract(even, odd, out=out[..., half:])
        out *= SQRT_HALF
        x, out = out, x
    return x


def green_machine(state: ModeAmplitudes) -> ModeAmplitudes:
    return ModeAmplitudes(butterfly(state.amps), state.kind)


def prepare_wstate(m: int) -> ModeAmplitudes:
    """Single photon spread uniformly over m modes by a tree of 50-50 splitters."""
    m = _check_power_of_two(m)
    photon = np.zeros(m, dtype=complex)
    photon[0] = 1.0
    return ModeAmplitudes(butterfly(photon), Kind.SINGLE_PHOTON)


def apply_uniform_loss(state: ModeAmplitudes, kappa: float) -> ModeAmplitudes:
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
    return ModeAmplitudes(state.amps * math.sqrt(kappa), state.kind)


@dataclass(frozen=True)
class DetectionOutcome:
    clicks: tuple
    decoded: int
    was_erasure: bool
    multi_click: bool = False


def sample_coherent(amps: np.ndarray, rng: np.random.Generator):
    """Click-level sampling of a batch of coherent outputs, shape (B, M).

    Returns 0-based decoded ports, erasure flags, multi-click flags and the
    click matrix. Erasures decode uniformly over all ports; multiple clicks
    decode uniformly among the clicked ports.
    """
    amps = np.atleast_2d(amps)
    b, m = amps.shape
    p_click = -np.expm1(-(amps.real**2 + amps.imag**2))
    clicks = rng.random((b, m)) < p_click
    n_clicks = clicks.sum(axis=1)
    guess = rng.random(b)
    decoded = np.argmax(clicks, axis=1)
    erasure = n_clicks == 0
    decoded[erasure] = (guess[erasure] * m).astype(np.int64)
    multi = n_clicks > 1
    if np.any(multi):
        for i in np.flatnonzero(multi):
            ports = np.flatnonzero(clicks[i])
            decoded[i] = ports[int(guess[i] * ports.size)]
    return decoded, erasure, multi, clicks


def sample_single_photon(amps: np.ndarray, rng: np.random.Generator):
    """One categorical draw per row over the M ports plus "photon lost".

    Returns 0-based decoded ports and erasure flags; erasures decode uniformly.
    """
    amps = np.atleast_2d(amps)
    b, m = amps.shape
    probs = amps.real**2 + amps.imag**2
    cum = np.cumsum(probs, axis=1)
    if cum[:, -1].max() > 1.0 + 1e-9:
        raise ValueError("single-photon wavefunction has squared norm above 1")
    u = rng.random(b)
    port = (cum < u[:, None]).sum(axis=1)
    erasure = port >= m
    guess = rng.random(b)
    port[erasure] = (guess[erasure] * m).astype(np.int64)
    return port, erasure


def detect_coherent(state: ModeAmplitudes, rng: np.random.Generator) -> DetectionOutcome:
    if state.kind is not Kind.COHERENT:
        raise ValueError("detect_coherent needs a coherent state")
    decoded, erasure, multi, clicks = sample_coherent(state.amps[None, :], rng)
    return DetectionOutcome(
        tuple(int(k) + 1 for k in np.flatnonzero(clicks[0])),
        int(decoded[0]) + 1,
        bool(erasure[0]),
        bool(multi[0]),
    )


def detect_single_photon(state: ModeAmplitudes, rng: np.random.Generator) -> DetectionOutcome:
    if state.kind is not Kind.SINGLE_PHOTON:
        raise ValueError("detect_single_photon needs a single-photon state")
    port, erasure = sample_single_photon(state.amps[None, :], rng)
    clicks = () if erasure[0] else (int(port[0]) + 1,)
    return DetectionOutcome(clicks, int(port[0]) + 1, bool(erasure[0]))


class ReadScheme(str, enum.Enum):
    COHERENT_GM = "COHERENT_GM"
    W_STATE = "W_STATE"


def probe_state(scheme: ReadScheme, m: int, n_s: float | None = None) -> ModeAmplitudes:
    scheme = ReadScheme(scheme)
    if scheme is ReadScheme.W_STATE:
        return prepare_wstate(m)
    if n_s is None or n_s < 0:
        raise ValueError("the coherent probe needs a non-negative n_s")
    return ModeAmplitudes.coherent_uniform(m, n_s)


def read_cycle(
    scheme: ReadScheme | str,
    m: int,
    codeword_index: int,
    rng: np.random.Generator,
    n_s: float | None = None,
    kappa: float = 1.0,
) -> DetectionOutcome:
    """Prepare, modulate with codeword ``codeword_index``, attenuate, decode, detect."""
    scheme = ReadScheme(scheme)
    book = hadamard_codebook(m)
    state = probe_state(scheme, m, n_s)
    state = modulate(state, PixelPattern.bpsk(book.codeword(codeword_index)))
    state = apply_uniform_loss(state, kappa)
    state = green_machine(state)
    if scheme is ReadScheme.W_STATE:
        return detect_single_photon(state, rng)
    return detect_coherent(state, rng)
