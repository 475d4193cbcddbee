"""Quantum limits of optical reading: capacities, photon efficiency, error
exponents, and a linear-optics simulator of Hadamard-coded readers."""

__version__ = "0.1.0"

from .dmc import (
    CapacityResult,
    TransitionMatrix,
    bac_capacity,
    binary_entropy,
    blahut_arimoto,
    bsc_capacity,
    erasure_superchannel,
    mutual_information,
)
from .exponents import (
    ExponentBound,
    PixelBudget,
    e0_pure_binary,
    exponent_contours,
    gram_overlap,
    min_pixels_for_pie,
    random_coding_bound,
)
from .montecarlo import (
    ErrorEstimate,
    InfeasibleTarget,
    TrialPlan,
    estimate_induced_channel,
    estimate_word_error,
    pixels_for_target,
)
from .optics import (
    DetectionOutcome,
    HadamardCodebook,
    Kind,
    ModeAmplitudes,
    PixelPattern,
    ReadScheme,
    apply_uniform_loss,
    detect_coherent,
    detect_single_photon,
    green_machine,
    hadamard_codebook,
    modulate,
    prepare_wstate,
    read_cycle,
)
from .transceivers import (
    LossModel,
    SchemeId,
    TransceiverCurvePoint,
    apply_loss,
    bpsk_dolinar_capacity,
    bpsk_holevo_capacity,
    bpsk_homodyne_capacity,
    capacity,
    gm_capacity,
    holevo_g,
    ook_capacity,
    psk_holevo_capacity,
    psk_y_distribution,
    qubit_probe_capacity,
    wstate_capacity,
)
