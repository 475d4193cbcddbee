import math

import numpy as np
import pytest
from scipy.stats import chisquare

from photon_reader.optics import (
    Kind,
    ModeAmplitudes,
    PixelPattern,
    ReadScheme,
    apply_uniform_loss,
    butterfly,
    detect_coherent,
    detect_single_photon,
    green_machine,
    hadamard_codebook,
    hadamard_signs,
    modulate,
    prepare_wstate,
    read_cycle,
)


def dense_hadamard(m):
    """Sylvester matrix from the Kronecker definition."""
    h = np.array([[1.0]])
    base = np.array([[1.0, 1.0], [1.0, -1.0]])
    while h.shape[0] < m:
        h = np.kron(base, h)
    return h


def test_codebook_base_block():
    np.testing.assert_array_equal(hadamard_codebook(2).rows, [[1, 1], [1, -1]])


@pytest.mark.parametrize("m", [2, 4, 8, 16, 64])
def test_codebook_distance_property(m):
    rows = hadamard_codebook(m).rows.astype(int)
    gram = rows @ rows.T
    np.testing.assert_array_equal(gram, m * np.eye(m, dtype=int))
    agree = (rows[:, None, :] == rows[None, :, :]).sum(-1)
    off = agree[~np.eye(m, dtype=bool)]
    assert np.all(off == m // 2)


@pytest.mark.parametrize("m", [2, 8, 64, 256])
def test_codebook_rows_match_parity_rule(m):
    book = hadamard_codebook(m)
    np.testing.assert_array_equal(book.rows, hadamard_signs(m, np.arange(m)))
    np.testing.assert_array_equal(book.rows, dense_hadamard(m))
    assert np.array_equal(book.codeword(1), np.ones(m))


def test_codebook_m64_row38_is_a_codeword():
    # balanced codeword used in the 64-pixel read example
    h38 = hadamard_codebook(64).codeword(38)
    assert h38.sum() == 0
    assert (h38 == 1).sum() == 32


@pytest.mark.parametrize("m", [0, 1, 3, 12])
def test_codebook_rejects_non_powers(m):
    with pytest.raises(ValueError):
        hadamard_codebook(m)


def test_codeword_index_bounds():
    with pytest.raises(IndexError):
        hadamard_codebook(4).codeword(0)
    with pytest.raises(IndexError):
        hadamard_codebook(4).codeword(5)


def test_modulate_identity_and_block():
    state = ModeAmplitudes(np.arange(1, 5) + 1j, Kind.COHERENT)
    same = modulate(state, PixelPattern(np.ones(4), np.full(4, 2 * math.pi)))
    np.testing.assert_allclose(same.amps, state.amps, atol=1e-14)
    dark = modulate(state, PixelPattern(np.zeros(4), np.ones(4)))
    assert np.all(dark.amps == 0)
    photon = modulate(prepare_wstate(4), PixelPattern(np.zeros(4), np.ones(4)))
    assert photon.total == 0.0
    with pytest.raises(ValueError):
        modulate(state, PixelPattern(np.ones(8), np.zeros(8)))


def test_modulate_bpsk_codeword():
    n_s, m = 0.3, 16
    h = hadamard_codebook(m).codeword(7)
    out = modulate(ModeAmplitudes.coherent_uniform(m, n_s), PixelPattern.bpsk(h))
    np.testing.assert_allclose(out.amps, math.sqrt(n_s) * h, atol=1e-15)
    assert out.total == pytest.approx(m * n_s, abs=1e-13)


def test_pixel_pattern_validation():
    with pytest.raises(ValueError):
        PixelPattern(np.array([0.5, 1.2]), np.zeros(2))
    with pytest.raises(ValueError):
        PixelPattern(np.ones(2), np.zeros(3))


def test_single_beam_splitter():
    out = butterfly(np.array([1.0, 0.0]))
    np.testing.assert_allclose(out, [math.sqrt(0.5), math.sqrt(0.5)], atol=1e-16)


@pytest.mark.parametrize("m", [2, 4, 8, 16])
def test_butterfly_equals_dense_matrix(m):
    rng = np.random.default_rng(m)
    x = rng.normal(size=(100, m)) + 1j * rng.normal(size=(100, m))
    expected = x @ dense_hadamard(m).T / math.sqrt(m)
    np.testing.assert_allclose(butterfly(x), expected, atol=1e-12, rtol=0)


@pytest.mark.parametrize("log2m", [1, 3, 7, 12, 16, 20])
def test_green_machine_unitary(log2m):
    m = 1 << log2m
    rng = np.random.default_rng(log2m)
    for kind in Kind:
        amps = rng.normal(size=m) + 1j * rng.normal(size=m)
        if kind is Kind.SINGLE_PHOTON:
            amps /= np.linalg.norm(amps)
        state = ModeAmplitudes(amps, kind)
        out = green_machine(state)
        assert out.kind is kind
        assert out.total == pytest.approx(state.total, rel=1e-12)


@pytest.mark.parametrize("m", [2, 16, 1024])
def test_green_machine_is_an_involution(m):
    rng = np.random.default_rng(0)
    x = rng.normal(size=m) + 1j * rng.normal(size=m)
    np.testing.assert_allclose(butterfly(butterfly(x)), x, atol=1e-12)


@pytest.mark.parametrize("m", [2, 8, 64, 512])
def test_codeword_lands_on_its_port(m):
    n_s = 0.05
    book = hadamard_codebook(m)
    for j in range(1, m + 1):
        state = modulate(ModeAmplitudes.coherent_uniform(m, n_s), PixelPattern.bpsk(book.codeword(j)))
        energy = np.abs(green_machine(state).amps) ** 2
        assert energy[j - 1] == pytest.approx(m * n_s, rel=1e-12)
        assert energy.sum() - energy[j - 1] < 1e-20 * energy.sum()


def test_wstate_preparation():
    np.testing.assert_allclose(prepare_wstate(2).amps, [math.sqrt(0.5)] * 2, atol=1e-16)
    w8 = prepare_wstate(8)
    assert w8.kind is Kind.SINGLE_PHOTON
    np.testing.assert_allclose(w8.amps, 1 / math.sqrt(8), atol=1e-15)
    assert w8.total == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(prepare_wstate(64).amps, np.full(64, 1 / 8), atol=1e-12)


def test_uniform_loss():
    s = ModeAmplitudes.coherent_uniform(8, 0.5)
    assert apply_uniform_loss(s, 1.0).total == s.total
    assert apply_uniform_loss(s, 0.5).total == pytest.approx(s.total / 2)
    assert apply_uniform_loss(prepare_wstate(32), 0.9).total == pytest.approx(0.9, abs=1e-14)
    for bad in (0.0, 1.1):
        with pytest.raises(ValueError):
            apply_uniform_loss(s, bad)


def test_single_photon_norm_guard():
    with pytest.raises(ValueError):
        ModeAmplitudes(np.ones(4), Kind.SINGLE_PHOTON)


def test_detect_coherent_bright_port():
    m, total = 8, 20.0
    amps = np.zeros(m, complex)
    amps[2] = math.sqrt(total)
    rng = np.random.default_rng(3)
    out = [detect_coherent(ModeAmplitudes(amps, Kind.COHERENT), rng) for _ in range(2000)]
    assert all(o.decoded == 3 and not o.was_erasure for o in out)
    assert all(o.clicks == (3,) for o in out)


def test_detect_coherent_vacuum_is_uniform_erasure():
    m = 8
    rng = np.random.default_rng(5)
    vac = ModeAmplitudes(np.zeros(m), Kind.COHERENT)
    outs = [detect_coherent(vac, rng) for _ in range(8000)]
    assert all(o.was_erasure and o.clicks == () for o in outs)
    counts = np.bincount([o.decoded - 1 for o in outs], minlength=m)
    assert chisquare(counts).pvalue > 0.01


def test_detect_coherent_multi_click_policy():
    amps = np.zeros(4, complex)
    amps[[0, 3]] = 10.0
    rng = np.random.default_rng(1)
    outs = [detect_coherent(ModeAmplitudes(amps, Kind.COHERENT), rng) for _ in range(400)]
    assert all(o.multi_click and o.clicks == (1, 4) for o in outs)
    decoded = {o.decoded for o in outs}
    assert decoded == {1, 4}


def test_detect_single_photon():
    rng = np.random.default_rng(0)
    e3 = np.zeros(8, complex)
    e3[2] = 1.0
    outs = [detect_single_photon(ModeAmplitudes(e3, Kind.SINGLE_PHOTON), rng) for _ in range(200)]
    assert all(o.decoded == 3 and not o.was_erasure for o in outs)
    port = detect_single_photon(green_machine(prepare_wstate(16)), rng)
    assert port.decoded == 1 and port.clicks == (1,)
    with pytest.raises(ValueError):
        detect_single_photon(ModeAmplitudes.coherent_uniform(4, 1.0), rng)
    with pytest.raises(ValueError):
        detect_coherent(prepare_wstate(4), rng)


def test_single_photon_loss_erasure_fraction():
    n = 100_000
    rng = np.random.default_rng(11)
    state = green_machine(apply_uniform_loss(prepare_wstate(16), 0.5))
    erased = sum(detect_single_photon(state, rng).was_erasure for _ in range(n))
    sigma = math.sqrt(0.25 / n)
    assert abs(erased / n - 0.5) <= 3 * sigma


def test_read_cycle_m64_codeword38():
    rng = np.random.default_rng(38)
    for _ in range(50):
        assert read_cycle(ReadScheme.W_STATE, 64, 38, rng).decoded == 38


@pytest.mark.parametrize("scheme", list(ReadScheme))
def test_read_cycle_two_pixels_error_free(scheme):
    rng = np.random.default_rng(2)
    for j in (1, 2):
        for _ in range(100):
            out = read_cycle(scheme, 2, j, rng, n_s=20.0)
            assert out.decoded == j


@pytest.mark.parametrize("m", [2, 4, 8, 16, 32, 64, 128, 256])
def test_wstate_zero_error_every_codeword(m):
    rng = np.random.default_rng(m)
    for j in range(1, m + 1):
        assert read_cycle("W_STATE", m, j, rng).decoded == j


def test_read_cycle_needs_n_s_for_coherent():
    with pytest.raises(ValueError):
        read_cycle("COHERENT_GM", 4, 1, np.random.default_rng(0))
