"""Reading a Hadamard-coded memory with a Green Machine.

A BPSK Hadamard codeword imprinted on a uniform probe is turned by the
log2(M)-stage beam-splitter butterfly into light on a single output port.
With a coherent probe the only failure is an erasure (no click anywhere);
with a single photon spread over all pixels (a W state) and no loss the
read is always correct.
"""
import numpy as np

from photon_reader import (
    ModeAmplitudes,
    PixelPattern,
    ReadScheme,
    green_machine,
    hadamard_codebook,
    modulate,
    prepare_wstate,
    read_cycle,
)

m, n_s, j = 16, 0.05, 11
book = hadamard_codebook(m)
word = book.codeword(j)
print(f"codeword {j} of M={m}: {''.join('+' if s > 0 else '-' for s in word)}")

probe = ModeAmplitudes.coherent_uniform(m, n_s)
out = green_machine(modulate(probe, PixelPattern.bpsk(word)))
energy = np.abs(out.amps) ** 2
print("output photon numbers by port:")
print("  " + " ".join(f"{e:.2f}" for e in energy))
print(f"all {m * n_s:.2f} photons land on port {int(np.argmax(energy)) + 1}")

w = prepare_wstate(64)
print(f"\nW state over 64 modes: every amplitude = {w.amps[0].real:.4f}, total photons {w.total:.3f}")
rng = np.random.default_rng(0)
reads = [read_cycle(ReadScheme.W_STATE, 64, 38, rng).decoded for _ in range(20)]
print(f"20 lossless W-state reads of codeword 38 -> {set(reads)}")

lossy = [read_cycle(ReadScheme.W_STATE, 64, 38, rng, kappa=0.5) for _ in range(2000)]
print(f"with kappa=0.5 the photon is lost in {np.mean([o.was_erasure for o in lossy]):.3f} of reads")
