"""Real versus complex augmented lattice reduction.

The complex decoder reduces an (N+1) x (M+1) complex matrix with
Gaussian-integer LLL instead of the 2N+1 by 2M+1 real one.

Run: python3 demos/05_complex_vs_real.py
"""
import numpy as np

from alrmimo.alr import alr_decode, complex_alr_decode
from alrmimo.channel import db_to_linear, sample_channel, snr_to_n0
from alrmimo.constellation import Constellation

S = Constellation.qam(16)
rng = np.random.default_rng(5)

for M in (2, 4, 6):
    n0 = snr_to_n0(db_to_linear(14.0), M, S.avg_energy)
    fr = fc = er = ec = same = 0
    T = 2000
    for _ in range(T):
        ch = sample_channel(M, M, rng)
        x = S.sample(rng, 2 * M)
        y = ch.h @ x + np.sqrt(n0 / 2) * rng.standard_normal(2 * M)
        a = alr_decode(ch.h, y, S)
        b = complex_alr_decode(ch.hc, y[:M] + 1j * y[M:], S)
        fr += a.flops
        fc += b.flops
        er += np.count_nonzero(a.x_hat != x)
        ec += np.count_nonzero(b.x_hat != x)
        same += np.array_equal(a.x_hat, b.x_hat)
    print("%dx%d: flops real %.0f complex %.0f (saving %.0f%%); "
          "coordinate errors %d vs %d; identical decisions %.1f%%"
          % (M, M, fr / T, fc / T, 100 * (1 - fc / fr), er, ec,
             100 * same / T))
