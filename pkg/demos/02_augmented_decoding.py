"""One augmented-lattice decode, step by step.

The received vector is appended to the channel basis as (-y; t). With small
noise (Hx - y; t) = (-w; t) is the shortest vector of the new lattice, and
the column of U~ that produces it reads (x; 1).

Run: python3 demos/02_augmented_decoding.py
"""
import numpy as np

from alrmimo.alr import alr_decode, build_augmented
from alrmimo.channel import sample_channel
from alrmimo.constellation import Constellation
from alrmimo.lattice import lll_reduce, lll_resume

np.set_printoptions(precision=3, suppress=True, linewidth=110)

rng = np.random.default_rng(11)
S = Constellation.qam(16)           # per real coordinate {-3, -1, 1, 3}
ch = sample_channel(2, 2, rng)      # 2x2 complex -> 4x4 real
x = S.sample(rng, 4)
y = ch.h @ x + 0.2 * rng.standard_normal(4)
print("x =", x)

# decoders work on index coordinates z = (x + 3)/2 in {0,1,2,3}
z = S.index_system(ch.h, y)
red = lll_reduce(ch.h)
aug, _ = build_augmented(ch.h, z, "v2", reduction=red)
print("t = eps * a(H_red) = %.3f * %.3f = %.3f"
      % (aug.epsilon, aug.a_hred, aug.t))
print("H~ =\n", aug.h_tilde)

# resume LLL from the already-reduced first block
B, U = aug.start_basis.copy(), aug.start_u.copy()
mu, bb = aug.start_mu.copy(), aug.start_gs_norms_sq.copy()
it, sw, _ = lll_resume(B, U, mu, bb, k_start=1)
print("extra iterations %d, swaps %d" % (it, sw))
print("U~ =\n", U)
print("column norms of reduced H~:", np.linalg.norm(B, axis=0))

col = U[:, 0]
print("first column of U~:", col, "-> index", col[:4] / col[4],
      "-> symbols", S.from_index(col[:4] // col[4]))

out = alr_decode(ch.h, y, S, epsilon="v2")
print("\nalr_decode: x_hat =", out.x_hat, " k_min =", out.k_min,
      " q =", out.q, " flops =", out.flops)
print("correct:", np.array_equal(out.x_hat, x))

# Push the noise up until the short vector is no longer unique.
for sigma in (0.2, 0.6, 1.0, 1.5):
    ok = 0
    for _ in range(2000):
        ch = sample_channel(2, 2, rng)
        x = S.sample(rng, 4)
        y = ch.h @ x + sigma * rng.standard_normal(4)
        ok += np.array_equal(alr_decode(ch.h, y, S).x_hat, x)
    print("sigma %.1f: %.1f%% of vectors decoded" % (sigma, 100 * ok / 2000))
