"""LLL reduction on a small basis, checked against exact enumeration.

Run: python3 demos/01_lll_reduction.py
"""
import numpy as np

from alrmimo.lattice import (alpha, gso, integer_det, is_lll_reduced,
                             iteration_bound, lll_reduce)
from alrmimo.oracle import shortest_vector, successive_minima

np.set_printoptions(precision=4, suppress=True)

# Two nearly parallel columns: a skewed basis of a lattice that actually
# contains a very short vector.
H = np.array([[1.0, 0.99],
              [0.0, 0.01]])
res = lll_reduce(H)
print("reduced basis\n", res.h_red)
print("U =\n", res.u, " det U =", integer_det(res.u))
print("iterations", res.iterations, "swaps", res.swaps)

# exact shortest vector by enumeration
v, d_h, c = shortest_vector(H)
print("d_H =", d_h, "coefficients", c)
print("||first reduced column|| =", np.linalg.norm(res.h_red[:, 0]))

# A random 6x6 basis. The minimum Gram-Schmidt norm can only grow under LLL.
rng = np.random.default_rng(0)
H = rng.standard_normal((6, 6))
before = np.sqrt(gso(H).gs_norms_sq)
res = lll_reduce(H)
after = np.sqrt(res.gs_norms_sq)
print("\nGS norms before", before)
print("GS norms after ", after)
print("a(H) = %.4f -> a(H_red) = %.4f" % (before.min(), after.min()))
print("reduced?", bool(is_lll_reduced(res.h_red)))

lam = successive_minima(H)
print("successive minima", lam)
m = H.shape[1]
print("first column %.4f <= alpha^((m-1)/2) * lambda_1 = %.4f"
      % (np.linalg.norm(res.h_red[:, 0]), alpha() ** ((m - 1) / 2) * lam[0]))

# the iteration count next to its worst-case bound
K = iteration_bound(res.a_input, res.big_a_input, m)
print("K = %d, bound %.1f" % (res.iterations, K))

# the bound is loose: over many bases the mean K grows roughly linearly in m
for m in (2, 4, 6, 8, 10, 12):
    ks = [lll_reduce(rng.standard_normal((m, m))).iterations
          for _ in range(500)]
    print("m=%2d  mean K %.1f" % (m, np.mean(ks)))
