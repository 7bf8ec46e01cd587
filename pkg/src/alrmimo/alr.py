"""
Augmented lattice reduction (ALR) decoding.

The received vector is appended to the channel basis as an extra column
``(-y; t)``. When the noise is small, ``(Hx - y; t)`` is by far the
shortest vector of the augmented lattice, LLL finds it, and the message is
read off the change-of-basis matrix: the column of ``U~`` producing it is
``(q x; q)`` with ``|q| = 1``.

The reduction of ``H`` itself is reused: the augmented basis starts from
``[H_red, -y; 0, t]`` with the accumulated unimodular block, and LLL resumes
from ``k = 1`` (0-based).
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from . import _kernels as K
from .constellation import Constellation
from .detectors import DecodeOutcome, lll_sic_decode
from .lattice import (DEFAULT_DELTA, ReductionResult, alpha,
                      complex_lll_reduce, lll_reduce, lll_resume)
from .linalg import FlopCounter, qr_decompose

__all__ = [
    "AugmentedBasis",
    "AlrDecodeResult",
    "epsilon_diversity",
    "epsilon_optimized",
    "resolve_epsilon",
    "build_augmented",
    "alr_decode",
    "complex_alr_decode",
    "EPSILON_PRESETS",
]

Epsilon = Union[float, str]


def epsilon_diversity(m: int, delta: float = DEFAULT_DELTA) -> float:
    """Largest ``eps`` for which the decoder provably keeps full receive
    diversity: ``1 / (2 sqrt(2) alpha^(m - 1/2))``."""
    if m < 1:
        raise ValueError("m must be positive")
    return 1.0 / (2.0 * math.sqrt(2.0) * alpha(delta) ** (m - 0.5))


def epsilon_optimized(m: int) -> float:
    """Empirically tuned ``eps = 2^(-m/4)``."""
    if m < 1:
        raise ValueError("m must be positive")
    return 2.0 ** (-m / 4.0)


EPSILON_PRESETS = {"v1": epsilon_diversity, "v2": epsilon_optimized}


def resolve_epsilon(epsilon: Epsilon, m: int,
                    delta: float = DEFAULT_DELTA) -> float:
    if isinstance(epsilon, str):
        if epsilon == "v1":
            return epsilon_diversity(m, delta)
        if epsilon == "v2":
            return epsilon_optimized(m)
        raise ValueError(f"unknown epsilon preset {epsilon!r}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return float(epsilon)


@dataclass
class AugmentedBasis:
    """Augmented basis ``h_tilde = [H, -y; 0, t]`` with ``t = epsilon * a_hred``.

    ``start_basis = h_tilde @ start_u`` is the point the reduction resumes
    from: reduced first columns, and its Gram-Schmidt data in
    ``start_mu``/``start_gs_norms_sq``.
    """

    h_tilde: np.ndarray
    t: float
    epsilon: float
    a_hred: float
    start_basis: np.ndarray
    start_u: np.ndarray
    start_mu: np.ndarray
    start_gs_norms_sq: np.ndarray


@dataclass
class AlrDecodeResult(DecodeOutcome):
    k_min: int = 0
    q: complex = 0
    t: float = 0.0


def build_augmented(H, y, epsilon: Epsilon,
                    reduction: Optional[ReductionResult] = None,
                    flops: Optional[FlopCounter] = None,
                    delta: float = DEFAULT_DELTA
                    ) -> Tuple[AugmentedBasis, ReductionResult]:
    """Reduce ``H`` (unless ``reduction`` is given), pick ``t`` and assemble
    the augmented basis. Works for real and complex ``H``.

    Flops of the reduction are charged only when it is computed here.
    """
    is_complex = np.iscomplexobj(H) or np.iscomplexobj(y)
    dtype = complex if is_complex else float
    H = np.asarray(H, dtype=dtype)
    y = np.asarray(y, dtype=dtype)
    n, m = H.shape
    if y.shape != (n,):
        raise ValueError(f"y must have length {n}")
    if reduction is None:
        reducer = complex_lll_reduce if is_complex else lll_reduce
        reduction = reducer(H, delta=delta, flops=flops)
    real_m = 2 * m if is_complex else m
    eps = resolve_epsilon(epsilon, real_m, delta)
    t = eps * reduction.a
    h_tilde = np.zeros((n + 1, m + 1), dtype=dtype)
    h_tilde[:n, :m] = H
    h_tilde[:n, m] = -y
    h_tilde[n, m] = t
    start = h_tilde.copy()
    start[:n, :m] = reduction.h_red
    u = np.zeros((m + 1, m + 1), dtype=reduction.u.dtype)
    u[:m, :m] = reduction.u
    u[m, m] = 1
    mu = np.zeros((m + 1, m + 1), dtype=dtype)
    mu[:m, :m] = reduction.mu
    bb = np.zeros(m + 1)
    bb[:m] = reduction.gs_norms_sq
    extend = K.extend_gso_complex if is_complex else K.extend_gso_real
    f = extend(start, mu, bb, m, n, t * t)
    if flops is not None:
        flops.add(f + 2)
    aug = AugmentedBasis(h_tilde=h_tilde, t=t, epsilon=eps, a_hred=reduction.a,
                         start_basis=start, start_u=u, start_mu=mu,
                         start_gs_norms_sq=bb)
    return aug, reduction


def _reduce_augmented(aug: AugmentedBasis, delta: float):
    B = aug.start_basis.copy()
    U = aug.start_u.copy()
    mu = aug.start_mu.copy()
    bb = aug.start_gs_norms_sq.copy()
    it, _, f = lll_resume(B, U, mu, bb, 1, delta)
    return B, U, it, f


def _pick_column(B, U, n, variant, fc, complex_units=False) -> int:
    m1 = U.shape[1]
    if variant == "first":
        return 0
    if variant != "kmin":
        raise ValueError(f"unknown ALR variant {variant!r}")
    q_row = U[m1 - 1]
    cand = np.flatnonzero(np.abs(q_row) == 1)
    if cand.size == 0:
        return 0
    # ||H u_k - y|| is the norm of the top block of reduced column k
    top = B[:n, cand]
    res = np.sum(np.abs(top) ** 2, axis=0)
    fc.add(cand.size * ((4 if complex_units else 2) * n - 1))
    return int(cand[np.argmin(res)])


def alr_decode(H, y, S: Constellation, epsilon: Epsilon = "v2",
               variant: str = "kmin", flops: Optional[FlopCounter] = None,
               reduction: Optional[ReductionResult] = None,
               delta: float = DEFAULT_DELTA) -> AlrDecodeResult:
    """Decode ``y = H x + w`` by augmented lattice reduction.

    ``variant="first"`` reads the first column of ``U~``;
    ``variant="kmin"`` picks, among columns whose last entry is ``+-1``, the
    one with the smallest residual ``||H u_k - y||`` (smallest index on
    ties), falling back to the first column when there is none. If the
    chosen column has last entry 0, the LLL-SIC estimate from the already
    reduced ``H`` is returned and ``fallback_used`` is set.

    ``reduction`` may carry a precomputed LLL reduction of ``H``; its flops
    are charged to this decode either way.
    """
    fc = FlopCounter() if flops is None else flops
    start = fc.count
    H = np.asarray(H, dtype=float)
    n, m = H.shape
    yz = S.index_system(H, y)
    if reduction is None:
        reduction = lll_reduce(H, delta=delta, flops=fc)
    else:
        fc.add(reduction.flops)
    aug, _ = build_augmented(H, yz, epsilon, reduction=reduction, flops=fc,
                             delta=delta)
    B, U, it, f = _reduce_augmented(aug, delta)
    fc.add(f)
    iterations = reduction.iterations + it
    k = _pick_column(B, U, n, variant, fc)
    q = int(U[m, k])
    if q == 0:
        sic = lll_sic_decode(H, y, S, flops=FlopCounter(), reduction=reduction)
        fc.add(sic.flops - reduction.flops)
        return AlrDecodeResult(x_hat=sic.x_hat, method="alr",
                               flops=fc.count - start,
                               lll_iterations=iterations, clamped=sic.clamped,
                               fallback_used=True, k_min=k, q=0, t=aug.t)
    fc.add(m)
    idx, clamped = S.quantize_index(U[:m, k] / q)
    return AlrDecodeResult(x_hat=S.from_index(idx), method="alr",
                           flops=fc.count - start, lll_iterations=iterations,
                           clamped=clamped, k_min=k, q=q, t=aug.t)


def _complex_index_system(S: Constellation, Hc, yc):
    return (yc - S.offset * (1 + 1j) * Hc.sum(axis=1)) / S.step


def _complex_quantize(S: Constellation, zc):
    zr, c1 = S.quantize_index(zc.real)
    zi, c2 = S.quantize_index(zc.imag)
    return S.from_index(np.concatenate([zr, zi])), c1 or c2


def _complex_nearest_plane(Hred, yz, fc):
    Q, R = qr_decompose(Hred)
    N, M = Hred.shape
    z = Q.conj().T @ yz
    x = np.zeros(M, dtype=complex)
    for i in range(M - 1, -1, -1):
        s = z[i] - R[i, i + 1:] @ x[i + 1:]
        c = s / R[i, i].real
        x[i] = np.rint(c.real) + 1j * np.rint(c.imag)
        fc.add(8 * (M - 1 - i) + 2)
    fc.add(4 * (2 * N * M * M) + M * (8 * N - 2))
    return x


def complex_alr_decode(Hc, yc, S: Constellation, epsilon: Epsilon = "v2",
                       variant: str = "kmin",
                       flops: Optional[FlopCounter] = None,
                       reduction: Optional[ReductionResult] = None,
                       delta: float = DEFAULT_DELTA) -> AlrDecodeResult:
    """ALR on the complex ``(N+1) x (M+1)`` augmented matrix with complex LLL.

    ``epsilon`` presets are evaluated at the real dimension ``m = 2M`` so that
    ``t`` matches the real decoder. The selected column must end in a
    Gaussian unit ``q`` in ``{1, -1, i, -i}``. ``x_hat`` is returned in the
    real ``(Re; Im)`` layout.
    """
    fc = FlopCounter() if flops is None else flops
    start = fc.count
    Hc = np.asarray(Hc, dtype=complex)
    yc = np.asarray(yc, dtype=complex)
    N, M = Hc.shape
    yz = _complex_index_system(S, Hc, yc)
    if reduction is None:
        reduction = complex_lll_reduce(Hc, delta=delta, flops=fc)
    else:
        fc.add(reduction.flops)
    aug, _ = build_augmented(Hc, yz, epsilon, reduction=reduction, flops=fc,
                             delta=delta)
    B, U, it, f = _reduce_augmented(aug, delta)
    fc.add(f)
    iterations = reduction.iterations + it
    k = _pick_column(B, U, N, variant, fc, complex_units=True)
    q = U[M, k]
    if q == 0:
        xt = _complex_nearest_plane(reduction.h_red, yz, fc)
        x_hat, clamped = _complex_quantize(S, reduction.u @ xt)
        return AlrDecodeResult(x_hat=x_hat, method="calr",
                               flops=fc.count - start,
                               lll_iterations=iterations, clamped=clamped,
                               fallback_used=True, k_min=k, q=0, t=aug.t)
    # division by a Gaussian integer: 6 flops for the product with conj(q),
    # 2 for the real scaling, per entry
    fc.add(8 * M + 3)
    x_hat, clamped = _complex_quantize(S, U[:M, k] / q)
    return AlrDecodeResult(x_hat=x_hat, method="calr", flops=fc.count - start,
                           lll_iterations=iterations, clamped=clamped,
                           k_min=k, q=complex(q), t=aug.t)
