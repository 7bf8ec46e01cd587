"""
Reference MIMO detectors: ZF, SIC, their LLL-aided versions, maximum
likelihood, MMSE-GDFE preprocessing and Kim-Park's improved lattice
reduction.

All detectors take the real model ``y = H x + w`` with ``x`` drawn from a
:class:`~alrmimo.constellation.Constellation` and return a
:class:`DecodeOutcome`. Internally they decode on the index lattice
``Z^m`` (see :meth:`Constellation.index_system`); that affine change of
variables is not charged to the flop count.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .constellation import Constellation
from .lattice import ReductionResult, lll_reduce
from .linalg import (FlopCounter, matvec_flops, pseudo_inverse, qr_decompose,
                     householder_flops)

__all__ = [
    "DecodeOutcome",
    "PreprocessedChannel",
    "zf_decode",
    "sic_decode",
    "lll_zf_decode",
    "lll_sic_decode",
    "ml_decode",
    "mmse_gdfe_preprocess",
    "kim_park_ilr_decode",
    "nearest_plane",
    "EXHAUSTIVE_LIMIT",
]

# largest |S|^m searched by brute force in ml_decode(method="auto")
EXHAUSTIVE_LIMIT = 4096


@dataclass
class DecodeOutcome:
    x_hat: np.ndarray
    method: str
    flops: int = 0
    lll_iterations: int = 0
    clamped: bool = False
    fallback_used: bool = False


def _counted(flops: Optional[FlopCounter]) -> FlopCounter:
    return FlopCounter() if flops is None else flops


def _finish(S, z, method, fc, start, flops, **kw) -> DecodeOutcome:
    idx, clamped = S.quantize_index(z)
    used = fc.count - start
    return DecodeOutcome(x_hat=S.from_index(idx), method=method, flops=used,
                         clamped=clamped, **kw)


def nearest_plane(H, yz, flops: Optional[FlopCounter] = None) -> np.ndarray:
    """Babai nearest-plane point of ``yz`` in ``L(H)`` (integer coordinates)."""
    H = np.asarray(H, dtype=float)
    n, m = H.shape
    Q, R = qr_decompose(H, flops=flops)
    z = Q.T @ yz
    x, f = K.back_substitute_round(R, z)
    if flops is not None:
        flops.add(matvec_flops(m, n) + f)
    return x


def zf_decode(H, y, S: Constellation,
              flops: Optional[FlopCounter] = None) -> DecodeOutcome:
    fc = _counted(flops)
    start = fc.count
    yz = S.index_system(H, y)
    P = pseudo_inverse(H, flops=fc)
    fc.add(matvec_flops(*P.shape))
    return _finish(S, np.rint(P @ yz), "zf", fc, start, flops)


def sic_decode(H, y, S: Constellation,
               flops: Optional[FlopCounter] = None) -> DecodeOutcome:
    fc = _counted(flops)
    start = fc.count
    yz = S.index_system(H, y)
    return _finish(S, nearest_plane(H, yz, fc), "sic", fc, start, flops)


def _reduction(H, reduction, fc) -> ReductionResult:
    if reduction is None:
        return lll_reduce(H, flops=fc)
    fc.add(reduction.flops)
    return reduction


def lll_zf_decode(H, y, S: Constellation, flops: Optional[FlopCounter] = None,
                  reduction: Optional[ReductionResult] = None) -> DecodeOutcome:
    """``Q_S(U rint(H_red^+ y))``.

    A precomputed ``reduction`` of ``H`` may be passed in; its flops are
    still charged to this decode.
    """
    fc = _counted(flops)
    start = fc.count
    yz = S.index_system(H, y)
    red = _reduction(H, reduction, fc)
    P = pseudo_inverse(red.h_red, flops=fc)
    fc.add(matvec_flops(*P.shape))
    xt = np.rint(P @ yz).astype(np.int64)
    return _finish(S, red.u @ xt, "lll-zf", fc, start, flops,
                   lll_iterations=red.iterations)


def lll_sic_decode(H, y, S: Constellation, flops: Optional[FlopCounter] = None,
                   reduction: Optional[ReductionResult] = None) -> DecodeOutcome:
    """Nearest-plane detection on ``H_red`` followed by ``Q_S(U x)``."""
    fc = _counted(flops)
    start = fc.count
    yz = S.index_system(H, y)
    red = _reduction(H, reduction, fc)
    xt = nearest_plane(red.h_red, yz, fc).astype(np.int64)
    return _finish(S, red.u @ xt, "lll-sic", fc, start, flops,
                   lll_iterations=red.iterations)


def _all_index_points(levels: int, m: int) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(levels)] * m), indexing="ij")
    return np.stack([g.ravel() for g in grids])


def ml_decode(H, y, S: Constellation, method: str = "auto",
              flops: Optional[FlopCounter] = None) -> DecodeOutcome:
    """Exact maximum-likelihood detection over the finite constellation.

    ``method`` is ``"exhaustive"``, ``"sphere"`` (Schnorr-Euchner search
    started from the clamped nearest-plane point) or ``"auto"``, which is
    exhaustive when ``|S|^m <= EXHAUSTIVE_LIMIT``.
    """
    fc = _counted(flops)
    start = fc.count
    H = np.asarray(H, dtype=float)
    n, m = H.shape
    yz = S.index_system(H, y)
    if method == "auto":
        method = ("exhaustive" if S.levels ** m <= EXHAUSTIVE_LIMIT
                  else "sphere")
    if method == "exhaustive":
        X = _all_index_points(S.levels, m)
        D = H @ X - yz[:, None]
        d = np.einsum("ij,ij->j", D, D)
        fc.add(X.shape[1] * (matvec_flops(n, m) + n + 2 * n - 1))
        best = X[:, int(np.argmin(d))]
    elif method == "sphere":
        Q, R = qr_decompose(H, flops=fc)
        z = Q.T @ yz
        fc.add(matvec_flops(m, n))
        best, _, f, _ = K.sphere_decode_box(R, z, S.levels)
        fc.add(f)
    else:
        raise ValueError(f"unknown ML method {method!r}")
    return DecodeOutcome(x_hat=S.from_index(best.astype(np.int64)),
                         method="ml", flops=fc.count - start)


@dataclass
class PreprocessedChannel:
    """Effective upper-triangular system ``y' = left @ y``, ``y' ~ R x``."""

    effective_h: np.ndarray
    left: np.ndarray
    regularization: float

    def transform(self, y, flops: Optional[FlopCounter] = None) -> np.ndarray:
        if flops is not None:
            flops.add(matvec_flops(*self.left.shape))
        return self.left @ np.asarray(y)


def mmse_gdfe_preprocess(H, n0: float, es: float,
                         flops: Optional[FlopCounter] = None
                         ) -> PreprocessedChannel:
    """MMSE-GDFE left preprocessing via the QR of ``[H; sqrt(N0/Es) I]``.

    With ``[H; s I] = [Q1; Q2] R`` the effective channel is ``R`` and the
    received vector becomes ``Q1^T y``.
    """
    if n0 <= 0:
        raise ValueError("N0 must be positive")
    H = np.asarray(H, dtype=float)
    n, m = H.shape
    s = np.sqrt(n0 / es)
    ext = np.vstack([H, s * np.eye(m)])
    Q, R = np.linalg.qr(ext)
    sign = np.sign(np.diag(R))
    sign[sign == 0] = 1
    Q, R = Q * sign, sign[:, None] * R
    if flops is not None:
        flops.add(householder_flops(n + m, m, form_q=True) + 1)
    return PreprocessedChannel(effective_h=R, left=Q[:n].T, regularization=s)


def kim_park_ilr_decode(H, y, S: Constellation,
                        flops: Optional[FlopCounter] = None,
                        reduction: Optional[ReductionResult] = None
                        ) -> DecodeOutcome:
    """Improved lattice reduction: augment the reduced basis with
    ``(-y; t)``, ``t`` just above ``r_mm``, size-reduce that column and read
    the message from it.

    ``r_mm`` of the QR of ``H_red`` equals the last Gram-Schmidt norm, which
    the reduction already holds. With ``t > r_mm`` the Lovasz condition on the
    new column always holds, so size reduction is the only step left.
    """
    fc = _counted(flops)
    start = fc.count
    H = np.asarray(H, dtype=float)
    n, m = H.shape
    yz = S.index_system(H, y)
    red = _reduction(H, reduction, fc)
    r_mm = np.sqrt(red.gs_norms_sq[-1])
    t = (1 + 1e-6) * r_mm
    fc.add(2)
    B = np.zeros((n + 1, m + 1))
    B[:n, :m] = red.h_red
    B[:n, m] = -yz
    B[n, m] = t
    U = np.eye(m + 1, dtype=np.int64)
    mu = np.zeros((m + 1, m + 1))
    mu[:m, :m] = red.mu
    bb = np.zeros(m + 1)
    bb[:m] = red.gs_norms_sq
    fc.add(K.extend_gso_real(B, mu, bb, m, n, t * t))
    for l in range(m - 1, -1, -1):
        st, f = K.red_real(B, U, mu, m, l)
        fc.add(f)
        if st != K.OK:
            raise OverflowError("size reduction overflowed")
    xt = U[:m, m]
    return _finish(S, red.u @ xt, "kim-park", fc, start, flops,
                   lll_iterations=red.iterations)
