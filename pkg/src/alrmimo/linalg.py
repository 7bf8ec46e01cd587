"""
Dense matrix helpers shared by the decoders: QR, pseudo-inverse, the
complex-to-real embedding, and flop accounting.

Flops are counted the way the cost experiments need them: every real
addition, multiplication, division or square root is one flop, a complex
addition is 2 and a complex multiplication is 6. Rounding, comparisons and
integer arithmetic are free.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "RankDeficientError",
    "FlopCounter",
    "flop_scope",
    "qr_decompose",
    "pseudo_inverse",
    "realify",
    "realify_vec",
    "complexify_vec",
    "dot_flops",
    "matvec_flops",
    "householder_flops",
    "RANK_TOL",
    "COMPLEX_ADD",
    "COMPLEX_MUL",
]

RANK_TOL = 1e-10
COMPLEX_ADD = 2
COMPLEX_MUL = 6


class RankDeficientError(np.linalg.LinAlgError):
    """Raised when a matrix is numerically rank deficient."""


@dataclass
class FlopCounter:
    """Accumulator for floating-point operations, owned by one trial."""

    count: int = 0

    def add(self, n) -> None:
        self.count += int(n)

    def add_complex(self, adds: int = 0, muls: int = 0) -> None:
        self.count += COMPLEX_ADD * int(adds) + COMPLEX_MUL * int(muls)

    def reset(self) -> None:
        self.count = 0


def flop_scope(op: Callable[[FlopCounter], object]) -> int:
    """Run ``op`` with a fresh counter and return the flops it consumed.

    >>> flop_scope(lambda fc: fc.add(2))
    2
    """
    counter = FlopCounter()
    op(counter)
    return counter.count


def _add(flops: Optional[FlopCounter], n) -> None:
    if flops is not None:
        flops.add(n)


def dot_flops(n: int) -> int:
    return 2 * n - 1


def matvec_flops(rows: int, cols: int) -> int:
    return rows * (2 * cols - 1)


def householder_flops(n: int, m: int, extra_cols: int = 0,
                      form_q: bool = False) -> int:
    """Flops of a Householder QR of an ``n x m`` matrix.

    ``extra_cols`` vectors (e.g. a right-hand side) are transformed along
    with the matrix. ``form_q`` adds the cost of accumulating the thin Q.
    """
    total = 0
    for j in range(m):
        L = n - j
        # norm (2L), alpha/v1/beta bookkeeping (3)
        total += 2 * L + 3
        # w = v^T a (2L - 1), a -= beta*w*v (2L + 1)
        total += (m - j - 1 + extra_cols) * 4 * L
        if form_q:
            total += m * 4 * L
    return total


def _check_rank(R: np.ndarray, scale: float) -> None:
    d = np.abs(np.diag(R))
    if d.size and d.min() <= RANK_TOL * scale:
        raise RankDeficientError(
            f"matrix is rank deficient: min |r_ii| = {d.min():.3e}, "
            f"tolerance {RANK_TOL * scale:.3e}")


def qr_decompose(A, flops: Optional[FlopCounter] = None):
    """Thin QR with a positive diagonal in ``R``.

    Raises :class:`RankDeficientError` if a diagonal entry of ``R`` falls
    below ``1e-10 * ||A||_F``.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    Q, R = np.linalg.qr(A, mode="reduced")
    s = np.sign(np.diag(R)).astype(R.dtype)
    s[s == 0] = 1
    Q = Q * s
    R = s[:, None] * R
    if np.iscomplexobj(R):
        # complex LAPACK leaves a unit-modulus phase on the diagonal
        ph = np.diag(R) / np.abs(np.diag(R))
        ph[~np.isfinite(ph)] = 1
        Q = Q * ph
        R = np.conj(ph)[:, None] * R
    scale = np.linalg.norm(A)
    _check_rank(R, scale if scale > 0 else 1.0)
    n, m = A.shape
    cost = householder_flops(n, m, form_q=True)
    _add(flops, cost * (4 if np.iscomplexobj(A) else 1))
    return Q, R


def pseudo_inverse(A, flops: Optional[FlopCounter] = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse ``(A^T A)^{-1} A^T`` of a full column
    rank matrix, evaluated through the QR factors as ``R^{-1} Q^T``."""
    A = np.asarray(A, dtype=float)
    Q, R = qr_decompose(A, flops=flops)
    n, m = A.shape
    # back substitution on each of the n columns of Q^T
    _add(flops, n * m * m)
    return np.linalg.solve(R, Q.T)


def realify(Hc) -> np.ndarray:
    """Real embedding ``[[Re, -Im], [Im, Re]]`` of a complex matrix."""
    Hc = np.asarray(Hc, dtype=complex)
    if Hc.ndim == 1:
        raise ValueError("use realify_vec for vectors")
    re, im = Hc.real, Hc.imag
    return np.block([[re, -im], [im, re]])


def realify_vec(vc) -> np.ndarray:
    vc = np.asarray(vc, dtype=complex)
    return np.concatenate([vc.real, vc.imag])


def complexify_vec(v) -> np.ndarray:
    """Inverse of :func:`realify_vec`."""
    v = np.asarray(v)
    half = v.shape[0] // 2
    return v[:half] + 1j * v[half:]
