"""
Gram-Schmidt orthogonalization and LLL reduction of real and complex
lattice bases.

Bases are matrices whose *columns* generate the lattice. Column indices are
0-based throughout, so the LLL loop starts at ``k = 1``.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels as K
from .linalg import RANK_TOL, FlopCounter, RankDeficientError, realify

__all__ = [
    "GsoState",
    "ReductionResult",
    "ReducednessReport",
    "LLLError",
    "gso",
    "size_reduce",
    "lll_reduce",
    "complex_lll_reduce",
    "lll_resume",
    "is_lll_reduced",
    "iteration_bound",
    "alpha",
    "integer_det",
    "is_unimodular",
    "DEFAULT_DELTA",
    "REORTH_EVERY",
]

DEFAULT_DELTA = 0.75
REORTH_EVERY = 256


class LLLError(RuntimeError):
    """The reduction could not complete (integer overflow or iteration cap)."""


def alpha(delta: float = DEFAULT_DELTA) -> float:
    """``1 / (delta - 1/4)``; equals 2 for the customary ``delta = 3/4``."""
    return 1.0 / (delta - 0.25)


@dataclass
class GsoState:
    """Gram-Schmidt data of a basis ``H = gs_vectors @ mu.T``.

    ``mu`` is unit lower-triangular, ``mu[i, j]`` being the coefficient of
    ``gs_vectors[:, j]`` in column ``i``.
    """

    gs_vectors: np.ndarray
    mu: np.ndarray
    gs_norms_sq: np.ndarray

    @property
    def gs_norms(self) -> np.ndarray:
        return np.sqrt(self.gs_norms_sq)

    def reconstruct(self) -> np.ndarray:
        return self.gs_vectors @ self.mu.T


@dataclass
class ReductionResult:
    """Output of an LLL reduction, ``h_red = H @ u``.

    ``a``/``big_a`` are the smallest and largest Gram-Schmidt norms of the
    reduced basis, ``a_input``/``big_a_input`` those of the input basis
    (the quantities entering the iteration bound). ``iterations`` counts
    passes through the main loop; ``swaps`` counts exchanges.
    """

    h_red: np.ndarray
    u: np.ndarray
    iterations: int
    swaps: int
    a: float
    big_a: float
    delta: float
    mu: np.ndarray
    gs_norms_sq: np.ndarray
    a_input: float
    big_a_input: float
    flops: int = 0

    @property
    def alpha(self) -> float:
        return alpha(self.delta)

    @property
    def m(self) -> int:
        return self.h_red.shape[1]


@dataclass
class ReducednessReport:
    ok: bool
    violations: List[Tuple[str, int, int, float]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def iteration_bound(a: float, big_a: float, m: int,
                    delta: float = DEFAULT_DELTA) -> float:
    """Upper bound ``m^2 log_{1/sqrt(delta)}(A/a) + m`` on LLL iterations."""
    if not 0 < a <= big_a * (1 + 1e-12):
        raise ValueError("need 0 < a <= big_a")
    ratio = max(big_a / a, 1.0)
    return m * m * math.log(ratio) / math.log(1.0 / math.sqrt(delta)) + m


def _iteration_cap(bb: np.ndarray, m: int, delta: float) -> int:
    a = math.sqrt(bb.min())
    big_a = math.sqrt(bb.max())
    return int(100 * iteration_bound(a, big_a, m, delta)) + 100


def _prepare(H, dtype):
    H = np.array(H, dtype=dtype, copy=True)
    if H.ndim != 2:
        raise ValueError("basis must be a 2-D matrix")
    n, m = H.shape
    if n < m:
        raise RankDeficientError(f"{n}x{m} basis cannot have full column rank")
    if not np.all(np.isfinite(H)):
        raise ValueError("basis has non-finite entries")
    return H


def _check_gso_rank(bb: np.ndarray, H: np.ndarray) -> None:
    scale = np.linalg.norm(H)
    if bb.size and (scale == 0 or bb.min() <= (RANK_TOL * scale) ** 2):
        raise RankDeficientError(
            f"basis is rank deficient (min GS norm^2 {bb.min():.3e})")


def gso(H, flops: Optional[FlopCounter] = None) -> GsoState:
    """Gram-Schmidt orthogonalization of the columns of ``H``."""
    is_complex = np.iscomplexobj(H)
    B = _prepare(H, complex if is_complex else float)
    n, m = B.shape
    mu = np.zeros((m, m), dtype=B.dtype)
    bb = np.zeros(m)
    gs = np.zeros_like(B)
    kern = K.gso_complex if is_complex else K.gso_real
    f = kern(B, mu, bb, gs)
    _check_gso_rank(bb, B)
    if flops is not None:
        flops.add(f)
    return GsoState(gs_vectors=gs, mu=mu, gs_norms_sq=bb)


def size_reduce(state: GsoState, basis: np.ndarray, u: np.ndarray,
                k: int, l: int, flops: Optional[FlopCounter] = None) -> float:
    """Size-reduce column ``k`` of ``basis`` against column ``l < k`` in place.

    ``state.mu`` and the integer matrix ``u`` are updated alongside; the
    Gram-Schmidt vectors do not change. Returns the integer multiple
    subtracted (0 when ``|mu[k, l]| <= 1/2``).
    """
    if not 0 <= l < k < basis.shape[1]:
        raise IndexError("need 0 <= l < k < m")
    r = np.rint(state.mu[k, l])
    if np.iscomplexobj(state.mu):
        r = np.rint(r.real) + 1j * np.rint(r.imag)
        st, f = K.red_complex(basis, u, state.mu, k, l)
        applied = r if st == K.OK and f else 0
    else:
        st, f = K.red_real(basis, u, state.mu, k, l)
        applied = float(r) if f else 0.0
    if st != K.OK:
        raise LLLError("integer overflow during size reduction")
    if flops is not None:
        flops.add(f)
    return applied


def _status_error(status: int) -> None:
    if status == K.OVERFLOW:
        raise LLLError("unimodular matrix left the exact integer range")
    if status == K.ITERATION_CAP:
        raise LLLError("iteration cap exceeded")
    if status == K.DEGENERATE:
        raise RankDeficientError("basis became degenerate during reduction")


def lll_resume(B: np.ndarray, U: np.ndarray, mu: np.ndarray, bb: np.ndarray,
               k_start: int = 1, delta: float = DEFAULT_DELTA,
               reorth_every: int = REORTH_EVERY) -> Tuple[int, int, int]:
    """Continue LLL on a basis whose GSO is already in ``mu``/``bb``.

    Everything is modified in place. Returns (iterations, swaps, flops).
    """
    m = B.shape[1]
    cap = _iteration_cap(bb, m, delta)
    kern = K.lll_complex if np.iscomplexobj(B) else K.lll_real
    status, it, sw, f = kern(B, U, mu, bb, k_start, delta, cap, reorth_every)
    _status_error(status)
    return it, sw, f


def _reduce(H, delta, flops, reorth_every, is_complex):
    if not 0.25 < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    B = _prepare(H, complex if is_complex else float)
    n, m = B.shape
    if is_complex:
        U = np.eye(m, dtype=complex)
    else:
        U = np.eye(m, dtype=np.int64)
    mu = np.zeros((m, m), dtype=B.dtype)
    bb = np.zeros(m)
    gs = np.zeros_like(B)
    f0 = (K.gso_complex if is_complex else K.gso_real)(B, mu, bb, gs)
    _check_gso_rank(bb, B)
    a_in, big_a_in = math.sqrt(bb.min()), math.sqrt(bb.max())
    it, sw, f1 = lll_resume(B, U, mu, bb, 1, delta, reorth_every)
    total = f0 + f1
    if flops is not None:
        flops.add(total)
    return ReductionResult(
        h_red=B, u=U, iterations=it, swaps=sw,
        a=math.sqrt(bb.min()), big_a=math.sqrt(bb.max()), delta=delta,
        mu=mu, gs_norms_sq=bb, a_input=a_in, big_a_input=big_a_in,
        flops=total)


def lll_reduce(H, delta: float = DEFAULT_DELTA,
               flops: Optional[FlopCounter] = None,
               reorth_every: int = REORTH_EVERY) -> ReductionResult:
    """LLL-reduce the columns of a real basis ``H``.

    Raises :class:`RankDeficientError` for numerically dependent columns and
    :class:`LLLError` on integer overflow or when the iteration count
    exceeds 100 times the theoretical bound.

    >>> res = lll_reduce(np.eye(3))
    >>> res.iterations, res.swaps
    (2, 0)
    """
    if np.iscomplexobj(H):
        raise TypeError("use complex_lll_reduce for complex bases")
    return _reduce(H, delta, flops, reorth_every, is_complex=False)


def complex_lll_reduce(Hc, delta: float = DEFAULT_DELTA,
                       flops: Optional[FlopCounter] = None,
                       reorth_every: int = REORTH_EVERY) -> ReductionResult:
    """Complex LLL with Gaussian-integer size reduction.

    ``u`` is returned as a complex array with integral real and imaginary
    parts (exact below 2**50).
    """
    return _reduce(np.asarray(Hc, dtype=complex), delta, flops,
                   reorth_every, is_complex=True)


def is_lll_reduced(H, delta: float = DEFAULT_DELTA,
                   tol: float = 1e-9) -> ReducednessReport:
    """Check size reduction and the Lovasz condition from a fresh QR."""
    H = np.asarray(H)
    is_complex = np.iscomplexobj(H)
    R = np.linalg.qr(H, mode="r")
    d = np.diag(R)
    bb = np.abs(d) ** 2
    m = H.shape[1]
    violations = []
    for k in range(1, m):
        for l in range(k):
            mu = R[l, k] / d[l]
            if is_complex:
                worst = max(abs(mu.real), abs(mu.imag))
            else:
                worst = abs(mu)
            if worst > 0.5 + tol:
                violations.append(("size", k, l, float(worst)))
        mu = R[k - 1, k] / d[k - 1]
        lhs = bb[k] + abs(mu) ** 2 * bb[k - 1]
        if lhs < delta * bb[k - 1] * (1 - tol):
            violations.append(("lovasz", k, k - 1,
                               float(lhs / bb[k - 1])))
    return ReducednessReport(ok=not violations, violations=violations)


def integer_det(U) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    A = [[int(x) for x in row] for row in np.asarray(U).tolist()]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_unimodular(U) -> bool:
    """``|det U| = 1`` exactly; Gaussian-integer matrices go through their
    real embedding, whose determinant is ``|det U|^2``."""
    U = np.asarray(U)
    if np.iscomplexobj(U):
        if not (np.all(U.real == np.round(U.real))
                and np.all(U.imag == np.round(U.imag))):
            return False
        return abs(integer_det(np.round(realify(U)).astype(np.int64))) == 1
    return abs(integer_det(U)) == 1
