"""Square QAM and integer-box alphabets with their quantizer."""
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Constellation"]


@dataclass(frozen=True)
class Constellation:
    """Per-real-coordinate alphabet ``offset + step * {0, ..., levels-1}``.

    Square QAM uses the odd integers ``{-(L-1), ..., -1, 1, ..., L-1}``
    (``step = 2``) without unit-energy scaling. Decoders work on the
    *index* lattice ``z = (x - offset) / step``, which is ``Z^m`` restricted
    to a box, so the received vector is mapped with :meth:`index_system`.
    """

    levels: int
    step: int = 2
    offset: int = 0
    name: str = ""

    @classmethod
    def qam(cls, q: int) -> "Constellation":
        L = math.isqrt(q)
        if L * L != q or L < 2:
            raise ValueError(f"{q}-QAM is not a square constellation")
        return cls(levels=L, step=2, offset=-(L - 1), name=f"{q}-QAM")

    @classmethod
    def integer_range(cls, lo: int, hi: int) -> "Constellation":
        if hi < lo:
            raise ValueError("empty range")
        return cls(levels=hi - lo + 1, step=1, offset=lo,
                   name=f"Z[{lo},{hi}]")

    @property
    def points(self) -> np.ndarray:
        return self.offset + self.step * np.arange(self.levels)

    @property
    def q(self) -> int:
        return self.levels ** 2

    @property
    def avg_energy(self) -> float:
        """Mean energy of one complex symbol (two real coordinates)."""
        return 2.0 * float(np.mean(self.points.astype(float) ** 2))

    def sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return self.points[rng.integers(0, self.levels, size=m)]

    def to_index(self, x) -> np.ndarray:
        return (np.asarray(x) - self.offset) // self.step

    def from_index(self, z) -> np.ndarray:
        return self.offset + self.step * np.asarray(z, dtype=np.int64)

    def index_system(self, H, y) -> np.ndarray:
        """Received vector of the index lattice: ``(y - H offset) / step``."""
        H = np.asarray(H)
        return (np.asarray(y) - self.offset * H.sum(axis=1)) / self.step

    def quantize_index(self, z):
        """Round to integers and clamp into ``[0, levels-1]``.

        Returns the clamped index vector and whether clamping changed it.
        """
        r = np.rint(np.asarray(z, dtype=float))
        c = np.clip(r, 0, self.levels - 1)
        return c.astype(np.int64), bool(np.any(c != r))

    def quantize(self, x) -> np.ndarray:
        """Nearest constellation coordinate, componentwise."""
        z = (np.asarray(x, dtype=float) - self.offset) / self.step
        return self.from_index(self.quantize_index(z)[0])

    def contains(self, x) -> bool:
        x = np.asarray(x)
        z = (x - self.offset) / self.step
        return bool(np.all((z == np.round(z)) & (z >= 0)
                           & (z <= self.levels - 1)))
