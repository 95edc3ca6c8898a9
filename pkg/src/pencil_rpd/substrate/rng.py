"""Seeded, splittable random streams and the random matrix ensembles built on them."""

import zlib
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .dense import qr_full

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream addressed by (seed, path).

    Child streams are derived by appending a branch label ("L", "R", "line-v-3",
    ...) to the path. Each label is hashed into the spawn key of a numpy
    ``SeedSequence`` so distinct paths give independent PCG64 generators, and
    the same (seed, path) always reproduces the same draws.
    """

    seed: int
    path: Tuple[str, ...] = ()

    def child(self, label: str) -> "RngStream":
        return RngStream(self.seed, self.path + (str(label),))

    def spawn_key(self) -> Tuple[int, ...]:
        return tuple(zlib.crc32(label.encode("utf-8")) for label in self.path)

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(
            entropy=int(self.seed) & _SEED_MASK, spawn_key=self.spawn_key()
        )
        return np.random.Generator(np.random.PCG64(sequence))

    def describe(self) -> str:
        return f"{self.seed}:" + "/".join(self.path)


def complex_gaussian(shape, rng: RngStream, variance: float = 1.0) -> np.ndarray:
    """Entries (x + iy)·sqrt(variance/2) with x, y independent standard normals."""
    gen = rng.generator()
    real = gen.standard_normal(shape)
    imag = gen.standard_normal(shape)
    return (real + 1j * imag) * np.sqrt(variance / 2.0)


def ginibre(n: int, rng: RngStream) -> np.ndarray:
    """n×n complex Ginibre matrix: i.i.d. entries with complex variance 1/n."""
    if n < 1:
        raise ValueError(f"ginibre needs n >= 1, got {n}")
    return complex_gaussian((n, n), rng, variance=1.0 / n)


def haar_unitary(n: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian.

    The phases of R's diagonal are pushed into Q so the result is exactly Haar
    rather than depending on the sign convention of the QR routine.
    """
    q, r = qr_full(complex_gaussian((n, n), rng))
    diag = np.diagonal(r)
    magnitude = np.abs(diag)
    phases = np.ones_like(diag)
    nonzero = magnitude > 0
    phases[nonzero] = diag[nonzero] / magnitude[nonzero]
    return q * phases
