"""Sampling domains for metric definitions.

A domain knows whether a point of C^n belongs to it and how to draw
reproducible uniform samples from it.  Sampling is by rejection from a
bounding cube (per the chunked loop in :func:`_rejection`), so a fixed seed
always yields the same points in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Ball", "Annulus", "Polydisc", "Product", "Domain"]


def _rejection(rng, n, count, half_width, accept):
    """Draw uniform points from [-w, w]^(2n) until `count` pass `accept`."""
    out = []
    have = 0
    chunk = max(4 * count, 256)
    while have < count:
        xy = rng.uniform(-half_width, half_width, size=(chunk, 2 * n))
        z = xy[:, :n] + 1j * xy[:, n:]
        good = z[accept(z)]
        out.append(good)
        have += len(good)
    return np.concatenate(out)[:count]


@dataclass(frozen=True)
class Ball:
    """|z| <= radius (Euclidean norm on C^n)."""

    radius: float

    def contains(self, z) -> bool:
        return float(np.linalg.norm(z)) <= self.radius + 1e-12

    def sample(self, n: int, count: int, rng) -> np.ndarray:
        r = self.radius
        return _rejection(rng, n, count, r, lambda z: np.linalg.norm(z, axis=1) <= r)


@dataclass(frozen=True)
class Annulus:
    """r_inner <= |z| <= r_outer; excludes the origin."""

    r_inner: float
    r_outer: float

    def contains(self, z) -> bool:
        r = float(np.linalg.norm(z))
        return self.r_inner - 1e-12 <= r <= self.r_outer + 1e-12

    def sample(self, n: int, count: int, rng) -> np.ndarray:
        lo, hi = self.r_inner, self.r_outer

        def ok(z):
            r = np.linalg.norm(z, axis=1)
            return (r >= lo) & (r <= hi)

        return _rejection(rng, n, count, hi, ok)


@dataclass(frozen=True)
class Polydisc:
    """|z_k| <= radius for every coordinate."""

    radius: float

    def contains(self, z) -> bool:
        return bool(np.all(np.abs(z) <= self.radius + 1e-12))

    def sample(self, n: int, count: int, rng) -> np.ndarray:
        r = self.radius
        return _rejection(
            rng, n, count, r, lambda z: np.all(np.abs(z) <= r, axis=1)
        )


@dataclass(frozen=True)
class Product:
    """Cartesian product of one-dimensional factors, one per coordinate."""

    factors: tuple

    def contains(self, z) -> bool:
        return all(f.contains(np.asarray([zk])) for f, zk in zip(self.factors, z))

    def sample(self, n: int, count: int, rng) -> np.ndarray:
        if n != len(self.factors):
            raise ValueError(
                f"product domain has {len(self.factors)} factors but the metric has n={n}"
            )
        cols = [f.sample(1, count, rng)[:, 0] for f in self.factors]
        return np.stack(cols, axis=1)


Domain = Ball | Annulus | Polydisc | Product
