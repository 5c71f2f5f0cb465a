"""Seeded generators for the benchmark point distributions.

Every generator is a pure function of its :class:`DatasetSpec`; the PRNG is
numpy's PCG64 seeded with ``spec.seed``, so the same spec always yields the
same points bit for bit.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidBase, InvalidSpec

HALTON_BASES = (2, 3, 5)


class Kind(str, Enum):
    UNIFORM_BALL = "ball"
    UNIFORM_CUBE = "cube"
    HALTON = "halton"
    GAUSS = "gauss"
    GAUSS_RING = "gaussring"
    SPHERE_SURFACE = "sphere"


@dataclass(frozen=True)
class DatasetSpec:
    """What to generate.

    ``radius`` scales the ball, sphere and Gauss-ring families; the cube and
    Halton sets always live in the unit cube and Gauss uses unit variance.
    """

    kind: Kind
    n: int
    seed: int = 0
    radius: float = 1.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", Kind(self.kind))
        except ValueError:
            raise InvalidSpec(f"unknown distribution {self.kind!r}") from None
        if int(self.n) != self.n or self.n < 4:
            raise InvalidSpec(f"need at least 4 points, got n={self.n}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidSpec(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise InvalidSpec(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "radius", float(self.radius))


def halton_element(p, k):
    """k-th element (k >= 1) of the base-``p`` radical-inverse sequence."""
    if p < 2:
        raise InvalidBase(f"Halton base must be >= 2, got {p}")
    if k < 1:
        raise ValueError(f"Halton index must be >= 1, got {k}")
    value = 0.0
    denom = p
    while k > 0:
        k, digit = divmod(k, p)
        value += digit / denom
        denom *= p
    return value


def halton_sequence(n, bases=HALTON_BASES, start=1):
    """Elements ``start .. start+n-1`` of the Halton sequence as an ``(n, len(bases))`` array."""
    k0 = np.arange(start, start + n, dtype=np.int64)
    out = np.zeros((n, len(bases)))
    for j, p in enumerate(bases):
        if p < 2:
            raise InvalidBase(f"Halton base must be >= 2, got {p}")
        k = k0.copy()
        denom = p
        while np.any(k > 0):
            k, digit = np.divmod(k, p)
            out[:, j] += digit / denom
            denom *= p
    return out


def gauss_ring_radius(sign, rand_gauss):
    return 0.5 + 0.5 * sign * rand_gauss


def _unit_directions(rng, n):
    # rejection from the bounding cube, then normalize: avoids pole clustering
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        want = n - filled
        cand = rng.uniform(-1.0, 1.0, size=(int(want * 2.0) + 16, 3))
        r2 = np.einsum("ij,ij->i", cand, cand)
        cand = cand[(r2 <= 1.0) & (r2 > 1e-24)]
        cand = cand[:want]
        out[filled:filled + len(cand)] = cand
        filled += len(cand)
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


def _ball(rng, n):
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        want = n - filled
        cand = rng.uniform(-1.0, 1.0, size=(int(want * 2.0) + 16, 3))
        cand = cand[np.einsum("ij,ij->i", cand, cand) <= 1.0][:want]
        out[filled:filled + len(cand)] = cand
        filled += len(cand)
    return out


def generate(spec):
    """Return ``spec.n`` points of the requested family as an ``(n, 3)`` array."""
    if not isinstance(spec, DatasetSpec):
        raise InvalidSpec(f"expected a DatasetSpec, got {type(spec).__name__}")
    n = spec.n
    if spec.kind is Kind.HALTON:
        return halton_sequence(n)
    rng = np.random.default_rng(spec.seed)
    if spec.kind is Kind.UNIFORM_CUBE:
        return rng.random((n, 3))
    if spec.kind is Kind.UNIFORM_BALL:
        return _ball(rng, n) * spec.radius
    if spec.kind is Kind.SPHERE_SURFACE:
        return _unit_directions(rng, n) * spec.radius
    if spec.kind is Kind.GAUSS:
        return rng.standard_normal((n, 3))
    if spec.kind is Kind.GAUSS_RING:
        dirs = _unit_directions(rng, n)
        sign = rng.choice(np.array([-1.0, 1.0]), size=n)
        r = gauss_ring_radius(sign, np.abs(rng.standard_normal(n)))
        # negative r lands on the opposite side at distance |r|
        return dirs * (r * spec.radius)[:, None]
    raise InvalidSpec(f"unhandled distribution {spec.kind}")
