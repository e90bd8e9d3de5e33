"""Spherical-harmonic bookkeeping: multiplicities, explicit N=2 harmonics,
and deterministic sphere sampling.

Pointwise harmonic evaluation is provided for N=2 only; every quantitative
boundary-integral check in this package runs on the circle.  Multiplicities
and closed-form spectra remain dimension-generic.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgument


def multiplicity(l: int, N: int) -> int:
    """Dimension of the space of spherical harmonics of order l on S^(N-1)."""
    if l < 0 or N < 2:
        raise InvalidArgument(f"multiplicity requires l >= 0 and N >= 2, got l={l}, N={N}")
    if l == 0:
        return 1
    if l == 1:
        return N
    return math.comb(l + N - 1, N - 1) - math.comb(l + N - 3, N - 1)


def circle_harmonic(l: int, index: int, theta, derivative: int = 0):
    """Normalized circle harmonic (or its theta-derivative).

    l = 0 gives 1/sqrt(2*pi); l >= 1 gives cos(l*theta)/sqrt(pi) for index 0
    and sin(l*theta)/sqrt(pi) for index 1, so that the boundary integral of
    Y^2 over the unit circle equals 1.
    """
    if l < 0:
        raise InvalidArgument(f"circle_harmonic requires l >= 0, got {l}")
    if l == 0:
        if index != 0:
            raise InvalidArgument("l = 0 admits only index 0")
        base = np.full_like(np.asarray(theta, dtype=float), 1.0 / math.sqrt(2.0 * math.pi))
        if derivative > 0:
            base = np.zeros_like(base)
        return base if base.ndim else float(base)
    if index not in (0, 1):
        raise InvalidArgument(f"index must be 0 or 1 for l >= 1, got {index}")
    th = np.asarray(theta, dtype=float)
    phase = l * th + (0.0 if index == 0 else -math.pi / 2.0)  # sin = cos shifted
    # d/dtheta cos(l t + c) cycles through -l sin, -l^2 cos, ...
    shifted = phase + derivative * math.pi / 2.0
    out = (l ** derivative) * np.cos(shifted) / math.sqrt(math.pi)
    return out if out.ndim else float(out)


def sphere_sample(N: int, count: int, seed: int) -> np.ndarray:
    """Deterministic points on S^(N-1), shape (count, N), unit rows.

    Seeded Gaussian directions normalized to the sphere; numpy's PCG64 stream
    guarantees bit-reproducible sequences for a given seed.
    """
    if N < 2:
        raise InvalidArgument(f"sphere_sample requires N >= 2, got {N}")
    if count < 1:
        raise InvalidArgument(f"sphere_sample requires count >= 1, got {count}")
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((count, N))
    norms = np.linalg.norm(pts, axis=1)
    while np.any(norms < 1e-12):  # essentially unreachable; keeps determinism
        bad = norms < 1e-12
        pts[bad] = rng.standard_normal((int(bad.sum()), N))
        norms = np.linalg.norm(pts, axis=1)
    return pts / norms[:, None]


def ball_volume(N: int, radius: float = 1.0) -> float:
    """Volume of the N-ball."""
    return math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0) * radius ** N


def sphere_area(N: int, radius: float = 1.0) -> float:
    """Surface measure of the boundary sphere of the N-ball."""
    return N * ball_volume(N) * radius ** (N - 1)
