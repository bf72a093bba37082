"""Input and target profiles and their truncation to compact support.

Profiles are analytic shapes with peak value 1. Each is cut to the interval
where it exceeds a threshold (``e**-9`` by default), which fixes the support
widths used everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError

E_MINUS_9 = math.exp(-9.0)
COORDINATES = ("r", "s", "z", "omega")


def gaussian_ring(r, r0: float, width: float):
    """``exp(-(r - r0)**2 / width**2)``."""
    return np.exp(-((np.asarray(r, dtype=float) - r0) / width) ** 2)


def super_gaussian(z, zd: float, width: float, n: int):
    """``exp(-(z - zd)**(2n) / width**(2n))``."""
    return np.exp(-(((np.asarray(z, dtype=float) - zd) / width) ** (2 * n)))


def oscillatory_target(z, zd: float, width: float, m: int):
    """Flat-top of order 8 modulated by ``cos**2`` with ``m`` setting the period."""
    x = np.asarray(z, dtype=float) - zd
    envelope = np.exp(-((x / width) ** 16))
    return 0.8 * envelope * (np.cos(x * m / (2 * np.pi * width)) ** 2 + 0.25)


def truncation_half_width(width: float, n: int, threshold: float = E_MINUS_9) -> float:
    """Half-width where ``exp(-(x/width)**(2n))`` falls to ``threshold``.

    With the default threshold this is ``3 * width`` for the Gaussian ring
    (n=1) and ``3**(1/n) * width`` for the super-Gaussian.
    """
    if not 0 < threshold < 1:
        raise DomainError("threshold must lie in (0, 1)")
    return width * (-math.log(threshold)) ** (1.0 / (2 * n))


@dataclass(frozen=True)
class Profile:
    """Analytic profile centred on ``center`` with scale ``width``.

    ``kind`` is one of ``gaussian_ring``, ``super_gaussian`` or ``oscillatory``;
    ``n`` is the super-Gaussian order (the oscillatory envelope uses n=8) and
    ``m`` the oscillation parameter.
    """

    kind: str
    center: float
    width: float
    n: int = 1
    m: int = 0
    threshold: float = E_MINUS_9

    def __post_init__(self):
        if self.kind not in ("gaussian_ring", "super_gaussian", "oscillatory"):
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if not self.width > 0:
            raise DomainError("profile width must be > 0")
        if self.n < 1:
            raise DomainError("order n must be >= 1")
        if self.kind == "oscillatory" and self.m < 1:
            raise DomainError("oscillatory target needs m >= 1")

    @classmethod
    def ring(cls, r0: float, width: float, threshold: float = E_MINUS_9) -> "Profile":
        return cls("gaussian_ring", r0, width, 1, 0, threshold)

    @classmethod
    def flat_top(cls, zd: float, width: float, n: int, threshold: float = E_MINUS_9) -> "Profile":
        return cls("super_gaussian", zd, width, n, 0, threshold)

    @classmethod
    def oscillating(cls, zd: float, width: float, m: int, threshold: float = E_MINUS_9) -> "Profile":
        return cls("oscillatory", zd, width, 8, m, threshold)

    def shape(self, x):
        """Untruncated analytic value."""
        if self.kind == "gaussian_ring":
            return gaussian_ring(x, self.center, self.width)
        if self.kind == "super_gaussian":
            return super_gaussian(x, self.center, self.width, self.n)
        return oscillatory_target(x, self.center, self.width, self.m)

    @property
    def half_width(self) -> float:
        return truncation_half_width(self.width, self.n, self.threshold)

    @property
    def full_width(self) -> float:
        return 2.0 * self.half_width

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.half_width, self.center + self.half_width

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        out = np.where((x >= lo) & (x <= hi), self.shape(x), 0.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SampledProfile:
    """Nonnegative samples of a profile on a 1-D grid."""

    coords: np.ndarray
    values: np.ndarray
    coordinate: str
    support: tuple[float, float] | None = field(default=None)

    def __post_init__(self):
        if self.coordinate not in COORDINATES:
            raise DomainError(f"coordinate must be one of {COORDINATES}")
        if np.shape(self.coords) != np.shape(self.values):
            raise DomainError("coords and values must have the same shape")
        if np.any(np.asarray(self.values) < 0):
            raise DomainError("profile values must be nonnegative")

    @property
    def weights(self) -> np.ndarray:
        x = np.asarray(self.coords, dtype=float)
        w = np.empty_like(x)
        w[1:-1] = 0.5 * (x[2:] - x[:-2])
        w[0] = 0.5 * (x[1] - x[0])
        w[-1] = 0.5 * (x[-1] - x[-2])
        return w

    def norm(self, p: int = 2) -> float:
        v = np.abs(np.asarray(self.values, dtype=float))
        return float(np.sum(self.weights * v ** p) ** (1.0 / p))

    def scaled(self, factor: float) -> "SampledProfile":
        return SampledProfile(self.coords, factor * np.asarray(self.values), self.coordinate, self.support)


def sample(profile: Profile, coords, coordinate: str) -> SampledProfile:
    coords = np.asarray(coords, dtype=float)
    return SampledProfile(coords, profile(coords), coordinate, profile.support)


def truncate(profile: SampledProfile, threshold: float = E_MINUS_9) -> SampledProfile:
    """Zero samples below ``threshold`` times the peak and report the support.

    The profile is assumed unimodal about its centre; the support is the
    interval spanned by the surviving samples.
    """
    values = np.asarray(profile.values, dtype=float)
    peak = values.max(initial=0.0)
    keep = values >= threshold * peak if peak > 0 else np.zeros(values.shape, bool)
    if not np.any(keep):
        raise DomainError("profile has empty support above the truncation threshold")
    idx = np.flatnonzero(keep)
    coords = np.asarray(profile.coords, dtype=float)
    out = np.where(keep, values, 0.0)
    return SampledProfile(coords, out, profile.coordinate, (coords[idx[0]], coords[idx[-1]]))


def support_widths(W0_prime: float, WT_prime: float, n: int,
                   threshold: float = E_MINUS_9) -> tuple[float, float]:
    """Full input and target widths after truncation: ``(6 W0', 2 3**(1/n) WT')``."""
    return (2 * truncation_half_width(W0_prime, 1, threshold),
            2 * truncation_half_width(WT_prime, n, threshold))
