"""Linearly chirped pulses delivered at a distance.

Times are in femtoseconds, distances in metres and the group velocity
dispersion ``gamma`` in fs^2/m. A chirped Gaussian ``exp(-t^2/tau0^2 +
i t^2/alpha^2)`` has on-axis temporal width ``W(z) = tau0 sqrt(q(z))`` with

    q(z) = (1 - 2 z gamma / alpha^2)^2 + 4 z^2 gamma^2 / tau0^4,

and its on-axis amplitude carries an extra ``q(z)^(-1/4)``. The spatial
design absorbs that factor by shaping towards ``q^(1/4) F_T``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .grids import DEFAULT_N_OMEGA, DEFAULT_N_S, SGrid
from .problem import ScaledTarget, ShapingProblem
from .profiles import Profile
from .spectral import TargetSpectrum, on_axis_field


@dataclass(frozen=True)
class ChirpDesign:
    """Chirp that compresses a pulse to ``tau_T`` exactly at ``zd``."""

    gamma: float
    tau_T: float
    tau0: float
    alpha: float
    zd: float

    @property
    def alpha_sq(self) -> float:
        return self.alpha ** 2

    def q(self, z):
        return q_broadening(z, self.tau0, self.alpha_sq, self.gamma)

    def width(self, z):
        """Temporal 1/e field width ``tau0 sqrt(q(z))`` in fs."""
        return self.tau0 * np.sqrt(self.q(z))


def chirp_parameters(tau_T: float, zd: float, gamma: float) -> ChirpDesign:
    """Solve ``W(zd) = tau_T`` and ``W'(zd) = 0`` for ``(alpha, tau0)``."""
    if gamma == 0:
        raise DomainError("zero dispersion leaves the chirp undetermined")
    if not (tau_T > 0 and zd > 0 and gamma > 0):
        raise DomainError("tau_T, zd and gamma must be positive")
    D = tau_T ** 4 + 4 * zd ** 2 * gamma ** 2
    alpha = math.sqrt(D / (2 * zd * gamma))
    tau0 = math.sqrt(D) / tau_T
    return ChirpDesign(gamma, tau_T, tau0, alpha, zd)


def q_broadening(z, tau0: float, alpha_sq: float, gamma: float):
    """Broadening factor q(z); ``alpha_sq`` is the signed ``alpha**2``."""
    z = np.asarray(z, dtype=float)
    out = (1 - 2 * z * gamma / alpha_sq) ** 2 + 4 * z ** 2 * gamma ** 2 / tau0 ** 4
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class QuarterPowerQ:
    """``q(z)^(1/4)`` for a chirp design."""

    chirp: ChirpDesign

    def __call__(self, z):
        return np.asarray(self.chirp.q(z)) ** 0.25


def pulse_target(target: Profile, chirp: ChirpDesign) -> ScaledTarget:
    """Spatial target ``q(z)^(1/4) F_T(z)`` compensating the temporal amplitude loss."""
    return ScaledTarget(target, QuarterPowerQ(chirp))


def pulse_problem(k: float, source: Profile, target: Profile, chirp: ChirpDesign,
                  E0: float = 1.0, n_s: int = DEFAULT_N_S,
                  n_omega: int = DEFAULT_N_OMEGA) -> ShapingProblem:
    """Design problem for the modified target, with E_T renormalized."""
    return ShapingProblem.build(k, source, pulse_target(target, chirp), E0, n_s, n_omega)


def pulse_target_spectrum(k: float, source: Profile, target: Profile, chirp: ChirpDesign,
                          E0: float = 1.0, n_omega: int = DEFAULT_N_OMEGA) -> TargetSpectrum:
    return pulse_problem(k, source, target, chirp, E0, n_omega=n_omega).G


def spatiotemporal_on_axis(sgrid: SGrid, g, phi, chirp: ChirpDesign, k: float, z, t) -> np.ndarray:
    """On-axis intensity ``|E(0, z, t)|^2`` on the ``(z, t)`` mesh.

    Equals ``q(z)^(-1/2) exp(-2 t^2 / (tau0^2 q(z))) |E_spatial(0, z)|^2``;
    rows follow ``z`` and columns ``t`` (fs).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    spatial = np.abs(on_axis_field(sgrid, g, phi, z, k).values) ** 2
    q = np.asarray(chirp.q(z))
    temporal = np.exp(-2 * t[None, :] ** 2 / (chirp.tau0 ** 2 * q[:, None]))
    return (spatial / np.sqrt(q))[:, None] * temporal


def temporal_fwhm(t, intensity) -> float:
    """Full width at half maximum of a sampled single-peaked intensity trace."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(intensity, dtype=float)
    i = int(np.argmax(y))
    half = 0.5 * y[i]
    above = np.flatnonzero(y >= half)
    lo, hi = above[0], above[-1]
    if lo == 0 or hi == t.size - 1:
        raise DomainError("intensity trace does not fall below half maximum on both sides")
    t_lo = np.interp(half, [y[lo - 1], y[lo]], [t[lo - 1], t[lo]])
    t_hi = np.interp(half, [y[hi + 1], y[hi]], [t[hi + 1], t[hi]])
    return float(t_hi - t_lo)
