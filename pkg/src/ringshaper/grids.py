"""Coordinates and grids.

The on-axis Fresnel integral becomes a 1-D Fourier transform after the
substitutions ``s = rho**2`` (m^2) and ``Omega = k / (2 z)`` (1/m^2). The
input lives on a uniform grid in ``s`` and spectra live on uniform grids in
``Omega``; distances along the axis are obtained by mapping ``Omega -> z``,
never by resampling, so z-samples are non-uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
import math

import numpy as np

from .errors import ConfigurationError, DomainError

DEFAULT_N_S = 4096
DEFAULT_N_OMEGA = 4096
MIN_SAMPLES = 16


def omega_of_z(z, k: float):
    """Reciprocal distance ``k / (2 z)`` for distance(s) ``z`` > 0."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0):
        raise DomainError("omega_of_z requires z > 0")
    out = k / (2.0 * z_arr)
    return float(out) if out.ndim == 0 else out


def z_of_omega(omega, k: float):
    """Inverse of :func:`omega_of_z`."""
    w_arr = np.asarray(omega, dtype=float)
    if np.any(w_arr <= 0):
        raise DomainError("z_of_omega requires omega > 0")
    out = k / (2.0 * w_arr)
    return float(out) if out.ndim == 0 else out


def trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = 0.5 * step
    return w


@dataclass(frozen=True)
class DesignParams:
    """Physical design constants, SI units.

    Attributes
    ----------
    k : wavenumber (1/m)
    r0 : ring radius (m)
    W0 : full width of the input support (m)
    zd : target distance (m)
    WT : full width of the target support (m)
    E0 : input peak field (V/m)
    ET : target peak field (V/m); ``None`` until derived by normalization
    """

    k: float
    r0: float
    W0: float
    zd: float
    WT: float
    E0: float = 1.0
    ET: float | None = None

    def __post_init__(self):
        for name in ("k", "r0", "W0", "zd", "WT", "E0"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigurationError(f"{name} must be finite and > 0, got {value!r}")
        if self.ET is not None and not self.ET > 0:
            raise ConfigurationError(f"ET must be > 0, got {self.ET!r}")
        if self.W0 >= 2 * self.r0:
            raise ConfigurationError("W0 must be < 2*r0 (input support touches the axis)")
        if self.WT >= 2 * self.zd:
            raise ConfigurationError("target interval touches the source plane (WT >= 2*zd)")

    @property
    def k_bar(self) -> float:
        """Nondimensional wavenumber r0^2 k / zd."""
        return self.r0 ** 2 * self.k / self.zd

    @property
    def omega_d(self) -> float:
        return self.k / (2.0 * self.zd)

    def with_target_field(self, ET: float) -> "DesignParams":
        return replace(self, ET=float(ET))


@dataclass(frozen=True)
class SGrid:
    """Uniform grid in squared radius ``s`` covering the input support."""

    s_min: float
    s_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError("SGrid needs at least 2 samples")
        if not 0 < self.s_min < self.s_max:
            raise ConfigurationError("SGrid needs 0 < s_min < s_max")

    @classmethod
    def from_params(cls, params: DesignParams, n: int = DEFAULT_N_S) -> "SGrid":
        lo = params.r0 - 0.5 * params.W0
        hi = params.r0 + 0.5 * params.W0
        return cls(lo * lo, hi * hi, n)

    @property
    def ds(self) -> float:
        return (self.s_max - self.s_min) / (self.n - 1)

    @property
    def s(self) -> np.ndarray:
        return self.s_min + self.ds * np.arange(self.n)

    @property
    def r(self) -> np.ndarray:
        return np.sqrt(self.s)

    @property
    def weights(self) -> np.ndarray:
        return trapezoid_weights(self.n, self.ds)


@dataclass(frozen=True)
class OmegaGrid:
    """Uniform grid in reciprocal distance ``Omega`` (1/m^2).

    A ``periodic`` grid holds ``n`` samples spaced ``(omega_max - omega_min)/n``
    with ``omega_max`` excluded; it is used for full-band windows where the
    rectangle rule is exact. Otherwise both endpoints are samples and the
    trapezoid rule applies.
    """

    omega_min: float
    omega_max: float
    n: int
    periodic: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError("OmegaGrid needs at least 2 samples")
        if not self.omega_min < self.omega_max:
            raise ConfigurationError("OmegaGrid needs omega_min < omega_max")

    @classmethod
    def target_support(cls, params: DesignParams, n: int = DEFAULT_N_OMEGA,
                       zd: float | None = None, WT: float | None = None) -> "OmegaGrid":
        """Grid over S_G(zd, WT) = [k/(2zd+WT), k/(2zd-WT)]."""
        zd = params.zd if zd is None else zd
        WT = params.WT if WT is None else WT
        if WT >= 2 * zd:
            raise ConfigurationError("target interval touches the source plane (WT >= 2*zd)")
        return cls(params.k / (2 * zd + WT), params.k / (2 * zd - WT), n)

    @classmethod
    def full_band(cls, sgrid: SGrid, center: float, n: int | None = None) -> "OmegaGrid":
        """One full alias period ``2 pi / ds`` centred on ``center``."""
        n = sgrid.n if n is None else n
        period = 2 * np.pi / sgrid.ds
        return cls(center - 0.5 * period, center + 0.5 * period, n, periodic=True)

    def widened(self, factor: float, n: int | None = None) -> "OmegaGrid":
        """Centred window ``factor`` times wider, clipped to stay positive."""
        mid = 0.5 * (self.omega_min + self.omega_max)
        half = 0.5 * factor * (self.omega_max - self.omega_min)
        lo = max(mid - half, 1e-3 * mid)
        return OmegaGrid(lo, mid + half, self.n if n is None else n)

    @property
    def d_omega(self) -> float:
        if self.periodic:
            return (self.omega_max - self.omega_min) / self.n
        return (self.omega_max - self.omega_min) / (self.n - 1)

    @property
    def omega(self) -> np.ndarray:
        return self.omega_min + self.d_omega * np.arange(self.n)

    @property
    def weights(self) -> np.ndarray:
        if self.periodic:
            return np.full(self.n, self.d_omega)
        return trapezoid_weights(self.n, self.d_omega)

    def z(self, k: float) -> np.ndarray:
        return z_of_omega(self.omega, k)


def build_grids(params: DesignParams, n_s: int = DEFAULT_N_S,
                n_omega: int = DEFAULT_N_OMEGA) -> tuple[SGrid, OmegaGrid]:
    """S-grid over the input support and Omega-grid over the target support."""
    if n_s < MIN_SAMPLES or n_omega < MIN_SAMPLES:
        raise ConfigurationError(f"grids need at least {MIN_SAMPLES} samples")
    return SGrid.from_params(params, n_s), OmegaGrid.target_support(params, n_omega)
