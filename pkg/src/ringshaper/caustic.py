"""Stationary-phase design.

In nondimensional variables ``rho_bar = rho / r0`` and ``z_bar = z / zd`` the
ray from radius ``rho_bar`` meets the axis at ``z_c(rho_bar)``, which solves

    dz_c/drho = 2 pi k_bar E0^2 f(rho)^2 rho / (E_T^2 F_T(z_c)^2),
    z_c(1 - W0/2r0) = 1 - WT/2zd,

with ``k_bar = r0^2 k / zd``. The phase follows from
``phi_bar(rho) = -int u / z_c(u) du`` and ``phi = (k r0^2 / zd) phi_bar``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicHermiteSpline
from scipy.special import j0

from .errors import DomainError, ResolutionError
from .grids import DesignParams, SGrid

FLOOR = 1e-12
DEFAULT_STEPS = 4096
ENDPOINT_RTOL = 1e-4


@dataclass(frozen=True)
class CausticMap:
    """Solved ray map ``z_c(rho_bar)`` on a uniform ``rho_bar`` grid.

    ``slope`` holds ``dz_c/drho_bar`` at the nodes; ``floored`` records
    whether the target floor was reached anywhere on the path; ``zeta`` is the
    integrated offset ``(z_c - 1) 2 zd / WT``.
    """

    rho_bar: np.ndarray
    z_bar: np.ndarray
    slope: np.ndarray
    params: DesignParams
    floored: bool = False
    zeta: np.ndarray | None = None

    @property
    def k_bar(self) -> float:
        return self.params.k_bar

    @property
    def z_end_target(self) -> float:
        return 1.0 + self.params.WT / (2 * self.params.zd)

    @property
    def endpoint_error(self) -> float:
        """Endpoint miss as a fraction of the target width ``WT / zd``."""
        if self.zeta is not None:
            return 0.5 * abs(self.zeta[-1] - 1.0)
        return abs(self.z_bar[-1] - self.z_end_target) / (self.params.WT / self.params.zd)

    def z_of_rho(self, rho_bar) -> np.ndarray:
        return CubicHermiteSpline(self.rho_bar, self.z_bar, self.slope)(rho_bar)

    def rho_of_z(self, z_bar) -> np.ndarray:
        """Inverse map by Hermite interpolation with slopes ``1 / z_c'``."""
        return CubicHermiteSpline(self.z_bar, self.rho_bar, 1.0 / self.slope)(z_bar)

    def drho_dz(self, z_bar) -> np.ndarray:
        return CubicHermiteSpline(self.z_bar, self.rho_bar, 1.0 / self.slope).derivative()(z_bar)


def _slope_fn(f, F_T, params: DesignParams):
    """Slope of the scaled offset ``zeta = (z_bar - 1) 2 zd / WT`` in ``rho_bar``.

    Working with ``zeta`` in [-1, 1] keeps rounding relative to the target
    width instead of to ``zd``, which matters near the steep far edge of F_T.
    """
    if params.ET is None:
        raise DomainError("params.ET must be set by normalization before solving the map")
    half = 0.5 * params.WT
    coef = 2 * math.pi * params.k_bar * (params.E0 / params.ET) ** 2 * params.zd / half
    peak = float(F_T(params.zd)) ** 2
    floor = FLOOR * max(peak, 1.0)
    hits = []

    def rhs(rho_bar, zeta):
        den = float(F_T(params.zd + half * zeta)) ** 2
        if den < floor:
            hits.append(rho_bar)
            den = floor
        return coef * float(f(params.r0 * rho_bar)) ** 2 * rho_bar / den

    return rhs, hits


def solve_caustic_map(f, F_T, params: DesignParams, n_steps: int = DEFAULT_STEPS,
                      check_endpoint: bool = False) -> CausticMap:
    """Integrate the ray map with classical fixed-step RK4.

    ``f`` and ``F_T`` are the untruncated analytic profiles (callables of r
    and z in metres). With ``check_endpoint`` a miss larger than
    ``ENDPOINT_RTOL`` raises :class:`ResolutionError`.
    """
    if n_steps < 2:
        raise DomainError("n_steps must be >= 2")
    rhs, hits = _slope_fn(f, F_T, params)
    a = 1.0 - params.W0 / (2 * params.r0)
    b = 1.0 + params.W0 / (2 * params.r0)
    h = (b - a) / n_steps
    rho = a + h * np.arange(n_steps + 1)
    zeta = np.empty(n_steps + 1)
    slope = np.empty(n_steps + 1)
    zeta[0] = -1.0
    for i in range(n_steps):
        x, y = rho[i], zeta[i]
        k1 = rhs(x, y)
        k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(x + h, y + h * k3)
        slope[i] = k1
        zeta[i + 1] = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
    slope[-1] = rhs(rho[-1], zeta[-1])
    scale = params.WT / (2 * params.zd)
    cmap = CausticMap(rho, 1.0 + scale * zeta, scale * slope, params, bool(hits), zeta)
    if check_endpoint and cmap.endpoint_error > ENDPOINT_RTOL:
        raise ResolutionError(
            f"caustic endpoint misses the target edge by {cmap.endpoint_error:.3g} of WT",
            required=2 * n_steps)
    return cmap


def endpoint_convergence(f, F_T, params: DesignParams, steps=(256, 512, 1024, 2048)) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint errors at each step count and the observed orders between halvings."""
    errs = np.array([solve_caustic_map(f, F_T, params, n).endpoint_error for n in steps])
    orders = np.log2(errs[:-1] / errs[1:])
    return errs, orders


@dataclass(frozen=True)
class PhaseFunction:
    """Nondimensional phase ``phi_bar`` on the map nodes.

    ``scale = k r0^2 / zd`` converts to radians; ``at_r`` and ``at_s``
    evaluate the dimensional phase with Hermite interpolation using the exact
    slope ``-rho_bar / z_c``.
    """

    rho_bar: np.ndarray
    phi_bar: np.ndarray
    dphi_bar: np.ndarray
    scale: float
    r0: float

    def _spline(self):
        return CubicHermiteSpline(self.rho_bar, self.phi_bar, self.dphi_bar)

    def at_r(self, r) -> np.ndarray:
        return self.scale * self._spline()(np.asarray(r, dtype=float) / self.r0)

    def at_s(self, s) -> np.ndarray:
        return self.at_r(np.sqrt(np.asarray(s, dtype=float)))

    def on_grid(self, sgrid: SGrid) -> np.ndarray:
        return self.at_s(sgrid.s)


def integrate_phase(cmap: CausticMap) -> PhaseFunction:
    """``phi_bar(rho) = -int_{rho_start}^{rho} u / z_c(u) du`` by composite Simpson."""
    integrand = cmap.rho_bar / cmap.z_bar
    phi = -cumulative_simpson(integrand, x=cmap.rho_bar, initial=0.0)
    p = cmap.params
    return PhaseFunction(cmap.rho_bar, phi, -integrand, p.k * p.r0 ** 2 / p.zd, p.r0)


def stationary_phase_design(f, F_T, params: DesignParams, sgrid: SGrid,
                            n_steps: int = DEFAULT_STEPS) -> tuple[CausticMap, np.ndarray]:
    """Ray map and its phase sampled on the s-grid (radians)."""
    cmap = solve_caustic_map(f, F_T, params, n_steps)
    return cmap, integrate_phase(cmap).on_grid(sgrid)


def _inside(cmap: CausticMap, z_bar) -> np.ndarray:
    return (z_bar >= cmap.z_bar[0]) & (z_bar <= cmap.z_bar[-1])


def on_axis_asymptotic(cmap: CausticMap, f, z) -> np.ndarray:
    """``|E(0, z)| ~ E0 sqrt(2 pi k_bar) f(rho_c) rho_c^(1/2) (dz_c/drho)^(-1/2)``.

    Uses the interpolated inverse map and its derivative; zero outside the
    image of the map.
    """
    p = cmap.params
    z_bar = np.atleast_1d(np.asarray(z, dtype=float)) / p.zd
    out = np.zeros_like(z_bar)
    inside = _inside(cmap, z_bar)
    rho = cmap.rho_of_z(z_bar[inside])
    drho = cmap.drho_dz(z_bar[inside])
    out[inside] = p.E0 * np.sqrt(2 * np.pi * p.k_bar * rho * drho) * np.asarray(f(p.r0 * rho))
    return out


@dataclass(frozen=True)
class OffAxisEstimate:
    values: np.ndarray
    advisory: bool


def off_axis_asymptotic(cmap: CausticMap, F_T, r, z, halved: bool = False) -> OffAxisEstimate:
    """Bessel-beam estimate ``E_T F_T(z) |J0(k_bar r rho_c / (z_bar r0))|``.

    The kernel matches the Hankel transform ``J0(k rho r / z)``. ``halved``
    divides the Bessel argument by two. Values have shape ``(len(r), len(z))``;
    ``advisory`` is set when a point lies outside the map's image or beyond
    the third Bessel zero.
    """
    p = cmap.params
    r = np.atleast_1d(np.asarray(r, dtype=float))
    z_bar = np.atleast_1d(np.asarray(z, dtype=float)) / p.zd
    inside = _inside(cmap, z_bar)
    rho = np.ones_like(z_bar)
    rho[inside] = cmap.rho_of_z(z_bar[inside])
    arg = p.k_bar * np.outer(r, rho / z_bar) / p.r0
    if halved:
        arg = 0.5 * arg
    env = np.where(inside, p.ET * np.asarray(F_T(p.zd * z_bar)), 0.0)
    values = np.abs(j0(arg)) * env
    advisory = bool(np.any(~inside) or np.any(arg > 8.6537))
    return OffAxisEstimate(values, advisory)
