"""Fourier/Fresnel engine.

With ``g(s) = E0 f(sqrt(s))`` and ``varphi(s) = phi(sqrt(s))`` the on-axis
field is ``E(0, k/(2 Omega)) = -i Omega F[g exp(i varphi)](Omega)`` where

    F[a](Omega) = integral a(s) exp(i Omega s) ds.

All integrals use the trapezoid rule on the uniform s-grid. Spectra on a
uniform Omega-grid are evaluated with a chirp-z transform; the direct O(N M)
sum is kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import fft as sp_fft
from scipy.special import j0

from .errors import DomainError, ResolutionError
from .grids import DesignParams, OmegaGrid, SGrid

CAPTURE_EPS = 1e-4
SAMPLES_PER_BESSEL_PERIOD = 8
_CHUNK = 2 ** 22


@dataclass(frozen=True)
class ComplexField:
    """Complex samples on a declared grid.

    ``captured_fraction`` is the share of the spectral mass ``2 pi ||g||^2``
    seen inside an Omega window; ``truncated`` flags windows that miss more
    than ``CAPTURE_EPS`` of it.
    """

    coords: np.ndarray | tuple
    values: np.ndarray
    coordinate: str
    captured_fraction: float | None = None
    truncated: bool = False

    def __abs__(self):
        return np.abs(self.values)


@dataclass(frozen=True)
class TargetSpectrum:
    """``G(Omega) = E_T F_T(k/(2 Omega)) / Omega`` sampled on its support."""

    grid: OmegaGrid
    values: np.ndarray
    evaluate: Callable[[np.ndarray], np.ndarray] | None = None

    def norm(self, p: int = 2) -> float:
        return float(np.sum(self.grid.weights * np.abs(self.values) ** p) ** (1.0 / p))

    def on(self, grid: OmegaGrid) -> "TargetSpectrum":
        """Resample onto another grid, analytically when possible."""
        if self.evaluate is not None:
            values = self.evaluate(grid.omega)
        else:
            values = np.interp(grid.omega, self.grid.omega, self.values, left=0.0, right=0.0)
        return TargetSpectrum(grid, values, self.evaluate)

    def scaled(self, factor: float) -> "TargetSpectrum":
        ev = self.evaluate
        if isinstance(ev, TargetOnOmega):
            ev = TargetOnOmega(ev.target, factor * ev.ET, ev.k)
        elif ev is not None:
            ev = None
        return TargetSpectrum(self.grid, factor * self.values, ev)


@dataclass(frozen=True)
class TargetOnOmega:
    """``E_T F_T(k / 2 Omega) / Omega`` for Omega > 0, zero elsewhere."""

    target: Callable
    ET: float
    k: float

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        out = np.zeros_like(omega)
        pos = omega > 0
        out[pos] = self.ET * np.asarray(self.target(self.k / (2 * omega[pos]))) / omega[pos]
        return out


def target_spectrum(grid: OmegaGrid, target, ET: float, k: float) -> TargetSpectrum:
    """Sample G for a target profile ``target`` (callable of z, zero off support)."""
    evaluate = TargetOnOmega(target, ET, k)
    return TargetSpectrum(grid, evaluate(grid.omega), evaluate)


def chirp_sum(x, t0: float, dt: float, u0: float, du: float, m: int) -> np.ndarray:
    """``y_k = sum_j x_j exp(i (t0 + j dt)(u0 + k du))`` for ``k < m``.

    Bluestein's identity ``jk = (j^2 + k^2 - (k - j)^2) / 2`` turns the sum
    into a convolution. Chirp phases are formed from exact integer squares
    rather than powers of a rounded root, which keeps the relative error near
    1e-14 even when ``dt du m n`` is large.
    """
    x = np.asarray(x, dtype=complex)
    n = x.size
    c = 0.5 * dt * du
    j = np.arange(n, dtype=float)
    kk = np.arange(m, dtype=float)
    lags = np.arange(-(n - 1), m, dtype=float)
    size = sp_fft.next_fast_len(n + m - 1)
    xa = x * np.exp(1j * (dt * u0 * j + c * j * j))
    kernel = np.exp(-1j * c * lags * lags)
    conv = sp_fft.ifft(sp_fft.fft(xa, size) * sp_fft.fft(kernel, size))
    y = conv[n - 1:n - 1 + m]
    return y * np.exp(1j * (t0 * (u0 + du * kk) + c * kk * kk))


def _mass(sgrid: SGrid, g) -> float:
    return 2 * np.pi * float(np.sum(sgrid.weights * np.abs(g) ** 2))


def forward_field(sgrid: SGrid, g, phi, ogrid: OmegaGrid) -> ComplexField:
    """``F[g exp(i phi)]`` on ``ogrid`` by chirp-z transform."""
    a = sgrid.weights * np.asarray(g) * np.exp(1j * np.asarray(phi, dtype=float))
    values = chirp_sum(a, sgrid.s_min, sgrid.ds, ogrid.omega_min, ogrid.d_omega, ogrid.n)
    mass = _mass(sgrid, g)
    if mass > 0:
        captured = float(np.sum(ogrid.weights * np.abs(values) ** 2)) / mass
    else:
        captured = 1.0
    return ComplexField(ogrid.omega, values, "omega", captured, captured < 1 - CAPTURE_EPS)


def adjoint_field(ogrid: OmegaGrid, B, sgrid: SGrid) -> np.ndarray:
    """``h(s_j) = sum_m v_m B_m exp(-i Omega_m s_j)``: adjoint of :func:`forward_field`.

    Dividing by ``2 pi`` gives the inverse transform restricted to the s-grid.
    """
    x = np.conj(ogrid.weights * np.asarray(B, dtype=complex))
    return np.conj(chirp_sum(x, ogrid.omega_min, ogrid.d_omega, sgrid.s_min, sgrid.ds, sgrid.n))


def inverse_field(ogrid: OmegaGrid, B, sgrid: SGrid) -> np.ndarray:
    return adjoint_field(ogrid, B, sgrid) / (2 * np.pi)


def direct_transform(s, weights, a, omega) -> np.ndarray:
    """Brute-force ``sum_j w_j a_j exp(i Omega s_j)``; the quadrature oracle."""
    s = np.asarray(s, dtype=float)
    wa = np.asarray(weights) * np.asarray(a, dtype=complex)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.empty(omega.shape, dtype=complex)
    step = max(1, _CHUNK // max(1, s.size))
    for i in range(0, omega.size, step):
        w = omega[i:i + step]
        out[i:i + step] = np.exp(1j * np.outer(w, s)) @ wa
    return out


def riemann_transform(g_fn, phi_fn, s_min: float, s_max: float, n: int, omega) -> np.ndarray:
    """Trapezoid quadrature of ``F[g exp(i phi)]`` from callables on ``n`` nodes."""
    grid = SGrid(s_min, s_max, n)
    s = grid.s
    return direct_transform(s, grid.weights, np.asarray(g_fn(s)) * np.exp(1j * np.asarray(phi_fn(s))), omega)


def on_axis_field(sgrid: SGrid, g, phi, z, k: float) -> ComplexField:
    """``E(0, z) = -(i k / z) integral E0 f e^{i phi} e^{i k rho^2 / 2z} rho d rho``.

    Evaluated in the s-parameterisation, ``-i Omega F[g e^{i phi}](Omega)``, by
    direct summation so ``z`` may be any positive array.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z <= 0):
        raise DomainError("on_axis_field requires z > 0")
    omega = k / (2 * z)
    a = np.asarray(g) * np.exp(1j * np.asarray(phi, dtype=float))
    F = direct_transform(sgrid.s, sgrid.weights, a, omega)
    return ComplexField(z, -1j * omega * F, "z")


def bessel_resolution(sgrid: SGrid, k: float, r_max: float, z_min: float) -> int:
    """Samples needed so ``J0(k rho r / z)`` has 8 points per period in rho."""
    rho_min = np.sqrt(sgrid.s_min)
    rate = k * r_max / z_min
    needed = (sgrid.s_max - sgrid.s_min) * rate * SAMPLES_PER_BESSEL_PERIOD / (2 * np.pi * 2 * rho_min)
    return int(np.ceil(needed)) + 1


def off_axis_field(sgrid: SGrid, g, phi, r, z, k: float) -> ComplexField:
    """Field on the (r, z) mesh by direct quadrature of the Hankel kernel.

    Returns values of shape ``(len(r), len(z))``; each z-column is independent.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(r < 0) or np.any(z <= 0):
        raise DomainError("off_axis_field requires r >= 0 and z > 0")
    required = bessel_resolution(sgrid, k, float(r.max()), float(z.min()))
    if required > sgrid.n:
        raise ResolutionError(
            f"s-grid of {sgrid.n} samples cannot resolve the Bessel kernel; need {required}",
            required)
    s = sgrid.s
    rho = np.sqrt(s)
    a = sgrid.weights * np.asarray(g) * np.exp(1j * np.asarray(phi, dtype=float))
    out = np.empty((r.size, z.size), dtype=complex)
    for col, zc in enumerate(z):
        omega = k / (2 * zc)
        kernel = j0(np.outer(r, rho) * (k / zc))
        integral = kernel @ (a * np.exp(1j * omega * s))
        out[:, col] = -1j * omega * np.exp(1j * omega * r ** 2) * integral
    return ComplexField((r, z), out, "rz")


def plancherel_terms(G: TargetSpectrum, sgrid: SGrid, g, F) -> tuple[float, float, float]:
    """``(||G||^2, 2 pi ||g||^2, integral G |F|)`` on the target grid."""
    v = G.grid.weights
    return (float(np.sum(v * G.values ** 2)), _mass(sgrid, g),
            float(np.sum(v * G.values * np.abs(F))))


def functional_from_terms(gg: float, mass: float, cross: float) -> float:
    return float(np.sqrt(max(gg + mass - 2.0 * cross, 0.0)))


def error_functional(G: TargetSpectrum, sgrid: SGrid, g, phi, method: str = "plancherel",
                     window_factor: float = 4.0) -> float:
    """``I[phi] = || G - |F[g e^{i phi}]| ||`` over the whole Omega axis.

    ``plancherel`` expands the square and uses ``||F||^2 = 2 pi ||g||^2``, so
    only the cross term needs the transform on the support of G; this is exact
    for the whole line. ``window`` integrates ``(G - |F|)^2`` directly on a
    centred window ``window_factor`` times wider than the grid of G.
    """
    if method == "plancherel":
        F = forward_field(sgrid, g, phi, G.grid).values
        return functional_from_terms(*plancherel_terms(G, sgrid, g, F))
    if method == "window":
        grid = G.grid if window_factor == 1 else G.grid.widened(window_factor, int(window_factor * G.grid.n))
        Gw = G.on(grid)
        F = forward_field(sgrid, g, phi, grid).values
        return float(np.sqrt(np.sum(grid.weights * (Gw.values - np.abs(F)) ** 2)))
    raise DomainError(f"unknown method {method!r}")


def check_subinterval(params: DesignParams, zd_local: float, WT_local: float) -> None:
    lo, hi = 2 * params.zd - params.WT, 2 * params.zd + params.WT
    tol = 1e-12 * hi
    if WT_local < 0 or zd_local <= 0:
        raise DomainError("local window needs zd' > 0 and WT' >= 0")
    if 2 * zd_local - WT_local < lo - tol or 2 * zd_local + WT_local > hi + tol:
        raise DomainError("local window lies outside the target interval")


def local_grid(params: DesignParams, zd_local: float, WT_local: float, n: int) -> OmegaGrid:
    return OmegaGrid.target_support(params, n, zd_local, WT_local)


def local_error(G: TargetSpectrum, sgrid: SGrid, g, phi, params: DesignParams,
                zd_local: float, WT_local: float, n: int = 2048) -> float:
    """L2 error of the on-axis match restricted to ``S_G(zd', WT')``."""
    check_subinterval(params, zd_local, WT_local)
    if WT_local == 0:
        return 0.0
    Gl = G.on(local_grid(params, zd_local, WT_local, n))
    F = forward_field(sgrid, g, phi, Gl.grid).values
    return float(np.sqrt(np.sum(Gl.grid.weights * (Gl.values - np.abs(F)) ** 2)))


def power_in_radius(r, field, R: float) -> float:
    """``P_R = integral_0^R |E(r)|^2 r dr`` on a radial grid starting at 0."""
    r = np.asarray(r, dtype=float)
    intensity = np.abs(np.asarray(field)) ** 2
    if R < 0 or R > r[-1] * (1 + 1e-12):
        raise DomainError(f"radius {R} outside the radial grid [0, {r[-1]}]")
    if R == 0:
        return 0.0
    inside = r < R
    rr = np.append(r[inside], R)
    ii = np.append(intensity[inside], np.interp(R, r, intensity))
    return float(np.trapezoid(ii * rr, rr))

