"""Normalization and closed-form error bounds.

Every bound here is a lower bound on the error functional that follows from
Plancherel's identity and an uncertainty-type estimate: a function supported
on an interval of length L has ``||F[a]||_{L^2(S)} <= sqrt(|S|) ||a||_{L^1}``.
The bounds assume ``||G|| = sqrt(2 pi) ||g||``; :func:`check_normalization`
enforces this before any bound is returned.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math

import numpy as np
from scipy.integrate import quad
from scipy.special import j0, j1, jn_zeros

from .errors import DomainError, NormalizationError
from .grids import DesignParams, OmegaGrid
from .profiles import SampledProfile
from .spectral import TargetSpectrum, check_subinterval

NORMALIZATION_RTOL = 1e-6
BESSEL_ZERO = float(jn_zeros(0, 1)[0])
_QUAD = dict(epsabs=0.0, epsrel=1e-12, limit=400)


def normalize_target(E0: float, f, F_T, k: float, r_support: tuple[float, float],
                     z_support: tuple[float, float]) -> float:
    """Target peak field E_T making ``||G|| = sqrt(2 pi) ||g||``.

    ``E_T**2 = 2 pi k E0**2 int f(r)**2 r dr / int F_T(z)**2 dz``, both
    integrals by adaptive quadrature over the given supports.
    """
    num = quad(lambda r: f(r) ** 2 * r, *r_support, **_QUAD)[0]
    den = quad(lambda z: F_T(z) ** 2, *z_support, **_QUAD)[0]
    if not den > 0:
        raise NormalizationError("target profile has zero L2 norm")
    return float(E0 * math.sqrt(2 * math.pi * k * num / den))


def normalization_residual(G: TargetSpectrum, g: SampledProfile) -> float:
    """Relative mismatch ``| ||G|| - sqrt(2 pi) ||g|| | / ||G||``."""
    gn = G.norm()
    ref = math.sqrt(2 * math.pi) * g.norm()
    if gn == 0:
        return 0.0 if ref == 0 else math.inf
    return abs(gn - ref) / gn


def check_normalization(G: TargetSpectrum, g: SampledProfile, rtol: float = NORMALIZATION_RTOL) -> None:
    res = normalization_residual(G, g)
    if res > rtol:
        raise NormalizationError(f"||G|| and sqrt(2 pi)||g|| differ by {res:.3g} (relative)")


def beta(k: float, r0: float, W0: float, WT: float, zd: float, half_width: bool = False) -> float:
    """``2 k r0 WT W0 / (4 zd**2 - WT**2)``.

    With ``half_width`` the half-widths ``W0/2`` and ``WT/2`` are substituted
    everywhere, which is about a quarter of the full-width value.
    """
    if half_width:
        W0, WT = 0.5 * W0, 0.5 * WT
    if WT >= 2 * zd:
        raise DomainError("beta needs WT < 2 zd")
    return 2 * k * r0 * WT * W0 / (4 * zd ** 2 - WT ** 2)


def beta_of(params: DesignParams, half_width: bool = False) -> float:
    return beta(params.k, params.r0, params.W0, params.WT, params.zd, half_width)


def plancherel_gap(G: TargetSpectrum, g: SampledProfile) -> tuple[float, float]:
    """``(| ||G|| - sqrt(2 pi)||g|| |, ||G|| + sqrt(2 pi)||g||)``; I lies between."""
    a, b = G.norm(), math.sqrt(2 * math.pi) * g.norm()
    return abs(a - b), a + b


def thm2_lower_bound(G_norm: float, beta_value: float) -> float:
    """``||G|| (1 - sqrt(beta / pi))`` clamped at zero."""
    return max(0.0, G_norm * (1.0 - math.sqrt(beta_value / math.pi)))


def thm3_lower_bounds(G: TargetSpectrum, g: SampledProfile, params: DesignParams) -> tuple[float, float]:
    """L1-refined bounds ``(via ||g||_1, via ||G||_1)``, clamped at zero."""
    k, zd, WT = params.k, params.zd, params.WT
    g1, g2 = g.norm(1), g.norm(2)
    G1, G2 = G.norm(1), G.norm(2)
    via_g = 0.0
    if g2 > 0:
        ratio = math.sqrt(2 * k * WT / (4 * zd ** 2 - WT ** 2)) * g1 / g2
        via_g = max(0.0, math.sqrt(2 * math.pi) * g2 * (1 - ratio))
    via_G = 0.0
    if G2 > 0:
        ratio = math.sqrt(params.r0 * params.W0 / math.pi) * G1 / G2
        via_G = max(0.0, G2 * (1 - ratio))
    return via_g, via_G


@dataclass(frozen=True)
class LocalBound:
    value: float
    zd_local: float
    WT_local: float
    form: str
    condition_holds: bool


LOCAL_FORMS = ("l1", "l2", "l2_printed")


def local_target_norm(G: TargetSpectrum, params: DesignParams, zd_local: float,
                      WT_local: float, n: int = 2048) -> float:
    """``||G||`` restricted to ``S_G(zd', WT')``."""
    if WT_local == 0:
        return 0.0
    grid = OmegaGrid.target_support(params, n, zd_local, WT_local)
    return G.on(grid).norm()


def local_lower_bound(G: TargetSpectrum, g: SampledProfile, params: DesignParams,
                      zd_local: float, WT_local: float, form: str = "l1",
                      n: int = 2048) -> LocalBound:
    """Lower bound on the error restricted to ``S_G(zd', WT')``.

    ``form="l1"``:  ``||G||_loc - sqrt(2 k WT' / (4 zd'^2 - WT'^2)) ||g||_1``,
    valid when the subtracted term does not exceed ``||G||_loc``.

    ``form="l2"``:  ``||G||_loc - sqrt(2 k WT' r0 W0 / (pi (4 zd'^2 - WT'^2))) ||G||``,
    the same estimate with ``||g||_1`` bounded through Cauchy-Schwarz.

    ``form="l2_printed"`` replaces ``W0`` by ``zd'`` in the radicand. It does
    not follow from the estimate and is kept only for comparison.
    """
    check_subinterval(params, zd_local, WT_local)
    if form not in LOCAL_FORMS:
        raise DomainError(f"form must be one of {LOCAL_FORMS}")
    if WT_local == 0:
        return LocalBound(0.0, zd_local, WT_local, form, True)
    loc = local_target_norm(G, params, zd_local, WT_local, n)
    window = 2 * params.k * WT_local / (4 * zd_local ** 2 - WT_local ** 2)
    if form == "l1":
        term = math.sqrt(window) * g.norm(1)
    else:
        length = params.W0 if form == "l2" else zd_local
        term = math.sqrt(window * params.r0 * length / math.pi) * G.norm()
    holds = term <= loc
    return LocalBound(max(0.0, loc - term) if holds else 0.0, zd_local, WT_local, form, holds)


def local_search_grid(params: DesignParams, n_centers: int = 9,
                      widths=(1.0, 0.5, 0.25, 0.1, 0.05)) -> list[tuple[float, float]]:
    """Admissible ``(zd', WT')`` pairs: windows of fractional width centred inside the target."""
    pairs = []
    for frac in widths:
        WT_local = frac * params.WT
        slack = 0.5 * (params.WT - WT_local)
        for c in np.linspace(-slack, slack, n_centers if slack > 0 else 1):
            pairs.append((params.zd + 0.5 * float(c), WT_local))
    return pairs


def best_local_bound(G: TargetSpectrum, g: SampledProfile, params: DesignParams,
                     grid=None, form: str = "l1", n: int = 2048) -> LocalBound:
    """Largest local bound over a search grid of ``(zd', WT')`` pairs."""
    grid = local_search_grid(params) if grid is None else grid
    best = None
    for zd_local, WT_local in grid:
        b = local_lower_bound(G, g, params, zd_local, WT_local, form, n)
        if best is None or b.value > best.value:
            best = b
    if best is None:
        raise DomainError("empty search grid")
    return best


def delta_m(G: TargetSpectrum, g: SampledProfile, params: DesignParams, m: int,
            WT_prime: float, l1_power: int = 2, n: int = 4096) -> float:
    """Resolution diagnostic for a modulated target.

    With ``w = 2 WT' / m`` and ``L = int_{S_G(zd, w)} G^2``::

        delta = (L - 2 k w / (4 zd^2 - w^2) * ||g||_1**l1_power) / L

    ``delta > 0`` means the local bound forbids matching features of width w.
    """
    if m < 1:
        raise DomainError("m must be >= 1")
    w = 2.0 * WT_prime / m
    if not 0 < w < params.WT:
        raise DomainError("window width must satisfy 0 < w < WT")
    loc = local_target_norm(G, params, params.zd, w, n) ** 2
    term = 2 * params.k * w / (4 * params.zd ** 2 - w ** 2) * g.norm(1) ** l1_power
    return (loc - term) / loc


def peak_constant(n: int) -> float:
    """``C(n) = 2**(1/2n - 1) / Gamma(1 + 1/2n)``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    e = 1.0 / (2 * n)
    return 2.0 ** (e - 1.0) / math.gamma(1.0 + e)


def peak_intensity_ratio(n: int, k: float, r0: float, W0_prime: float, WT_prime: float) -> float:
    """Laplace-method estimate of ``E_T**2 / E0**2`` for a Gaussian ring and super-Gaussian target."""
    return math.sqrt(2) * math.pi ** 1.5 * peak_constant(n) * k * r0 * W0_prime / WT_prime


def core_integral() -> float:
    """``int_0^{j_01} J0(x)^2 x dx = j_01^2 J1(j_01)^2 / 2``."""
    return 0.5 * BESSEL_ZERO ** 2 * (j0(BESSEL_ZERO) ** 2 + j1(BESSEL_ZERO) ** 2)


@dataclass(frozen=True)
class CorePower:
    """Central-lobe power estimates at the design distance.

    ``exact`` uses the Hankel kernel ``J0(k rho r / z)``. ``halved_plus`` and
    ``halved_minus`` use ``J0(k rho r / 2z)`` with the Gamma prefactor
    ``2**(+1/2n)`` or ``2**(-1/2n)``. ``advisory`` marks ``beta <= pi``.
    """

    exact: float
    halved_plus: float
    halved_minus: float
    advisory: bool


def central_core_power(params: DesignParams, n: int, WT_prime: float, P0: float,
                       FT_at_zd: float = 1.0) -> CorePower:
    """Power inside the first Bessel zero at ``zd`` for a super-Gaussian target.

    Uses ``E_T^2 F_T(zd)^2 = 2 pi k P0 F_T(zd)^2 / ||F_T||^2`` with
    ``||F_T||^2 = 2 WT' Gamma(1 + 1/2n) 2**(-1/2n)`` and ``P0 = int E0^2 f^2 r dr``.
    """
    e = 1.0 / (2 * n)
    base = 2 * math.pi * core_integral() * params.zd ** 2 / (params.k * params.r0 ** 2)
    norm_sq = 2 * WT_prime * math.gamma(1 + e) * 2.0 ** (-e)
    exact = base * FT_at_zd ** 2 / norm_sq * P0
    halved = 4 * base / (2 * WT_prime * math.gamma(1 + e)) * FT_at_zd ** 2 * P0
    return CorePower(exact, halved * 2.0 ** e, halved * 2.0 ** (-e), beta_of(params) <= math.pi)


def first_zero_radius(params: DesignParams, z: float | None = None, rho: float | None = None) -> float:
    """Radius of the first zero of ``J0(k rho r / z)``."""
    z = params.zd if z is None else z
    rho = params.r0 if rho is None else rho
    return BESSEL_ZERO * z / (params.k * rho)


@dataclass(frozen=True)
class BoundsReport:
    beta: float
    beta_half_width: float
    plancherel_lower: float
    plancherel_upper: float
    thm2_lower: float
    thm3_lower_g: float
    thm3_lower_G: float
    best_local_lower: float
    best_local_zd: float
    best_local_WT: float
    master_lower: float
    normalization_residual: float

    def to_dict(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}


def bounds_report(G: TargetSpectrum, g: SampledProfile, params: DesignParams,
                  local_grid=None, check: bool = True) -> BoundsReport:
    """All bounds for one design problem; ``master_lower`` is their maximum.

    Bounds built from the ``l2_printed`` local form are never included.
    """
    if check:
        check_normalization(G, g)
    b = beta_of(params)
    lo, hi = plancherel_gap(G, g)
    t2 = thm2_lower_bound(G.norm(), b)
    t3g, t3G = thm3_lower_bounds(G, g, params)
    best = best_local_bound(G, g, params, local_grid, "l1")
    best_l2 = best_local_bound(G, g, params, local_grid, "l2")
    if best_l2.value > best.value:
        best = best_l2
    master = max(lo, t2, t3g, t3G, best.value)
    return BoundsReport(b, beta_of(params, True), lo, hi, t2, t3g, t3G, best.value,
                        best.zd_local, best.WT_local, master, normalization_residual(G, g))
