"""Assemble a normalized design problem from an input ring and a target profile."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import normalize_target
from .grids import DEFAULT_N_OMEGA, DEFAULT_N_S, DesignParams, build_grids, OmegaGrid, SGrid
from .profiles import Profile, SampledProfile
from .spectral import TargetSpectrum, target_spectrum


@dataclass(frozen=True)
class ScaledTarget:
    """A target profile multiplied by a positive factor ``factor(z)``.

    Keeps the support of ``base``; used for targets corrected for temporal
    broadening.
    """

    base: Profile
    factor: Callable[[np.ndarray], np.ndarray]

    @property
    def support(self) -> tuple[float, float]:
        return self.base.support

    @property
    def full_width(self) -> float:
        return self.base.full_width

    @property
    def center(self) -> float:
        return self.base.center

    def shape(self, z):
        return self.base.shape(z) * self.factor(z)

    def __call__(self, z):
        return self.base(z) * self.factor(z)


@dataclass(frozen=True)
class ShapingProblem:
    """Normalized input/target pair on its s- and Omega-grids.

    ``g`` holds ``E0 f(sqrt(s))`` on ``sgrid``; ``G`` holds
    ``E_T F_T(k / 2 Omega) / Omega`` on ``ogrid``.
    """

    params: DesignParams
    source: Profile
    target: Profile | ScaledTarget
    sgrid: SGrid
    ogrid: OmegaGrid
    g: np.ndarray
    G: TargetSpectrum

    @classmethod
    def build(cls, k: float, source: Profile, target, E0: float = 1.0,
              n_s: int = DEFAULT_N_S, n_omega: int = DEFAULT_N_OMEGA) -> "ShapingProblem":
        params = DesignParams(k=k, r0=source.center, W0=source.full_width,
                              zd=target.center, WT=target.full_width, E0=E0)
        ET = normalize_target(E0, source.shape, target.shape, k, source.support, target.support)
        params = params.with_target_field(ET)
        sgrid, ogrid = build_grids(params, n_s, n_omega)
        g = E0 * np.asarray(source(sgrid.r))
        G = target_spectrum(ogrid, target, ET, k)
        return cls(params, source, target, sgrid, ogrid, g, G)

    @property
    def g_profile(self) -> SampledProfile:
        return SampledProfile(self.sgrid.s, self.g, "s", (self.sgrid.s_min, self.sgrid.s_max))

    @property
    def input_power(self) -> float:
        """``P0 = int E0^2 f^2 r dr = ||g||^2 / 2``."""
        return 0.5 * self.g_profile.norm() ** 2

    def focusing_phase(self) -> np.ndarray:
        """``-k r^2 / 2 zd`` on the s-grid: an ideal lens focusing at ``zd``."""
        return -self.params.omega_d * self.sgrid.s
