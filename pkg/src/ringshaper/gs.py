"""Gerchberg-Saxton refinement of a shaper phase.

Each step projects onto the two modulus constraints in turn: the spectrum of
``g e^{i phi}`` takes modulus G (keeping its phase Psi), and the object phase
becomes the phase of the back-transformed spectrum on the support of g. With
the discrete adjoint built from the same quadrature weights as the forward
transform, the error functional cannot increase from one step to the next:
both half-steps maximise ``Re <B, F[g e^{i phi}]>`` in one variable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import DesignParams, SGrid
from .spectral import (TargetSpectrum, adjoint_field, forward_field,
                       functional_from_terms, plancherel_terms)

DEFAULT_ITERATIONS = 100
STAGNATION_WINDOW = 10
STAGNATION_RTOL = 1e-9


@dataclass(frozen=True)
class GsTrace:
    """Phase iterates ``phases[n]`` with functional values ``values[n]``.

    ``psi[n]`` is the spectral phase used to produce ``phases[n + 1]``.
    """

    phases: np.ndarray
    values: np.ndarray
    psi: np.ndarray
    stagnation: int | None

    @property
    def final_phase(self) -> np.ndarray:
        return self.phases[-1]

    @property
    def final_value(self) -> float:
        return float(self.values[-1])

    def table(self) -> np.ndarray:
        """Two columns: iteration index and functional value."""
        return np.column_stack([np.arange(self.values.size), self.values])


def _spectral_phase(F: np.ndarray) -> np.ndarray:
    return np.where(F != 0, np.angle(F), 0.0)


def object_update(phi_prev, h, g) -> np.ndarray:
    """Phase of ``h`` on the support of g; previous phase where ``h`` or ``g`` vanish."""
    keep = (np.asarray(g) == 0) | (h == 0)
    return np.where(keep, phi_prev, np.angle(h))


def gs_step(phi_prev, sgrid: SGrid, g, G: TargetSpectrum) -> tuple[np.ndarray, np.ndarray]:
    """One projection cycle; returns ``(phi_next, Psi)``."""
    F = forward_field(sgrid, g, phi_prev, G.grid).values
    psi = _spectral_phase(F)
    h = adjoint_field(G.grid, G.values * np.exp(1j * psi), sgrid)
    return object_update(phi_prev, h, g), psi


def stagnation_index(values, window: int = STAGNATION_WINDOW, rtol: float = STAGNATION_RTOL) -> int | None:
    """First n where the relative decrease over the previous ``window`` steps is below ``rtol``."""
    v = np.asarray(values, dtype=float)
    for n in range(window, v.size):
        ref = v[n - window]
        if ref == 0 or (ref - v[n]) / ref < rtol:
            return n
    return None


def run_gs(phi0, sgrid: SGrid, g, G: TargetSpectrum, iters: int = DEFAULT_ITERATIONS) -> GsTrace:
    """Iterate :func:`gs_step` from ``phi0`` and record every iterate."""
    if iters < 1:
        raise ValueError("iters must be >= 1")
    phi = np.asarray(phi0, dtype=float)
    phases = np.empty((iters + 1, phi.size))
    psis = np.empty((iters, G.grid.n))
    values = np.empty(iters + 1)
    for n in range(iters + 1):
        phases[n] = phi
        F = forward_field(sgrid, g, phi, G.grid).values
        values[n] = functional_from_terms(*plancherel_terms(G, sgrid, g, F))
        if n == iters:
            break
        psi = _spectral_phase(F)
        h = adjoint_field(G.grid, G.values * np.exp(1j * psi), sgrid)
        psis[n] = psi
        phi = object_update(phi, h, g)
    return GsTrace(phases, values, psis, stagnation_index(values))


def lens_decompose(phi, r, params: DesignParams) -> np.ndarray:
    """Residual after removing the ideal lens ``-k r^2 / 2 zd``, unwrapped along r."""
    r = np.asarray(r, dtype=float)
    residual = np.asarray(phi, dtype=float) + params.k * r ** 2 / (2 * params.zd)
    return np.unwrap(np.angle(np.exp(1j * residual)))
