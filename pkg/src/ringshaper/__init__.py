"""Phase design for shaping the on-axis intensity of annular beams.

The on-axis Fresnel integral of a ring beam is a 1-D Fourier transform in the
variables ``s = rho**2`` and ``Omega = k / (2 z)``. This package builds
shaper phases by stationary phase and Gerchberg-Saxton refinement, evaluates
uncertainty-principle lower bounds on the achievable error, and verifies
designs by direct quadrature of the diffraction integral.
"""

from .bounds import BoundsReport, bounds_report, normalize_target
from .caustic import CausticMap, PhaseFunction, integrate_phase, solve_caustic_map
from .errors import (ConfigurationError, DomainError, NormalizationError,
                     ResolutionError, RingshaperError)
from .grids import DesignParams, OmegaGrid, SGrid, build_grids, omega_of_z, z_of_omega
from .gs import GsTrace, gs_step, lens_decompose, run_gs
from .problem import ShapingProblem
from .profiles import Profile, SampledProfile
from .pulse import ChirpDesign, chirp_parameters, q_broadening
from .spectral import (ComplexField, TargetSpectrum, error_functional, forward_field,
                       off_axis_field, on_axis_field)

__version__ = "0.1.0"
