"""2-D Helmholtz scattering workbench.

Direct solvers for bounded obstacles and periodic gratings (least-squares
multipole fits and a Nystrom boundary-integral reference), closed-form
circle oracles, and two inverse pipelines: support-function recovery from
far-field phases and linear-sampling indicators.

Set ``HELMSCAT_DISABLE_NUMBA=1`` to run the pure-numpy kernels.
"""

__version__ = "0.1.0"

from ._accel import backend
from .config import ConfigError, ExperimentConfig, load_config
from .farfield import FarField, read_far_field, synthesize_far_field, write_far_field
from .geometry import (
    Boundary,
    Circle,
    Ellipse,
    GratingProfile,
    Kite,
    SampledCurve,
    Triangle,
    grating_profile,
    named_boundary,
)
from .lstsq import LsqSolution, SpectralLsqProblem, solve_spectral, svd
from .mrc import DirectProblem, RadiatingExpansion, solve_direct
from .oracles import CircleScatterer

__all__ = [
    "__version__",
    "backend",
    "Boundary",
    "Circle",
    "CircleScatterer",
    "ConfigError",
    "DirectProblem",
    "Ellipse",
    "ExperimentConfig",
    "FarField",
    "GratingProfile",
    "Kite",
    "LsqSolution",
    "RadiatingExpansion",
    "SampledCurve",
    "SpectralLsqProblem",
    "Triangle",
    "grating_profile",
    "load_config",
    "named_boundary",
    "read_far_field",
    "solve_direct",
    "solve_spectral",
    "svd",
    "synthesize_far_field",
    "write_far_field",
]
