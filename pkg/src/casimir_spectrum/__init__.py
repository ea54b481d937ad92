"""Real-frequency spectral decomposition of the thermal Casimir force between Drude-metal plates."""

__version__ = "0.1.0"

from ._backend import NAME as BACKEND
from .contours import Contour, Mode, PlateSystem, integrand, path_integral
from .force import ForceReport, IntegrationBounds, LowFrequencyTailWarning, integrated_force, planck_weight, report
from .materials import (
    GOLD,
    BoundaryModel,
    DrudeMetal,
    SingularityError,
    dielectric_function,
    drude_conductivity,
    surface_impedance,
)
from .quadrature import (
    ConvergenceError,
    QuadratureResult,
    QuadratureSettings,
    integrate_finite,
    integrate_semi_infinite,
)
from .spectrum import FrequencyGrid, spectral_density, sweep

__all__ = [
    "BACKEND",
    "BoundaryModel",
    "Contour",
    "ConvergenceError",
    "DrudeMetal",
    "ForceReport",
    "FrequencyGrid",
    "GOLD",
    "IntegrationBounds",
    "LowFrequencyTailWarning",
    "Mode",
    "PlateSystem",
    "QuadratureResult",
    "QuadratureSettings",
    "SingularityError",
    "dielectric_function",
    "drude_conductivity",
    "integrand",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrated_force",
    "path_integral",
    "planck_weight",
    "report",
    "spectral_density",
    "surface_impedance",
    "sweep",
]
