"""Jet-based evaluation of a fourth-order conformally invariant energy for hypersurfaces in R^5.

The package computes the energy density and its sixth-order Euler-Lagrange
operator on analytic immersions, the Noether currents that come with the
energy's symmetries, and Möbius-invariance experiments by quadrature.
"""

from .catalog import (
    CliffordCone,
    Ellipsoid,
    Graph,
    Hyperplane,
    MobiusImage,
    MobiusTransform,
    PerturbedSphere,
    RandomImmersion,
    RoundSphere,
    parse_spec,
    parse_transform,
)
from .errors import (
    ConfigError,
    DegenerateImmersionError,
    DomainError,
    InsufficientOrderError,
    SingularityError,
    UnsupportedOperationError,
    Willmore4Error,
)
from .geometry import build_frame, curvature
from .invariants import energy_density, energy_density_mu, quadratic_form_min, rivvy_residual, w3_operator, willmore_operator
from .noether import currents, divergence_checks, p_apply, p_invert, stress_tensor
from .quadrature import energy, integrate, local_energy, mobius_invariance_experiment

__version__ = "0.1.0"

__all__ = [
    "CliffordCone",
    "Ellipsoid",
    "Graph",
    "Hyperplane",
    "MobiusImage",
    "MobiusTransform",
    "PerturbedSphere",
    "RandomImmersion",
    "RoundSphere",
    "parse_spec",
    "parse_transform",
    "ConfigError",
    "DegenerateImmersionError",
    "DomainError",
    "InsufficientOrderError",
    "SingularityError",
    "UnsupportedOperationError",
    "Willmore4Error",
    "build_frame",
    "curvature",
    "energy_density",
    "energy_density_mu",
    "quadratic_form_min",
    "rivvy_residual",
    "w3_operator",
    "willmore_operator",
    "currents",
    "divergence_checks",
    "p_apply",
    "p_invert",
    "stress_tensor",
    "energy",
    "integrate",
    "local_energy",
    "mobius_invariance_experiment",
]
