"""Noncommutative 2D circular well: bound states, phase shifts, cross sections."""

from .core import (
    BoundState,
    CrossSectionPoint,
    PhaseShiftPoint,
    RegionSolution,
    WellSpec,
    cross_section_differential,
    cross_section_total,
    find_bound_states,
    fock_element,
    matching_relative_residuals,
    matching_residual_bound,
    phase_shift,
    phase_shift_sweep,
    scattering_coeffs,
    wavefunction_eval,
)
from .errors import ConvergenceError, DomainError, NCWellError, SingularSystemError
from .logscale import LogScaled
from .oracle import CommWellSpec, comm_bound_states, comm_cross_section, comm_phase_shift
from .specfun import (
    OrderIndex,
    bessel,
    bessel_deriv,
    hankel_integral_oracle,
    hankel_integral_scaled,
    kummer_u,
    kummer_u_ratio,
    laguerre,
    re_u_neg,
    selftest,
)

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "CommWellSpec",
    "ConvergenceError",
    "CrossSectionPoint",
    "DomainError",
    "LogScaled",
    "NCWellError",
    "OrderIndex",
    "PhaseShiftPoint",
    "RegionSolution",
    "SingularSystemError",
    "WellSpec",
    "bessel",
    "bessel_deriv",
    "comm_bound_states",
    "comm_cross_section",
    "comm_phase_shift",
    "cross_section_differential",
    "cross_section_total",
    "find_bound_states",
    "fock_element",
    "hankel_integral_oracle",
    "hankel_integral_scaled",
    "kummer_u",
    "kummer_u_ratio",
    "laguerre",
    "matching_relative_residuals",
    "matching_residual_bound",
    "phase_shift",
    "phase_shift_sweep",
    "re_u_neg",
    "scattering_coeffs",
    "selftest",
    "wavefunction_eval",
]
