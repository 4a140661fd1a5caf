"""Commutative 2D circular-well reference solver.

Independent of the projector-based solver: it never reads theta or the
boundary Fock index, only the radius R and the exterior level V.  Interior
solutions are J_m(k_in r) with k_in = sqrt(2E); bound exteriors decay as
K_m(kappa r) with kappa = sqrt(2(V-E)); scattering exteriors are
A J_m(k_out r) + B Y_m(k_out r) with k_out = sqrt(2(E-V)).  Value and
derivative continuity at r = R fixes the spectrum and tan(delta) = -B/A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BoundState, CrossSectionPoint, PhaseShiftPoint
from .errors import DomainError
from .specfun import _check_int, bessel, bessel_deriv

GRID_POINTS = 4000
EDGE_FRACTION = 1e-9
BISECT_FRACTION = 1e-12
TAIL_REL = 1e-6
HARD_M_CAP = 1024


@dataclass(frozen=True)
class CommWellSpec:
    """Commutative well: radius and exterior potential level (interior 0)."""

    radius: float
    v: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be positive, got {self.radius}")
        if not (self.v >= 0.0 and math.isfinite(self.v)):
            raise DomainError(f"v must be >= 0, got {self.v}")


def _log_derivative_mismatch(energy: float, spec: CommWellSpec, m: int) -> float:
    """Cross-multiplied continuity condition; zeros are the bound levels.

    k J'_m(kR) K_m(kappa R) - kappa K'_m(kappa R) J_m(kR), pole-free in E.
    """
    r = spec.radius
    k = math.sqrt(2.0 * energy)
    kappa = math.sqrt(2.0 * (spec.v - energy))
    return k * bessel_deriv("J", m, k * r) * bessel("K", m, kappa * r) - kappa * bessel_deriv(
        "K", m, kappa * r
    ) * bessel("J", m, k * r)


def comm_bound_states(spec: CommWellSpec, m: int, grid_points: int = GRID_POINTS) -> list[BoundState]:
    """Bound levels in (0, V); the spectrum depends on |m| only."""
    m = abs(_check_int(m, "m"))
    v = spec.v
    if v <= 0.0:
        return []
    eps = EDGE_FRACTION * v
    lo, hi = eps, v - eps
    tol = BISECT_FRACTION * v

    def g(e):
        return _log_derivative_mismatch(e, spec, m)

    states = []
    step = (hi - lo) / (grid_points - 1)
    prev_e, prev_g = lo, g(lo)
    for i in range(1, grid_points):
        e = lo + i * step
        cur = g(e)
        if (prev_g < 0.0) != (cur < 0.0):
            a, b = prev_e, e
            fa = prev_g
            while b - a > tol:
                mid = 0.5 * (a + b)
                fm = g(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if (fm < 0.0) == (fa < 0.0):
                    a, fa = mid, fm
                else:
                    b = mid
            root = 0.5 * (a + b)
            states.append((root, abs(g(root))))
        prev_e, prev_g = e, cur
    return [
        BoundState(m=m, energy=e, residual=r_, level=i)
        for i, (e, r_) in enumerate(states)
    ]


def comm_phase_shift(energy: float, spec: CommWellSpec, m: int) -> PhaseShiftPoint:
    """tan(delta_m) from log-derivative matching of the scattering solution."""
    m = abs(_check_int(m, "m"))
    if not (energy > spec.v):
        raise DomainError(f"scattering needs E > V, got E={energy}, V={spec.v}")
    r = spec.radius
    k_in = math.sqrt(2.0 * energy)
    k_out = math.sqrt(2.0 * (energy - spec.v))
    ji = bessel("J", m, k_in * r)
    jip = bessel_deriv("J", m, k_in * r)
    jo = bessel("J", m, k_out * r)
    jop = bessel_deriv("J", m, k_out * r)
    yo = bessel("Y", m, k_out * r)
    yop = bessel_deriv("Y", m, k_out * r)
    num = k_in * jip * jo - k_out * ji * jop
    den = k_in * jip * yo - k_out * ji * yop
    if den == 0.0:
        tan_delta = math.copysign(math.inf, num) if num != 0.0 else 0.0
    else:
        tan_delta = num / den
    delta = math.atan2(num, den)
    if delta > math.pi / 2:
        delta -= math.pi
    elif delta <= -math.pi / 2:
        delta += math.pi
    return PhaseShiftPoint(m=m, energy=energy, tan_delta=tan_delta, delta=delta)


def _comm_sin2(energy: float, spec: CommWellSpec, m: int) -> float:
    p = comm_phase_shift(energy, spec, m)
    s = math.sin(p.delta)
    return s * s


def comm_cross_section(
    energy: float, spec: CommWellSpec, m_max: int, tail_rel: float = TAIL_REL
) -> CrossSectionPoint:
    """sigma = (4/k) sum_m eps_m sin^2(delta_m), same tail rule as the core."""
    m_max = _check_int(m_max, "m_max")
    if m_max < 1:
        raise DomainError(f"m_max must be a positive integer, got {m_max}")
    if not (energy > spec.v):
        raise DomainError(f"cross section needs E > V, got E={energy}, V={spec.v}")
    k = math.sqrt(2.0 * (energy - spec.v))
    min_extend = max(m_max, math.ceil(k * spec.radius) + 2)
    sigma = 0.0
    contributions = []
    below = 0
    m = 0
    while True:
        eps = 1.0 if m == 0 else 2.0
        term = (4.0 / k) * eps * _comm_sin2(energy, spec, m)
        contributions.append((m, term))
        sigma += term
        if term <= tail_rel * sigma:
            below += 1
        else:
            below = 0
        if m + 1 > min_extend and below >= 2:
            break
        if m >= HARD_M_CAP:
            break
        m += 1
    return CrossSectionPoint(energy=energy, k=k, sigma_total=sigma, contributions=tuple(contributions))
