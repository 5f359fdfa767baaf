"""Closed-form ground state from the ansatz R(r) = exp(a/r + b r + c ln r).

Substituting the ansatz into the radial equation and matching powers of r
gives

    a**2 = A,  b**2 = -E,  2 b c = D,  2 a (1 - c) = B,
    c**2 - c - 2 a b = C + gamma,

so with ``a = -sqrt(A)`` the first four fix (a, b, c, E) and the last one
becomes a constraint that the four potential coefficients must satisfy.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintUnsatisfied,
    DomainError,
    NoInteriorPeak,
    NoRootFound,
    SingularityError,
)
from .potential import Channel, Potential, centrifugal_coefficient
from .special import bessel_k

log = logging.getLogger(__name__)

CONSTRAINT_TOL = 1e-9


@dataclass(frozen=True)
class AnsatzParams:
    a: float
    b: float
    c: float


@dataclass(frozen=True)
class ClosedFormSolution:
    potential: Potential
    channel: Channel
    params: AnsatzParams
    energy: float
    normalization: float


def constraint_C(A: float, B: float, D: float, ch: Channel) -> float:
    """Value of C for which the ansatz solves the radial equation exactly.

    ``B**2/(4A) + B/(2 sqrt A) + 2 A D/(B + 2 sqrt A) - gamma``
    """
    if not A > 0:
        raise DomainError(f"A must be positive, got {A}")
    s = math.sqrt(A)
    denom = B + 2.0 * s
    if denom == 0.0:
        raise SingularityError("constraint_C is singular at B = -2 sqrt(A)")
    if denom < 0.0:
        raise DomainError(f"B must exceed -2 sqrt(A) = {-2.0 * s}, got {B}")
    return B * B / (4.0 * A) + B / (2.0 * s) + 2.0 * A * D / denom - centrifugal_coefficient(ch)


def constraint_residual(p: Potential, ch: Channel) -> float:
    return constraint_C(p.A, p.B, p.D, ch) - p.C


def _constraint_C_vec(A, B, D, gamma):
    s = math.sqrt(A)
    return B * B / (4.0 * A) + B / (2.0 * s) + 2.0 * A * D / (B + 2.0 * s) - gamma


def solve_B(
    A: float,
    C: float,
    D: float,
    ch: Channel,
    lo: float | None = None,
    hi: float = 1e3,
    panels: int = 10_000,
    ftol: float = 1e-12,
) -> list[float]:
    """All B in the search bracket with ``constraint_C(A, B, D, ch) == C``.

    A uniform sign-change scan over ``panels`` panels is followed by bisection
    on each bracketing panel. ``lo`` defaults to just above the pole at
    ``-2 sqrt(A)``. Roots are returned in increasing order; the CLI picks the
    smallest positive one.

    Raises
    ------
    NoRootFound
        If the scan finds no sign change.
    """
    if not A > 0:
        raise DomainError(f"A must be positive, got {A}")
    if not D < 0:
        raise DomainError(f"D must be negative, got {D}")
    pole = -2.0 * math.sqrt(A)
    if lo is None:
        lo = pole + 1e-6
    if lo <= pole:
        raise DomainError(f"search bracket must start above the pole at {pole}")
    if not hi > lo:
        raise DomainError("search bracket must satisfy lo < hi")
    gamma = centrifugal_coefficient(ch)

    def f(B):
        return _constraint_C_vec(A, B, D, gamma) - C

    nodes = np.linspace(lo, hi, panels + 1)
    values = f(nodes)
    roots = []
    for i in np.flatnonzero(np.signbit(values[:-1]) != np.signbit(values[1:])):
        x0, x1, f0 = nodes[i], nodes[i + 1], values[i]
        if values[i] == 0.0:
            roots.append(float(x0))
            continue
        while True:
            mid = 0.5 * (x0 + x1)
            fm = f(mid)
            if abs(fm) <= ftol or mid in (x0, x1):
                break
            if (fm < 0.0) == (f0 < 0.0):
                x0, f0 = mid, fm
            else:
                x1 = mid
        roots.append(float(mid))
    if values[-1] == 0.0:
        roots.append(float(nodes[-1]))
    if not roots:
        raise NoRootFound(
            f"no root of constraint_C(B) = {C} for B in ({lo:.6g}, {hi:.6g})"
        )
    roots = sorted(set(roots))
    if len(roots) > 1:
        log.warning("solve_B found %d roots: %s", len(roots), roots)
    return roots


def select_B(roots: list[float]) -> float:
    """Default root choice: smallest positive, else the largest."""
    positive = [r for r in roots if r > 0.0]
    return min(positive) if positive else max(roots)


def _params_from_coefficients(p: Potential) -> AnsatzParams:
    s = math.sqrt(p.A)
    denom = p.B + 2.0 * s
    if denom <= 0.0:
        raise DomainError(f"B must exceed -2 sqrt(A) = {-2.0 * s}, got {p.B}")
    return AnsatzParams(a=-s, b=p.D * s / denom, c=denom / (2.0 * s))


def _require_constraint(p: Potential, ch: Channel, tol: float):
    residual = constraint_residual(p, ch)
    if not abs(residual) <= tol:
        raise ConstraintUnsatisfied(residual)


def solve_ansatz(p: Potential, ch: Channel, tol: float = CONSTRAINT_TOL) -> AnsatzParams:
    """Ansatz parameters (a, b, c) for a potential obeying the constraint.

    Raises
    ------
    ConstraintUnsatisfied
        If ``|constraint_C(A, B, D, ch) - C| > tol``.
    """
    _require_constraint(p, ch, tol)
    return _params_from_coefficients(p)


def energy_formula(p: Potential) -> float:
    """-A D**2 / (B + 2 sqrt A)**2, without checking the constraint."""
    denom = p.B + 2.0 * math.sqrt(p.A)
    if denom <= 0.0:
        raise DomainError("B must exceed -2 sqrt(A)")
    return -p.A * p.D**2 / denom**2


def ground_energy(p: Potential, ch: Channel, tol: float = CONSTRAINT_TOL) -> float:
    _require_constraint(p, ch, tol)
    return energy_formula(p)


def log_ansatz_derivatives(params: AnsatzParams, r):
    """Return ``(g, g', g'')`` for ``g = a/r + b r + c ln r``."""
    x = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError(f"radius must be finite and positive, got {r!r}")
    a, b, c = params.a, params.b, params.c
    g = a / x + b * x + c * np.log(x)
    g1 = -a / x**2 + b + c / x
    g2 = 2.0 * a / x**3 - c / x**2
    if x.ndim == 0:
        return float(g), float(g1), float(g2)
    return g, g1, g2


def peak_radius(params: AnsatzParams) -> float:
    """Radius of the wavefunction maximum, the positive root of b r^2 + c r - a = 0."""
    a, b, c = params.a, params.b, params.c
    if not (a < 0 and b < 0 and c > 0):
        raise DomainError("peak_radius needs a < 0, b < 0, c > 0")
    disc = c * c + 4.0 * a * b
    if disc < 0.0:
        raise NoInteriorPeak(f"negative discriminant {disc}")
    return (-c - math.sqrt(disc)) / (2.0 * b)


def normalization_integral(params: AnsatzParams) -> float:
    """int_0^inf r^(2c) exp(2a/r + 2br) dr in closed form via K_{2c+1}."""
    a, b, c = params.a, params.b, params.c
    nu = 2.0 * c + 1.0
    if not (a < 0 and b < 0 and nu > 0):
        raise DomainError("normalization needs a < 0, b < 0, 2c + 1 > 0")
    ratio = a / b
    log_val = math.log(2.0) + 0.5 * nu * math.log(ratio)
    return math.exp(log_val) * bessel_k(nu, 4.0 * math.sqrt(a * b))


def normalization_constant(params: AnsatzParams) -> float:
    """N with int_0^inf (N r^c exp(a/r + b r))^2 dr = 1."""
    return normalization_integral(params) ** -0.5


def solve(p: Potential, ch: Channel, tol: float = CONSTRAINT_TOL) -> ClosedFormSolution:
    params = solve_ansatz(p, ch, tol)
    return ClosedFormSolution(
        potential=p,
        channel=ch,
        params=params,
        energy=energy_formula(p),
        normalization=normalization_constant(params),
    )


def radial_wavefunction(sol: ClosedFormSolution, r, normalized: bool = False):
    """``N r^c exp(a/r + b r)`` evaluated as ``exp(g(r))``; underflow gives 0."""
    g, _, _ = log_ansatz_derivatives(sol.params, r)
    if normalized:
        g = g + math.log(sol.normalization)
    out = np.exp(g)
    return float(out) if np.ndim(out) == 0 else out


def check_matching_system(params: AnsatzParams, p: Potential, ch: Channel) -> np.ndarray:
    """Residuals of the five coefficient-matching relations.

    Order: ``a^2 - A``, ``b^2 + E``, ``2bc - D``, ``2a(1-c) - B``,
    ``(c^2 - c - 2ab) - (C + gamma)``, with E from the closed-form energy.
    """
    a, b, c = params.a, params.b, params.c
    E = energy_formula(p)
    gamma = centrifugal_coefficient(ch)
    return np.array(
        [
            a * a - p.A,
            b * b + E,
            2.0 * b * c - p.D,
            2.0 * a * (1.0 - c) - p.B,
            (c * c - c - 2.0 * a * b) - (p.C + gamma),
        ]
    )
