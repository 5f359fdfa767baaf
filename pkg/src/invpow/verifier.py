"""Independent numerical checks of the closed-form ground state.

The shooting solver never looks at the ansatz: it integrates the radial
equation outward with Numerov's method and bisects on the energy at which the
solution acquires its first node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ansatz import (
    ClosedFormSolution,
    log_ansatz_derivatives,
    radial_wavefunction,
    solve,
)
from .errors import (
    DomainError,
    InvPowError,
    NoEigenvalueInBracket,
    NotGroundState,
)
from .potential import Channel, Potential, RadialGrid, effective_potential
from .special import integrate_adaptive

_RESCALE = 1e150


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-10
    energy: float = 1e-3
    norm: float = 1e-6


@dataclass
class VerificationReport:
    residual_max: float
    shot_energy: float
    analytic_energy: float
    energy_rel_err: float
    normalization_integral: float
    passed: bool
    grid: RadialGrid
    notes: list[str] = field(default_factory=list)


def ode_residual(sol: ClosedFormSolution, grid: RadialGrid) -> float:
    """Scaled max of |R'' + (E - V - gamma/r^2) R| over the grid.

    R'' comes from the closed form, ``(g'' + g'^2) R``, so for a true
    solution this is rounding noise. Each point is scaled by ``max(1, |R''|)``.
    """
    if not isinstance(grid, RadialGrid):
        raise DomainError("ode_residual needs a RadialGrid")
    r = grid.points()
    _, g1, g2 = log_ansatz_derivatives(sol.params, r)
    R = radial_wavefunction(sol, r)
    d2R = (g2 + g1 * g1) * R
    q = sol.energy - effective_potential(sol.potential, sol.channel, r)
    return float(np.max(np.abs(d2R + q * R) / np.maximum(1.0, np.abs(d2R))))


def _numerov_kernel(p: Potential, ch: Channel, grid: RadialGrid):
    """Return ``(k0, r2, h)`` so that ``y'' = (k0 - E*r2) y`` on the grid."""
    r = grid.points()
    veff = effective_potential(p, ch, r)
    if grid.spacing == "log":
        # r = e^x, R = sqrt(r) u(x):  u'' = [r^2 (Veff - E) + 1/4] u
        r2 = r * r
        return r2 * veff + 0.25, r2, grid.h
    return veff, np.ones_like(r), grid.h


def _shoot(k0, r2, h, E):
    """Outward Numerov sweep.

    Returns the node count and the sign of the solution at the last point.
    Starts from y0 = 0, y1 = 1e-30, rescaling to stay in range.
    """
    # (1 - w_{n+1}) y_{n+1} = (2 + 10 w_n) y_n - (1 - w_{n-1}) y_{n-1},  w = h^2 k / 12
    w = (h * h / 12.0) * (k0 - E * r2)
    t = (1.0 - w).tolist()
    s = (2.0 + 10.0 * w).tolist()
    y_prev, y = 0.0, 1e-30
    nodes = 0
    for n in range(1, len(t) - 1):
        y_next = (s[n] * y - t[n - 1] * y_prev) / t[n + 1]
        if (y_next < 0.0) != (y < 0.0):
            nodes += 1
        y_prev, y = y, y_next
        if abs(y) > _RESCALE:
            y_prev /= _RESCALE
            y /= _RESCALE
    return nodes, y


def numerov_ground_energy(
    p: Potential,
    ch: Channel,
    grid: RadialGrid | None = None,
    bracket: tuple[float, float] | None = None,
    etol: float = 1e-8,
) -> float:
    """Ground-state energy by Numerov shooting and bisection.

    The solution starts at ``R(r_min) = 0`` and is integrated outward. Below
    the ground state it stays nodeless; above it, the tail swings through
    zero. Bisection on that transition converges to within ``etol``.

    Parameters
    ----------
    bracket : (E_lo, E_hi), optional
        Defaults to (min of the effective potential on the grid, -1e-12).

    Raises
    ------
    NoEigenvalueInBracket
        If the lower end already has a node or the upper end has none.
    NotGroundState
        If the converged solution is not nodeless.
    """
    grid = grid or RadialGrid()
    k0, r2, h = _numerov_kernel(p, ch, grid)
    if bracket is None:
        vmin = float(np.min(effective_potential(p, ch, grid.points())))
        if vmin >= 0.0:
            raise NoEigenvalueInBracket("effective potential is non-negative on the grid")
        bracket = (vmin, -1e-12)
    e_lo, e_hi = map(float, bracket)
    if not e_lo < e_hi < 0.0:
        raise DomainError(f"bracket must satisfy E_lo < E_hi < 0, got {bracket}")

    nodes_lo, _ = _shoot(k0, r2, h, e_lo)
    nodes_hi, _ = _shoot(k0, r2, h, e_hi)
    if nodes_lo != 0 or nodes_hi == 0:
        raise NoEigenvalueInBracket(
            f"node counts {nodes_lo} at E={e_lo:.6g} and {nodes_hi} at E={e_hi:.6g}"
        )
    while e_hi - e_lo > etol:
        mid = 0.5 * (e_lo + e_hi)
        nodes, _ = _shoot(k0, r2, h, mid)
        if nodes == 0:
            e_lo = mid
        else:
            e_hi = mid

    nodes, tail = _shoot(k0, r2, h, e_lo)
    if nodes != 0 or tail <= 0.0:
        raise NotGroundState(f"converged solution has {nodes} nodes")
    return 0.5 * (e_lo + e_hi)


def numerov_solution(p: Potential, ch: Channel, grid: RadialGrid, E: float) -> np.ndarray:
    """Outward Numerov solution R on ``grid.points()``, scaled to max |R| = 1.

    Mainly for inspection and node-count checks; shares the recursion with
    the shooting solver.
    """
    k0, r2, h = _numerov_kernel(p, ch, grid)
    w = (h * h / 12.0) * (k0 - E * r2)
    t = 1.0 - w
    s = 2.0 + 10.0 * w
    y = np.zeros(len(t))
    y[1] = 1e-30
    for n in range(1, len(t) - 1):
        y[n + 1] = (s[n] * y[n] - t[n - 1] * y[n - 1]) / t[n + 1]
        if abs(y[n + 1]) > _RESCALE:
            y[: n + 2] /= _RESCALE
    if grid.spacing == "log":
        y = y * np.sqrt(grid.points())
    return y / np.max(np.abs(y))


def adaptive_grid(p: Potential, ch: Channel, step: float = 2e-3, decay_lengths: float = 40.0):
    """Log grid sized from the potential alone, refined against the shot energy.

    ``r_min`` puts the origin suppression ``exp(-sqrt(A)/r)`` below 1e-15.
    ``r_max`` is grown until it sits ``decay_lengths`` decay lengths
    ``1/sqrt(|E|)`` past the outer classical turning point, and quadrupled
    while the bracket top ``-1e-12`` still gives a nodeless solution.

    Returns
    -------
    (energy, grid)
    """
    r_min = math.sqrt(p.A) / 35.0
    r_max = 40.0
    for _ in range(12):
        grid = RadialGrid(r_min, r_max, step, spacing="log")
        try:
            E = numerov_ground_energy(p, ch, grid)
        except NoEigenvalueInBracket:
            # too short for the near-threshold solution to turn over
            r_max *= 4.0
            continue
        r = grid.points()
        allowed = np.flatnonzero(effective_potential(p, ch, r) < E)
        r_turn = r[allowed[-1]] if allowed.size else r_max
        needed = r_turn + decay_lengths / math.sqrt(-E)
        if needed <= r_max:
            return E, grid
        r_max = float(1.5 * needed)
    raise NoEigenvalueInBracket(f"no converged grid up to r_max={r_max:.6g}")


def normalization_quadrature(sol: ClosedFormSolution, tol: float = 1e-10) -> float:
    """int_0^inf (N R)^2 dr by adaptive quadrature."""
    a, b, c = sol.params.a, sol.params.b, sol.params.c
    log_n2 = 2.0 * math.log(sol.normalization)

    def integrand(r):
        return math.exp(log_n2 + 2.0 * (a / r + b * r + c * math.log(r)))

    return integrate_adaptive(integrand, 0.0, math.inf, tol).value


def verify(
    p: Potential,
    ch: Channel,
    tolerances: Tolerances | None = None,
    grid: RadialGrid | str | None = None,
    bracket: tuple[float, float] | None = None,
) -> VerificationReport:
    """Solve in closed form, then check residual, shot energy and normalization.

    ``grid=None`` uses the default linear grid (0.05, 40, 1e-3);
    ``grid="adaptive"`` sizes a log grid from the potential. Errors from any
    stage are recorded in ``notes`` and mark the report as failed.
    """
    tol = tolerances or Tolerances()
    notes: list[str] = []
    nan = float("nan")
    report = VerificationReport(
        residual_max=nan,
        shot_energy=nan,
        analytic_energy=nan,
        energy_rel_err=nan,
        normalization_integral=nan,
        passed=False,
        grid=grid if isinstance(grid, RadialGrid) else RadialGrid(),
        notes=notes,
    )
    try:
        sol = solve(p, ch)
    except InvPowError as exc:
        notes.append(f"{type(exc).__name__}: {exc}")
        return report
    report.analytic_energy = sol.energy
    report.residual_max = ode_residual(sol, report.grid)

    try:
        if grid == "adaptive":
            report.shot_energy, report.grid = adaptive_grid(p, ch)
        else:
            report.shot_energy = numerov_ground_energy(p, ch, report.grid, bracket)
        report.energy_rel_err = abs(report.shot_energy - sol.energy) / abs(sol.energy)
    except InvPowError as exc:
        notes.append(f"{type(exc).__name__}: {exc}")

    try:
        report.normalization_integral = normalization_quadrature(sol)
    except InvPowError as exc:
        notes.append(f"{type(exc).__name__}: {exc}")

    report.passed = bool(
        report.residual_max <= tol.residual
        and report.energy_rel_err <= tol.energy
        and abs(report.normalization_integral - 1.0) <= tol.norm
    )
    return report
