"""Inverse-power potential, angular channels and the effective radial problem.

Units are hbar = 1 and 2*mu = 1, so the radial equation reads

    R''(r) + [E - V(r) - gamma / r**2] R(r) = 0

with ``gamma = l(l+1)`` in three dimensions and ``m**2 - 1/4`` in two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import DomainError


def _check_radius(r):
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"radius must be finite and positive, got {r!r}")
    return arr


@dataclass(frozen=True)
class Potential:
    """V(r) = A/r**4 + B/r**3 + C/r**2 + D/r with A > 0, D < 0, B > -2 sqrt(A)."""

    A: float
    B: float
    C: float
    D: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise DomainError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))
        if self.A <= 0.0:
            raise DomainError(f"A must be positive, got {self.A}")
        if self.D >= 0.0:
            raise DomainError(f"D must be negative, got {self.D}")
        if self.B <= -2.0 * math.sqrt(self.A):
            raise DomainError(
                f"B must exceed -2*sqrt(A) = {-2.0 * math.sqrt(self.A)}, got {self.B}"
            )

    @classmethod
    def unchecked(cls, A, B, C, D) -> "Potential":
        """Build a potential without enforcing the sign invariants.

        Only the excited-state audit needs this, for the degenerate D = 0 case.
        """
        obj = object.__new__(cls)
        for name, value in zip("ABCD", (A, B, C, D)):
            object.__setattr__(obj, name, float(value))
        return obj

    @property
    def sqrt_A(self) -> float:
        return math.sqrt(self.A)

    def __call__(self, r):
        return evaluate_potential(self, r)


@dataclass(frozen=True)
class Channel:
    """Spatial dimension (2 or 3) and angular quantum number (l or m)."""

    dimension: int = 3
    angular: int = 0

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise DomainError(f"dimension must be 2 or 3, got {self.dimension!r}")
        if int(self.angular) != self.angular or self.angular < 0:
            raise DomainError(
                f"angular quantum number must be a non-negative integer, got {self.angular!r}"
            )
        object.__setattr__(self, "angular", int(self.angular))

    @property
    def gamma(self) -> float:
        return centrifugal_coefficient(self)


@dataclass(frozen=True)
class RadialGrid:
    """Grid on [r_min, r_max].

    With ``spacing="linear"`` ``step`` is the spacing in r. With
    ``spacing="log"`` it is the spacing in ln r, which suits potentials whose
    wavefunction spans several decades of r. The interval count is rounded so
    the grid ends exactly at ``r_max``; ``h`` is the spacing actually used.
    """

    r_min: float = 0.05
    r_max: float = 40.0
    step: float = 1e-3
    spacing: str = "linear"

    def __post_init__(self):
        if not (self.r_min > 0.0 and math.isfinite(self.r_max)):
            raise DomainError("grid radii must be finite and strictly positive")
        if self.r_max <= self.r_min:
            raise DomainError("r_max must exceed r_min")
        if not self.step > 0.0:
            raise DomainError("step must be positive")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"unknown spacing {self.spacing!r}")
        if self._span / self.step < 16 - 1e-9:
            raise DomainError("grid needs at least 16 intervals")

    @property
    def _span(self) -> float:
        if self.spacing == "log":
            return math.log(self.r_max / self.r_min)
        return self.r_max - self.r_min

    @property
    def intervals(self) -> int:
        return int(round(self._span / self.step))

    @property
    def h(self) -> float:
        return self._span / self.intervals

    def points(self) -> np.ndarray:
        n = self.intervals
        if self.spacing == "log":
            pts = self.r_min * np.exp(self.h * np.arange(n + 1))
        else:
            pts = self.r_min + self.h * np.arange(n + 1)
        pts[-1] = self.r_max
        return pts


def evaluate_potential(p: Potential, r):
    """Return ``A r^-4 + B r^-3 + C r^-2 + D r^-1``; scalar in, scalar out."""
    x = _check_radius(r)
    inv = 1.0 / x
    v = inv * (p.D + inv * (p.C + inv * (p.B + inv * p.A)))
    return float(v) if v.ndim == 0 else v


def centrifugal_coefficient(ch: Channel) -> float:
    if ch.dimension == 3:
        return float(ch.angular * (ch.angular + 1))
    if ch.dimension == 2:
        return ch.angular**2 - 0.25
    raise DomainError(f"dimension must be 2 or 3, got {ch.dimension!r}")


def effective_potential(p: Potential, ch: Channel, r):
    """V(r) + gamma / r**2."""
    x = _check_radius(r)
    v = evaluate_potential(p, x) + centrifugal_coefficient(ch) / x**2
    return float(v) if np.ndim(v) == 0 else v


def effective_radial_term(p: Potential, ch: Channel, E: float, r):
    """Coefficient of R in ``R'' + [E - V(r) - gamma/r**2] R = 0``."""
    x = _check_radius(r)
    out = E - evaluate_potential(p, x) - centrifugal_coefficient(ch) / x**2
    return float(out) if np.ndim(out) == 0 else out
