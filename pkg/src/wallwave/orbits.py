"""Orbits of the point group and of ``D x Z`` on the frequency plane.

The weak cross-section is the open sector ``theta1 < arg < theta2`` cut to
the annulus ``1 <= |omega| < 3``. Sector edges are the mirror axes for
dihedral point groups and the rays ``2 pi j / k`` for cyclic ones; points
within ``BOUNDARY_TOL`` radians of an edge are reported as boundary rather
than assigned to a side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import GroupData, PointElement

__all__ = [
    "BOUNDARY_TOL",
    "STAB_TOL",
    "CrossSection",
    "CanonicalForm",
    "Boundary",
    "Zero",
    "stabilizer",
    "build_cross_section",
    "canonicalize",
    "same_orbit",
    "irreducible",
    "orbit_points",
]

BOUNDARY_TOL = 1e-9
STAB_TOL = 1e-9
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class CrossSection:
    group: GroupData
    theta1: float
    theta2: float
    r_min: float = 1.0
    r_max: float = 3.0

    @property
    def width(self) -> float:
        return self.theta2 - self.theta1

    def contains(self, omega) -> bool:
        """Membership in X, strict in angle (edges excluded)."""
        x, y = float(omega[0]), float(omega[1])
        r = math.hypot(x, y)
        if not (self.r_min <= r < self.r_max):
            return False
        psi = (math.atan2(y, x) - self.theta1) % TWO_PI
        return 0.0 < psi < self.width

    def to_json(self) -> dict:
        return {"group": self.group.name, "theta": [self.theta1, self.theta2],
                "radii": [self.r_min, self.r_max]}


@dataclass(frozen=True)
class CanonicalForm:
    """Witness of ``omega = 3^ell L omega_prime`` with ``omega_prime`` in X."""

    omega_prime: np.ndarray
    L: PointElement
    ell: int

    def to_json(self) -> dict:
        return {"omega_prime": [float(v) for v in self.omega_prime], "L": self.L.name,
                "ell": self.ell}


@dataclass(frozen=True)
class Boundary:
    """The orbit only meets sector edges; ``ray`` is the edge angle hit, mod the width."""

    ray: float

    def to_json(self) -> dict:
        return {"boundary": True}


@dataclass(frozen=True)
class Zero:
    def to_json(self) -> dict:
        return {"zero": True}


def stabilizer(gd: GroupData, omega) -> list[PointElement]:
    w = np.asarray(omega, dtype=float)
    scale = max(1.0, float(np.abs(w).max()))
    return [L for L in gd.point_group
            if np.abs(np.array(L.cart) @ w - w).max() <= STAB_TOL * scale]


def build_cross_section(gd: GroupData) -> CrossSection:
    return CrossSection(gd, *gd.theta)


def _scale3(v, k: int):
    """``v * 3**k`` without overflowing the power for extreme ``k``."""
    while k > 600:
        v, k = v * 3.0**600, k - 600
    while k < -600:
        v, k = v * 3.0**-600, k + 600
    return v * 3.0**k


def _level(r: float) -> int:
    ell = math.floor(math.log(r, 3))
    # log is inexact near powers of three
    while _scale3(r, -ell) < 1.0:
        ell -= 1
    while _scale3(r, -ell) >= 3.0:
        ell += 1
    # at an exact tie neither level may satisfy both bounds in floating point;
    # the scaled radius is then within an ulp of 1 and _into_annulus fixes it
    return ell


def _into_annulus(cs: CrossSection, wp: np.ndarray) -> np.ndarray:
    for _ in range(8):
        r = math.hypot(wp[0], wp[1])
        if r < cs.r_min:
            wp = wp * (1 + 2.0**-52)
        elif r >= cs.r_max:
            wp = wp * (1 - 2.0**-52)
        else:
            break
    return wp


def canonicalize(cs: CrossSection, omega) -> CanonicalForm | Boundary | Zero:
    w = np.asarray(omega, dtype=float)
    r = math.hypot(w[0], w[1])
    if r == 0.0:
        return Zero()
    gd = cs.group
    # sector edges are a D-invariant set of rays spaced by the sector width
    psi = (math.atan2(w[1], w[0]) - cs.theta1) % cs.width
    if psi < BOUNDARY_TOL or cs.width - psi < BOUNDARY_TOL:
        return Boundary(psi)
    ell = _level(r)
    for L in gd.point_group:
        cand = np.array(L.cart).T @ w  # L^-1 = L^T
        phi = (math.atan2(cand[1], cand[0]) - cs.theta1) % TWO_PI
        if phi < cs.width:
            return CanonicalForm(_into_annulus(cs, _scale3(cand, -ell)), L, ell)
    raise AssertionError(f"no sector copy contains {omega} for {gd.name}")


def same_orbit(cs: CrossSection, omega, omega2) -> bool:
    a = canonicalize(cs, omega)
    b = canonicalize(cs, omega2)
    if isinstance(a, Zero) or isinstance(b, Zero):
        return isinstance(a, Zero) and isinstance(b, Zero)
    if isinstance(a, Boundary) or isinstance(b, Boundary):
        if not (isinstance(a, Boundary) and isinstance(b, Boundary)):
            return False
        return _boundary_same_orbit(cs, omega, omega2)
    return bool(np.allclose(a.omega_prime, b.omega_prime, rtol=0, atol=1e-12))


def _boundary_same_orbit(cs: CrossSection, omega, omega2) -> bool:
    w2 = np.asarray(omega2, dtype=float)
    r1 = math.hypot(*omega)
    r2 = math.hypot(*w2)
    k = round(math.log(r2 / r1, 3))
    base = np.asarray(omega, dtype=float) * 3.0 ** k
    return any(np.allclose(np.array(L.cart) @ base, w2, rtol=1e-12, atol=1e-12)
               for L in cs.group.point_group)


def irreducible(gd: GroupData, omega) -> bool:
    return len(stabilizer(gd, omega)) == 1


def orbit_points(gd: GroupData, omega, ells=range(-1, 2)) -> list[tuple[PointElement, int, np.ndarray]]:
    """All ``3^l L omega`` for ``L`` in D and ``l`` in ``ells``."""
    w = np.asarray(omega, dtype=float)
    return [(L, ell, (3.0 ** ell) * (np.array(L.cart) @ w))
            for ell in ells for L in gd.point_group]
