"""Exact algebra of the wavelet group ``Gamma_3 x| Z``.

Elements are triples ``([x, L], l)`` with product

    ([x, L], l) ([y, M], m) = ([M^-1 x + 3^-l y, LM], l + m)

and all translation parts kept exact in lattice coordinates. Characters and
the dual action are the only floating-point quantities.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .catalog import GroupData, PointElement, member_gamma3
from .scalar import LatticeVector

__all__ = [
    "MixedGroups",
    "InvalidElement",
    "NotInN3",
    "WaveletElement",
    "identity",
    "multiply",
    "invert",
    "factor",
    "quotient_Q",
    "section_gamma",
    "decompose",
    "is_valid",
    "char_eval",
    "dual_action",
    "conjugate",
]


class MixedGroups(ValueError):
    """Two elements from different wallpaper groups were combined."""


class InvalidElement(ValueError):
    """The translation part is not in ``T_{Gamma_3}`` for the given point element."""


class NotInN3(ValueError):
    """A character was evaluated on an element outside the translation subgroup."""


class WaveletElement:
    """The group element ``([x, L], ell)``."""

    __slots__ = ("x", "L", "ell")

    def __init__(self, x: LatticeVector, L: PointElement, ell: int = 0):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "ell", int(ell))

    def __setattr__(self, name, value):
        raise AttributeError("WaveletElement is immutable")

    def __mul__(self, other: WaveletElement) -> WaveletElement:
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WaveletElement):
            return NotImplemented
        return self.ell == other.ell and self.L == other.L and self.x == other.x

    def __hash__(self) -> int:
        return hash((self.x, self.L, self.ell))

    def __repr__(self) -> str:
        return f"WaveletElement([{self.x}, {self.L.name}], {self.ell})"

    @property
    def group(self) -> str:
        return self.L.group

    def is_translation(self) -> bool:
        return self.ell == 0 and self.L.name == "id"


def identity(gd: GroupData) -> WaveletElement:
    return WaveletElement(LatticeVector(), gd.identity, 0)


def multiply(g: WaveletElement, h: WaveletElement) -> WaveletElement:
    if g.L.group != h.L.group:
        raise MixedGroups(f"cannot multiply elements of {g.L.group} and {h.L.group}")
    M = h.L
    x = g.x if M.name == "id" else g.x.transform(M.inv_lat)
    return WaveletElement(x + h.x.scale3(-g.ell), g.L * M, g.ell + h.ell)


def invert(g: WaveletElement) -> WaveletElement:
    x = g.x.scale3(g.ell)
    if g.L.name != "id":
        x = x.transform(g.L.mat_lat)
    return WaveletElement(-x, g.L.inverse, -g.ell)


def factor(g: WaveletElement) -> tuple[WaveletElement, WaveletElement]:
    """Split ``g = ([0, id], l) ([3^l x, L], 0)``."""
    idL = g.L * g.L.inverse
    return (WaveletElement(LatticeVector(), idL, g.ell),
            WaveletElement(g.x.scale3(g.ell), g.L, 0))


def quotient_Q(g: WaveletElement) -> tuple[PointElement, int]:
    return (g.L, g.ell)


def section_gamma(gd: GroupData, L: PointElement, ell: int) -> WaveletElement:
    """The fixed section of ``Q``: ``[0, L]`` on ``D0``, else ``[3^-l z/2, L]``."""
    t = gd.offsets[L]
    if t.is_zero():
        return WaveletElement(t, L, ell)
    return WaveletElement(t.scale3(-ell), L, ell)


def decompose(gd: GroupData, g: WaveletElement) -> tuple[tuple[PointElement, int], WaveletElement]:
    """Write ``g = gamma(L, l) n`` and return ``((L, l), n)`` with ``n`` a translation."""
    n = multiply(invert(section_gamma(gd, g.L, g.ell)), g)
    return (g.L, g.ell), n


def is_valid(gd: GroupData, g: WaveletElement) -> bool:
    if g.L.group != gd.name:
        return False
    return member_gamma3(gd, g.x, g.L) is not None


def _check_n3(n: WaveletElement) -> None:
    if n.ell != 0 or n.L.name != "id":
        raise NotInN3(f"{n} has nontrivial image ({n.L.name}, {n.ell}) under Q")
    if n.x.a.half or n.x.b.half:
        raise NotInN3(f"{n} has a half-lattice translation part")


def char_eval(gd: GroupData, omega, n: WaveletElement) -> complex:
    """``chi_omega(n) = exp(-2 pi i <B x, omega>)`` for a translation ``n``."""
    _check_n3(n)
    return cmath.exp(-2j * math.pi * gd.pairing_turns(n.x, omega))


def dual_action(L: PointElement, ell: int, omega) -> np.ndarray:
    """``(L, l) . omega = 3^l L omega`` on Cartesian frequencies."""
    return (3.0 ** ell) * (np.array(L.cart) @ np.asarray(omega, dtype=float))


def conjugate(s: WaveletElement, g: WaveletElement) -> WaveletElement:
    """``s g s^-1``."""
    return multiply(multiply(s, g), invert(s))
