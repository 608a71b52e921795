"""Representations induced from the characters ``chi_omega`` of ``N_3``.

``sigma_omega`` acts on finitely supported vectors over ``D x Z``. It is
computed from the general character formula through the section ``gamma``;
the three-branch closed form is kept separately as an oracle.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Iterator, Mapping

import numpy as np

from .catalog import GroupData, PointElement
from .group_core import (
    InvalidElement,
    NotInN3,
    WaveletElement,
    char_eval,
    decompose,
    invert,
    is_valid,
    multiply,
    section_gamma,
)

__all__ = [
    "FinSuppVector",
    "sigma_apply",
    "sigma_phase",
    "sigma_branch_oracle",
    "branch_of",
    "covariant_extend",
    "u_omega_apply",
    "twist_eval",
    "equivalence_intertwiner",
    "find_intertwiner",
]

Index = tuple[PointElement, int]


class FinSuppVector(Mapping):
    """A finitely supported function on ``D x Z``; zeros are never stored."""

    __slots__ = ("_d",)

    def __init__(self, entries: Mapping[Index, complex] | Iterable[tuple[Index, complex]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        d: dict[Index, complex] = {}
        for key, val in items:
            val = complex(val)
            if val != 0:
                d[key] = d.get(key, 0) + val
        self._d = {k: v for k, v in d.items() if v != 0}

    @classmethod
    def delta(cls, L: PointElement, m: int, amp: complex = 1.0) -> FinSuppVector:
        return cls({(L, m): amp})

    def __getitem__(self, key: Index) -> complex:
        return self._d[key]

    def get(self, key, default=0j):
        return self._d.get(key, default)

    def __iter__(self) -> Iterator[Index]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def norm_sq(self) -> float:
        return sum(v.real * v.real + v.imag * v.imag for v in self._d.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def inner(self, other: FinSuppVector) -> complex:
        return sum(v * other.get(k).conjugate() for k, v in self._d.items())

    def max_diff(self, other: FinSuppVector) -> float:
        keys = set(self._d) | set(other._d)
        return max((abs(self.get(k) - other.get(k)) for k in keys), default=0.0)

    def to_json(self) -> list:
        rows = sorted(self._d.items(), key=lambda kv: (kv[0][1], kv[0][0].name))
        return [{"L": L.name, "m": m, "re": v.real, "im": v.imag} for (L, m), v in rows]

    def __repr__(self) -> str:
        body = ", ".join(f"({L.name},{m}): {v:.6g}" for (L, m), v in self._d.items())
        return f"FinSuppVector({{{body}}})"


def _require_valid(gd: GroupData, g: WaveletElement) -> None:
    if not is_valid(gd, g):
        raise InvalidElement(f"{g} is not an element of {gd.name}_3 x| Z")


def sigma_phase(gd: GroupData, omega, g: WaveletElement, M: PointElement, m: int) -> complex:
    """``chi_omega(gamma(M, m)^-1 g gamma(L^-1 M, m - l))``."""
    src = g.L.inverse * M
    word = multiply(multiply(invert(section_gamma(gd, M, m)), g),
                    section_gamma(gd, src, m - g.ell))
    return char_eval(gd, omega, word)


def sigma_apply(gd: GroupData, omega, g: WaveletElement, f: FinSuppVector) -> FinSuppVector:
    """``(sigma_omega(g) f)(M, m) = phase(M, m) f(L^-1 M, m - l)``."""
    _require_valid(gd, g)
    out = []
    for (K, k), amp in f.items():
        M, m = g.L * K, k + g.ell
        out.append(((M, m), sigma_phase(gd, omega, g, M, m) * amp))
    return FinSuppVector(out)


def branch_of(gd: GroupData, L: PointElement, M: PointElement) -> int:
    """1: L in D0; 2: L not in D0, M in D0; 3: neither."""
    if gd.in_d0(L):
        return 1
    return 2 if gd.in_d0(M) else 3


def sigma_branch_oracle(gd: GroupData, omega, g: WaveletElement, M: PointElement, m: int) -> complex:
    """Closed-form phase of ``sigma_omega(g)`` at ``(M, m)``, split by D0 membership.

    The third branch is read as ``exp(pi i <z, omega>)`` times the common
    exponential; the stray ``-z/2`` inside the exponent is not applied.
    """
    p = gd.dual(omega)
    rot = gd.dual_act(g.L.inverse * M, p)
    base = cmath.exp(-2j * math.pi * gd.turns(g.x.scale3(m), rot))
    b = branch_of(gd, g.L, M)
    if b == 1:
        return base
    zw = gd.turns(gd.z, p, period=2)
    return base * cmath.exp((-1j if b == 2 else 1j) * math.pi * zw)


def covariant_extend(gd: GroupData, omega, f: FinSuppVector, g: WaveletElement) -> complex:
    """Value at ``g`` of the covariant function ``W f`` on the whole group."""
    (L, ell), n = decompose(gd, g)
    amp = f.get((L, ell))
    if amp == 0:
        return 0j
    return char_eval(gd, omega, n).conjugate() * amp


def u_omega_apply(gd: GroupData, omega, g: WaveletElement, f: FinSuppVector) -> FinSuppVector:
    """Left translation ``xi -> xi(g^-1 .)`` read back along the section."""
    _require_valid(gd, g)
    ginv = invert(g)
    out = []
    # (U f)(M, m) vanishes unless Q(g^-1 gamma(M, m)) lies in supp f
    for K, k in f:
        M, m = g.L * K, k + g.ell
        out.append(((M, m), covariant_extend(gd, omega, f, multiply(ginv, section_gamma(gd, M, m)))))
    return FinSuppVector(out)


def twist_eval(gd: GroupData, omega, L: PointElement) -> complex:
    """``c(omega, L) = exp(-+ pi i <z, omega> / 2)`` by D0 membership; 1 if symmorphic."""
    if gd.z is None:
        return 1.0 + 0j
    zw = gd.pairing_turns(gd.z, omega, period=4)
    sign = -1.0 if gd.in_d0(L) else 1.0
    return cmath.exp(sign * 0.5j * math.pi * zw)


def equivalence_intertwiner(gd: GroupData, omega, K: PointElement, k: int, f: FinSuppVector) -> FinSuppVector:
    """Unitary ``J`` with ``J sigma_omega(g) = sigma_omega'(g) J`` for ``omega' = 3^k K omega``.

    ``(J f)(M, m) = conj(chi_omega(n)) f(MK, m + k)`` where
    ``n = gamma(MK, m + k)^-1 gamma(M, m) gamma(K, k)``; the phase is 1 for
    symmorphic groups.
    """
    s = section_gamma(gd, K, k)
    Kinv = K.inverse
    out = []
    for (P, p), amp in f.items():
        M, m = P * Kinv, p - k
        n = multiply(invert(section_gamma(gd, P, p)), multiply(section_gamma(gd, M, m), s))
        out.append(((M, m), char_eval(gd, omega, n).conjugate() * amp))
    return FinSuppVector(out)


def find_intertwiner(gd: GroupData, omega, omega2, probes, max_shift: int = 6,
                     tol: float = 1e-9) -> tuple[PointElement, int] | None:
    """Search ``(K, k)`` so that the relabeling intertwines ``sigma_omega`` and ``sigma_omega2``.

    ``probes`` is a sequence of ``(g, f)`` pairs used as the numerical test.
    """
    w2 = np.asarray(omega2, dtype=float)
    for k in range(-max_shift, max_shift + 1):
        for K in gd.point_group:
            ok = True
            for g, f in probes:
                lhs = equivalence_intertwiner(gd, omega, K, k, sigma_apply(gd, omega, g, f))
                rhs = sigma_apply(gd, w2, g, equivalence_intertwiner(gd, omega, K, k, f))
                if lhs.max_diff(rhs) > tol:
                    ok = False
                    break
            if ok:
                return K, k
    return None
