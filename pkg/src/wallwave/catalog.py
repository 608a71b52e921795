"""The 17 wallpaper groups in lattice coordinates.

Each group is described by a Cartesian basis ``B = [u v]``, a point group of
integer matrices acting on lattice coordinates, and for every point element
``L`` the translation offset ``t_L`` such that ``[t_L + n, L]`` ranges over
the elements of the group with linear part ``L`` as ``n`` ranges over the
lattice. Affine elements follow the convention ``[x, L] z = L(z + x)`` with
product ``[x, L][y, M] = [M^-1 x + y, LM]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .scalar import HALF, ZERO, LatticeVector, TriadicHalf

__all__ = [
    "GROUP_NAMES",
    "NONSYMMORPHIC",
    "SYNONYMS",
    "UnknownGroup",
    "PointElementNotInD",
    "PointElement",
    "GroupData",
    "get_group",
    "all_groups",
    "check_compatibility",
    "member_gamma",
    "member_gamma3",
    "generate_offsets",
]

GROUP_NAMES = (
    "p1", "p2", "pm", "pg", "cm", "pmm", "pmg2", "pgg2", "cmm",
    "p4", "p4m", "p4mg", "p3", "p3m1", "p31m", "p6", "p6m",
)
NONSYMMORPHIC = ("pg", "pmg2", "pgg2", "p4mg")
SYNONYMS = {"pmg": "pmg2", "pgg": "pgg2", "p4g": "p4mg", "p2mg": "pmg2", "p2gg": "pgg2",
            "p2mm": "pmm", "c2mm": "cmm", "p4mm": "p4m", "p6mm": "p6m", "p4gm": "p4mg"}


class UnknownGroup(KeyError):
    pass


class PointElementNotInD(ValueError):
    pass


Mat = tuple[tuple[int, int], tuple[int, int]]

# point-group multiplication tables, filled in as groups are built
_TABLES: dict[str, dict[tuple[str, str], "PointElement"]] = {}
_INVERSES: dict[str, dict[str, "PointElement"]] = {}


@dataclass(frozen=True, eq=False)
class PointElement:
    """An element of the point group acting on lattice coordinates."""

    name: str
    mat_lat: Mat
    is_reflection: bool
    group: str
    inv_lat: Mat = field(repr=False)
    cart: tuple[tuple[float, float], tuple[float, float]] = field(repr=False)
    # key of the multiplication table; differs from ``group`` for non-default bases
    table: str = field(default="", repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointElement):
            return NotImplemented
        return self.group == other.group and self.name == other.name

    def __hash__(self) -> int:
        return hash((self.group, self.name))

    def __mul__(self, other: PointElement) -> PointElement:
        if self.group != other.group:
            from .group_core import MixedGroups

            raise MixedGroups(f"{self.group} vs {other.group}")
        return _TABLES[self.table][(self.name, other.name)]

    @property
    def inverse(self) -> PointElement:
        return _INVERSES[self.table][self.name]

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.mat_lat
        return a * d - b * c

    @property
    def is_identity(self) -> bool:
        return self.name == "id"

    def cart_array(self) -> np.ndarray:
        return np.array(self.cart)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class GroupData:
    name: str
    lattice: str
    basis: np.ndarray
    basis_exact: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None
    point_group: tuple[PointElement, ...]
    offsets: dict[PointElement, LatticeVector]
    z: LatticeVector | None
    d0: tuple[PointElement, ...]
    theta: tuple[float, float]
    rotation_order: int
    dihedral: bool

    @property
    def symmorphic(self) -> bool:
        return self.z is None

    @property
    def identity(self) -> PointElement:
        return self.point_group[0]

    def element(self, name: str) -> PointElement:
        for L in self.point_group:
            if L.name == name:
                return L
        raise PointElementNotInD(f"{name!r} is not in the point group of {self.name}")

    def in_d0(self, L: PointElement) -> bool:
        return not self.offsets[L].a and not self.offsets[L].b

    def check_member(self, L: PointElement) -> None:
        if L.group != self.name or L not in self.offsets:
            raise PointElementNotInD(f"{L.name} ({L.group}) is not in the point group of {self.name}")

    def cartesian(self, x: LatticeVector) -> np.ndarray:
        a, b = x.to_floats()
        return a * self.basis[:, 0] + b * self.basis[:, 1]

    def dual(self, omega) -> tuple[Fraction, Fraction]:
        """``B^T omega`` (the pairings of omega with u and v) as exact rationals.

        Exact for rational bases. On the hexagonal lattice omega is written in
        the basis first, costing one rounding, and the rational Gram matrix
        does the rest, so every later pairing is exact.
        """
        w0, w1 = float(omega[0]), float(omega[1])
        if self.basis_exact is not None:
            (b00, b01), (b10, b11) = self.basis_exact
            f0, f1 = Fraction(w0), Fraction(w1)
            return (b00 * f0 + b10 * f1, b01 * f0 + b11 * f1)
        e0, e1 = np.linalg.solve(self.basis, [w0, w1])
        e0, e1 = Fraction(float(e0)), Fraction(float(e1))
        return (e0 + e1 / 2, e0 / 2 + e1)

    @staticmethod
    def dual_act(L: PointElement, p: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        """``B^T (L omega)`` from ``p = B^T omega``; L orthogonal makes this ``L_lat^-T p``."""
        (i00, i01), (i10, i11) = L.inv_lat
        return (i00 * p[0] + i10 * p[1], i01 * p[0] + i11 * p[1])

    @staticmethod
    def turns(x: LatticeVector, p: tuple[Fraction, Fraction], period: int = 1) -> float:
        """``<B x, omega> mod period`` from ``p = dual(omega)``, rounded once at the end."""
        s = x.a.to_fraction() * p[0] + x.b.to_fraction() * p[1]
        return float(s - period * math.floor(s / period))

    def pairing_turns(self, x: LatticeVector, omega, period: int = 1) -> float:
        return self.turns(x, self.dual(omega), period)

    def z_cart(self) -> np.ndarray:
        if self.z is None:
            return np.zeros(2)
        return self.cartesian(self.z)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lattice": self.lattice,
            "basis": self.basis.T.tolist(),
            "point_group": [
                {"name": L.name, "mat_lat": [list(r) for r in L.mat_lat], "det": L.det}
                for L in self.point_group
            ],
            "offsets": {L.name: [str(t.a), str(t.b)] for L, t in self.offsets.items()},
            "z": None if self.z is None else [str(self.z.a), str(self.z.b)],
            "d0": [L.name for L in self.d0],
            "symmorphic": self.symmorphic,
        }


# -- lattice definitions -----------------------------------------------------

SQRT3_2 = math.sqrt(3.0) / 2.0
F = Fraction

_BASES = {
    # columns u, v; None marks irrational entries
    "oblique": ((F(1), F(1, 3)), (F(0), F(5, 4))),
    "rectangular": ((F(1), F(0)), (F(0), F(2))),
    "centered": ((F(1, 2), F(-1, 2)), (F(1), F(1))),
    "square": ((F(1), F(0)), (F(0), F(1))),
    "hexagonal": None,
}

_ROT = {
    ("oblique", 2): ((-1, 0), (0, -1)),
    ("rectangular", 2): ((-1, 0), (0, -1)),
    ("centered", 2): ((-1, 0), (0, -1)),
    ("square", 4): ((0, -1), (1, 0)),
    ("hexagonal", 3): ((-1, -1), (1, 0)),
    ("hexagonal", 6): ((0, -1), (1, 1)),
}

# reflection in the vertical axis unless noted
_REFL = {
    "rectangular": ((-1, 0), (0, 1)),
    "centered": ((0, 1), (1, 0)),
    "square": ((-1, 0), (0, 1)),
    "hexagonal": ((-1, -1), (0, 1)),
    "hexagonal-h": ((1, 1), (0, -1)),  # reflection in the horizontal axis
}

# name -> (lattice, rotation order, reflection key or None, generator offsets)
# generator offsets are the translation parts of the rotation and reflection
# generators in lattice coordinates
_SPECS = {
    "p1": ("oblique", 1, None, {}),
    "p2": ("oblique", 2, None, {}),
    "pm": ("rectangular", 1, "rectangular", {}),
    "pg": ("rectangular", 1, "rectangular", {"refl": (0, HALF)}),
    "cm": ("centered", 1, "centered", {}),
    "pmm": ("rectangular", 2, "rectangular", {}),
    "pmg2": ("rectangular", 2, "rectangular", {"refl": (0, HALF)}),
    "pgg2": ("rectangular", 2, "rectangular", {"refl": (HALF, HALF)}),
    "cmm": ("centered", 2, "centered", {}),
    "p4": ("square", 4, None, {}),
    "p4m": ("square", 4, "square", {}),
    "p4mg": ("square", 4, "square", {"refl": (HALF, HALF)}),
    "p3": ("hexagonal", 3, None, {}),
    "p3m1": ("hexagonal", 3, "hexagonal", {}),
    "p31m": ("hexagonal", 3, "hexagonal-h", {}),
    "p6": ("hexagonal", 6, None, {}),
    "p6m": ("hexagonal", 6, "hexagonal", {}),
}

# z vector (lattice coordinates) of each nonsymmorphic group
_Z = {"pg": (0, 1), "pmg2": (0, 1), "pgg2": (1, 1), "p4mg": (1, 1)}

# Offsets t_L (mod lattice) of the nonsymmorphic groups, regenerated from the
# generators by generate_offsets() in the test suite. Unlisted elements have
# t_L = 0.
FROZEN_OFFSETS = {
    "pg": {"s": (0, HALF)},
    "pmg2": {"s": (0, HALF), "r180s": (0, HALF)},
    "pgg2": {"s": (HALF, HALF), "r180s": (HALF, HALF)},
    "p4mg": {"s": (HALF, HALF), "r90s": (HALF, HALF), "r180s": (HALF, HALF),
             "r270s": (HALF, HALF)},
}

# lower sector bound (degrees) of the weak cross-section; regenerated from the
# mirror axes in the test suite
FROZEN_THETA1 = {
    "p1": 0, "p2": 0, "pm": 90, "pg": 90, "cm": 90, "pmm": 0, "pmg2": 0, "pgg2": 0,
    "cmm": 0, "p4": 0, "p4m": 0, "p4mg": 0, "p3": 0, "p3m1": 30, "p31m": 0, "p6": 0,
    "p6m": 0,
}


def _matmul(m: Mat, n: Mat) -> Mat:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _matinv(m: Mat) -> Mat:
    (a, b), (c, d) = m
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError(f"{m} is not in GL2(Z)")
    return ((d * det, -b * det), (-c * det, a * det))


_IDENT: Mat = ((1, 0), (0, 1))


def _basis_array(lattice: str, aspect: float | None) -> tuple[np.ndarray, tuple | None]:
    exact = _BASES[lattice]
    if exact is None:
        return np.array([[1.0, 0.5], [0.0, SQRT3_2]]), None
    if lattice == "rectangular" and aspect is not None:
        asp = F(aspect).limit_denominator(10**6)
        exact = ((F(1), F(0)), (F(0), asp))
    return np.array([[float(v) for v in row] for row in exact]), exact


def _cart(m: Mat, B: np.ndarray) -> np.ndarray:
    return B @ np.array(m, dtype=float) @ np.linalg.inv(B)


def _name_of(m: Mat, B: np.ndarray, refl: Mat | None) -> str:
    C = _cart(m, B)
    if round(np.linalg.det(C)) == 1:
        R = C
        suffix = ""
    else:
        R = C @ _cart(refl, B)  # C = R S with S an involution
        suffix = "s"
    deg = round(math.degrees(math.atan2(R[1, 0], R[0, 0]))) % 360
    if deg == 0:
        return "s" if suffix else "id"
    return f"r{deg}{suffix}"


def _close(gens: list[Mat]) -> list[Mat]:
    out = [_IDENT]
    frontier = [_IDENT]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = _matmul(m, g)
                if p not in out:
                    out.append(p)
                    nxt.append(p)
        frontier = nxt
    return out


def _sort_key(name: str) -> tuple[int, int]:
    if name == "id":
        return (0, 0)
    if name == "s":
        return (1, 0)
    refl = name.endswith("s")
    deg = int(name[1:-1] if refl else name[1:])
    return (int(refl), deg)


def generate_offsets(name: str) -> dict[Mat, LatticeVector]:
    """Close the generators of ``name`` under the affine product, mod lattice.

    Returns ``{mat_lat: t_L}`` with ``t_L`` reduced to ``[0, 1)^2``. Raises if
    two different offsets arise for one linear part, which would mean the
    generators do not define a wallpaper group.
    """
    lattice, k, refl_key, gen_off = _SPECS[name]
    gens: list[tuple[LatticeVector, Mat]] = []
    if k > 1:
        gens.append((LatticeVector(*gen_off.get("rot", (0, 0))), _ROT[(lattice, k)]))
    if refl_key:
        gens.append((LatticeVector(*gen_off.get("refl", (0, 0))), _REFL[refl_key]))
    table: dict[Mat, LatticeVector] = {_IDENT: LatticeVector()}
    frontier = [(LatticeVector(), _IDENT)]
    while frontier:
        nxt = []
        for x, L in frontier:
            for y, M in gens:
                prod = ((x.transform(_matinv(M)) + y).reduce(), _matmul(L, M))
                seen = table.get(prod[1])
                if seen is None:
                    table[prod[1]] = prod[0]
                    nxt.append(prod)
                elif seen != prod[0]:
                    raise ValueError(f"{name}: inconsistent offsets {seen} vs {prod[0]}")
        frontier = nxt
    return table


def _mirror_theta1(cart_refls: list[np.ndarray]) -> float:
    angles = []
    for C in cart_refls:
        # reflection across the line at angle a has matrix [[cos2a, sin2a], [sin2a, -cos2a]]
        a = 0.5 * math.atan2(C[1, 0], C[0, 0])
        angles.append(a % (math.pi))
    return min(angles)


def get_group(name: str, aspect: float | None = None) -> GroupData:
    """Return the fully populated description of a wallpaper group.

    ``aspect`` sets ``|v|/|u|`` for the rectangular lattice. It defaults to 2
    for the symmorphic rectangular groups and to 1 for the nonsymmorphic ones,
    whose translations are normalized to ``u=(1,0), v=(0,1)``.
    """
    key = SYNONYMS.get(name, name)
    if key not in _SPECS:
        raise UnknownGroup(name)
    lattice = _SPECS[key][0]
    if lattice != "rectangular":
        aspect = None
    elif aspect is None:
        aspect = 1.0 if key in NONSYMMORPHIC else 2.0
    return _build(key, None if aspect is None else float(aspect))


@lru_cache(maxsize=None)
def _build(name: str, aspect: float | None) -> GroupData:
    lattice, k, refl_key, _ = _SPECS[name]
    default = {"rectangular": 1.0 if name in NONSYMMORPHIC else 2.0}.get(lattice)
    table = name if aspect == default else f"{name}@{aspect:g}"
    B, B_exact = _basis_array(lattice, aspect)
    gens = []
    if k > 1:
        gens.append(_ROT[(lattice, k)])
    refl = _REFL[refl_key] if refl_key else None
    if refl:
        gens.append(refl)
    mats = _close(gens)
    named = sorted(((_name_of(m, B, refl), m) for m in mats), key=lambda t: _sort_key(t[0]))
    elems = []
    for nm, m in named:
        C = _cart(m, B)
        cart = tuple(tuple(float(round(v, 15)) for v in row) for row in C)
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        elems.append(PointElement(nm, m, det == -1, name, _matinv(m), cart, table))
    by_mat = {L.mat_lat: L for L in elems}
    _TABLES[table] = {(A.name, C.name): by_mat[_matmul(A.mat_lat, C.mat_lat)]
                     for A in elems for C in elems}
    _INVERSES[table] = {A.name: by_mat[A.inv_lat] for A in elems}

    frozen = FROZEN_OFFSETS.get(name, {})
    offsets = {L: LatticeVector(*frozen.get(L.name, (0, 0))) for L in elems}
    d0 = tuple(L for L in elems if offsets[L].is_zero())
    z = LatticeVector(*_Z[name]) if name in _Z else None

    cart_refls = [np.array(L.cart) for L in elems if L.is_reflection]
    if cart_refls:
        theta1 = _mirror_theta1(cart_refls)
        theta = (theta1, theta1 + math.pi / k)
    else:
        theta = (0.0, 2 * math.pi / k)

    gd = GroupData(
        name=name,
        lattice=lattice,
        basis=B,
        basis_exact=B_exact,
        point_group=tuple(elems),
        offsets=offsets,
        z=z,
        d0=d0,
        theta=theta,
        rotation_order=k,
        dihedral=bool(cart_refls),
    )
    _validate(gd)
    return gd


def _validate(gd: GroupData) -> None:
    if gd.symmorphic != (len(gd.d0) == len(gd.point_group)):
        raise AssertionError(f"{gd.name}: symmorphic flag disagrees with D0")
    for L in gd.point_group:
        for M in gd.point_group:
            lhs = gd.offsets[L * M]
            rhs = (gd.offsets[L].transform(M.inv_lat) + gd.offsets[M]).reduce()
            if lhs != rhs:
                raise AssertionError(f"{gd.name}: cocycle fails at ({L.name}, {M.name})")
    if gd.z is not None:
        half_z = gd.z.halve()
        for L in gd.point_group:
            if L not in gd.d0 and gd.offsets[L] != half_z.reduce():
                raise AssertionError(f"{gd.name}: offset of {L.name} is not z/2")


def all_groups() -> list[GroupData]:
    return [get_group(n) for n in GROUP_NAMES]


def check_compatibility(g: GroupData, d: int) -> bool:
    """Whether ``d * id`` is compatible with ``g``: ``d * t_L`` stays in ``t_L + lattice``."""
    if d < 2:
        raise ValueError("dilation factor must be at least 2")
    return all((t * d - t).is_integral() for t in g.offsets.values())


def member_gamma(g: GroupData, x: LatticeVector, L: PointElement) -> bool:
    """Whether ``[x, L]`` lies in the wallpaper group itself."""
    g.check_member(L)
    return (x - g.offsets[L]).is_integral()


def member_gamma3(g: GroupData, x: LatticeVector, L: PointElement) -> int | None:
    """Least ``l >= 0`` with ``[3^l x, L]`` in the group, or None if there is none."""
    g.check_member(L)
    ell = x.max_pow3
    if (x.scale3(ell) - g.offsets[L]).is_integral():
        return ell
    return None
