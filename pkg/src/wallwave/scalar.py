"""Exact arithmetic on the triadic-half ring.

Every translation coordinate of the dilated wallpaper groups is a rational
``n / (2**h * 3**b)`` with ``h`` in ``{0, 1}``. ``TriadicHalf`` stores these
in canonical form; ``LatticeVector`` pairs two of them as coordinates in the
lattice basis ``{u, v}``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = [
    "QuarterError",
    "TriadicHalf",
    "LatticeVector",
    "ZERO",
    "ONE",
    "HALF",
]


class QuarterError(ArithmeticError):
    """An operation left the ring (a denominator of 4 or another prime)."""


IntLike = Union[int, "TriadicHalf"]


class TriadicHalf:
    """The rational ``num / (2**half * 3**pow3)`` in canonical form."""

    __slots__ = ("num", "pow3", "half")

    def __init__(self, num: int = 0, pow3: int = 0, half: bool = False):
        if pow3 < 0:
            num *= 3 ** (-pow3)
            pow3 = 0
        half = bool(half)
        if num == 0:
            pow3, half = 0, False
        else:
            while pow3 and num % 3 == 0:
                num //= 3
                pow3 -= 1
            if half and num % 2 == 0:
                num //= 2
                half = False
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "pow3", pow3)
        object.__setattr__(self, "half", half)

    def __setattr__(self, name, value):
        raise AttributeError("TriadicHalf is immutable")

    @classmethod
    def _raw(cls, num: int, pow3: int, half: bool) -> TriadicHalf:
        # caller guarantees canonical form
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "pow3", pow3)
        object.__setattr__(obj, "half", half)
        return obj

    @classmethod
    def coerce(cls, value) -> TriadicHalf:
        if isinstance(value, TriadicHalf):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, False)
        if isinstance(value, Fraction):
            return cls.from_fraction(value)
        raise TypeError(f"cannot convert {type(value).__name__} to TriadicHalf")

    @classmethod
    def from_fraction(cls, q: Fraction) -> TriadicHalf:
        den = q.denominator
        pow3 = 0
        while den % 3 == 0:
            den //= 3
            pow3 += 1
        if den not in (1, 2):
            raise QuarterError(f"{q} is not of the form n/(2^a 3^b) with a <= 1")
        return cls(q.numerator, pow3, den == 2)

    # -- conversions --------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, (2 if self.half else 1) * 3**self.pow3)

    def to_float(self) -> float:
        # Fraction.__float__ rounds correctly even for huge numerators
        if self.pow3 == 0 and not self.half:
            return float(self.num)
        return float(self.to_fraction())

    __float__ = to_float

    def is_integer(self) -> bool:
        return self.pow3 == 0 and not self.half

    def floor(self) -> int:
        return self.num // ((2 if self.half else 1) * 3**self.pow3)

    def frac(self) -> TriadicHalf:
        """Representative of ``self mod 1`` in ``[0, 1)``."""
        return self - self.floor()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> TriadicHalf:
        if isinstance(other, int):
            if other == 0:
                return self
            other = TriadicHalf._raw(other, 0, False)
        elif not isinstance(other, TriadicHalf):
            return NotImplemented
        a_num, a_p, a_h = self.num, self.pow3, self.half
        b_num, b_p, b_h = other.num, other.pow3, other.half
        if b_num == 0:
            return self
        if a_num == 0:
            return other
        if a_p < b_p:
            a_num *= 3 ** (b_p - a_p)
            p = b_p
        else:
            b_num *= 3 ** (a_p - b_p)
            p = a_p
        if a_h != b_h:
            if a_h:
                b_num *= 2
            else:
                a_num *= 2
        return TriadicHalf(a_num + b_num, p, a_h or b_h)

    __radd__ = __add__

    def __neg__(self) -> TriadicHalf:
        return TriadicHalf._raw(-self.num, self.pow3, self.half)

    def __sub__(self, other) -> TriadicHalf:
        if isinstance(other, int):
            other = TriadicHalf._raw(other, 0, False)
        elif not isinstance(other, TriadicHalf):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> TriadicHalf:
        return (-self) + other

    def __mul__(self, other) -> TriadicHalf:
        if isinstance(other, int):
            return TriadicHalf(self.num * other, self.pow3, self.half)
        if not isinstance(other, TriadicHalf):
            return NotImplemented
        if self.half and other.half:
            raise QuarterError(f"({self}) * ({other}) needs a denominator of 4")
        return TriadicHalf(self.num * other.num, self.pow3 + other.pow3,
                           self.half or other.half)

    __rmul__ = __mul__

    def scale3(self, k: int) -> TriadicHalf:
        """Multiply by ``3**k``; ``k`` may be negative."""
        if k == 0 or self.num == 0:
            return self
        if k > 0:
            drop = min(k, self.pow3)
            return TriadicHalf._raw(self.num * 3 ** (k - drop), self.pow3 - drop, self.half)
        return TriadicHalf(self.num, self.pow3 - k, self.half)

    def halve(self) -> TriadicHalf:
        if self.half:
            raise QuarterError(f"halving {self} needs a denominator of 4")
        return TriadicHalf(self.num, self.pow3, True)

    # -- comparison / hashing -----------------------------------------------

    def _key(self):
        return (self.num, self.pow3, self.half)

    def __eq__(self, other) -> bool:
        if isinstance(other, TriadicHalf):
            return self._key() == other._key()
        if isinstance(other, int):
            return self.pow3 == 0 and not self.half and self.num == other
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_integer():
            return hash(self.num)
        return hash(self.to_fraction())

    def __lt__(self, other) -> bool:
        return self.to_fraction() < TriadicHalf.coerce(other).to_fraction()

    def __le__(self, other) -> bool:
        return self.to_fraction() <= TriadicHalf.coerce(other).to_fraction()

    def __bool__(self) -> bool:
        return self.num != 0

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        den = (2 if self.half else 1) * 3**self.pow3
        return str(self.num) if den == 1 else f"{self.num}/{den}"

    def __repr__(self) -> str:
        return f"TriadicHalf({self})"

    _TEXT = re.compile(
        r"""^\s*(?P<num>[+-]?\d+)\s*
        (?:/\s*(?:
            (?P<two>2)\s*(?![\d^*])                           # n/2
          | \(\s*2\s*\*\s*3\s*\^\s*(?P<b2>\d+)\s*\)             # n/(2*3^b)
          | 3\s*\^\s*(?P<b>\d+)                                 # n/3^b
          | (?P<plain>\d+)                                      # n/9, n/18 ...
        ))?\s*$""",
        re.VERBOSE,
    )

    @classmethod
    def parse(cls, text: str) -> TriadicHalf:
        """Parse ``n``, ``n/2``, ``n/3^b``, ``n/(2*3^b)`` or ``n/d``.

        The plain ``n/d`` form is accepted for convenience when ``d`` is of
        the form ``2^a 3^b`` with ``a <= 1``.
        """
        m = cls._TEXT.match(text)
        if m is None:
            raise ValueError(f"not a triadic-half number: {text!r}")
        num = int(m["num"])
        if m["two"]:
            return cls(num, 0, True)
        if m["b2"] is not None:
            return cls(num, int(m["b2"]), True)
        if m["b"] is not None:
            return cls(num, int(m["b"]), False)
        if m["plain"] is not None:
            den = int(m["plain"])
            if den == 0:
                raise ValueError(f"zero denominator in {text!r}")
            return cls.from_fraction(Fraction(num, den))
        return cls(num)


ZERO = TriadicHalf._raw(0, 0, False)
ONE = TriadicHalf._raw(1, 0, False)
HALF = TriadicHalf._raw(1, 0, True)


class LatticeVector:
    """Coordinates ``(a, b)`` of ``a*u + b*v`` in a lattice basis."""

    __slots__ = ("a", "b")

    def __init__(self, a: IntLike = 0, b: IntLike = 0):
        object.__setattr__(self, "a", TriadicHalf.coerce(a))
        object.__setattr__(self, "b", TriadicHalf.coerce(b))

    def __setattr__(self, name, value):
        raise AttributeError("LatticeVector is immutable")

    @classmethod
    def _raw(cls, a: TriadicHalf, b: TriadicHalf) -> LatticeVector:
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        return obj

    def __iter__(self):
        yield self.a
        yield self.b

    def __add__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector._raw(self.a + other.a, self.b + other.b)

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector._raw(self.a - other.a, self.b - other.b)

    def __neg__(self) -> LatticeVector:
        return LatticeVector._raw(-self.a, -self.b)

    def __mul__(self, k: int) -> LatticeVector:
        return LatticeVector._raw(self.a * k, self.b * k)

    __rmul__ = __mul__

    def scale3(self, k: int) -> LatticeVector:
        return LatticeVector._raw(self.a.scale3(k), self.b.scale3(k))

    def halve(self) -> LatticeVector:
        return LatticeVector._raw(self.a.halve(), self.b.halve())

    def transform(self, mat) -> LatticeVector:
        """Apply an integer 2x2 matrix ``((m00, m01), (m10, m11))``."""
        (m00, m01), (m10, m11) = mat
        a, b = self.a, self.b
        return LatticeVector._raw(a * m00 + b * m01, a * m10 + b * m11)

    def is_integral(self) -> bool:
        return self.a.is_integer() and self.b.is_integer()

    def is_zero(self) -> bool:
        return self.a.num == 0 and self.b.num == 0

    def reduce(self) -> LatticeVector:
        """Representative modulo the lattice with coordinates in ``[0, 1)``."""
        return LatticeVector._raw(self.a.frac(), self.b.frac())

    @property
    def max_pow3(self) -> int:
        return max(self.a.pow3, self.b.pow3)

    def to_floats(self) -> tuple[float, float]:
        return (self.a.to_float(), self.b.to_float())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"LatticeVector({self.a}, {self.b})"

    def __str__(self) -> str:
        return f"({self.a}, {self.b})"
