"""Text forms for elements, fiber vectors and packets.

Element grammar (whitespace-insensitive)::

    ([<q> u + <q> v (+ 1/2 z)?, <L>], <int>)

``<q>`` is triadic-half text (``n``, ``n/d``, ``n/3^b``, ``n/(2*3^b)``) and
either ``+`` or ``-`` may join terms. Both the ``u`` and ``v`` terms are
required so that ``1/2`` as a coefficient cannot be confused with the glide
term ``1/2 z``.
"""

from __future__ import annotations

import re

from .catalog import GroupData, PointElementNotInD
from .group_core import WaveletElement, is_valid
from .induced import FinSuppVector
from .scalar import LatticeVector, TriadicHalf

__all__ = [
    "ParseError",
    "InvalidForGroup",
    "parse_element",
    "format_element",
    "parse_vector",
    "parse_omega",
]


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class InvalidForGroup(ValueError):
    pass


_Q = re.compile(r"\d+(?:\s*/\s*(?:\(\s*2\s*\*\s*3\s*\^\s*\d+\s*\)|3\s*\^\s*\d+|\d+))?")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_INT = re.compile(r"[+-]?\s*\d+")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, tok: str):
        self.skip()
        if not self.text.startswith(tok, self.pos):
            raise ParseError(f"expected {tok!r}", self.text, self.pos)
        self.pos += len(tok)

    def accept(self, tok: str) -> bool:
        self.skip()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if m is None:
            raise ParseError(f"expected {what}", self.text, self.pos)
        self.pos = m.end()
        return m.group(0)

    def sign(self, required: bool) -> int:
        if self.accept("+"):
            s = 1
        elif self.accept("-"):
            s = -1
        elif required:
            raise ParseError("expected '+' or '-'", self.text, self.pos)
        else:
            return 1
        # allow "+ -1/3 u"
        if self.accept("-"):
            s = -s
        return s

    def coeff(self, sign: int) -> TriadicHalf:
        start = self.pos
        raw = self.match(_Q, "a coefficient")
        try:
            q = TriadicHalf.parse(raw)
        except (ValueError, ArithmeticError) as exc:
            raise ParseError(str(exc), self.text, start) from None
        return q if sign > 0 else -q

    def end(self):
        self.skip()
        if self.pos != len(self.text):
            raise ParseError("unexpected trailing text", self.text, self.pos)


def _parse_raw(text: str) -> tuple[LatticeVector, bool, str, int]:
    s = _Scanner(text)
    s.expect("(")
    s.expect("[")
    a = s.coeff(s.sign(required=False))
    s.expect("u")
    b = s.coeff(s.sign(required=True))
    s.expect("v")
    glide = False
    if s.peek() in "+-":
        save = s.pos
        sg = s.sign(required=True)
        half = s.coeff(1)
        if half != TriadicHalf(1, 0, True) or sg < 0:
            raise ParseError("the glide term must read '+ 1/2 z'", text, save)
        s.expect("z")
        glide = True
    s.expect(",")
    name = s.match(_NAME, "a point-element name")
    s.expect("]")
    s.expect(",")
    ell = int(s.match(_INT, "an integer dilation level").replace(" ", ""))
    s.expect(")")
    s.end()
    return LatticeVector(a, b), glide, name, ell


def parse_element(gd: GroupData, text: str, check: bool = True) -> WaveletElement:
    x, glide, name, ell = _parse_raw(text)
    try:
        L = gd.element(name)
    except PointElementNotInD as exc:
        raise InvalidForGroup(str(exc)) from None
    if glide:
        if gd.z is None:
            raise InvalidForGroup(f"{gd.name} is symmorphic and has no glide vector z")
        x = x + gd.z.halve()
    g = WaveletElement(x, L, ell)
    if check and not is_valid(gd, g):
        raise InvalidForGroup(f"{text!r} is not an element of {gd.name}_3 x| Z")
    return g


def _term(q: TriadicHalf, sym: str, first: bool) -> str:
    if first:
        return f"{q} {sym}"
    if q.num < 0:
        return f" - {-q} {sym}"
    return f" + {q} {sym}"


def format_element(gd: GroupData, g: WaveletElement) -> str:
    """Canonical text; re-parses to an equal element."""
    x = g.x
    glide = ""
    if gd.z is not None and not gd.in_d0(g.L):
        rest = x - gd.z.halve()
        if not (rest.a.half or rest.b.half):
            x, glide = rest, " + 1/2 z"
    body = _term(x.a, "u", True) + _term(x.b, "v", False) + glide
    return f"([{body}, {g.L.name}], {g.ell})"


def parse_vector(gd: GroupData, text: str) -> FinSuppVector:
    """``(L,m):re,im;(L,m):re,im;...`` into a finitely supported vector."""
    entries = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        m = re.fullmatch(r"\(\s*([A-Za-z][A-Za-z0-9]*)\s*,\s*([+-]?\d+)\s*\)\s*:\s*([^,]+),\s*(.+)", chunk)
        if m is None:
            raise ParseError("expected '(L,m):re,im'", text, text.find(chunk))
        try:
            L = gd.element(m[1])
        except PointElementNotInD as exc:
            raise InvalidForGroup(str(exc)) from None
        entries.append(((L, int(m[2])), complex(float(m[3]), float(m[4]))))
    return FinSuppVector(entries)


def parse_omega(text: str) -> tuple[float, float]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])
