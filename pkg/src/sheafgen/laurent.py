"""Bivariate Laurent polynomials in x, y with half-integer exponents.

Exponents are stored doubled: the key ``(3, -2)`` means ``x^(3/2) y^(-1)``.
Coefficients are Python ints, so arithmetic is exact at any size.

The signed Hodge polynomial ``e(Y) = sum (-1)^(p+q) h^{p,q} x^p y^q`` of a
smooth projective variety lives here, together with the post-processing
that turns it into Hodge, Betti and Euler data.
"""
from __future__ import annotations

import heapq
import json
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    AsymmetricHodge,
    DualityViolation,
    FractionalExponent,
    NegativeHodgeNumber,
    NotDivisible,
)

__all__ = [
    "LaurentPoly",
    "HodgeTable",
    "X",
    "Y",
    "lp_monomial",
    "lp_add",
    "lp_mul",
    "lp_exact_div",
    "lp_specialize",
    "lp_to_hodge_table",
]

Key = tuple[int, int]


class LaurentPoly:
    """Immutable sparse Laurent polynomial; zero coefficients are never stored."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, int] | Iterable[tuple[Key, int]] | None = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        clean: dict[Key, int] = {}
        for (xd, yd), c in items:
            c = int(c)
            if c:
                k = (int(xd), int(yd))
                v = clean.get(k, 0) + c
                if v:
                    clean[k] = v
                else:
                    clean.pop(k, None)
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, clean: dict[Key, int]) -> "LaurentPoly":
        # trusted constructor: caller guarantees no zero values
        obj = cls.__new__(cls)
        obj._terms = clean
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: int, xd: int = 0, yd: int = 0) -> "LaurentPoly":
        """``coeff * x^(xd/2) * y^(yd/2)``."""
        return cls._wrap({(xd, yd): int(coeff)} if coeff else {})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls.monomial(c, 0, 0)

    # -- inspection -------------------------------------------------------

    def terms(self) -> list[tuple[Key, int]]:
        """Terms in canonical order: lexicographic on (x, y), ascending."""
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[tuple[Key, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, xd: int, yd: int) -> int:
        return self._terms.get((xd, yd), 0)

    def is_integral(self) -> bool:
        """True when every exponent is an integer."""
        return all(xd % 2 == 0 and yd % 2 == 0 for xd, yd in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def x_range(self) -> tuple[int, int]:
        xs = [k[0] for k in self._terms]
        return min(xs), max(xs)

    def y_range(self) -> tuple[int, int]:
        ys = [k[1] for k in self._terms]
        return min(ys), max(ys)

    def total_degree(self) -> int:
        """Largest doubled total degree xd + yd (in doubled units)."""
        return max(xd + yd for xd, yd in self._terms)

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            self, other = other, self
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return LaurentPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Key, int] = {}
        for (bx, by), bc in b.items():
            for (ax, ay), ac in a.items():
                k = (ax + bx, ay + by)
                out[k] = out.get(k, 0) + ac * bc
        return LaurentPoly({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise NotDivisible(f"negative power of non-monomial {self}")
            ((xd, yd), c), = self._terms.items()
            if abs(c) != 1:
                raise NotDivisible(f"negative power of non-unit {self}")
            return LaurentPoly.monomial(c ** (-n), n * xd, n * yd)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def shift(self, xd: int, yd: int) -> "LaurentPoly":
        """Multiply by the monomial ``x^(xd/2) y^(yd/2)``."""
        return LaurentPoly._wrap({(a + xd, b + yd): c for (a, b), c in self._terms.items()})

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Return q with ``self == other * q``; raise NotDivisible if none exists.

        Long division in lex order. Any exact quotient has its lex-minimum and
        its x/y extents fixed by those of the operands, which bounds the loop.
        """
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return ZERO
        b = other._terms
        lead_b = max(b)
        cb = b[lead_b]
        lo_a, lo_b = min(self._terms), min(b)
        q_lex_min = (lo_a[0] - lo_b[0], lo_a[1] - lo_b[1])
        ax0, ax1 = self.x_range()
        ay0, ay1 = self.y_range()
        bx0, bx1 = other.x_range()
        by0, by1 = other.y_range()
        qx0, qx1 = ax0 - bx0, ax1 - bx1
        qy0, qy1 = ay0 - by0, ay1 - by1
        if qx0 > qx1 or qy0 > qy1:
            raise NotDivisible(f"{self} is not divisible by {other}")

        rem = dict(self._terms)
        heap = [(-k[0], -k[1]) for k in rem]
        heapq.heapify(heap)
        quot: dict[Key, int] = {}
        while rem:
            nk = heapq.heappop(heap)
            lead = (-nk[0], -nk[1])
            c = rem.get(lead)
            if c is None:
                continue
            m = (lead[0] - lead_b[0], lead[1] - lead_b[1])
            if (
                c % cb
                or m < q_lex_min
                or not (qx0 <= m[0] <= qx1 and qy0 <= m[1] <= qy1)
            ):
                raise NotDivisible(f"{self} is not divisible by {other}")
            k = c // cb
            quot[m] = k
            for (bx, by), bc in b.items():
                key = (bx + m[0], by + m[1])
                old = rem.get(key)
                v = (old or 0) - k * bc
                if v:
                    rem[key] = v
                    if old is None:
                        heapq.heappush(heap, (-key[0], -key[1]))
                elif old is not None:
                    del rem[key]
        return LaurentPoly._wrap(quot)

    # -- substitutions ----------------------------------------------------

    def _require_integral(self, what: str) -> None:
        if not self.is_integral():
            raise FractionalExponent(f"{what} needs integral exponents, got {self}")

    def swap_xy(self) -> "LaurentPoly":
        return LaurentPoly._wrap({(b, a): c for (a, b), c in self._terms.items()})

    def sign_flip(self) -> "LaurentPoly":
        """x -> -x, y -> -y."""
        self._require_integral("sign_flip")
        return LaurentPoly._wrap(
            {(a, b): (-c if (a + b) // 2 % 2 else c) for (a, b), c in self._terms.items()}
        )

    def dual(self, d: int) -> "LaurentPoly":
        """x -> 1/x, y -> 1/y, then multiply by (xy)^d."""
        return LaurentPoly._wrap({(2 * d - a, 2 * d - b): c for (a, b), c in self._terms.items()})

    def euler(self) -> int:
        """Value at x = y = 1."""
        self._require_integral("euler")
        return sum(self._terms.values())

    def poincare(self) -> "LaurentPoly":
        """sign_flip then x = y = t; t is carried in the x slot."""
        flipped = self.sign_flip()
        out: dict[Key, int] = {}
        for (a, b), c in flipped._terms.items():
            k = (a + b, 0)
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    def evaluate(self, x, y):
        """Numeric evaluation; exponents must be integral."""
        self._require_integral("evaluate")
        x, y = Fraction(x), Fraction(y)
        v = sum((c * x ** (a // 2) * y ** (b // 2) for (a, b), c in self._terms.items()), Fraction(0))
        return int(v) if v.denominator == 1 else v

    # -- text and JSON ----------------------------------------------------

    def to_json(self) -> list[list]:
        return [[xd, yd, str(c)] for (xd, yd), c in self.terms()]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls({(int(xd), int(yd)): int(c) for xd, yd, c in data})

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (xd, yd), c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(p for p in (_power("x", xd), _power("y", yd)) if p)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _power(var: str, doubled: int) -> str:
    if doubled == 0:
        return ""
    if doubled == 2:
        return var
    if doubled % 2 == 0:
        return f"{var}^{doubled // 2}"
    return f"{var}^({doubled}/2)"


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
X = LaurentPoly.monomial(1, 2, 0)
Y = LaurentPoly.monomial(1, 0, 2)


@dataclass(frozen=True)
class HodgeTable:
    dim: int
    hodge: dict[tuple[int, int], int] = field(hash=False)
    betti: tuple[int, ...]
    euler: int

    def h(self, p: int, q: int) -> int:
        return self.hodge.get((p, q), 0)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "hodge": [[p, q, h] for (p, q), h in sorted(self.hodge.items())],
            "betti": list(self.betti),
            "euler": self.euler,
        }

    @classmethod
    def from_json(cls, data: dict) -> "HodgeTable":
        return cls(
            dim=data["dim"],
            hodge={(p, q): h for p, q, h in data["hodge"]},
            betti=tuple(data["betti"]),
            euler=data["euler"],
        )

    def diamond(self) -> str:
        """Hodge diamond, one row per p + q, top row is h^{0,0}."""
        rows = []
        for k in range(2 * self.dim + 1):
            lo, hi = max(0, k - self.dim), min(k, self.dim)
            rows.append([str(self.h(p, k - p)) for p in range(hi, lo - 1, -1)])
        cell = max(len(s) for row in rows for s in row) + 1
        width = cell * (self.dim + 1) * 2
        return "\n".join(
            "".join(s.center(2 * cell) for s in row).center(width).rstrip() for row in rows
        )


def lp_monomial(coeff: int, xd: int, yd: int) -> LaurentPoly:
    return LaurentPoly.monomial(coeff, xd, yd)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a.exact_div(b)


def lp_specialize(p: LaurentPoly, mode: str, d: int | None = None):
    """Apply one of the named specializations.

    ``euler`` returns an int (the topological Euler number when p is a signed
    Hodge polynomial); ``poincare`` returns a polynomial in t stored in the
    x slot; the rest return LaurentPoly.
    """
    if mode == "euler":
        return p.euler()
    if mode == "poincare":
        return p.poincare()
    if mode == "sign_flip":
        return p.sign_flip()
    if mode == "swap_xy":
        return p.swap_xy()
    if mode == "dual":
        if d is None:
            raise ValueError("dual needs a dimension d")
        return p.dual(d)
    raise ValueError(f"unknown specialization {mode!r}")


def lp_to_hodge_table(p: LaurentPoly, dim: int) -> HodgeTable:
    """Read Hodge numbers off a signed Hodge polynomial and validate them."""
    if dim < 0:
        raise ValueError("dim must be nonnegative")
    flipped = p.sign_flip()
    hodge: dict[tuple[int, int], int] = {}
    for (xd, yd), c in flipped.terms():
        pp, qq = xd // 2, yd // 2
        if not (0 <= pp <= dim and 0 <= qq <= dim):
            raise DualityViolation(f"h^({pp},{qq}) lies outside the box [0,{dim}]^2")
        if c < 0:
            raise NegativeHodgeNumber(f"h^({pp},{qq}) = {c}")
        hodge[(pp, qq)] = c
    for (pp, qq), h in hodge.items():
        if hodge.get((qq, pp), 0) != h:
            raise AsymmetricHodge(f"h^({pp},{qq}) = {h} but h^({qq},{pp}) = {hodge.get((qq, pp), 0)}")
        if hodge.get((dim - pp, dim - qq), 0) != h:
            raise DualityViolation(
                f"h^({pp},{qq}) = {h} but h^({dim - pp},{dim - qq}) = {hodge.get((dim - pp, dim - qq), 0)}"
            )
    betti = [0] * (2 * dim + 1)
    for (pp, qq), h in hodge.items():
        betti[pp + qq] += h
    euler = sum((-1) ** k * b for k, b in enumerate(betti))
    return HodgeTable(dim=dim, hodge=hodge, betti=tuple(betti), euler=euler)


def dumps(p: LaurentPoly) -> str:
    return json.dumps(p.to_json(), separators=(",", ":"))
