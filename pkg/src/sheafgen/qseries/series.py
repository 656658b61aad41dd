"""Truncated q-series with quarter-integer exponents and Laurent coefficients.

Exponents of q are stored quadrupled (``5`` means ``q^(5/4)``) and every
series carries an exclusive truncation bound ``order`` in the same units.
Coefficients below ``order`` are exact; nothing is known at or above it.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from ..errors import BeyondTruncation, NonDivergingLeadExponent, NonUnitConstantTerm
from ..laurent import ONE, ZERO, LaurentPoly
from ._dense import DenseSeries

MAX_FACTORS = 10**6


def q4(value) -> int:
    """Quadrupled representation of a q-exponent given as int, Fraction or str."""
    f = Fraction(value)
    v = f * 4
    if v.denominator != 1:
        raise ValueError(f"q-exponent {value} is not in (1/4)Z")
    return int(v)


class FracSeries:
    __slots__ = ("order", "_terms")

    def __init__(self, order: int, terms: Mapping[int, LaurentPoly | int] | None = None):
        self.order = int(order)
        clean: dict[int, LaurentPoly] = {}
        for e, c in (terms or {}).items():
            if isinstance(c, int):
                c = LaurentPoly.constant(c)
            if e < self.order and c:
                clean[int(e)] = c
        self._terms = clean

    @classmethod
    def zero(cls, order: int) -> "FracSeries":
        return cls(order)

    @classmethod
    def one(cls, order: int) -> "FracSeries":
        return cls(order, {0: ONE})

    @classmethod
    def monomial(cls, coeff: LaurentPoly | int, e: int, order: int) -> "FracSeries":
        return cls(order, {e: coeff})

    @classmethod
    def from_dense(cls, d: DenseSeries) -> "FracSeries":
        out = cls(d.order)
        out._terms = {e: LaurentPoly(p) for e, p in d.to_terms().items()}
        return out

    def to_dense(self) -> DenseSeries:
        return DenseSeries.from_terms({e: p._terms for e, p in self._terms.items()}, self.order)

    # -- inspection -------------------------------------------------------

    def terms(self) -> list[tuple[int, LaurentPoly]]:
        return sorted(self._terms.items())

    def exponents(self) -> list[int]:
        return sorted(self._terms)

    def __iter__(self) -> Iterator[tuple[int, LaurentPoly]]:
        return iter(self.terms())

    def coeff(self, e: int) -> LaurentPoly:
        if e >= self.order:
            raise BeyondTruncation(f"q^({e}/4) is at or beyond the truncation order q^({self.order}/4)")
        return self._terms.get(e, ZERO)

    def valuation(self) -> int | None:
        return min(self._terms) if self._terms else None

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FracSeries):
            return NotImplemented
        return self.order == other.order and self._terms == other._terms

    def __repr__(self) -> str:
        body = " + ".join(f"({p})*q^({e}/4)" for e, p in self.terms()) or "0"
        return f"FracSeries({body} + O(q^({self.order}/4)))"

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> "FracSeries | None":
        if isinstance(other, FracSeries):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return FracSeries(self.order, {0: other})
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        out = {e: p for e, p in self._terms.items() if e < order}
        for e, p in other._terms.items():
            if e < order:
                out[e] = out.get(e, ZERO) + p
        return FracSeries(order, out)

    __radd__ = __add__

    def __neg__(self) -> "FracSeries":
        return FracSeries(self.order, {e: -p for e, p in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return FracSeries(self.order, {e: p * other for e, p in self._terms.items()})
        if not isinstance(other, FracSeries):
            return NotImplemented
        result = FracSeries.from_dense(self.to_dense() * other.to_dense())
        # the truncation contract: product order is the smaller input order
        return result.truncate(min(self.order, other.order)) if result.order > min(self.order, other.order) else result

    __rmul__ = __mul__

    def truncate(self, order: int) -> "FracSeries":
        return FracSeries(min(order, self.order), self._terms)

    def shift(self, e: int, coeff: LaurentPoly | int = 1) -> "FracSeries":
        """Multiply by ``coeff * q^(e/4)``; the truncation order moves by ``e`` too."""
        return FracSeries(self.order + e, {k + e: p * coeff for k, p in self._terms.items()})

    def map_coeffs(self, fn) -> "FracSeries":
        return FracSeries(self.order, {e: fn(p) for e, p in self._terms.items()})

    def exact_div_coeffs(self, b: LaurentPoly) -> "FracSeries":
        return self.map_coeffs(lambda p: p.exact_div(b))

    def at_xy_one(self) -> "FracSeries":
        """Specialize every coefficient at x = y = 1."""
        return self.map_coeffs(lambda p: LaurentPoly.constant(p.euler()))

    def invert(self) -> "FracSeries":
        return qs_invert(self)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"orderQuadrupled": self.order, "terms": [[e, p.to_json()] for e, p in self.terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "FracSeries":
        return cls(data["orderQuadrupled"], {int(e): LaurentPoly.from_json(p) for e, p in data["terms"]})


class Binomial(NamedTuple):
    """``(1 + coeff * q^(q4/4) x^(xd/2) y^(yd/2)) ** power``."""

    coeff: int
    q4: int
    xd: int = 0
    yd: int = 0
    power: int = 1

    def apply(self, d: DenseSeries) -> DenseSeries:
        return d.mul_binomial(self.coeff, self.q4, self.xd, self.yd, self.power)


@dataclass(frozen=True)
class ProductFactor:
    """One factor of an infinite product.

    ``lead_exp`` is the smallest positive q-exponent of ``factor - 1``.
    A factor is given either as an explicit unit series or as a binomial
    power, which takes the fast path through the dense kernels.
    """

    lead_exp: int
    factor: FracSeries | None = None
    binomial: Binomial | None = None

    def __post_init__(self):
        if self.lead_exp <= 0:
            raise ValueError("lead exponent of a product factor must be positive")
        if (self.factor is None) == (self.binomial is None):
            raise ValueError("give exactly one of factor / binomial")
        if self.factor is not None and self.factor.coeff(0) != ONE:
            raise NonUnitConstantTerm("product factor must have constant term 1")

    @classmethod
    def one_minus(cls, q4_: int, xd: int = 0, yd: int = 0, power: int = 1) -> "ProductFactor":
        """``(1 - q^(q4/4) x^(xd/2) y^(yd/2)) ** power``."""
        return cls(q4_, binomial=Binomial(-1, q4_, xd, yd, power))

    def series(self, order: int) -> FracSeries:
        if self.factor is not None:
            return self.factor.truncate(order)
        return FracSeries.from_dense(self.binomial.apply(DenseSeries.one(order)))

    def apply(self, d: DenseSeries) -> DenseSeries:
        if self.binomial is not None:
            return self.binomial.apply(d)
        return d * self.factor.to_dense()


# -- module-level operations ------------------------------------------------


def qs_add(a: FracSeries, b: FracSeries) -> FracSeries:
    return a + b


def qs_mul(a: FracSeries, b: FracSeries) -> FracSeries:
    return a * b


def qs_neg(a: FracSeries) -> FracSeries:
    return -a


def qs_coeff(a: FracSeries, e: int) -> LaurentPoly:
    return a.coeff(e)


def qs_invert(a: FracSeries) -> FracSeries:
    """Inverse of a unit series: constant term ±monomial, no negative exponents."""
    c0 = a._terms.get(0)
    if c0 is None or not c0.is_monomial() or abs(c0.terms()[0][1]) != 1:
        raise NonUnitConstantTerm(f"constant term {c0} is not a unit")
    if a.valuation() < 0:
        raise NonUnitConstantTerm("series has negative q-exponents")
    c0_inv = c0 ** -1
    normalized = a * c0_inv  # constant term 1
    order = a.order
    rest = {e: p for e, p in normalized._terms.items() if e != 0}
    if not rest:
        return FracSeries(order, {0: c0_inv})
    if len(rest) == 1:
        (e, p), = rest.items()
        if p.is_monomial():
            (xd, yd), c = p.terms()[0]
            inv = Binomial(c, e, xd, yd, -1).apply(DenseSeries.one(order))
            return FracSeries.from_dense(inv) * c0_inv
    # Newton iteration: the error valuation doubles each round
    target = normalized.to_dense()
    b = DenseSeries.one(order)
    v = min(rest)
    while True:
        err = DenseSeries.one(order) - target * b
        b = b + b * err
        v *= 2
        if v >= order:
            break
    return FracSeries.from_dense(b) * c0_inv


def product_dense(factors: Iterable[ProductFactor], order: int) -> DenseSeries:
    acc = DenseSeries.one(order)
    prev = 0
    for count, f in enumerate(factors):
        if f.lead_exp >= order:
            break
        if count >= MAX_FACTORS:
            raise NonDivergingLeadExponent(f"{MAX_FACTORS} factors consumed below order {order}")
        if f.lead_exp < prev:
            raise ValueError("product factors must arrive with nondecreasing lead exponent")
        prev = f.lead_exp
        acc = f.apply(acc)
    return acc


def qs_product(factors: Iterable[ProductFactor], order: int) -> FracSeries:
    """Product of a lazily enumerated factor stream, truncated at ``order``.

    Factors whose lead exponent reaches ``order`` are 1 to that precision;
    since the stream is nondecreasing, enumeration stops at the first one.
    """
    return FracSeries.from_dense(product_dense(factors, order))


def merge_factor_streams(*streams: Iterable[ProductFactor]) -> Iterator[ProductFactor]:
    """Interleave nondecreasing factor streams into one nondecreasing stream."""
    return heapq.merge(*streams, key=lambda f: f.lead_exp)


@dataclass(frozen=True)
class Comparison:
    status: str
    order: int
    first_mismatch: tuple[int, LaurentPoly, LaurentPoly] | None = None

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "orderQuadrupled": self.order}
        if self.first_mismatch is not None:
            e, lhs, rhs = self.first_mismatch
            out["firstMismatch"] = {"expQuadrupled": e, "lhs": lhs.to_json(), "rhs": rhs.to_json()}
        return out


def qs_equal_to_order(a: FracSeries, b: FracSeries, order: int) -> Comparison:
    """Coefficientwise comparison of every exponent below ``order``."""
    if order > min(a.order, b.order):
        raise BeyondTruncation(f"cannot compare to q^({order}/4); inputs known to q^({min(a.order, b.order)}/4)")
    for e in sorted(set(a._terms) | set(b._terms)):
        if e >= order:
            break
        lhs, rhs = a._terms.get(e, ZERO), b._terms.get(e, ZERO)
        if lhs != rhs:
            return Comparison("FAIL", order, (e, lhs, rhs))
    return Comparison("PASS", order)
