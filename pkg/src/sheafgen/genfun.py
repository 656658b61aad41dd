"""Generating functions for moduli of sheaves on elliptic ruled surfaces.

Every public builder takes ``order`` in true q-units (an int or Fraction)
and returns a :class:`FracSeries` exact below ``q^order``. Internally the
exponents are quadrupled.

Notation used throughout: ``Q = x^2 y^2 q`` and

    Z(u) = (1-xu)(1-yu)(1-x^2 y u)(1-x y^2 u) / ((1-u)(1-xyu)^2(1-x^2 y^2 u)).

Series graded by a curve class xi carry ``q^((xi^2)/4)``, so the quadrupled
exponent of a coefficient equals (xi^2) and the moduli space has dimension
``(xi^2) + 1``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import chain, count
from typing import Callable, Iterator

from . import surface
from .errors import BeyondTruncation, HodgeValidationError
from .laurent import ONE, ZERO, HodgeTable, LaurentPoly, lp_to_hodge_table
from .qseries import (
    Comparison,
    FracSeries,
    ProductFactor,
    backend,
    merge_factor_streams,
    q4,
    qs_equal_to_order,
    qs_eta_quotient,
)
from .qseries._dense import DenseSeries
from .qseries.series import product_dense

X_MINUS_1_SQ_Y_MINUS_1_SQ = LaurentPoly({(4, 4): 1, (4, 2): -2, (4, 0): 1, (2, 4): -2, (2, 2): 4,
                                         (2, 0): -2, (0, 4): 1, (0, 2): -2, (0, 0): 1})
X_MINUS_1_Y_MINUS_1 = LaurentPoly({(2, 2): 1, (2, 0): -1, (0, 2): -1, (0, 0): 1})
XY_MINUS_1 = LaurentPoly({(2, 2): 1, (0, 0): -1})
E_SURFACE = LaurentPoly({(0, 0): 1, (2, 0): -1, (0, 2): -1, (2, 2): 2, (4, 2): -1, (2, 4): -1, (4, 4): 1})


def _o4(order) -> int:
    o = q4(order)
    if o < 1:
        raise ValueError(f"order must be positive, got {order}")
    return o


# -- Z factors and Hilbert schemes of points ---------------------------------


def z_factor_stream(q4_: int, xd: int, yd: int, power: int = 1) -> list[ProductFactor]:
    """The seven binomials of ``Z(u)**power`` for ``u = q^(q4/4) x^(xd/2) y^(yd/2)``."""
    return [
        ProductFactor.one_minus(q4_, xd + 2, yd, power),
        ProductFactor.one_minus(q4_, xd, yd + 2, power),
        ProductFactor.one_minus(q4_, xd + 4, yd + 2, power),
        ProductFactor.one_minus(q4_, xd + 2, yd + 4, power),
        ProductFactor.one_minus(q4_, xd, yd, -power),
        ProductFactor.one_minus(q4_, xd + 2, yd + 2, -2 * power),
        ProductFactor.one_minus(q4_, xd + 4, yd + 4, -power),
    ]


def z_factor(u: tuple[int, int, int], order) -> FracSeries:
    """``Z(u)`` expanded below ``q^order``; ``u = (q4, xd, yd)`` with q4 > 0."""
    q4_, xd, yd = u
    if q4_ <= 0:
        raise ValueError("u needs a positive q-exponent")
    o4 = _o4(order)
    return FracSeries.from_dense(product_dense(iter(z_factor_stream(q4_, xd, yd)), o4))


def _z_square_stream() -> Iterator[ProductFactor]:
    # prod_{a>=1} Z((xy)^-1 Q^a)^2 with (xy)^-1 Q^a = (xy)^(2a-1) q^a
    for a in count(1):
        yield from z_factor_stream(4 * a, 2 * (2 * a - 1), 2 * (2 * a - 1), power=2)


@lru_cache(maxsize=32)
def _z_square_dense(o4: int, _backend: str) -> DenseSeries:
    return product_dense(_z_square_stream(), o4)


def z_square_product(order) -> FracSeries:
    """``prod_{a>=1} Z((xy)^-1 Q^a)^2``."""
    return FracSeries.from_dense(_z_square_dense(_o4(order), backend.active()))


def _hilb_stream(step4: int) -> Iterator[ProductFactor]:
    # u_a = (xy)^-1 (xy q^step)^a = (xy)^(a-1) q^(step a)
    for a in count(1):
        yield from z_factor_stream(step4 * a, 2 * (a - 1), 2 * (a - 1))


def hilb_series(order, q_step=1) -> FracSeries:
    """``sum_n e(Hilb^n X) q^(n * q_step)`` for the e-polynomial of X."""
    step4 = q4(q_step)
    if step4 not in (2, 4):
        raise ValueError("q_step must be 1 or 1/2")
    return FracSeries.from_dense(product_dense(_hilb_stream(step4), _o4(order)))


# -- indefinite double sums --------------------------------------------------


@dataclass(frozen=True)
class LatticePoint:
    """One term of an indefinite double sum.

    ``(i, j)`` are the summation indices as displayed, ``sign`` the region
    sign, and the term is ``sign * Q^(u v / 4) (xy)^(u/2)`` in the
    one-dimensional normalization.
    """

    i: int
    j: int
    sign: int
    u: int
    v: int


def _cone(o4: int, outer: Iterator[int], inner_of: Callable[[int], Iterator[int]],
          uv: Callable[[int, int], tuple[int, int]], sign: int) -> Iterator[LatticePoint]:
    # v depends on the outer index only. On every region |u| >= 1 and |u| grows along the inner index, so a row
    # ends once u*v reaches o4, and no later row contributes once |v| >= o4.
    for i in outer:
        inner = inner_of(i)
        first = next(inner)
        if abs(uv(i, first)[1]) >= o4:
            break
        for j in chain((first,), inner):
            u, v = uv(i, j)
            if u * v >= o4:
                break
            yield LatticePoint(i, j, sign, u, v)


def _up(start: int) -> Iterator[int]:
    return count(start)


def _down(start: int) -> Iterator[int]:
    return count(start, -1)


def one_dim_points(o4: int) -> list[LatticePoint]:
    """Indices (a, n): + on {a >= 0, n > 0}, - on {a < 0, n <= 0}; u = 2n-1, v = 2a+1."""
    uv = lambda a, n: (2 * n - 1, 2 * a + 1)
    return [
        *_cone(o4, _up(0), lambda a: _up(1), uv, 1),
        *_cone(o4, _down(-1), lambda a: _down(0), uv, -1),
    ]


def combined_points(o4: int) -> list[LatticePoint]:
    """Indices (a, n): + on {a >= 0, n >= 0}, - on {a < 0, n < 0}; u = 2n+1, v = 2a+1."""
    uv = lambda a, n: (2 * n + 1, 2 * a + 1)
    return [
        *_cone(o4, _up(0), lambda a: _up(0), uv, 1),
        *_cone(o4, _down(-1), lambda a: _down(-1), uv, -1),
    ]


def _ceil_half(k: int) -> int:
    return -((-k) // 2)


def rank2_points(variant: str, o4: int) -> list[LatticePoint]:
    """Indices (a, b) of the rank-two sums for c1 = C0 - g or C0.

    ``C0mg``: u = 4b+1-2a, + on {a >= 0, 2b-a >= 0}, - on {a < 0, 2b-a < 0}.
    ``C0``:   u = 4b-1-2a, + on {a >= 0, 2b-a > 0},  - on {a < 0, 2b-a <= 0}.
    In both cases v = 2a+1.
    """
    if variant == "C0mg":
        uv = lambda a, b: (4 * b + 1 - 2 * a, 2 * a + 1)
        pos_b0 = lambda a: _ceil_half(a)          # smallest b with 2b - a >= 0
        neg_b0 = lambda a: _ceil_half(a) - 1      # largest b with 2b - a < 0
    elif variant == "C0":
        uv = lambda a, b: (4 * b - 1 - 2 * a, 2 * a + 1)
        pos_b0 = lambda a: (a + 1 + 1) // 2       # smallest b with 2b - a > 0
        neg_b0 = lambda a: a // 2                 # largest b with 2b - a <= 0
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return [
        *_cone(o4, _up(0), lambda a: _up(pos_b0(a)), uv, 1),
        *_cone(o4, _down(-1), lambda a: _down(neg_b0(a)), uv, -1),
    ]


def e0_case2_points(o4: int) -> list[LatticePoint]:
    """Indices (a, b): + on {a >= 0, b > 0}, - on {a < 0, b < 0}; exponent b(2a+1)."""
    # stored with u = 4b so that u*v is the quadrupled q-exponent
    uv = lambda a, b: (4 * b, 2 * a + 1)
    return [
        *_cone(o4, _up(0), lambda a: _up(1), uv, 1),
        *_cone(o4, _down(-1), lambda a: _down(-1), uv, -1),
    ]


def bracket(points: list[LatticePoint], o4: int) -> FracSeries:
    """``sum sign * Q^(uv/4) (xy)^(u/2)``: q^(uv/4) x^((uv+u)/2) y^((uv+u)/2)."""
    terms: dict[int, LaurentPoly] = {}
    for p in points:
        e = p.u * p.v
        terms[e] = terms.get(e, ZERO) + LaurentPoly.monomial(p.sign, e + p.u, e + p.u)
    return FracSeries(o4, terms)


def e0_case2_bracket(o4: int) -> FracSeries:
    """``sum sign * Q^(b(2a+1)) (xy)^(2b)``."""
    terms: dict[int, LaurentPoly] = {}
    for p in e0_case2_points(o4):
        e = p.u * p.v  # 4 b (2a+1); Q^(b(2a+1)) gives x^(e/2), (xy)^(2b) gives x^(u/2)
        terms[e] = terms.get(e, ZERO) + LaurentPoly.monomial(p.sign, e + p.u, e + p.u)
    return FracSeries(o4, terms)


def finish_bracket(br: FracSeries) -> FracSeries:
    """``(x-1)^2 (y-1)^2 / (xy-1) * br * prod Z((xy)^-1 Q^a)^2``.

    The division by xy-1 is exact on every q-coefficient of the full
    product and is carried out there.
    """
    o4 = br.order
    body = br.to_dense() * _z_square_dense(o4, backend.active())
    body = body * FracSeries(o4, {0: X_MINUS_1_SQ_Y_MINUS_1_SQ}).to_dense()
    return FracSeries.from_dense(body.exact_div_xy_binomial(-1, 2, 2)).map_coeffs(lambda p: -p)


def rank2_series(variant: str, order) -> FracSeries:
    """Hodge series of rank-two moduli with c1 = C0 - g (``C0mg``) or C0 (``C0``)."""
    o4 = _o4(order)
    return finish_bracket(bracket(rank2_points(variant, o4), o4))


def rank2_combined(order) -> FracSeries:
    o4 = _o4(order)
    return finish_bracket(bracket(combined_points(o4), o4))


def one_dim_sum(order) -> FracSeries:
    """Sum side for curve classes with (xi . f0) = 1 on the e = -1 surface."""
    o4 = _o4(order)
    return finish_bracket(bracket(one_dim_points(o4), o4))


# -- indefinite theta function in (q, t) -------------------------------------


def theta_points(o4: int) -> list[LatticePoint]:
    """(m, n): + on n, m >= 0, - on n, m < 0; u = 2n+1 (the t-power), v = 2m+1."""
    uv = lambda m, n: (2 * n + 1, 2 * m + 1)
    return [
        *_cone(o4, _up(0), lambda n: _up(0), uv, 1),
        *_cone(o4, _down(-1), lambda n: _down(-1), uv, -1),
    ]


def _theta_product_stream() -> Iterator[ProductFactor]:
    # (1 - q^(n-1/2) t^(+-1))^-1 then (1 - q^n t^(+-1)), t in the x slot
    for n in count(1):
        yield ProductFactor.one_minus(4 * n - 2, 2, 0, -1)
        yield ProductFactor.one_minus(4 * n - 2, -2, 0, -1)
        yield ProductFactor.one_minus(4 * n, 2, 0, 1)
        yield ProductFactor.one_minus(4 * n, -2, 0, 1)


def indefinite_theta(side: str, order) -> FracSeries:
    """The indefinite theta series in (q, t); t occupies the x slot."""
    o4 = _o4(order)
    if side == "sum":
        terms: dict[int, LaurentPoly] = {}
        for p in theta_points(o4):
            e = p.u * p.v
            terms[e] = terms.get(e, ZERO) + LaurentPoly.monomial(p.sign, p.u, 0)
        return FracSeries(o4, terms)
    if side == "product":
        eta = qs_eta_quotient([(1, 4), ("1/2", -2)], o4, extra="1/8")
        t_half = LaurentPoly({(1, 0): 1, (-1, 0): -1})
        prod = FracSeries.from_dense(product_dense(_theta_product_stream(), o4))
        return (eta * prod) * t_half
    raise ValueError(f"unknown side {side!r}")


def substitute_theta(series: FracSeries) -> FracSeries:
    """Apply t -> xy, q -> x^2 y^2 q to a series in (q, t)."""
    out = {}
    for e, p in series.terms():
        poly = LaurentPoly({(xd + e, xd + e): c for (xd, yd), c in p.terms() if yd == 0})
        if len(poly) != len(p):
            raise ValueError("theta series must not involve y")
        out[e] = poly
    return FracSeries(series.order, out)


# -- product side --------------------------------------------------------------


def _one_dim_product_stream() -> Iterator[ProductFactor]:
    # denominators carry Q^(n/2) = (xy)^n q^(n/2), numerators Q^n = (xy)^(2n) q^n
    for n in count(1):
        q2 = 2 * n
        yield ProductFactor.one_minus(q2, 2 * (n - 1), 2 * (n - 1), -1)
        yield ProductFactor.one_minus(q2, 2 * n, 2 * n, -2)
        yield ProductFactor.one_minus(q2, 2 * (n + 1), 2 * (n + 1), -1)
        if n % 2 == 0:
            k = n // 2
            yield ProductFactor.one_minus(4 * k, 4 * k - 2, 4 * k, 2)
            yield ProductFactor.one_minus(4 * k, 4 * k, 4 * k - 2, 2)
            yield ProductFactor.one_minus(4 * k, 4 * k + 2, 4 * k, 2)
            yield ProductFactor.one_minus(4 * k, 4 * k, 4 * k + 2, 2)


def one_dim_product(order) -> FracSeries:
    """Product side: (x-1)^2 (y-1)^2 q^(1/4) times the infinite product."""
    o4 = _o4(order)
    body = product_dense(_one_dim_product_stream(), o4 - 1).shift(1, 1, 0, 0)
    return FracSeries.from_dense(body) * X_MINUS_1_SQ_Y_MINUS_1_SQ


def _chain_stream() -> Iterator[ProductFactor]:
    def eta_part():
        # (1 - Q^k)^4 / (1 - (xy q^(1/2))^n)^2 with Q^k = (xy)^(2k) q^k
        for n in count(1):
            yield ProductFactor.one_minus(2 * n, 2 * n, 2 * n, -2)
            if n % 2 == 0:
                yield ProductFactor.one_minus(2 * n, 2 * n, 2 * n, 4)

    def theta_part():
        # (1 - Q^k xy)(1 - Q^k / xy) / ((1 - Q^(k-1/2) xy)(1 - Q^(k-1/2) / xy))
        for k in count(1):
            yield ProductFactor.one_minus(4 * k - 2, 4 * k, 4 * k, -1)
            yield ProductFactor.one_minus(4 * k - 2, 4 * k - 4, 4 * k - 4, -1)
            yield ProductFactor.one_minus(4 * k, 4 * k + 2, 4 * k + 2, 1)
            yield ProductFactor.one_minus(4 * k, 4 * k - 2, 4 * k - 2, 1)

    return merge_factor_streams(eta_part(), theta_part())


def chain_lines(order) -> list[tuple[str, FracSeries]]:
    """Each displayed line of the sum = product derivation, built independently."""
    o4 = _o4(order)
    zsq = _z_square_dense(o4, backend.active())
    lines = [("sum over lattice points", one_dim_sum(order))]
    lines.append(("substituted theta sum", finish_bracket(substitute_theta(indefinite_theta("sum", order)))))
    lines.append(("substituted theta product", finish_bracket(substitute_theta(indefinite_theta("product", order)))))

    # ((xy)^(1/2) - (xy)^(-1/2)) Q^(1/4) = (xy - 1) q^(1/4), kept undivided
    prods = product_dense(_chain_stream(), o4) * zsq
    pref = FracSeries(o4, {1: XY_MINUS_1 * X_MINUS_1_SQ_Y_MINUS_1_SQ}).to_dense()
    undivided = pref * prods
    line1 = FracSeries.from_dense(undivided.exact_div_xy_binomial(-1, 2, 2)).map_coeffs(lambda p: -p)
    lines.append(("eta-theta product", line1))

    line2 = FracSeries.from_dense(prods.truncate(o4 - 1).shift(1, 1, 0, 0)) * X_MINUS_1_SQ_Y_MINUS_1_SQ
    lines.append(("cancelled prefactor", line2))
    lines.append(("final product", one_dim_product(order)))
    return lines


# -- the e = 0 surface -------------------------------------------------------------


def _e0_case1_stream() -> Iterator[ProductFactor]:
    # Q^(n/2) = (xy)^n q^(n/2)
    for n in count(1):
        q2 = 2 * n
        d = 2 * n
        yield ProductFactor.one_minus(q2, d - 2, d, 1)
        yield ProductFactor.one_minus(q2, d, d - 2, 1)
        yield ProductFactor.one_minus(q2, d + 2, d, 1)
        yield ProductFactor.one_minus(q2, d, d + 2, 1)
        yield ProductFactor.one_minus(q2, d - 2, d - 2, -1)
        yield ProductFactor.one_minus(q2, d, d, -2)
        yield ProductFactor.one_minus(q2, d + 2, d + 2, -1)


def e0_case1(side: str, order) -> FracSeries:
    """Curve classes g + n C0 on e = 0, graded by q^(n/2)."""
    o4 = _o4(order)
    if side == "sum_def":
        return hilb_series(order, q_step="1/2") * X_MINUS_1_Y_MINUS_1
    if side == "product":
        return FracSeries.from_dense(product_dense(_e0_case1_stream(), o4)) * X_MINUS_1_Y_MINUS_1
    raise ValueError(f"unknown side {side!r}")


def e0_case2(order) -> FracSeries:
    """Curve classes 2g + n C0 on e = 0, graded by q^n."""
    o4 = _o4(order)
    return finish_bracket(e0_case2_bracket(o4))


# -- specializations -------------------------------------------------------------


def univariate_one_dim_product(order, point: int) -> dict[int, int]:
    """The product side at x = y = point (1 or -1), expanded on plain integer lists.

    At x = y = +-1 we have xy = 1 and Q = q, so the product becomes
    (point-1)^4 q^(1/4) prod_n (1 - point q^n)^8 / (1 - q^(n/2))^4.
    Indexed by quadrupled q-exponent; independent of the dense kernels.
    """
    o4 = _o4(order)
    if point not in (1, -1):
        raise ValueError("point must be 1 or -1")
    coeffs = [0] * o4
    if o4 > 1:
        coeffs[1] = (point - 1) ** 4

    def mul_one_minus(c: int, step: int, power: int):
        # coeffs *= (1 - c q^(step/4))^power
        for _ in range(abs(power)):
            if power > 0:
                for i in range(o4 - 1, step - 1, -1):
                    coeffs[i] -= c * coeffs[i - step]
            else:
                for i in range(step, o4):
                    coeffs[i] += c * coeffs[i - step]

    for n in range(1, (o4 + 1) // 2):
        mul_one_minus(1, 2 * n, -4)
        if n % 2 == 0:
            mul_one_minus(point, 2 * n, 8)
    return {i: c for i, c in enumerate(coeffs) if c}


def specialize_series(series: FracSeries, point: int) -> dict[int, int]:
    """Evaluate every coefficient at x = y = point."""
    out = {}
    for e, p in series.terms():
        v = p.evaluate(point, point)
        if v:
            out[e] = int(v)
    return out


# -- Hodge validation and tables ------------------------------------------------


def hodge_violations(p: LaurentPoly, dim: int) -> list[str]:
    """Everything wrong with ``p`` as the e-polynomial of a smooth projective variety."""
    problems = []
    if p.swap_xy() != p:
        problems.append("not symmetric under x <-> y")
    if not p.is_integral():
        return problems + ["fractional exponents"]
    if p.dual(dim) != p:
        problems.append(f"fails duality at dim {dim}")
    flipped = p.sign_flip()
    if any(c < 0 for _, c in flipped.terms()):
        problems.append("negative Hodge number after sign flip")
    if p.coeff(0, 0) != 1:
        problems.append("h^{0,0} != 1")
    if p and p.total_degree() != 4 * dim:
        problems.append(f"top degree is not 2*dim = {2 * dim}")
    return problems


FAMILIES = {
    "e-1": "OneDimProduct",
    "e0-case1": "E0Case1Product",
    "e0-case2": "E0Case2",
}


@dataclass(frozen=True)
class ModuliTableRow:
    family: str
    xi_sq: int
    q_exp_quadrupled: int
    e_poly: LaurentPoly
    hodge: HodgeTable
    xi: surface.DivisorClass
    chi: int

    @property
    def dim(self) -> int:
        return self.hodge.dim


def _family_series(family: str, o4: int) -> FracSeries:
    from fractions import Fraction

    order = Fraction(o4, 4)
    if family == "e-1":
        return one_dim_product(order)
    if family == "e0-case1":
        return e0_case1("product", order)
    if family == "e0-case2":
        return e0_case2(order)
    raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")


def _row_class(family: str, e: int) -> tuple[surface.DivisorClass, int]:
    """A representative curve class with (xi^2) = e, and the Euler characteristic used."""
    if family == "e-1":
        # xi = C0 + t f0 has (xi . f0) = 1 and (xi^2) = 1 + 2t
        return surface.DivisorClass.from_c0_f0(1, (e - 1) // 2), 1
    if family == "e0-case1":
        return surface.DivisorClass(e // 2, 1), 1
    return surface.DivisorClass(e // 4, 2), 3


def moduli_table(family: str, order=None, max_dim: int | None = None) -> list[ModuliTableRow]:
    """One row per nonzero coefficient; validation failures raise HodgeValidationError."""
    if (order is None) == (max_dim is None):
        raise ValueError("give exactly one of order / max_dim")
    if max_dim is not None:
        if max_dim < 1:
            raise ValueError("max_dim must be at least 1")
        o4 = max_dim  # dim = e + 1 <= max_dim
    else:
        o4 = _o4(order)
    series = _family_series(family, o4)
    rows = []
    for e, p in series.terms():
        dim = e + 1
        problems = hodge_violations(p, dim)
        if problems:
            raise HodgeValidationError(f"{family} at q^({e}/4): {'; '.join(problems)}")
        xi, chi = _row_class(family, e)
        rows.append(ModuliTableRow(family, e, e, p, lp_to_hodge_table(p, dim), xi, chi))
    return rows


@dataclass(frozen=True)
class ReductionRow:
    chi: int
    kind: str
    index: int
    e_poly: LaurentPoly


E_CURVE = X_MINUS_1_Y_MINUS_1


def rank_reduction_table(r: int, d1: int, d2: int, chi_range, order) -> list[ReductionRow]:
    """e-polynomials of M(r, d1 C0 + d2 f0, chi) on e = -1 via rank reduction."""
    o4 = _o4(order)
    one_dim = None
    hilb = None
    rows = []
    for chi in chi_range:
        red = surface.reduce_rank(r, d1, d2, chi)
        if red.kind == "OneDimensional":
            if red.xi_sq >= o4:
                raise BeyondTruncation(f"xiSq = {red.xi_sq} needs order above {o4}/4")
            if one_dim is None:
                one_dim = one_dim_product(order)
            rows.append(ReductionRow(chi, red.kind, red.xi_sq, one_dim.coeff(red.xi_sq)))
        else:
            if 4 * red.n >= o4:
                raise BeyondTruncation(f"Hilb^{red.n} needs order above {red.n}")
            if hilb is None:
                hilb = hilb_series(order)
            rows.append(ReductionRow(chi, red.kind, red.n, hilb.coeff(4 * red.n) * E_CURVE))
    return rows


# -- verification drivers ---------------------------------------------------------


@dataclass
class VerificationReport:
    identity: str
    order: object
    status: str
    first_mismatch: dict | None = None
    wall_time_ms: float | None = None
    detail: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self, timing: bool = True) -> dict:
        out = {"identity": self.identity, "order": str(self.order), "status": self.status}
        if self.first_mismatch is not None:
            out["firstMismatch"] = self.first_mismatch
        if self.detail is not None:
            out["detail"] = self.detail
        if timing:
            out["wallTimeMs"] = round(self.wall_time_ms or 0.0, 3)
        return out


def _report(identity: str, order, cmp: Comparison, started: float) -> VerificationReport:
    mismatch = None
    if cmp.first_mismatch is not None:
        e, lhs, rhs = cmp.first_mismatch
        mismatch = {"expQuadrupled": e, "lhs": lhs.to_json(), "rhs": rhs.to_json()}
    return VerificationReport(identity, order, cmp.status, mismatch, (time.perf_counter() - started) * 1e3)


def _compare(identity: str, order, build_lhs, build_rhs) -> VerificationReport:
    started = time.perf_counter()
    lhs, rhs = build_lhs(), build_rhs()
    return _report(identity, order, qs_equal_to_order(lhs, rhs, _o4(order)), started)


def verify_main(order=10) -> list[VerificationReport]:
    return [_compare("main", order, lambda: one_dim_sum(order), lambda: one_dim_product(order))]


def verify_theta(order=10) -> list[VerificationReport]:
    return [_compare("theta", order, lambda: indefinite_theta("sum", order),
                     lambda: indefinite_theta("product", order))]


def nu_partition_check(box: int = 20) -> tuple[bool, str | None]:
    """im nu1 and im nu2 are disjoint and cover the box [-box, box]^2."""
    im1, im2 = set(), set()
    # preimages of box points have |a| <= box and |b| <= box
    for a in range(-3 * box, 3 * box + 1):
        for b in range(-3 * box, 3 * box + 1):
            for which, target in ((1, im1), (2, im2)):
                pa, pn = surface.nu_maps(a, b, which)
                if -box <= pa <= box and -box <= pn <= box:
                    target.add((pa, pn))
    overlap = im1 & im2
    if overlap:
        return False, f"images overlap at {min(overlap)}"
    missing = {(a, n) for a in range(-box, box + 1) for n in range(-box, box + 1)} - im1 - im2
    if missing:
        return False, f"point {min(missing)} not covered"
    return True, None


def nu_reindex_check(o4: int) -> tuple[bool, str | None]:
    """The rank-two index sets map onto the combined index set, signs included."""
    mapped = {}
    for variant, which in (("C0mg", 1), ("C0", 2)):
        for p in rank2_points(variant, o4):
            key = surface.nu_maps(p.i, p.j, which)
            if key in mapped:
                return False, f"{key} hit twice"
            mapped[key] = (p.sign, p.u, p.v)
    combined = {(p.i, p.j): (p.sign, p.u, p.v) for p in combined_points(o4)}
    if mapped != combined:
        diff = sorted(set(mapped.items()) ^ set(combined.items()))
        return False, f"index sets differ, first at {diff[0]}"
    return True, None


def verify_r2(order=8) -> list[VerificationReport]:
    reports = [_compare("r2", order, lambda: rank2_combined(order),
                        lambda: rank2_series("C0", order) + rank2_series("C0mg", order))]
    for name, check in (("r2-nu-partition", lambda: nu_partition_check(20)),
                        ("r2-nu-reindex", lambda: nu_reindex_check(_o4(order)))):
        started = time.perf_counter()
        ok, why = check()
        reports.append(VerificationReport(name, order, "PASS" if ok else "FAIL", None,
                                          (time.perf_counter() - started) * 1e3, why))
    return reports


def verify_e0(order=8) -> list[VerificationReport]:
    return [_compare("e0", order, lambda: e0_case1("sum_def", order), lambda: e0_case1("product", order))]


def verify_chain(order=6) -> list[VerificationReport]:
    started = time.perf_counter()
    lines = chain_lines(order)
    o4 = _o4(order)
    reports = []
    for (name_a, a), (name_b, b) in zip(lines, lines[1:]):
        reports.append(_report(f"chain: {name_a} = {name_b}", order, qs_equal_to_order(a, b, o4), started))
        started = time.perf_counter()
    return reports


VERIFIERS = {
    "main": verify_main,
    "theta": verify_theta,
    "r2": verify_r2,
    "e0": verify_e0,
    "chain": verify_chain,
}


def verify(identity: str, order) -> list[VerificationReport]:
    if identity == "all":
        return [r for name in VERIFIERS for r in VERIFIERS[name](order)]
    if identity not in VERIFIERS:
        raise ValueError(f"unknown identity {identity!r}")
    return VERIFIERS[identity](order)
