"""Eta quotients and Jacobi theta series in the truncated series model.

Theta functions carry their elliptic variable in the x slot of the Laurent
coefficients (``t^(k/2)`` is stored as ``xd = k``).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import count
from typing import Iterable, Iterator

from ..errors import UnrepresentablePrefactor
from ..laurent import LaurentPoly
from .series import FracSeries, ProductFactor, merge_factor_streams, product_dense, q4


def eta_prefactor(etas: Iterable[tuple], extra=0) -> Fraction:
    """Total power of q in front of ``prod eta(q^scale)^power`` times ``q^extra``."""
    return sum((Fraction(scale) * k for scale, k in etas), Fraction(0)) / 24 + Fraction(extra)


def _eta_stream(scale4: int, power: int) -> Iterator[ProductFactor]:
    for n in count(1):
        yield ProductFactor.one_minus(scale4 * n, power=power)


def qs_eta_quotient(etas: Iterable[tuple], order: int, include_prefactor: bool = True, extra=0) -> FracSeries:
    """``q^extra * prod eta(q^scale)^power`` truncated at q^(order/4).

    ``etas`` is a list of ``(scale, power)`` pairs with positive scales in
    (1/4)Z. With ``include_prefactor`` the accumulated ``q^(sum scale*power/24)``
    is kept and must land in (1/4)Z; otherwise only the infinite product
    is returned.
    """
    etas = [(Fraction(s), int(k)) for s, k in etas if int(k) != 0]
    streams = []
    for scale, power in etas:
        if scale <= 0:
            raise ValueError("eta scale must be positive")
        streams.append(_eta_stream(q4(scale), power))
    if not include_prefactor:
        return FracSeries.from_dense(product_dense(merge_factor_streams(*streams), order))
    pref = eta_prefactor(etas, extra)
    if (pref * 4).denominator != 1:
        raise UnrepresentablePrefactor(f"prefactor q^({pref}) is not a quarter-integer power")
    p4 = int(pref * 4)
    body = product_dense(merge_factor_streams(*streams), order - p4)
    return FracSeries.from_dense(body.shift(1, p4, 0, 0))


def _theta01_terms(order: int) -> dict[int, LaurentPoly]:
    terms = {}
    for n in count(0):
        e = 2 * n * n
        if e >= order:
            break
        for m in {n, -n}:
            terms[e] = terms.get(e, LaurentPoly()) + LaurentPoly.monomial((-1) ** n, 2 * m, 0)
    return terms


def _theta11_reduced_terms(order: int) -> dict[int, LaurentPoly]:
    # q^(-1/8) theta11: exponents (n^2 + n)/2, t^(n + 1/2), sign (-1)^n
    terms: dict[int, LaurentPoly] = {}
    for n in count(0):
        e = 2 * (n * n + n)
        if e >= order:
            break
        for m in (n, -n - 1):
            terms[e] = terms.get(e, LaurentPoly()) + LaurentPoly.monomial((-1) ** m, 2 * m + 1, 0)
    return terms


def qs_theta(kind: str, order: int, aux: bool = False):
    """Jacobi theta series in the variable ``t`` (stored in the x slot).

    ``"01"``: sum over n of (-1)^n q^(n^2/2) t^n.
    ``"11"``: sum over n of (-1)^n q^((n+1/2)^2/2) t^(n+1/2). Its exponents sit in
    1/8 + Z/2, so it is only available with ``aux=True``, returning
    ``(Fraction(1, 8), series)`` where ``series`` is theta11 times q^(-1/8).
    """
    if kind == "01":
        series = FracSeries(order, _theta01_terms(order))
        return (Fraction(0), series) if aux else series
    if kind == "11":
        if not aux:
            raise UnrepresentablePrefactor("theta11 has exponents in 1/8 + Z/2; request aux mode")
        return Fraction(1, 8), FracSeries(order, _theta11_reduced_terms(order))
    raise ValueError(f"unknown theta kind {kind!r}")
