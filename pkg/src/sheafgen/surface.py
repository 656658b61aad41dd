"""Lattice arithmetic on elliptic ruled surfaces with invariant e in {-1, 0}.

Divisor classes are written in the basis (C0, g): a minimal section and a
fiber, with (C0^2) = -e, (C0.g) = 1, (g^2) = 0 and K = -2 C0 - e g. For
e = -1 the class f0 = 2 C0 - g equals -K and gives a second basis (C0, f0).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import GcdViolation, NonIntegralImage, OddParity, UndefinedDimension


@dataclass(frozen=True)
class SurfaceModel:
    e: int

    def __post_init__(self):
        if self.e not in (-1, 0):
            raise ValueError(f"invariant e must be -1 or 0, got {self.e}")

    @property
    def canonical(self) -> "DivisorClass":
        return DivisorClass(-2, -self.e)

    def intersect(self, d1: "DivisorClass", d2: "DivisorClass") -> int:
        return -self.e * d1.c0 * d2.c0 + d1.c0 * d2.g + d1.g * d2.c0

    def square(self, d: "DivisorClass") -> int:
        return self.intersect(d, d)


E_MINUS1 = SurfaceModel(-1)
E_ZERO = SurfaceModel(0)


@dataclass(frozen=True)
class DivisorClass:
    """``c0 * C0 + g * g``."""

    c0: int
    g: int

    @classmethod
    def from_c0_f0(cls, s: int, t: int) -> "DivisorClass":
        """``s C0 + t f0`` on the e = -1 surface."""
        return cls(s + 2 * t, -t)

    def to_c0_f0(self) -> tuple[int, int]:
        """Coordinates (s, t) with ``self = s C0 + t f0`` (e = -1 only)."""
        return self.c0 + 2 * self.g, -self.g

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.c0 + other.c0, self.g + other.g)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.c0, -self.g)

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(k * self.c0, k * self.g)

    __rmul__ = __mul__


C0 = DivisorClass(1, 0)
G = DivisorClass(0, 1)
F0 = DivisorClass.from_c0_f0(0, 1)


def intersect(m: SurfaceModel, d1: DivisorClass, d2: DivisorClass) -> int:
    return m.intersect(d1, d2)


@dataclass(frozen=True)
class ModuliClass:
    r: int
    xi: DivisorClass
    chi: int


def dim_moduli(m: SurfaceModel, mc: ModuliClass) -> int:
    """Expected dimension ``-2 r chi - r (xi.K) + (xi^2) + 1``."""
    xk = m.intersect(mc.xi, m.canonical)
    if mc.r == 0 and xk == 0:
        raise UndefinedDimension("rank 0 with (xi.K) = 0 has no dimension formula")
    return -2 * mc.r * mc.chi - mc.r * xk + m.square(mc.xi) + 1


# -- Chern vectors and Fourier-Mukai actions --------------------------------


def _doubled(a) -> int:
    a2 = Fraction(a) * 2
    if a2.denominator != 1:
        raise NonIntegralImage(f"ch2 = {a} has denominator larger than 2")
    return int(a2)


@dataclass(frozen=True)
class ChernVector:
    """A K-theory class as (r, s, t, a2) with ``a2 = 2 ch2``.

    On e = -1 the first Chern class is ``s C0 + t f0``. On e = 0 the
    fields follow the layout (x; r, y; a) used by the e = 0 transform:
    rank x, c1 = r g + y C0, ch2 = a, stored with the same field names.
    Classes may be negative (shifted objects); the sign lives in the
    components, not in a separate flag.
    """

    r: int
    s: int
    t: int
    a2: int

    @classmethod
    def make(cls, r: int, s: int, t: int, a) -> "ChernVector":
        return cls(r, s, t, _doubled(a))

    @property
    def a(self) -> Fraction:
        return Fraction(self.a2, 2)

    def c1(self) -> DivisorClass:
        """c1 on the e = -1 surface."""
        return DivisorClass.from_c0_f0(self.s, self.t)

    def as_tuple(self) -> tuple[int, int, int, Fraction]:
        return self.r, self.s, self.t, self.a


def fm_e_minus1(v: ChernVector) -> ChernVector:
    """(r, s, t, a) -> (r - 2s, s, t - 2a, a)."""
    return ChernVector(v.r - 2 * v.s, v.s, v.t - v.a2, v.a2)


def fm_e_minus1_raw(r: int, s: int, t: int, a) -> ChernVector:
    """Like :func:`fm_e_minus1` but accepts any rational ch2 and checks it."""
    return fm_e_minus1(ChernVector.make(r, s, t, a))


# matrix of fm_e_minus1 on (r, s, t, a2) column vectors
FM_E_MINUS1_MATRIX = ((1, -2, 0, 0), (0, 1, 0, 0), (0, 0, 1, -1), (0, 0, 0, 1))


def fm_e0(v: ChernVector) -> ChernVector:
    """(x, r, y, a) -> (r, -x, a, -y); every component must be integral."""
    if v.a2 % 2:
        raise NonIntegralImage("the e = 0 transform needs integral ch2")
    return ChernVector(v.s, -v.r, v.a2 // 2, -2 * v.t)


def fm_canonical_invariance(v: ChernVector) -> tuple[int, int]:
    """((c1(v).K), (c1(image).K)) on the e = -1 surface; the two agree."""
    m = E_MINUS1
    k = m.canonical
    return m.intersect(v.c1(), k), m.intersect(fm_e_minus1(v).c1(), k)


# -- rank reduction ---------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """Where a positive-rank moduli space lands after rank reduction.

    ``kind`` is ``"OneDimensional"`` (read the xiSq coefficient of the
    one-dimensional series) or ``"HilbTimesJacobian"`` (Hilbert scheme of
    ``n`` points times the base curve).
    """

    kind: str
    xi_sq: int | None = None
    n: int | None = None
    xi_dot_k: int | None = None


def _rank_quantity(r: int, d1: int, d2: int, chi: int) -> int:
    return -2 * r * chi + r * d1 + d1 * d1 + 2 * d1 * d2


def reduce_rank(r: int, d1: int, d2: int, chi: int) -> Reduction:
    """Reduce M(r, d1 C0 + d2 f0, chi) on the e = -1 surface, gcd(r, d1) = 1."""
    if r <= 0:
        raise ValueError("rank must be positive")
    if gcd(r, d1) != 1:
        raise GcdViolation(f"gcd({r}, {d1}) != 1")
    quantity = _rank_quantity(r, d1, d2, chi)
    if r % 2 == 0:
        return Reduction("OneDimensional", xi_sq=quantity, xi_dot_k=-1)
    if quantity % 2:
        raise OddParity(f"odd rank with odd quantity {quantity}")
    return Reduction("HilbTimesJacobian", n=quantity // 2)


def reduce_rank_e0(r: int, p: int, d: int, n: int) -> int:
    """Hilbert-scheme index -r n + r p + p d for M(r, p g + d C0, n) on e = 0."""
    if gcd(r, p) != 1:
        raise GcdViolation(f"gcd({r}, {p}) != 1")
    return -r * n + r * p + p * d


@dataclass(frozen=True)
class FMIsomData:
    """Numeric shadow of the rank 2p -> rank 0 isomorphism on e = -1.

    With c1 = p C0 + (l + 2kp) f0 and Euler characteristic chi + kp, the
    discriminant relation 2 r Delta = -2 r chi - r (c1.K) + (c1^2) at
    r = 2p gives Delta = -chi + 3p/4 + l/2, independent of k. The source
    has dimension 4 p Delta + 1 and the target one-dimensional class is
    4 Delta C0 + ((p - 4 Delta)/2) g, whose square is also 4 p Delta.
    """

    delta: Fraction
    source: ModuliClass
    target: ModuliClass
    source_dim: int
    target_dim: int


def fm_isom_data(p: int, l: int, chi: int, k: int = 0) -> FMIsomData:
    if p <= 0:
        raise ValueError("p must be positive")
    delta = -Fraction(chi) + Fraction(3 * p, 4) + Fraction(l, 2)
    # 4 Delta = 3p + 2l - 4 chi is an integer and p - 4 Delta is even
    fd = int(4 * delta)
    m = E_MINUS1
    source = ModuliClass(2 * p, DivisorClass.from_c0_f0(p, l + 2 * k * p), chi + k * p)
    target = ModuliClass(0, DivisorClass(fd, (p - fd) // 2), chi + k * p)
    return FMIsomData(delta, source, target, dim_moduli(m, source), dim_moduli(m, target))


# -- index maps --------------------------------------------------------------


def nu_maps(a: int, b: int, which: int) -> tuple[int, int]:
    if which == 1:
        return a, 2 * b - a
    if which == 2:
        return a, 2 * b - a - 1
    raise ValueError("which must be 1 or 2")
