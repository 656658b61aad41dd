"""Dense workspace for truncated series arithmetic.

``arr[i, j, k]`` is the coefficient of
``q^((q0 + qs*i)/4) * x^((x0 + xs*j)/2) * y^((y0 + ys*k)/2)``.
Each axis is an arithmetic progression; a step of 0 marks an axis with a
single point. Grids are refined on demand, so series living on a coarse
lattice (integer q powers, integral x powers) do not pay for the finer one.
"""
from __future__ import annotations

from math import gcd

import numpy as np

from ..errors import NotDivisible
from . import _backend as kern


def slots_below(order: int, q0: int, qs: int) -> int:
    """Number of grid points q0 + qs*i strictly below ``order``."""
    if order <= q0:
        return 0
    if qs == 0:
        return 1
    return -((q0 - order) // qs)


def _ratio(old_step: int, new_step: int) -> int:
    return 1 if old_step == 0 else old_step // new_step


def _index(off: int, new_off: int, new_step: int) -> int:
    return 0 if new_step == 0 else (off - new_off) // new_step


class DenseSeries:
    __slots__ = ("arr", "order", "q0", "qs", "x0", "xs", "y0", "ys")

    def __init__(self, arr, order, q0=0, qs=0, x0=0, xs=0, y0=0, ys=0):
        self.arr = arr
        self.order = order
        self.q0, self.qs = q0, qs
        self.x0, self.xs = x0, xs
        self.y0, self.ys = y0, ys

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "DenseSeries":
        return cls(kern.zeros((slots_below(order, 0, 0), 1, 1)), order)

    @classmethod
    def one(cls, order: int) -> "DenseSeries":
        s = cls.zero(order)
        if s.arr.shape[0]:
            s.arr[0, 0, 0] = 1
        return s

    @classmethod
    def from_terms(cls, terms: dict[int, dict[tuple[int, int], int]], order: int) -> "DenseSeries":
        """Build from ``{q4: {(xd, yd): c}}``; exponents at or above order are dropped."""
        entries = [
            (e, xd, yd, c) for e, poly in terms.items() if e < order for (xd, yd), c in poly.items() if c
        ]
        if not entries:
            return cls.zero(order)
        qe = [t[0] for t in entries]
        xe = [t[1] for t in entries]
        ye = [t[2] for t in entries]
        q0, x0, y0 = min(qe), min(xe), min(ye)
        qs = xs = ys = 0
        for e, a, b, _ in entries:
            qs, xs, ys = gcd(qs, e - q0), gcd(xs, a - x0), gcd(ys, b - y0)
        nq = slots_below(order, q0, qs)
        nx = 1 if xs == 0 else (max(xe) - x0) // xs + 1
        ny = 1 if ys == 0 else (max(ye) - y0) // ys + 1
        arr = np.zeros((nq, nx, ny), dtype=object)
        for e, a, b, c in entries:
            arr[_index(e, q0, qs), _index(a, x0, xs), _index(b, y0, ys)] += c
        if kern.active() == "cython" and kern._fits(arr):
            arr = arr.astype(np.int64)
        return cls(arr, order, q0, qs, x0, xs, y0, ys)

    def to_terms(self) -> dict[int, dict[tuple[int, int], int]]:
        out: dict[int, dict[tuple[int, int], int]] = {}
        idx = np.nonzero(self.arr)
        vals = self.arr[idx].tolist()
        for i, j, k, c in zip(idx[0].tolist(), idx[1].tolist(), idx[2].tolist(), vals):
            e = self.q0 + self.qs * i
            key = (self.x0 + self.xs * j, self.y0 + self.ys * k)
            out.setdefault(e, {})[key] = int(c)
        return out

    def copy(self) -> "DenseSeries":
        return DenseSeries(self.arr.copy(), self.order, self.q0, self.qs, self.x0, self.xs, self.y0, self.ys)

    # -- grid management --------------------------------------------------

    def regrid(self, q0, qs, x0, xs, y0, ys) -> "DenseSeries":
        """Re-express on a finer grid that contains the current one."""
        if (q0, qs, x0, xs, y0, ys) == (self.q0, self.qs, self.x0, self.xs, self.y0, self.ys):
            return self
        nq, nx, ny = self.arr.shape
        rq, rx, ry = _ratio(self.qs, qs), _ratio(self.xs, xs), _ratio(self.ys, ys)
        iq, ix, iy = _index(self.q0, q0, qs), _index(self.x0, x0, xs), _index(self.y0, y0, ys)
        new_nq = slots_below(self.order, q0, qs)
        new_nx = ix + (nx - 1) * rx + 1
        new_ny = iy + (ny - 1) * ry + 1
        new = np.zeros((new_nq, new_nx, new_ny), dtype=self.arr.dtype)
        if nq:
            new[iq : iq + (nq - 1) * rq + 1 : rq, ix : ix + (nx - 1) * rx + 1 : rx, iy : iy + (ny - 1) * ry + 1 : ry] = self.arr
        return DenseSeries(new, self.order, q0, qs, x0, xs, y0, ys)

    def pad_xy(self, left_x: int, right_x: int, left_y: int, right_y: int) -> "DenseSeries":
        """Add zero columns (index units) around the x/y box."""
        if not (left_x or right_x or left_y or right_y):
            return self
        arr = np.pad(self.arr, ((0, 0), (left_x, right_x), (left_y, right_y)))
        return DenseSeries(
            arr, self.order, self.q0, self.qs,
            self.x0 - left_x * self.xs, self.xs, self.y0 - left_y * self.ys, self.ys,
        )

    def trim(self) -> "DenseSeries":
        """Shrink the x/y box to the nonzero support."""
        a = self.arr
        if a.size == 0:
            return self
        nz = a != 0
        xs_any = nz.any(axis=(0, 2))
        ys_any = nz.any(axis=(0, 1))
        if not xs_any.any():
            return DenseSeries(np.zeros((a.shape[0], 1, 1), dtype=a.dtype), self.order, self.q0, self.qs)
        jx = np.flatnonzero(xs_any)
        jy = np.flatnonzero(ys_any)
        j0, j1, k0, k1 = int(jx[0]), int(jx[-1]) + 1, int(jy[0]), int(jy[-1]) + 1
        if (j0, j1, k0, k1) == (0, a.shape[1], 0, a.shape[2]):
            return self
        return DenseSeries(
            a[:, j0:j1, k0:k1].copy(), self.order, self.q0, self.qs,
            self.x0 + j0 * self.xs, self.xs if j1 - j0 > 1 else 0,
            self.y0 + k0 * self.ys, self.ys if k1 - k0 > 1 else 0,
        )

    def truncate(self, order: int) -> "DenseSeries":
        order = min(order, self.order)
        n = slots_below(order, self.q0, self.qs)
        return DenseSeries(self.arr[:n].copy(), order, self.q0, self.qs, self.x0, self.xs, self.y0, self.ys)

    # -- arithmetic -------------------------------------------------------

    def mul_binomial(self, c: int, dq: int, dx: int, dy: int, power: int = 1) -> "DenseSeries":
        """Multiply by ``(1 + c * q^(dq/4) x^(dx/2) y^(dy/2)) ** power`` with dq > 0."""
        if dq <= 0:
            raise ValueError("binomial factor needs a positive q exponent")
        s = self
        for _ in range(abs(power)):
            s = s._mul_binomial_once(c, dq, dx, dy, power > 0)
        return s

    def _mul_binomial_once(self, c, dq, dx, dy, multiply) -> "DenseSeries":
        s = self.regrid(self.q0, gcd(self.qs, dq), self.x0, gcd(self.xs, dx), self.y0, gcd(self.ys, dy))
        iq = dq // s.qs
        ix = dx // s.xs if dx else 0
        iy = dy // s.ys if dy else 0
        nq = s.arr.shape[0]
        if iq >= nq:
            return s
        m = 1 if multiply else (nq - 1) // iq
        s = s.pad_xy(m * max(0, -ix), m * max(0, ix), m * max(0, -iy), m * max(0, iy))
        arr = kern.recur(s.arr, c if multiply else -c, iq, ix, iy, ascending=not multiply)
        return DenseSeries(arr, s.order, s.q0, s.qs, s.x0, s.xs, s.y0, s.ys).trim()

    def exact_div_xy_binomial(self, c: int, dx: int, dy: int) -> "DenseSeries":
        """Divide every q-coefficient by ``1 + c * x^(dx/2) y^(dy/2)`` exactly (dx > 0).

        Runs the recurrence along the x axis. The quotient is exact iff no
        quotient entry would be pushed past the box by the divisor's shift.
        """
        if dx <= 0:
            raise ValueError("divisor needs a positive x exponent")
        s = self.regrid(self.q0, self.qs, self.x0, gcd(self.xs, dx), self.y0, gcd(self.ys, dy))
        ix = dx // s.xs
        iy = dy // s.ys if dy else 0
        if iy < 0:
            raise ValueError("divisor needs a nonnegative y exponent")
        work = np.ascontiguousarray(s.arr.transpose(1, 0, 2))
        # ascending recurrence along x divides by (1 - (-c) m)
        work = kern.recur(work, -c, ix, 0, iy, ascending=True)
        quot = np.ascontiguousarray(work.transpose(1, 0, 2))
        nx, ny = quot.shape[1], quot.shape[2]
        spill_x = quot[:, max(0, nx - ix):, :]
        spill_y = quot[:, :, max(0, ny - iy):] if iy else quot[:, :, :0]
        if spill_x.any() or spill_y.any():
            raise NotDivisible(f"coefficients not divisible by 1 + {c}*x^({dx}/2)*y^({dy}/2)")
        return DenseSeries(quot, s.order, s.q0, s.qs, s.x0, s.xs, s.y0, s.ys).trim()

    def shift(self, coeff: int, dq: int, dx: int, dy: int) -> "DenseSeries":
        """Multiply by the monomial ``coeff * q^(dq/4) x^(dx/2) y^(dy/2)``; order moves with dq."""
        arr = kern.scale(self.arr, coeff) if coeff != 1 else self.arr.copy()
        return DenseSeries(arr, self.order + dq, self.q0 + dq, self.qs, self.x0 + dx, self.xs, self.y0 + dy, self.ys)

    def __mul__(self, other: "DenseSeries") -> "DenseSeries":
        a, b = self, other
        qs, xs, ys = gcd(a.qs, b.qs), gcd(a.xs, b.xs), gcd(a.ys, b.ys)
        va = a.q0 if a.arr.any() else a.order
        vb = b.q0 if b.arr.any() else b.order
        order = min(a.order + min(0, vb), b.order + min(0, va))
        a = a.regrid(a.q0, qs, a.x0, xs, a.y0, ys)
        b = b.regrid(b.q0, qs, b.x0, xs, b.y0, ys)
        q0 = a.q0 + b.q0
        nq_out = slots_below(order, q0, qs)
        arr = kern.conv(a.arr, b.arr, nq_out)
        return DenseSeries(arr, order, q0, qs, a.x0 + b.x0, xs, a.y0 + b.y0, ys).trim()

    def __add__(self, other: "DenseSeries") -> "DenseSeries":
        order = min(self.order, other.order)
        a, b = self.truncate(order), other.truncate(order)
        q0 = min(a.q0, b.q0)
        x0 = min(a.x0, b.x0)
        y0 = min(a.y0, b.y0)
        qs = gcd(gcd(a.qs, b.qs), abs(a.q0 - b.q0))
        xs = gcd(gcd(a.xs, b.xs), abs(a.x0 - b.x0))
        ys = gcd(gcd(a.ys, b.ys), abs(a.y0 - b.y0))
        a = a.regrid(q0, qs, x0, xs, y0, ys)
        b = b.regrid(q0, qs, x0, xs, y0, ys)
        nx = max(a.arr.shape[1], b.arr.shape[1])
        ny = max(a.arr.shape[2], b.arr.shape[2])
        a = a.pad_xy(0, nx - a.arr.shape[1], 0, ny - a.arr.shape[2])
        b = b.pad_xy(0, nx - b.arr.shape[1], 0, ny - b.arr.shape[2])
        arr = kern.add(a.arr, b.arr)
        return DenseSeries(arr, order, q0, qs, x0, xs, y0, ys).trim()

    def __neg__(self) -> "DenseSeries":
        return self.shift(-1, 0, 0, 0)

    def __sub__(self, other: "DenseSeries") -> "DenseSeries":
        return self + (-other)
