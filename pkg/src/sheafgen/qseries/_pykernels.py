"""Reference kernels on numpy object arrays (exact Python ints).

Both entry points mirror ``_ckernels`` exactly; the compiled module is
preferred when it imports and the data fits in int64.
"""
import numpy as np


def _span(n: int, d: int) -> tuple[int, int]:
    # source indices s with 0 <= s + d < n
    return max(0, -d), min(n, n - d)


def recur(arr, c, iq, ix, iy, ascending):
    """In place: ``arr[i, j+ix, k+iy] += c * arr[i-iq, j, k]``, slice by slice.

    Ascending order divides by ``1 - c*m``; descending multiplies by ``1 + c*m``
    where ``m`` is the monomial at index offset (iq, ix, iy).
    """
    nq, nx, ny = arr.shape
    j0, j1 = _span(nx, ix)
    k0, k1 = _span(ny, iy)
    if iq <= 0 or j0 >= j1 or k0 >= k1:
        return arr
    order = range(iq, nq) if ascending else range(nq - 1, iq - 1, -1)
    for i in order:
        src = arr[i - iq, j0:j1, k0:k1]
        if src.any():
            arr[i, j0 + ix : j1 + ix, k0 + iy : k1 + iy] += c * src
    return arr


def conv(a, b, nq_out):
    """Truncated 3-d convolution; the q axis is cut at ``nq_out`` slots."""
    nqa, nxa, nya = a.shape
    nqb, nxb, nyb = b.shape
    out = np.zeros((nq_out, nxa + nxb - 1, nya + nyb - 1), dtype=object)
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
        nqa, nxa, nya, nqb, nxb, nyb = nqb, nxb, nyb, nqa, nxa, nya
    for i, j, k in np.argwhere(a != 0):
        if i >= nq_out:
            continue
        m = min(nqb, nq_out - i)
        out[i : i + m, j : j + nxb, k : k + nyb] += a[i, j, k] * b[:m]
    return out
