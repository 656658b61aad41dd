"""Kernel dispatch: compiled int64 path when available, Python ints otherwise.

The compiled module is picked at import. ``SHEAFGEN_PURE_PYTHON=1`` forces
the fallback. Results never depend on the backend: an int64 overflow in the
compiled path makes the operation rerun on object arrays.
"""
from __future__ import annotations

import contextlib
import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_INT64_SAFE = 1 << 62

_active = "python" if (_ckernels is None or os.environ.get("SHEAFGEN_PURE_PYTHON")) else "cython"


def available() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def active() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in available():
        raise ValueError(f"backend {name!r} unavailable; have {available()}")
    _active = name


@contextlib.contextmanager
def use_backend(name: str):
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def dtype():
    return np.int64 if _active == "cython" else object


def zeros(shape) -> np.ndarray:
    return np.zeros(shape, dtype=dtype())


def _compiled_ok(*arrays) -> bool:
    return _active == "cython" and all(a.dtype == np.int64 for a in arrays)


def as_object(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def recur(arr: np.ndarray, c: int, iq: int, ix: int, iy: int, ascending: bool) -> np.ndarray:
    """Functional wrapper: returns a new array, never mutates ``arr``."""
    if _compiled_ok(arr) and abs(c) < _INT64_SAFE:
        work = np.ascontiguousarray(arr).copy()
        try:
            _ckernels.recur(work, c, iq, ix, iy, ascending)
            return work
        except OverflowError:
            pass
    return _pykernels.recur(as_object(arr).copy(), c, iq, ix, iy, ascending)


def conv(a: np.ndarray, b: np.ndarray, nq_out: int) -> np.ndarray:
    if _compiled_ok(a, b):
        try:
            return _ckernels.conv(np.ascontiguousarray(a), np.ascontiguousarray(b), nq_out)
        except OverflowError:
            pass
    out = _pykernels.conv(as_object(a), as_object(b), nq_out)
    return _maybe_narrow(out)


def _maybe_narrow(a: np.ndarray) -> np.ndarray:
    # keep results on the fast path when they fit
    if _active == "cython" and a.dtype == object and a.size and _fits(a):
        return a.astype(np.int64)
    return a


def _fits(a: np.ndarray) -> bool:
    if a.size == 0:
        return True
    return max(abs(int(a.max())), abs(int(a.min()))) < _INT64_SAFE


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise sum of same-shape arrays without silent int64 wraparound."""
    if a.dtype == np.int64 and b.dtype == np.int64 and _fits(a) and _fits(b):
        return a + b
    return _maybe_narrow(as_object(a) + as_object(b))


def scale(a: np.ndarray, c: int) -> np.ndarray:
    if a.dtype == np.int64 and abs(c) < (1 << 31) and _fits(a) and (
        a.size == 0 or max(abs(int(a.max())), abs(int(a.min()))) * abs(c) < _INT64_SAFE
    ):
        return a * c
    return _maybe_narrow(as_object(a) * c)
