import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafgen import genfun
from sheafgen.errors import NotDivisible
from sheafgen.qseries import backend
from sheafgen.qseries._dense import DenseSeries

BACKENDS = backend.available()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")

terms_strategy = st.dictionaries(
    st.integers(0, 11),
    st.dictionaries(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.integers(-9, 9), max_size=4),
    max_size=5,
)


def _normalize(d: DenseSeries):
    return {e: {k: int(c) for k, c in p.items() if c} for e, p in d.to_terms().items() if any(p.values())}


def _run_everywhere(fn):
    results = {}
    for name in BACKENDS:
        with backend.use_backend(name):
            results[name] = fn()
    return results


@settings(max_examples=40, deadline=None)
@given(terms_strategy, terms_strategy, st.integers(-3, 3), st.integers(1, 6), st.integers(-2, 2))
def test_backends_agree_on_kernels(a, b, c, dq, dx):
    def compute():
        da = DenseSeries.from_terms(a, 12)
        db = DenseSeries.from_terms(b, 12)
        out = (da * db).mul_binomial(c or 1, dq, dx, 0, power=-2) + da
        return _normalize(out)

    results = _run_everywhere(compute)
    assert len({repr(sorted(r.items())) for r in results.values()}) == 1


def test_backends_agree_on_main_series():
    results = _run_everywhere(lambda: genfun.one_dim_product(3))
    assert len(set(map(repr, results.values()))) == 1


@needs_cython
def test_overflow_falls_back_to_exact_integers():
    big = 1 << 40
    with backend.use_backend("cython"):
        d = DenseSeries.from_terms({0: {(0, 0): big}, 1: {(0, 0): big}}, 8)
        sq = d * d * d
    assert sq.to_terms()[0][(0, 0)] == big**3
    assert sq.to_terms()[3][(0, 0)] == big**3


@needs_cython
def test_large_binomial_power_stays_exact():
    with backend.use_backend("cython"):
        d = DenseSeries.one(400).mul_binomial(-1, 1, 0, 0, power=-80)
        fast = d.to_terms()
    with backend.use_backend("python"):
        slow = DenseSeries.one(400).mul_binomial(-1, 1, 0, 0, power=-80).to_terms()
    assert fast == slow
    assert max(abs(int(c)) for p in fast.values() for c in p.values()) > 1 << 63


def test_exact_division_by_one_minus_xy():
    with backend.use_backend(BACKENDS[-1]):
        d = DenseSeries.from_terms({0: {(0, 0): 1, (2, 2): -1}, 4: {(0, 2): 3, (2, 4): -3}}, 8)
        q = d.exact_div_xy_binomial(-1, 2, 2)
        assert _normalize(q) == {0: {(0, 0): 1}, 4: {(0, 2): 3}}
        with pytest.raises(NotDivisible):
            DenseSeries.from_terms({0: {(2, 0): 1}}, 8).exact_div_xy_binomial(-1, 2, 2)


def test_use_backend_restores_previous():
    before = backend.active()
    with backend.use_backend("python"):
        assert backend.active() == "python"
        assert backend.dtype() is object
    assert backend.active() == before
    with pytest.raises(ValueError):
        backend.set_backend("fortran")


def test_environment_variable_forces_fallback():
    env = dict(os.environ, SHEAFGEN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from sheafgen.qseries import backend; print(backend.active())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_int64_add_guard():
    a = np.array([1 << 62], dtype=np.int64)
    with backend.use_backend(BACKENDS[-1]):
        s = backend.add(a, a)
    assert int(s[0]) == 1 << 63
