import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chatelet.arith import GuardError, IntPoly, pell_fundamental
from chatelet.counting import (NO_POINTS, CountSeries, count_brute,
                               count_brute_hist, count_fast, count_fast_hist,
                               count_series, counted_tuples_sample,
                               fit_exponent, homogenize, surface,
                               unit_orbit_count)

from conftest import FIXTURES


def literal_count(S, B):
    """Tiny independent oracle: direct search over every coordinate."""
    tuples = 0
    d = S.delta
    for u in range(-B, B + 1):
        for v in range(-B, B + 1):
            if math.gcd(u, v) != 1:
                continue
            Fv = S.F(u, v)
            if Fv == 0:
                continue
            M = max(abs(u), abs(v))
            for t in range(1, B // (M * M) + 1):
                m = t * t * Fv
                lim = 4 * B * B + 10
                for y in range(-lim, lim + 1):
                    r = m - d * y * y
                    if r < 0:
                        continue
                    x0 = math.isqrt(r)
                    if x0 * x0 != r:
                        continue
                    for x in {x0, -x0}:
                        if math.gcd(math.gcd(x, y), t) != 1 or (x, y) == (0, 0):
                            continue
                        if d < 0:
                            h = max(t * M * M, abs(x) + math.isqrt(y * y * -d) + (y != 0))
                        else:
                            h = t * M * M
                        if h <= B:
                            tuples += 1
    return tuples // 2


def test_homogenize_examples():
    assert homogenize(IntPoly([1, 0, 0, 0, 1])).coeffs == (1, 0, 0, 0, 1)
    F = homogenize(IntPoly([-1, -1, 0, 1]))
    assert F(2, 3) == 2 ** 3 * 3 - 2 * 3 ** 3 - 3 ** 4
    F = homogenize(IntPoly([0, -1, 0, 1]))
    assert F(5, 2) == 5 ** 3 * 2 - 5 * 2 ** 3
    with pytest.raises(ValueError):
        homogenize(IntPoly([1, 1]))


def test_count_examples():
    S = surface(1, [1, 0, 0, 0, 1])
    assert count_brute(S, 1) == 16
    assert count_fast(S, 1) == 16
    for fx in FIXTURES:
        T = surface(*fx)
        assert count_brute(T, 0) == 0 == count_fast(T, 0)
    assert count_brute(surface(1, [3, 0, 0, 0, 3]), 1000) == 0
    T = surface(5, [1, 0, 0, 0, 1])
    assert count_fast(T, 50) == count_brute(T, 50)


@pytest.mark.parametrize("fx", FIXTURES[:8],
                         ids=lambda f: f"d{f[0]}")
def test_literal_oracle_small(fx):
    S = surface(*fx)
    for B in (1, 3, 6):
        assert count_brute(S, B) == literal_count(S, B)


def test_fast_equals_brute_histograms(fixture_surface):
    hb = count_brute_hist(fixture_surface, 1500)
    hf = count_fast_hist(fixture_surface, 1500)
    assert np.array_equal(hb, hf)


def test_guard():
    S = surface(1, [1, 0, 0, 0, 1])
    with pytest.raises(GuardError):
        count_brute(S, 10 ** 6, ceiling=1000)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(0, 3000), min_size=2, max_size=5, unique=True))
def test_monotone(grid):
    S = surface(-3, [-2, 0, 0, 1])
    vals = [count_fast(S, B) for B in sorted(grid)]
    assert vals == sorted(vals)


def test_parallel_determinism():
    S = surface(5, [0, -1, 0, 1])
    serial = count_fast_hist(S, 4000, workers=1, path="generic")
    par = count_fast_hist(S, 4000, workers=3, path="generic")
    assert np.array_equal(serial, par)
    assert np.array_equal(count_fast_hist(surface(1, [1, 0, 0, 0, 1]), 3000, path="h1"),
                          count_fast_hist(surface(1, [1, 0, 0, 0, 1]), 3000, path="generic"))


@pytest.mark.parametrize("fx", [(-2, [1, 0, 0, 0, 1]), (-3, [-2, 0, 0, 1])])
def test_indefinite_tuples_within_bounds(fx):
    S = surface(*fx)
    B = 800
    d = -S.delta
    sample = counted_tuples_sample(S, B, limit=1000, seed=1)
    assert sample
    for x, y, u, v, t in sample:
        assert x * x - d * y * y == t * t * S.F(u, v)
        assert t * max(u * u, v * v) <= B
        s = math.sqrt(d)
        assert abs(x + y * s) <= B + 1e-9 and abs(x - y * s) <= B + 1e-9


def test_unit_orbit_count():
    pell = pell_fundamental(-2)
    eps = math.exp(pell.eps_log)
    assert unit_orbit_count(pell, 1.0, 1.0, eps) == 3
    B = 50.0
    n = unit_orbit_count(pell, B, 1.0, B)
    ks = [k for k in range(-30, 31) if B * eps ** k <= B + 1e-9 and eps ** -k <= B + 1e-9]
    assert n == len(ks) and 0 in ks and 1 not in ks
    with pytest.raises(ValueError):
        unit_orbit_count(pell, 0.0, 1.0, 2.0)
    rng = random.Random(5)
    for _ in range(200):
        x, y = rng.randint(1, 200), rng.randint(0, 200)
        n_ = abs(x * x - 2 * y * y)
        if n_ == 0:
            continue
        a = abs(x + y * math.sqrt(2))
        ab = n_ / a
        B = rng.uniform(math.sqrt(n_), 10 ** 5)
        direct = sum(1 for k in range(-80, 81) if a * eps ** k <= B and ab * eps ** -k <= B)
        assert unit_orbit_count(pell, a, ab, B) == direct
        # an interval of length L holds floor(L) or floor(L) + 1 integers
        L = 2 * math.log(B / math.sqrt(n_)) / pell.eps_log
        assert L - 1 < direct <= L + 1


def test_series_and_fit():
    syn = [(B, B * math.log(B) ** 2, 0.0) for B in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)]
    fit = fit_exponent(syn)
    assert abs(fit.slope - 2.0) < 0.05
    assert fit_exponent([(10, 0, 0), (100, 0, 0), (1000, 0, 0)]) is NO_POINTS
    ser = count_series(surface(1, [1, 0, 0, 0, 1]), [100, 1000, 3000])
    assert isinstance(ser, CountSeries)
    assert [g[1] for g in ser.grid] == sorted(g[1] for g in ser.grid)
    with pytest.raises(ValueError):
        CountSeries("x", [(10, 1, 0), (10, 2, 0)], "fast")
