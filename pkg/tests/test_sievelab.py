import math

import numpy as np
import pytest

from chatelet.arith import GuardError, IntPoly
from chatelet.localglobal import rho_poly
from chatelet.counting import surface
from chatelet.quadring import eisenstein_eps, genus_characters, reduced_forms
from chatelet.sievelab import (core_form, cusp_partial_sum, divisor_window_count,
                               eisenstein_mult_check, eisenstein_mult_harness,
                               genus_sum_check, grossen_partial_sum, hooley_average_report,
                               hooley_chain, hooley_delta, hooley_tables, lod_scan,
                               rho_poly_table)


def _tau(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def _hooley_brute(n):
    ds = [d for d in range(1, n + 1) if n % d == 0]
    return max(sum(1 for d in ds if D <= d <= 2 * D) for D in ds)


def test_hooley_examples():
    assert hooley_delta(1) == 1
    assert hooley_delta(12) == 3
    assert hooley_delta(2) == 2
    assert hooley_delta(7) == 1
    with pytest.raises(ValueError):
        hooley_delta(0)


def test_hooley_brute_and_chain_small():
    for n in range(1, 400):
        d = hooley_delta(n)
        assert d == _hooley_brute(n)
        assert hooley_delta(n, -2) <= d <= _tau(n)


def test_hooley_kernel_matches_python():
    for delta in (1, -2, 5):
        dl, dt, tau = hooley_tables(600, delta)
        for n in range(1, 601):
            assert dl[n] == hooley_delta(n)
            assert dt[n] == hooley_delta(n, delta)
            assert tau[n] == _tau(n)


def test_hooley_chain():
    r = hooley_chain(20000, 1)
    assert r.holds and r.first_failure is None
    with pytest.raises(GuardError):
        hooley_tables(10 ** 8)


def test_hooley_report_tiny():
    rep = hooley_average_report([1, 0, 1], 2, points=[2])
    # Delta(1) rho(1) + Delta(2) rho(2) = 1 + 2, scale 2 (log log clipped at 1)
    assert rep.rows[0].numerator == 3
    assert rep.rows[0].ratio == pytest.approx(1.5)


def test_rho_poly_table():
    for coeffs in ([1, 0, 1], [-2, 0, 0, 1], [1, 0, 0, 0, 1], [3, 0, 0, 0, 3]):
        f = IntPoly(coeffs)
        tab = rho_poly_table(f, 800)
        assert [int(x) for x in tab[1:]] == [rho_poly(f, n) for n in range(1, 801)]


LOD_FIXTURES = [(1, [1, 0, 0, 0, 1]), (-3, [-2, 0, 0, 1]), (23, [-1, -1, 0, 1]),
                (1, [3, 0, 0, 0, 3]), (5, [0, -1, 0, 1])]


@pytest.mark.parametrize("fx", LOD_FIXTURES, ids=lambda f: f"d{f[0]}_{f[1]}")
def test_lod_window_matches_oracle(fx):
    S = surface(*fx)
    X = 10
    r = lod_scan(S, X, D_grid=[1, 60, 300])
    assert r.ratio(0) == 0.0 and r.E[0] == 0.0
    for lo, hi in ((0, 1), (1, 60), (60, 300), (0, 300)):
        assert r.window_total(lo, hi) == divisor_window_count(S, X, lo, hi)


def test_lod_restrictions_and_guard():
    S = surface(1, [1, 0, 0, 0, 1])
    with pytest.raises(ValueError):
        lod_scan(S, 10, b=2)
    with pytest.raises(GuardError):
        lod_scan(S, 10 ** 5)
    r = lod_scan(S, 40, D_grid=[100], t=4)
    assert r.X == 20


def test_lod_main_term_density():
    # main term over d <= D is an exact sum of (2X+1)^2 rho(d) phi(d) / d^2
    S = surface(1, [1, 0, 0, 0, 1])
    r = lod_scan(S, 30, D_grid=[50])
    assert r.main[0] == pytest.approx(float(r.predicted[1:51].sum()))
    assert r.predicted[1] == (2 * 30 + 1) ** 2


def test_mult_check_examples():
    for q1, q2 in ((-4, 1), (-3, -4), (5, -4), (8, 5)):
        for n in range(1, 40):
            for m in range(1, 40):
                assert eisenstein_mult_check(q1, q2, n, m)


def test_mult_harness_small():
    r = eisenstein_mult_harness(-4, 5, pairs=2000, N=2000, seed=3)
    assert r.failures == 0 and r.first_failure is None
    with pytest.raises(ValueError):
        eisenstein_mult_harness(3, 1, pairs=1)


def test_mult_harness_seed_env(monkeypatch):
    monkeypatch.setenv("CHATELET_SEED", "17")
    a = eisenstein_mult_harness(-3, 8, pairs=300, N=500)
    b = eisenstein_mult_harness(-3, 8, pairs=300, N=500, seed=17)
    assert a == b


def test_genus_sum_examples():
    G = reduced_forms(5)
    for n in (1, 3, 21, 29, 49):
        assert genus_sum_check(G, n)
    with pytest.raises(ValueError):
        genus_sum_check(G, 5)


@pytest.mark.parametrize("delta", [5, 6, 10, -5, -6])
def test_genus_sum_range(delta):
    G = reduced_forms(delta)
    for n in range(1, 1500):
        if math.gcd(n, 2 * delta) == 1:
            assert genus_sum_check(G, n)


def test_core_form():
    S = surface(23, [-1, -1, 0, 1])
    F = core_form(S)
    assert F.degree == 3 and F(1, 0) == 1 and F(0, 1) == -1


def test_cusp_trivial_char_is_eisenstein():
    S = surface(23, [-1, -1, 0, 1])
    r = cusp_partial_sum(S, 400, psi="trivial")
    assert r.cusp == r.eisenstein


def test_cusp_degenerate_23():
    S = surface(23, [-1, -1, 0, 1])
    r = cusp_partial_sum(S, 900)
    assert r.degenerate
    assert abs(r.cusp - r.eisenstein) < 1e-6


def test_cusp_generic_not_degenerate():
    r = cusp_partial_sum(surface(23, [-2, 0, 0, 1]), 900)
    assert not r.degenerate and r.ratio < 1


def test_cusp_guards():
    with pytest.raises(ValueError):
        cusp_partial_sum(surface(-3, [-2, 0, 0, 1]), 100)
    with pytest.raises(GuardError):
        cusp_partial_sum(surface(23, [-1, -1, 0, 1]), 10 ** 5)
    with pytest.raises(ValueError):
        cusp_partial_sum(surface(5, [1, 0, 0, 0, 1]), 100)   # class group of order 2


@pytest.mark.parametrize("delta", [-2, -3])
def test_grossen_termwise_and_trivial(delta):
    S = surface(delta, [1, 0, 0, 0, 1])
    r = grossen_partial_sum(S, 900)
    assert r.max_term_excess <= 0
    assert 0 < r.value <= r.eisenstein
    r0 = grossen_partial_sum(S, 900, h=0, absolute=False)
    assert r0.value == pytest.approx(r0.eisenstein)


def test_grossen_guards():
    with pytest.raises(ValueError):
        grossen_partial_sum(surface(5, [1, 0, 0, 0, 1]), 100)
    with pytest.raises(ValueError):
        grossen_partial_sum(surface(-10, [1, 0, 0, 0, 1]), 100)
