import math
import random
from fractions import Fraction

import pytest

from chatelet.arith import (BinaryForm, GuardError, IntPoly, chebotarev_probe,
                            kronecker, kronecker_chi, primes_upto)
from chatelet.counting import surface
from chatelet.localglobal import (TorsorSpec, constant_verdict, find_point,
                                  local_factor_Lp, local_solvable,
                                  manin_exponent, nabla, rho_form_vector,
                                  rho_form_vector_brute, rho_poly,
                                  surface_local_reports, surface_torsor,
                                  torsor_candidates, verify_witness, xi_partial)
from chatelet.quadring import genus_characters, reduced_forms

from conftest import FIXTURES


def test_rho_poly_examples():
    f = IntPoly([1, 0, 1])
    assert rho_poly(f, 5) == 2
    assert rho_poly(f, 3) == 0
    assert rho_poly(IntPoly([5, 3, 1]), 1) == 1
    with pytest.raises(GuardError):
        rho_poly(f, 10 ** 7)


def test_rho_form_vector_examples():
    Q = BinaryForm([1, 0, 1], 2)
    assert rho_form_vector([Q], [1]) == 1
    assert rho_form_vector([Q], [5]) == 2
    u = BinaryForm([0, 1], 1)
    umv = BinaryForm([-1, 1], 1)
    assert rho_form_vector([u, umv], [2, 3]) == rho_form_vector_brute([u, umv], [2, 3])


def test_rho_form_vector_crt():
    forms = [BinaryForm([1, 0, 0, 0, 1], 4), BinaryForm([-2, 0, 1], 2)]
    rng = random.Random(11)
    checked = 0
    while checked < 200:
        a, b, c, d = (rng.randint(1, 30) for _ in range(4))
        if math.gcd(a, c) != 1 or math.gcd(b, d) != 1 or a * b * c * d > 10 ** 4:
            continue
        whole = rho_form_vector(forms, [a * c, b * d])
        assert whole == rho_form_vector(forms, [a, b]) * rho_form_vector(forms, [c, d])
        checked += 1
    for d1 in range(1, 13):
        for d2 in range(1, 13):
            if d1 * d2 <= 300:
                assert rho_form_vector(forms, [d1, d2]) == rho_form_vector_brute(forms, [d1, d2])


def test_manin_exponent():
    assert manin_exponent(surface(1, [1, 0, 0, 0, 1])) == 3
    assert manin_exponent(surface(1, [-2, 0, 0, 1])) == 2
    assert manin_exponent(surface(1, [-2, 0, -1, 0, 1])) == 3   # (z^2+1)(z^2-2)


def test_manin_vs_probe(fixture_surface):
    S = fixture_surface
    probe = sum(1 for g, _ in S.factors if g.degree in (2, 4) and chebotarev_probe(g, S.delta, 3000))
    assert manin_exponent(S) == 2 + probe


def test_xi_partial_small():
    S = surface(1, [1, 0, 0, 0, 1])
    assert xi_partial(S, 1).partial_sum == 0
    r = xi_partial(S, 100)
    want = sum(Fraction(kronecker_chi(1, p) * rho_poly(S.f, p), p) for p in primes_upto(100).tolist())
    assert Fraction(int(r.partial_sum.numerator), int(r.partial_sum.denominator)) == want


def test_torsor_candidates():
    assert [T.alphas for T in torsor_candidates(surface(1, [1, 0, 0, 0, 1]))] == [(1,)]
    # (z^2+1)(z^2-2): resultant 9, 3 inert for delta = 1
    got = {T.alphas for T in torsor_candidates(surface(1, [-2, 0, -1, 0, 1]))}
    assert (1, 1) in got and all(a == b for a, b in got)
    assert got <= {(1, 1), (-1, -1), (3, 3), (-3, -3)}
    # z^2+1 and z^2+2 have resultant 1: only signs survive for delta = 1
    got = {T.alphas for T in torsor_candidates(surface(1, [2, 0, 3, 0, 1]))}
    assert got <= {(1, 1), (-1, -1)}
    for fx in FIXTURES:
        for T in torsor_candidates(surface(*fx)):
            T.validate()


def test_local_solvable_examples():
    T = surface_torsor(surface(1, [3, 0, 0, 0, 3]))
    assert local_solvable(T, 3).status == "unsolvable"
    r = local_solvable(T, 1009)
    assert r.solvable and verify_witness(T, r)
    T = surface_torsor(surface(1, [-1, 0, 0, 0, -1]))
    assert local_solvable(T, "real").status == "unsolvable"
    T = surface_torsor(surface(-2, [-1, 0, 0, 0, -1]))
    assert local_solvable(T, "real").solvable


def test_witnesses_reverify(fixture_surface):
    for T in torsor_candidates(fixture_surface):
        for p in (2, 3, 5, 7):
            r = local_solvable(T, p)
            if r.solvable:
                assert verify_witness(T, r)


def test_local_factor_examples():
    S = surface(1, [3, 0, 0, 0, 3])
    assert local_factor_Lp(S, (1,), 3) == 0
    S = surface(1, [1, 0, 0, 0, 1])
    for p in (5, 13, 17):   # split primes
        assert local_factor_Lp(S, (1,), p) > 0


def test_local_factor_matches_euler_factor():
    # p outside the data: L_p(1) = sum_k chi(p)^k rho(p^k)/p^k with rho(p^k) = rho(p)
    S = surface(1, [1, 0, 0, 0, 1])
    for p in (3, 7, 11, 19, 23, 31):
        chi = kronecker_chi(1, p)
        rho = rho_poly(S.f, p)
        want = 1 + rho * Fraction(chi, p) / (1 - Fraction(chi, p))
        assert local_factor_Lp(S, (1,), p) == want


def test_duality_small(fixture_surface):
    S = fixture_surface
    for T in torsor_candidates(S):
        for p in primes_upto(40).tolist():
            if kronecker_chi(S.delta, p) != -1:
                continue
            L = local_factor_Lp(S, T.alphas, p)
            assert (L == 0) == (local_solvable(T, p).status == "unsolvable")


def test_verdicts():
    V = constant_verdict(surface(1, [1, 0, 0, 0, 1]))
    assert V.constant_zero is False and V.witness.alphas == (1,)
    V = constant_verdict(surface(1, [3, 0, 0, 0, 3]))
    assert V.constant_zero is True
    assert any(3 in places for _, places in V.obstructions)
    S = surface(1, [-6, 0, 5, 0, -1])
    V = constant_verdict(S)
    assert V.constant_zero is True
    assert len(V.obstructions) == len(torsor_candidates(S))
    assert all(r.solvable for r in surface_local_reports(S, 100))


def test_nonzero_verdict_has_small_point():
    for fx in [(1, [1, 0, 0, 0, 1]), (5, [1, 0, 0, 0, 1]), (-2, [1, 0, 0, 0, 1]),
               (-3, [-2, 0, 0, 1]), (23, [-1, -1, 0, 1]), (5, [0, -1, 0, 1])]:
        S = surface(*fx)
        if constant_verdict(S).constant_zero is False:
            pt = find_point(S, 30)
            assert pt is not None
            x, y, u, v, t = pt
            assert x * x + S.delta * y * y == t * t * S.F(u, v)


NABLA_FIXTURES = [(1, [1, 0, 0, 0, 1]), (1, [3, 0, 0, 0, 3]), (2, [-2, 0, 1, 0, 1]),
                  (5, [1, 0, 0, 0, 1]), (5, [2, 0, 0, 0, 1]), (6, [1, 0, 0, 0, 1])]


@pytest.mark.parametrize("fx", NABLA_FIXTURES, ids=lambda f: f"d{f[0]}_{f[1]}")
def test_nabla_sign_and_zero_flag(fx):
    S = surface(*fx)
    for T in torsor_candidates(S):
        r = nabla(S, T.alphas)
        assert r.value >= 0
        assert r.zero == (r.value == 0)


def test_nabla_example_zero():
    assert nabla(surface(1, [3, 0, 0, 0, 3])).value == 0
    assert nabla(surface(1, [3, 0, 0, 0, 3])).zero


def _principal_genus_split_primes(delta, k):
    G = reduced_forms(delta)
    chars = genus_characters(G)
    out = []
    for p in primes_upto(2000).tolist():
        if kronecker_chi(delta, p) == 1 and all(kronecker(g.q1, p) == 1 for g in chars):
            out.append(p)
            if len(out) == k:
                break
    return out


@pytest.mark.parametrize("fx", NABLA_FIXTURES + [(-3, [-2, 0, 0, 1])],
                         ids=lambda f: f"d{f[0]}_{f[1]}")
def test_nabla_split_prime_invariance(fx):
    """Invariance under scaling c_1 by split primes in the principal genus (every
    split prime when there is a single genus)."""
    S = surface(*fx)
    T = torsor_candidates(S)[0]
    base = nabla(S, T.alphas).value
    for p in _principal_genus_split_primes(S.delta, 2):
        c = list(T.alphas)
        c[0] *= p
        assert nabla(S, c).value == base


def test_nabla_invariance_fails_off_principal_genus():
    # a split prime outside the principal genus changes the genus weights
    S = surface(5, [2, 0, 0, 0, 1])
    assert kronecker_chi(5, 3) == 1 and kronecker(-4, 3) == -1
    assert nabla(S, (3,)).value != nabla(S, (1,)).value
