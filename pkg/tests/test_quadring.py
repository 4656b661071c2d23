import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest

from chatelet.arith import kronecker, kronecker_chi, pell_fundamental
from chatelet.quadring import (compose, eisenstein_eps, genus_characters,
                               ideal_norm_count, principal_count,
                               principal_genus_count, psi_argument,
                               reduced_forms, representation_count,
                               theta_decompose)

SUITE = (1, 2, 5, 6, 10, 23, -2, -3, -5)


def brute_reduced(delta):
    # |b| <= a <= c, b >= 0 if |b| = a or a = c, primitive, b^2 - 4ac = -4 delta
    out = []
    D = 4 * delta
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a or (b < 0 and (a == c)) or math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return sorted(out)


def test_reduced_forms_examples():
    G = reduced_forms(5)
    assert sorted((f.a, f.b, f.c) for f in G.forms) == [(1, 0, 5), (2, 2, 3)]
    assert reduced_forms(1).h == 1
    assert reduced_forms(23).h == 3


@pytest.mark.parametrize("delta", [1, 2, 5, 6, 10, 14, 21, 23, 30, 41])
def test_reduced_forms_brute(delta):
    G = reduced_forms(delta)
    assert sorted((f.a, f.b, f.c) for f in G.forms) == brute_reduced(delta)


@pytest.mark.parametrize("delta", SUITE)
def test_group_law(delta):
    G = reduced_forms(delta)
    h, e = G.h, G.identity
    for i in range(h):
        assert compose(G, e, i) == i
        assert any(compose(G, i, j) == e for j in range(h))
        for j in range(h):
            assert compose(G, i, j) == compose(G, j, i)
            for k in range(h):
                assert compose(G, compose(G, i, j), k) == compose(G, i, compose(G, j, k))


def test_compose_examples():
    G = reduced_forms(5)
    nonp = 1 - G.identity
    assert compose(G, nonp, nonp) == G.identity
    G = reduced_forms(23)
    for g in range(3):
        assert compose(G, compose(G, g, g), g) == G.identity


def test_genus_characters():
    pairs = {(g.q1, g.q2) for g in genus_characters(reduced_forms(5))}
    assert pairs == {(1, -20), (-4, 5)}
    assert len(genus_characters(reduced_forms(1))) == 1
    assert len(genus_characters(reduced_forms(23))) == 1
    for d in SUITE:
        G = reduced_forms(d)
        chars = genus_characters(G)
        assert len(chars) == G.h // len(set(G.squares))
        for g in chars:
            for n in range(1, 400):
                if math.gcd(n, 2 * d) == 1:
                    assert kronecker(g.q1, n) * kronecker(g.q2, n) == kronecker_chi(d, n)


def test_representation_examples():
    assert representation_count(1, 25) == 12
    assert representation_count(5, 6) == 4
    assert representation_count(-2, 1, "units") == 1
    with pytest.raises(ValueError):
        representation_count(-2, 0, "units")


@pytest.mark.parametrize("delta", [1, 2, 5, 6, 10, 23])
def test_class_representations_sum_to_ideal_count(delta):
    # each class of forms represents n (primitively or not) w times per ideal
    G = reduced_forms(delta)
    w = 4 if delta == 1 else 2
    for n in range(1, 1500):
        if math.gcd(n, 2 * delta) != 1:
            continue
        reps = 0
        for f in G.forms:
            a, b, c = f.a, f.b, f.c
            r = 0
            ymax = math.isqrt(4 * a * n // (4 * a * c - b * b)) + 1
            for y in range(-ymax, ymax + 1):
                # a x^2 + b x y + c y^2 = n
                disc = b * b * y * y - 4 * a * (c * y * y - n)
                if disc < 0:
                    continue
                s = math.isqrt(disc)
                if s * s != disc:
                    continue
                for x2 in {-b * y + s, -b * y - s}:
                    if x2 % (2 * a) == 0:
                        r += 1
            reps += r
        assert reps == w * ideal_norm_count(delta, n)


def test_ideal_norm_count():
    assert ideal_norm_count(5, 3) == 2
    assert ideal_norm_count(5, 11) == 0
    assert ideal_norm_count(7, 1) == 1
    with pytest.raises(ValueError):
        ideal_norm_count(5, 10)


def brute_principal(delta, n):
    # ideals of norm n are in bijection with pairs of conjugate factors; count
    # principal ones as norm-n elements x + y sqrt(-delta) up to units
    w = 4 if delta == 1 else 2
    return representation_count(delta, n) // w


def test_principal_count_definition():
    G = reduced_forms(5)
    assert principal_count(G, 3) == 0
    # (3), (2 + sqrt -5), (2 - sqrt -5): the definition gives three
    assert principal_count(G, 9) == 3
    for d in (1, 2, 5, 6, 10):
        G = reduced_forms(d)
        assert principal_count(G, 1) == 1
        for n in range(1, 2000):
            if math.gcd(n, 2 * d) == 1:
                pc = principal_count(G, n)
                assert pc == principal_count(G, n, "chars") == brute_principal(d, n)


def test_eisenstein_eps():
    assert eisenstein_eps(1, -20, 3) == 2
    assert eisenstein_eps(-4, 5, 3) == -2
    assert eisenstein_eps(-4, 5, 1) == 1


def test_theta_examples():
    G = reduced_forms(5)
    t = theta_decompose(G, 3)
    assert (t.lambda_E, t.lambda_C) == (0, 0)
    for n in range(1, 300, 2):
        assert theta_decompose(reduced_forms(1), n).lambda_C == 0
    # Delta = 23, n = 1: the definition splits 1 = 1/3 + 2/3
    t = theta_decompose(reduced_forms(23), 1)
    assert t.lambda_E + t.lambda_C == 1
    assert (t.lambda_E, t.lambda_C) == (Fraction(1, 3), Fraction(2, 3))


def test_principal_genus_identity_small():
    for d in (5, 6, 10, 21):
        G = reduced_forms(d)
        chars = genus_characters(G)
        for n in range(1, 600):
            if math.gcd(n, 2 * d) == 1:
                s = sum(eisenstein_eps(g.q1, g.q2, n) for g in chars)
                assert s == len(chars) * principal_genus_count(G, n)


def test_psi_argument():
    for d in (-2, -3, -7):
        pell = pell_fundamental(d)
        assert abs(psi_argument(d, pell.x0, pell.y0, pell) - 1) < 1e-9
        assert abs(psi_argument(d, 0, 1, pell) + 1) < 1e-9
        rng = random.Random(3)
        for _ in range(200):
            x, y = rng.randint(-60, 60), rng.randint(-60, 60)
            x2, y2 = rng.randint(-60, 60), rng.randint(-60, 60)
            N1 = x * x + d * y * y
            N2 = x2 * x2 + d * y2 * y2
            if N1 == 0 or N2 == 0:
                continue
            a = psi_argument(d, x, y, pell)
            b = psi_argument(d, x2, y2, pell)
            assert abs(abs(a) - 1) < 1e-12
            # product alpha * beta in Z[sqrt m], m = -d
            m = -d
            px, py = x * x2 + m * y * y2, x * y2 + y * x2
            assert abs(psi_argument(d, px, py, pell) - a * b) < 1e-9
            # unit invariance
            ex, ey = x * pell.x0 + m * y * pell.y0, x * pell.y0 + y * pell.x0
            assert abs(psi_argument(d, ex, ey, pell) - a) < 1e-9
    with pytest.raises(ValueError):
        psi_argument(-2, 0, 0, pell_fundamental(-2))
