"""Forms of discriminant -4*delta: reduction, composition, characters,
representation counts and the theta-coefficient split."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import (PellSolution, check_delta, divisors_from, factorint,
                    is_square, kronecker, kronecker_chi, sqrt_mod_prime_power)


# ------------------------------------------------------------------ forms

def _normalize_definite(a, b, c):
    """Reduce a positive definite form: |b| <= a <= c, b >= 0 on the edges."""
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # b -> b + 2ka into (-a, a]
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            continue
        break
    if (a == c or b == a) and b < 0:
        b = -b
    return a, b, c


def _red_indef_ok(a, b, c, D, r):
    # reduced iff 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b
    if not (0 < b <= r):
        return False
    A = 2 * abs(a)
    if (A + b) ** 2 <= D:
        return False
    return A - b <= 0 or (A - b) ** 2 < D


def _rho_shift(b, c, D, r):
    """The s making b' = -b + 2cs normalised relative to c."""
    C = abs(c)
    lo = -C + 1 if C > r else r - 2 * C + 1
    bp = lo + (-b - lo) % (2 * C)
    return (bp + b) // (2 * c)


def rho_step(form, D, r):
    """One normalised rho step; returns (new form, transforming matrix)."""
    a, b, c = form
    s = _rho_shift(b, c, D, r)
    b2 = -b + 2 * c * s
    c2 = a - b * s + c * s * s
    return (c, b2, c2), ((0, -1), (1, s))


def _matmul(M, N):
    return ((M[0][0] * N[0][0] + M[0][1] * N[1][0], M[0][0] * N[0][1] + M[0][1] * N[1][1]),
            (M[1][0] * N[0][0] + M[1][1] * N[1][0], M[1][0] * N[0][1] + M[1][1] * N[1][1]))


_I2 = ((1, 0), (0, 1))


def _matinv(M):
    # det 1
    return ((M[1][1], -M[0][1]), (-M[1][0], M[0][0]))


def reduce_indefinite(form, D):
    """Reduce an indefinite form, tracking f o M = reduced form."""
    r = math.isqrt(D)
    M = _I2
    f = tuple(form)
    guard = 0
    while not _red_indef_ok(*f, D, r):
        f, S = rho_step(f, D, r)
        M = _matmul(M, S)
        guard += 1
        if guard > 100000:
            raise RuntimeError("indefinite reduction did not terminate")
    return f, M


def indefinite_cycle(form, D):
    """The rho-cycle of a reduced form as [(form, matrix from start)]."""
    r = math.isqrt(D)
    out = [(tuple(form), _I2)]
    f, M = tuple(form), _I2
    while True:
        f, S = rho_step(f, D, r)
        M = _matmul(M, S)
        if f == out[0][0]:
            return out, M  # M is an automorph of the starting form
        out.append((f, M))


@dataclass(frozen=True)
class QForm:
    a: int
    b: int
    c: int

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        yield from (self.a, self.b, self.c)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y


class FormClassGroup:
    """Classes of primitive forms of discriminant -4*delta (proper equivalence)."""

    def __init__(self, delta: int):
        self.delta = check_delta(delta)
        self.D = -4 * delta
        self._cycle_index: dict = {}
        if delta > 0:
            self.forms = self._definite_forms()
            for i, f in enumerate(self.forms):
                self._cycle_index[tuple(f)] = i
        else:
            self.forms = self._indefinite_forms()
        self.h = len(self.forms)
        self.identity = self.class_of((1, 0, delta))
        self.table = [[self.class_of(compose_forms(tuple(f), tuple(g), self.D))
                       for g in self.forms] for f in self.forms]
        self.squares = sorted({self.table[i][i] for i in range(self.h)})
        self.inverse = [self.class_of((f.a, -f.b, f.c)) for f in self.forms]

    # enumeration
    def _definite_forms(self):
        D = self.D
        out = []
        a = 1
        while 3 * a * a <= -D:
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                if math.gcd(math.gcd(a, b), c) != 1:
                    continue
                out.append(QForm(a, b, c))
            a += 1
        out.sort(key=lambda f: (f.a, abs(f.b), -f.b))
        return out

    def _indefinite_forms(self):
        D = self.D
        r = math.isqrt(D)
        reduced = []
        for b in range(1, r + 1):
            if (b * b - D) % 4:
                continue
            ac = (b * b - D) // 4  # negative
            for a in divisors_from(factorint(-ac)) if ac else []:
                for sa in (a, -a):
                    c = ac // sa
                    if math.gcd(math.gcd(sa, b), c) != 1:
                        continue
                    if _red_indef_ok(sa, b, c, D, r):
                        reduced.append((sa, b, c))
        seen = set()
        reps = []
        for f in sorted(reduced):
            if f in seen:
                continue
            cyc, _ = indefinite_cycle(f, D)
            forms = [g for g, _ in cyc]
            seen.update(forms)
            # canonical representative: the least form with a > 0
            rep = min(g for g in forms if g[0] > 0)
            idx = len(reps)
            reps.append(QForm(*rep))
            for g in forms:
                self._cycle_index[g] = idx
        # principal first
        pr, _ = reduce_indefinite((1, 0, self.delta), D)
        pidx = self._cycle_index[pr]
        order = [pidx] + [i for i in range(len(reps)) if i != pidx]
        remap = {old: new for new, old in enumerate(order)}
        self._cycle_index = {g: remap[i] for g, i in self._cycle_index.items()}
        return [reps[i] for i in order]

    def reduce(self, form):
        a, b, c = form
        if self.delta > 0:
            if a < 0:
                raise ValueError("negative definite form")
            return _normalize_definite(a, b, c)
        f, _ = reduce_indefinite(form, self.D)
        return f

    def class_of(self, form) -> int:
        a, b, c = form
        if b * b - 4 * a * c != self.D:
            raise ValueError("wrong discriminant")
        return self._cycle_index[self.reduce(form)]

    def compose(self, i: int, j: int) -> int:
        if not (0 <= i < self.h and 0 <= j < self.h):
            raise IndexError("class index out of range")
        return self.table[i][j]

    def power(self, i: int, e: int) -> int:
        if e < 0:
            i, e = self.inverse[i], -e
        out = self.identity
        for _ in range(e):
            out = self.table[out][i]
        return out

    def order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.table[x][i]
            k += 1
        return k

    @property
    def genus_index(self) -> int:
        return self.h // len(self.squares)

    def prime_class(self, p: int) -> int:
        """Class of a prime ideal above a split prime p (not dividing 2*delta)."""
        b = sqrt_mod_prime_power(-self.delta, p, 1)[0]
        return self.class_of((p, 2 * b, (b * b + self.delta) // p))

    def characters(self) -> list:
        """All characters of the class group as exponent vectors.

        Returned as lists of complex values indexed by class.
        """
        return _characters(self)


def compose_forms(f, g, D):
    """Dirichlet composition of two primitive forms of discriminant D."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    if a1 < 0 or a2 < 0:
        raise ValueError("compose expects forms with a > 0")
    s = (b1 + b2) // 2
    n = b2 - s
    e = math.gcd(math.gcd(a1, a2), s)
    # solve a1*X + a2*Y + s*Z = e via extended gcds
    g1, x1, y1 = _egcd(a1, a2)
    g2, x2, z2 = _egcd(g1, s)
    X, Y, Z = x1 * x2, y1 * x2, z2
    assert g2 == e
    A = a1 * a2 // (e * e)
    B = b2 + 2 * a2 // e * (Y * (s - b2) - Z * c2)
    # normalise B mod 2A
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return (A, B, C)


def _egcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@lru_cache(maxsize=None)
def reduced_forms(delta: int) -> FormClassGroup:
    return FormClassGroup(delta)


def compose(G: FormClassGroup, i: int, j: int) -> int:
    return G.compose(i, j)


# -------------------------------------------------------------- characters

def _characters(G: FormClassGroup):
    """Characters via a cyclic decomposition found by brute force."""
    h = G.h
    # greedy basis: pick elements of maximal order generating new subgroups
    elems = sorted(range(h), key=lambda i: -G.order(i))
    gens, sub = [], {G.identity}
    for g in elems:
        if g in sub:
            continue
        # extend only if <sub, g> is a direct product (order of g mod sub)
        k, x = 1, g
        while x not in sub:
            x = G.table[x][g]
            k += 1
        if k != G.order(g):
            continue
        gens.append(g)
        new = set()
        for s in sub:
            y = s
            for _ in range(k):
                new.add(y)
                y = G.table[y][g]
        sub = new
    if len(sub) != h:
        # fall back: general search over element orders
        gens, sub = _basis_fallback(G)
    orders = [G.order(g) for g in gens]
    # coordinates of each class
    coords = {G.identity: tuple(0 for _ in gens)}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for t, g in enumerate(gens):
                y = G.table[x][g]
                if y not in coords:
                    c = list(coords[x])
                    c[t] = (c[t] + 1) % orders[t]
                    coords[y] = tuple(c)
                    nxt.append(y)
        frontier = nxt
    chars = []
    import itertools
    for ks in itertools.product(*[range(o) for o in orders]):
        vals = []
        for i in range(h):
            ph = sum(Fraction(k * c, o) for k, c, o in zip(ks, coords[i], orders))
            vals.append(ph % 1)
        chars.append(vals)
    return chars


def _basis_fallback(G):
    import itertools
    h = G.h
    for r in range(1, 6):
        for gens in itertools.combinations(range(h), r):
            orders = [G.order(g) for g in gens]
            if math.prod(orders) != h:
                continue
            sub = {G.identity}
            for g, o in zip(gens, orders):
                new = set()
                for s in sub:
                    y = s
                    for _ in range(o):
                        new.add(y)
                        y = G.table[y][g]
                sub = new
            if len(sub) == h:
                return list(gens), sub
    raise RuntimeError("no basis found")


def char_value(phase: Fraction) -> complex:
    return cmath.exp(2j * math.pi * float(phase))


def char_order(vals) -> int:
    o = 1
    for ph in vals:
        o = math.lcm(o, Fraction(ph).denominator)
    return o


@dataclass(frozen=True)
class GenusCharacter:
    q1: int
    q2: int

    def __call__(self, n: int) -> int:
        return kronecker(self.q1, n)


def _prime_discriminants(D0: int) -> list:
    """Split a fundamental discriminant into prime discriminants."""
    out = []
    m = abs(D0)
    odd = m
    while odd % 2 == 0:
        odd //= 2
    for p in factorint(odd) if odd > 1 else {}:
        out.append(p if p % 4 == 1 else -p)
    rest = D0
    for q in out:
        rest //= q
    if rest != 1:
        out.append(rest)  # -4, 8 or -8
    return out


def fundamental_core(delta: int) -> tuple:
    """(D0, f) with -4*delta = D0 * f^2 and D0 fundamental."""
    D = -4 * delta
    if (-delta) % 4 == 1:
        return -delta, 2
    return D, 1


def genus_characters(G: FormClassGroup) -> list:
    """Unordered coprime splittings {q1, q2} of the fundamental core of -4*delta."""
    D0, _ = fundamental_core(G.delta)
    pd = _prime_discriminants(D0)
    seen = set()
    out = []
    import itertools
    for mask in itertools.product((0, 1), repeat=len(pd)):
        q1 = math.prod(q for q, m in zip(pd, mask) if m)
        q2 = D0 // q1
        key = frozenset((q1, q2))
        if key in seen:
            continue
        seen.add(key)
        a, b = sorted((q1, q2), key=lambda q: (abs(q), q))
        out.append(GenusCharacter(a, b))
    out.sort(key=lambda g: (abs(g.q1), g.q1))
    return out


def eisenstein_eps(q1: int, q2: int, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return sum(kronecker(q1, d) * kronecker(q2, n // d) for d in divisors_from(factorint(n)))


# ------------------------------------------------------- counting functions

def representation_count(delta: int, n: int, mode: str = "all", pell: PellSolution | None = None) -> int:
    """Representations of n by x^2 + delta*y^2.

    mode 'all': every (x, y); 'primitive': gcd(x, y) = 1; 'units' (delta < 0):
    one representative alpha = x + y*sqrt(-delta) > 0 per orbit under +-eps^k,
    chosen with 1 <= alpha/|conj alpha| < eps^2.
    """
    check_delta(delta)
    if mode in ("all", "primitive"):
        if delta < 0:
            raise ValueError("delta < 0 has infinitely many representations; use mode='units'")
        if n < 0:
            return 0
        cnt = 0
        y = 0
        while delta * y * y <= n:
            r = n - delta * y * y
            if is_square(r):
                x = math.isqrt(r)
                for xx in {x, -x}:
                    for yy in {y, -y}:
                        if mode == "all" or math.gcd(xx, yy) == 1:
                            cnt += 1
            y += 1
        return cnt
    if mode != "units":
        raise ValueError(f"unknown mode {mode}")
    if delta > 0:
        raise ValueError("units mode is for delta < 0")
    if n == 0:
        raise ValueError("n = 0 has no unit orbits")
    d = -delta
    if pell is None:
        from .arith import pell_fundamental
        pell = pell_fundamental(delta)
    x0, y0 = pell.x0, pell.y0
    # alpha < eps*sqrt|n|: bound y <= alpha/(2 sqrt d) roughly, x <= alpha
    bound = math.isqrt(abs(n)) + 1
    amax = (x0 + y0 * math.isqrt(d) + y0 + 1) * bound
    cnt = 0
    y = 0
    while y * y * d <= amax * amax:
        r = n + d * y * y
        if r >= 0 and is_square(r):
            x = math.isqrt(r)
            # x, y >= 0 with beta = alpha/eps having opposite-sign coordinates
            bx = x * x0 - d * y * y0
            by = y * x0 - x * y0
            if bx * by < 0 and (x > 0 or y > 0):
                cnt += 1
        y += 1
    return cnt


def _check_coprime(delta, n):
    if n < 1 or math.gcd(n, 2 * delta) != 1:
        raise ValueError("n must be positive and coprime to 2*delta")


def ideal_norm_count(delta: int, n: int) -> int:
    check_delta(delta)
    _check_coprime(delta, n)
    return sum(kronecker_chi(delta, d) for d in divisors_from(factorint(n)))


def ideal_classes_of_norm(G: FormClassGroup, n: int) -> dict:
    """Multiset {class: count} of the invertible ideals of norm n."""
    _check_coprime(G.delta, n)
    dist = {G.identity: 1}
    for p, e in factorint(n).items():
        chi = kronecker_chi(G.delta, p)
        local: dict = {}
        if chi == -1:
            if e % 2:
                return {}
            local[G.identity] = 1
        else:
            cp = G.prime_class(p)
            for i in range(e + 1):
                c = G.power(cp, 2 * i - e)
                local[c] = local.get(c, 0) + 1
        new: dict = {}
        for a, x in dist.items():
            for b, y in local.items():
                k = G.table[a][b]
                new[k] = new.get(k, 0) + x * y
        dist = new
    return dist


def _char_ideal_sum(G, vals, n):
    """sum over ideals of norm n of psi(ideal), by an Euler product."""
    tot = 1
    for p, e in factorint(n).items():
        chi = kronecker_chi(G.delta, p)
        if chi == -1:
            if e % 2:
                return 0
            continue
        z = char_value(vals[G.prime_class(p)])
        tot *= sum(z ** (2 * i - e) for i in range(e + 1))
    return tot


def principal_count(G: FormClassGroup, n: int, method: str = "direct") -> int:
    _check_coprime(G.delta, n)
    if method == "direct":
        return ideal_classes_of_norm(G, n).get(G.identity, 0)
    s = sum(_char_ideal_sum(G, vals, n) for vals in G.characters()) / G.h
    k = round(s.real)
    if abs(s - k) > 1e-6:
        raise ArithmeticError("character sum is not an integer")
    return k


@dataclass(frozen=True)
class ThetaCoeffs:
    n: int
    lambda_E: Fraction
    lambda_C: Fraction
    principal_count: int


def _round_frac(z: complex, den: int) -> Fraction:
    k = round(z.real * den)
    if abs(z * den - k) > 1e-6:
        raise ArithmeticError("character sum not at the expected lattice")
    return Fraction(k, den)


def theta_decompose(G: FormClassGroup, n: int) -> ThetaCoeffs:
    _check_coprime(G.delta, n)
    e = c = 0j
    for vals in G.characters():
        s = _char_ideal_sum(G, vals, n)
        if char_order(vals) <= 2:
            e += s
        else:
            c += s
    lE = _round_frac(e / G.h, G.h)
    lC = _round_frac(c / G.h, G.h)
    return ThetaCoeffs(n, lE, lC, principal_count(G, n))


def principal_genus_count(G: FormClassGroup, n: int) -> int:
    """Ideals of norm n whose class lies in C^2."""
    sq = set(G.squares)
    return sum(k for cl, k in ideal_classes_of_norm(G, n).items() if cl in sq)


def psi_argument(delta: int, x: int, y: int, pell: PellSolution) -> complex:
    """sgn(N alpha) * exp(pi i (log|alpha| - log|conj alpha|)/log eps)."""
    if delta >= 0:
        raise ValueError("psi is defined for delta < 0")
    d = -delta
    N = x * x - d * y * y
    if N == 0:
        raise ValueError("norm-zero input")
    import mpmath
    with mpmath.workdps(40):
        s = mpmath.sqrt(d)
        la = mpmath.log(abs(x + y * s))
        lb = mpmath.log(abs(x - y * s))
        ph = float((la - lb) / mpmath.log(pell.x0 + pell.y0 * s))
    return (1 if N > 0 else -1) * cmath.exp(1j * math.pi * ph)
