"""Exact base arithmetic: characters, factoring, polynomials, resultants, Pell."""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np


class GuardError(RuntimeError):
    """A configured resource ceiling was hit."""


# ---------------------------------------------------------------- integers

def is_square(n: int) -> bool:
    return n >= 0 and gmpy2.is_square(n)


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def check_delta(delta: int) -> int:
    delta = int(delta)
    if delta == 0 or not is_squarefree(delta):
        raise ValueError(f"delta={delta} must be a nonzero squarefree integer")
    if is_square(-delta):
        raise ValueError(f"-delta={-delta} is a perfect square")
    return delta


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for any integer n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    s = 1
    if n < 0:
        n = -n
        if a < 0:
            s = -1
    return s * int(gmpy2.kronecker(a, n))


def kronecker_chi(delta: int, n: int) -> int:
    """The character of the form x^2 + delta*y^2: (-4*delta | n)."""
    check_delta(delta)
    return kronecker(-4 * delta, n)


@lru_cache(maxsize=None)
def chi_table(delta: int) -> np.ndarray:
    """chi(n) for n mod 4|delta|, as an int8 array (chi has period 4|delta|)."""
    m = 4 * abs(delta)
    return np.array([kronecker(-4 * delta, r) for r in range(m)], dtype=np.int8)


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def spf_sieve(n: int) -> np.ndarray:
    """Smallest prime factor table for 0..n (spf[0]=0, spf[1]=1)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        spf[1] = 1
    for p in range(2, n + 1):
        if p * p > n:
            break
        if spf[p] == 0:
            blk = spf[p * p::p]
            blk[blk == 0] = p
            spf[p * p::p] = blk
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return spf


def factor_spf(n: int, spf) -> dict:
    out: dict = {}
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


_SMALL_PRIMES = [int(p) for p in primes_upto(10_000)]
TRIAL_LIMIT = 10_000


def _rho_seed() -> int:
    return int(os.environ.get("CHATELET_SEED", "1"))


def pollard_brent(n: int, rng: random.Random, max_iter: int = 1 << 24) -> int:
    """Return a nontrivial factor of composite n (Brent's variant)."""
    n = gmpy2.mpz(n)
    if n % 2 == 0:
        return 2
    while True:
        y = gmpy2.mpz(rng.randrange(1, int(n)))
        c = gmpy2.mpz(rng.randrange(1, int(n)))
        m = 128
        g = r = q = gmpy2.mpz(1)
        it = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gmpy2.gcd(q, n)
                k += m
            r *= 2
            it += r
            if it > max_iter:
                raise GuardError(f"Pollard rho budget exhausted on {n}")
        if g == n:
            g = gmpy2.mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
        if g != n:
            return int(g)


def factorint(n: int, trial_limit: int | None = None) -> dict:
    """Prime factorisation {p: e} of |n| >= 1.

    Trial division by the small primes, then gmpy2 primality plus Pollard rho
    seeded from CHATELET_SEED, so runs are reproducible.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict = {}
    lim = TRIAL_LIMIT if trial_limit is None else trial_limit
    for p in _SMALL_PRIMES:
        if p > lim or p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n == 1:
        return out
    rng = random.Random(_rho_seed())
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if gmpy2.is_prime(m, 50):
            out[m] = out.get(m, 0) + 1
            continue
        r = gmpy2.isqrt(m)
        if r * r == m:
            stack += [int(r), int(r)]
            continue
        d = pollard_brent(m, rng)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def divisors_from(fac: dict) -> list:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    fac = factorint(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def delta_part_split(delta: int, n: int) -> tuple:
    """Split n = p_delta(n) * p_notdelta(n) by the primes dividing delta."""
    if n < 1:
        raise ValueError("n must be positive")
    a, rest = 1, n
    g = math.gcd(rest, abs(delta))
    while g > 1:
        a *= g
        rest //= g
        g = math.gcd(rest, g)
    return a, rest


def valuation(n: int, p: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients lowest degree first."""
    coeffs: tuple

    def __init__(self, coeffs):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def scale(self, k: int) -> "IntPoly":
        return IntPoly([k * c for c in self.coeffs])

    def __pow__(self, e: int) -> "IntPoly":
        out = IntPoly((1,))
        for _ in range(e):
            out = out * self
        return out

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        g = self.content()
        if self.lc < 0:
            g = -g
        return IntPoly([c // g for c in self.coeffs]) if g else self

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def discriminant(self) -> int:
        d = self.degree
        if d < 1:
            return 0
        r = resultant(self.homogenize(), self.derivative().homogenize(d - 1))
        sign = -1 if (d * (d - 1) // 2) % 2 else 1
        return sign * r // self.lc

    def homogenize(self, degree: int | None = None) -> "BinaryForm":
        return BinaryForm(self.coeffs, self.degree if degree is None else degree)

    def __str__(self):
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c:
                terms.append(f"{c}" + ("" if i == 0 else ("*z" if i == 1 else f"*z^{i}")))
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class BinaryForm:
    """F(u, v) = sum a_i u^i v^(degree-i); coeffs lowest u-degree first."""
    coeffs: tuple
    degree: int

    def __init__(self, coeffs, degree):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        if len(c) - 1 > degree:
            raise ValueError("form degree smaller than polynomial degree")
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "degree", int(degree))

    def __call__(self, u, v):
        acc = 0
        d = self.degree
        # Horner in u with powers of v
        for i in range(d, -1, -1):
            a = self.coeffs[i] if i < len(self.coeffs) else 0
            acc = acc * u + a * v ** (d - i)
        return acc

    def dehomogenize(self) -> IntPoly:
        return IntPoly(self.coeffs)

    def swap(self) -> "BinaryForm":
        """G(u, v) = F(v, u)."""
        full = list(self.coeffs) + [0] * (self.degree + 1 - len(self.coeffs))
        return BinaryForm(full[::-1], self.degree)

    def content(self) -> int:
        return IntPoly(self.coeffs).content()

    def scale(self, k: int) -> "BinaryForm":
        return BinaryForm([k * c for c in self.coeffs], self.degree)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        p = IntPoly(self.coeffs) * IntPoly(other.coeffs)
        return BinaryForm(p.coeffs, self.degree + other.degree)

    def eval_array(self, u, v):
        """Vectorised evaluation on int64/object arrays."""
        d = self.degree
        acc = np.zeros(np.broadcast(u, v).shape, dtype=np.asarray(u).dtype)
        for i in range(d, -1, -1):
            a = self.coeffs[i] if i < len(self.coeffs) else 0
            acc = acc * u + a * v ** (d - i)
        return acc

    def __str__(self):
        terms = []
        d = self.degree
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c:
                mon = "*".join(x for x in (
                    ("u" if i == 1 else f"u^{i}") if i else "",
                    ("v" if d - i == 1 else f"v^{d - i}") if d - i else "") if x)
                terms.append(f"{c}" + (f"*{mon}" if mon else ""))
        return " + ".join(terms) if terms else "0"


def parse_poly(text: str) -> IntPoly:
    """'c0,c1,...' constant term first."""
    try:
        coeffs = [int(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"malformed polynomial {text!r}") from exc
    p = IntPoly(coeffs)
    if p.is_zero():
        raise ValueError("zero polynomial")
    return p


def _det_bareiss(rows) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(F1: BinaryForm, F2: BinaryForm) -> int:
    """Sylvester resultant of two binary forms (u-coefficients descending)."""
    d, e = F1.degree, F2.degree
    a = [F1.coeffs[i] if i < len(F1.coeffs) else 0 for i in range(d, -1, -1)]
    b = [F2.coeffs[i] if i < len(F2.coeffs) else 0 for i in range(e, -1, -1)]
    if not any(a) or not any(b):
        raise ValueError("zero form")
    n = d + e
    if n == 0:
        return 1
    rows = []
    for i in range(e):
        rows.append([0] * i + a + [0] * (n - d - 1 - i))
    for i in range(d):
        rows.append([0] * i + b + [0] * (n - e - 1 - i))
    return _det_bareiss(rows)


def _sympy_poly(f: IntPoly):
    import sympy
    z = sympy.Symbol("z")
    return sympy.Poly(list(reversed(f.coeffs)), z), z


def factor_poly(f: IntPoly) -> list:
    """Irreducible factors over Q as [(primitive IntPoly, multiplicity)].

    Factors have positive leading coefficient and are sorted by degree, then
    coefficients. The signed content is signed_content(f).
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return []
    P, _ = _sympy_poly(f)
    _, facs = P.factor_list()
    out = []
    for g, m in facs:
        q = IntPoly([int(c) for c in reversed(g.all_coeffs())]).primitive()
        out.append((q, int(m)))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def signed_content(f: IntPoly) -> int:
    """The constant c with f = c * prod(factors^mult)."""
    prod = IntPoly((1,))
    for g, m in factor_poly(f):
        prod = prod * g**m
    return f.lc // prod.lc


def contains_sqrt_minus_delta(fi: IntPoly, delta: int) -> bool:
    """Does the field Q[z]/(fi) contain sqrt(-delta)?"""
    check_delta(delta)
    facs = factor_poly(fi)
    if len(facs) != 1 or facs[0][1] != 1:
        raise ValueError("input must be irreducible")
    d = fi.degree
    if d in (1, 3):
        return False
    if d == 2:
        return is_square(-delta * fi.discriminant())
    if d == 4:
        import sympy
        P, _ = _sympy_poly(fi)
        _, facs = sympy.factor_list(P.as_expr(), extension=sympy.sqrt(-delta))
        return len(facs) > 1 or facs[0][1] > 1
    raise ValueError("degree > 4 not supported")


def chebotarev_probe(fi: IntPoly, delta: int, limit: int = 10_000) -> bool:
    """Necessary condition for sqrt(-delta) in Q[z]/(fi).

    At every unramified prime inert in Q(sqrt(-delta)), fi mod p must have
    only even-degree factors, i.e. (for degree <= 4) no root mod p.
    """
    disc = fi.discriminant()
    for p in primes_upto(limit):
        p = int(p)
        if kronecker_chi(delta, p) != -1 or disc % p == 0 or fi.lc % p == 0:
            continue
        if roots_mod_p(fi, p):
            return False
    return True


# --------------------------------------------------------- roots mod primes

def _pmod(a, m, p):
    a = list(a)
    while a and a[-1] % p == 0:
        a.pop()
    m = [x % p for x in m]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    a = [x % p for x in a]
    while len(a) - 1 >= dm and a:
        q = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i in range(dm + 1):
            a[shift + i] = (a[shift + i] - q * m[i]) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pgcd(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        a, b = b, _pmod(a, b, p)
        while b and b[-1] == 0:
            b.pop()
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def roots_mod_p(f: IntPoly, p: int, rng: random.Random | None = None) -> list:
    """Sorted distinct roots of f in F_p (all of F_p if f vanishes mod p)."""
    c = [x % p for x in f.coeffs]
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return list(range(p))
    if len(c) == 1:
        return []
    if p < 64:
        return [x for x in range(p) if f(x) % p == 0]
    # g = gcd(f, x^p - x) is the product of the distinct linear factors
    xp = _ppowmod([0, 1], p, c, p)
    xp = xp + [0] * max(0, 2 - len(xp))
    xp[1] = (xp[1] - 1) % p
    g = _pgcd(c, xp, p)
    rng = rng or random.Random(_rho_seed())
    roots = []
    stack = [g]
    while stack:
        h = stack.pop()
        dh = len(h) - 1
        if dh <= 0:
            continue
        if dh == 1:
            roots.append((-h[0]) * pow(h[1], -1, p) % p)
            continue
        while True:
            a = rng.randrange(p)
            w = _ppowmod([a, 1], (p - 1) // 2, h, p)
            w = w + [0] * max(0, 1 - len(w))
            w[0] = (w[0] - 1) % p
            d = _pgcd(h, w, p)
            if 0 < len(d) - 1 < dh:
                break
        stack.append(d)
        # h / d
        q, r = _pdivmod(h, d, p)
        stack.append(q)
    return sorted(roots)


def _pdivmod(a, b, p):
    a = [x % p for x in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(1, len(a) - db)
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv % p
        shift = len(a) - 1 - db
        q[shift] = coef
        for i in range(db + 1):
            a[shift + i] = (a[shift + i] - coef * b[i]) % p
        while a and a[-1] == 0:
            a.pop()
    return q, a


def sqrt_count_mod_prime_power(a: int, p: int, k: int) -> int:
    """#{x mod p^k : x^2 = a mod p^k}."""
    if k == 0:
        return 1
    m = p**k
    a %= m
    if p == 2 or a % p == 0 or m <= 64:
        if m <= 1 << 16:
            x = np.arange(m, dtype=np.int64)
            return int(np.count_nonzero((x * x) % m == a))
        return len(sqrt_mod_prime_power(a, p, k))
    return 1 + kronecker(a, p)


def sqrt_mod_prime_power(a: int, p: int, k: int) -> list:
    """All x mod p^k with x^2 = a mod p^k, sorted."""
    m = p**k
    a %= m
    if m <= 1 << 12:
        return [x for x in range(m) if (x * x - a) % m == 0]
    if a % p == 0 or p == 2:
        # lift solutions digit by digit (handles the degenerate cases)
        sols = [x for x in range(p) if (x * x - a) % p == 0]
        mod = p
        for _ in range(1, k):
            nxt = set()
            for x in sols:
                for t in range(p):
                    y = x + t * mod
                    if (y * y - a) % (mod * p) == 0:
                        nxt.add(y)
            sols = sorted(nxt)
            mod *= p
        return sols
    r = int(gmpy2.mpz(0))
    if kronecker(a, p) != 1:
        return []
    r = _tonelli(a % p, p)
    # Hensel lift
    mod = p
    for _ in range(1, k):
        mod *= p
        inv = pow(2 * r, -1, mod)
        r = (r - (r * r - a) * inv) % mod
    return sorted({r % m, (-r) % m})


def _tonelli(a: int, p: int) -> int:
    if p == 2:
        return a % 2
    a %= p
    if a == 0:
        return 0
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


# -------------------------------------------------------------------- Pell

@dataclass(frozen=True)
class PellSolution:
    x0: int
    y0: int
    eps_log: float

    @property
    def d(self) -> int:
        return (self.x0 * self.x0 - 1) // (self.y0 * self.y0)


def pell_fundamental(delta: int) -> PellSolution:
    """Least positive (x0, y0) with x0^2 + delta*y0^2 = 1, delta < 0."""
    if delta >= 0:
        raise ValueError("Pell unit only exists for delta < 0")
    check_delta(delta)
    from sympy.solvers.diophantine.diophantine import diop_DN
    (x0, y0), = diop_DN(-delta, 1)
    x0, y0 = int(x0), int(y0)
    import mpmath
    with mpmath.workdps(50):
        lg = float(mpmath.log(x0 + y0 * mpmath.sqrt(-delta)))
    return PellSolution(x0, y0, lg)


def rational_sign_points(polys) -> list:
    """Rational sample points: one inside every open interval cut out by the
    real roots of the given polynomials, plus one beyond each end."""
    import sympy
    z = sympy.Symbol("z")
    roots = []
    for f in polys:
        if f.degree <= 0:
            continue
        P = sympy.Poly(list(reversed(f.coeffs)), z)
        roots += [sympy.Rational(str(r.evalf(40))) for r in P.real_roots()]
    roots = sorted(set(roots))
    if not roots:
        return [Fraction(0)]
    sample = [roots[0] - 1, roots[-1] + 1]
    sample += [(a + b) / 2 for a, b in zip(roots, roots[1:])]
    return sorted(Fraction(int(s.p), int(s.q)) for s in sample)
