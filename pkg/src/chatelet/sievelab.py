"""Desk-scale sieve experiments: Hooley Delta-functions, lattice counts against
their predicted densities, and the Eisenstein/cusp character sums."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from . import _kernels as K
from .arith import (GuardError, IntPoly, check_delta, chi_table, divisors_from,
                    factorint, kronecker, kronecker_chi, moebius,
                    pell_fundamental, primes_upto, spf_sieve,
                    sqrt_mod_prime_power)
from .counting import ChateletSurface, _Ctx, coprime_pairs
from .localglobal import _proj_count_pk
from .quadring import (FormClassGroup, _matinv, _matmul, char_order, char_value,
                       genus_characters, ideal_classes_of_norm,
                       reduce_indefinite, reduced_forms, psi_argument)

HOOLEY_MAX = 10_000_000
LOD_MAX_SIDE = 10_000
LOD_MAX_D = 400_000
CHAR_SUM_MAX_B = 10_000


def _seed() -> int:
    return int(os.environ.get("CHATELET_SEED", "0"))


def _log2(x: float) -> float:
    """log log x, clipped below at 1."""
    return max(1.0, math.log(max(math.log(max(x, 2.0)), 1.0)))


def _log3(x: float) -> float:
    return max(1.0, math.log(_log2(x)))


# ------------------------------------------------------------------ Hooley

def _as_char(twisted_by):
    if callable(twisted_by):
        return twisted_by
    delta = int(twisted_by)
    return lambda d: kronecker_chi(delta, d)


def hooley_delta(n: int, twisted_by=None) -> int:
    """max over D > 0 of #{d | n : D <= d <= 2D}, or of |sum chi(d)| over that
    window when twisted_by is a character (callable) or a delta."""
    if n < 1:
        raise ValueError("n must be positive")
    ds = sorted(divisors_from(factorint(n))) if n > 1 else [1]
    if twisted_by is None:
        best, j = 0, 0
        for i, d in enumerate(ds):
            while j < len(ds) and ds[j] <= 2 * d:
                j += 1
            best = max(best, j - i)
        return best
    chi = _as_char(twisted_by)
    vals = {d: chi(d) for d in ds}
    # the window contents only change when D crosses some d or d/2
    pts = sorted({Fraction(d) for d in ds} | {Fraction(d, 2) for d in ds})
    cands = pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    best = 0
    for D in cands:
        s = sum(v for d, v in vals.items() if D <= d <= 2 * D)
        best = max(best, abs(s))
    return best


def hooley_tables(N: int, delta: int = 1):
    """(Delta(n), Delta(n, chi), tau(n)) as int64 arrays indexed 0..N, where chi
    is the character of x^2 + delta*y^2."""
    if N > HOOLEY_MAX:
        raise GuardError(f"Hooley tables limited to N <= {HOOLEY_MAX}")
    tab = chi_table(delta).astype(np.int64)
    return K.hooley_arrays(int(N), tab)


@dataclass(frozen=True)
class HooleyChain:
    N: int
    holds: bool
    first_failure: int | None
    max_delta: int
    max_twisted: int


def hooley_chain(N: int, delta: int = 1) -> HooleyChain:
    """Check Delta(n, chi) <= Delta(n) <= tau(n) for all n <= N."""
    dl, dt, tau = hooley_tables(N, delta)
    bad = np.nonzero((dt[1:] > dl[1:]) | (dl[1:] > tau[1:]) | (dl[1:] < 1))[0]
    first = int(bad[0]) + 1 if bad.size else None
    return HooleyChain(N, first is None, first, int(dl.max()), int(dt.max()))


def _poly_roots_pk(f: IntPoly, p: int, k: int) -> int:
    """#{x mod p^k : f(x) = 0 mod p^k} by lifting residues one digit at a time."""
    cur = [x for x in range(p) if f(x) % p == 0]
    m = p
    for _ in range(k - 1):
        nxt = []
        for x in cur:
            for t in range(p):
                y = x + t * m
                if f(y) % (m * p) == 0:
                    nxt.append(y)
        cur = nxt
        m *= p
        if not cur:
            break
    return len(cur)


@njit(cache=True)
def _assemble(N, spf, gen, bad_p, bad_tab):
    out = np.zeros(N + 1, dtype=np.int64)
    if N >= 1:
        out[1] = 1
    for n in range(2, N + 1):
        p = spf[n]
        m = n
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        val = gen[p]
        for i in range(bad_p.shape[0]):
            if bad_p[i] == p:
                val = bad_tab[i, k]
        out[n] = val * out[m]
    return out


def rho_poly_table(f: IntPoly, N: int) -> np.ndarray:
    """rho_f(n) = #{x mod n : f(x) = 0 mod n} for n <= N, multiplicatively."""
    spf = spf_sieve(N)
    ps = primes_upto(N).astype(np.int64)
    gen = np.zeros(N + 1, dtype=np.int64)
    if ps.size:
        gen[ps] = K.poly_root_counts(np.array(f.coeffs, dtype=np.int64), ps)
    special = abs(f.lc * f.discriminant()) * max(1, abs(f.content()))
    bad = [p for p in factorint(special) if p <= N] if special > 1 else []
    kmax = max(1, int(math.log2(max(N, 2))) + 1)
    tab = np.zeros((max(len(bad), 1), kmax + 1), dtype=np.int64)
    for i, p in enumerate(bad):
        k, pk = 1, p
        while pk <= N:
            tab[i, k] = _poly_roots_pk(f, p, k)
            k += 1
            pk *= p
    return _assemble(N, spf, gen, np.array(bad or [0], dtype=np.int64), tab)


@dataclass(frozen=True)
class HooleyRow:
    X: int
    numerator: int
    scale: float
    ratio: float


@dataclass(frozen=True)
class HooleyReport:
    f: tuple
    variant: str
    rows: list

    @property
    def ratios(self) -> list:
        return [r.ratio for r in self.rows]


def _decade_points(X: int) -> list:
    pts = [10 ** k for k in range(4, 8) if 10 ** k <= X]
    if not pts or pts[-1] != X:
        pts.append(X)
    return pts


def hooley_average_report(f, X: int, points=None, variant: str = "plain",
                          delta: int = 1) -> HooleyReport:
    """Per-X ratios of sum_{n <= X} Delta(n) rho_f(n) to X (log log X)^(5/2).

    variant 'twisted' uses Delta(n, chi)^2 against X exp(sqrt(log2 X log3 X)),
    chi the character of x^2 + delta*y^2."""
    f = f if isinstance(f, IntPoly) else IntPoly(f)
    if X < 1:
        raise ValueError("X must be positive")
    if X > HOOLEY_MAX:
        raise GuardError(f"X limited to {HOOLEY_MAX}")
    pts = sorted(points) if points is not None else _decade_points(X)
    N = max(pts)
    rho = rho_poly_table(f, N)
    dl, dt, _ = hooley_tables(N, delta)
    if variant == "plain":
        w = dl * rho
    elif variant == "twisted":
        w = dt * dt * rho
    else:
        raise ValueError(f"unknown variant {variant}")
    cum = np.cumsum(w)
    rows = []
    for x in pts:
        num = int(cum[x])
        if variant == "plain":
            sc = x * _log2(x) ** 2.5
        else:
            sc = x * math.exp(math.sqrt(_log2(x) * _log3(x)))
        rows.append(HooleyRow(x, num, sc, num / sc))
    return HooleyReport(tuple(f.coeffs), variant, rows)


# ------------------------------------------------------ level of distribution

@dataclass
class LodScanResult:
    label: str
    t: int
    k: int
    b: int
    n: int
    a: tuple
    c: tuple
    X: int
    D_grid: list
    E: list            # sum_{d <= D} |S(d) - predicted(d)|
    main: list         # sum_{d <= D} predicted(d)
    exact: list        # sum_{d <= D} S(d)
    S: np.ndarray = field(repr=False)
    predicted: np.ndarray = field(repr=False)

    def ratio(self, i: int = -1) -> float:
        return self.E[i] / self.main[i] if self.main[i] else 0.0

    def window_total(self, lo: int, hi: int) -> int:
        """sum of S(d) over lo < d <= hi."""
        return int(self.S[lo + 1:hi + 1].sum())


def _rho_proj_table(F, D: int, roots_count: np.ndarray, primes: np.ndarray,
                    special: set) -> np.ndarray:
    """rho(d) = #points of P^1(Z/d) on F = 0 for d <= D."""
    spf = spf_sieve(D)
    gen = np.zeros(D + 1, dtype=np.int64)
    a0 = F.coeffs[0] if F.coeffs else 0
    for p, c in zip(primes.tolist(), roots_count.tolist()):
        gen[p] = (p if c == -1 else c) + (1 if a0 % p == 0 else 0)
    bad = sorted(p for p in special if p <= D)
    kmax = max(1, int(math.log2(max(D, 2))) + 1)
    tab = np.zeros((max(len(bad), 1), kmax + 1), dtype=np.int64)
    for i, p in enumerate(bad):
        k, pk = 1, p
        while pk <= D:
            tab[i, k] = _proj_count_pk([F], p, [k])
            k += 1
            pk *= p
    return _assemble(D, spf, gen, np.array(bad or [0], dtype=np.int64), tab)


def lod_scan(S: ChateletSurface, X: int = 1000, D_grid=None, t: int = 1, k: int = 1,
             b: int = 1, n: int = 1, a=(), c=()) -> LodScanResult:
    """Divisor-lattice counts S(d) = #{(x, y) in [-X, X]^2 : d | F(x, y),
    gcd(x, y, d) = 1} against (2X+1)^2 rho(d) phi(d) / d^2, accumulated up to
    each D on the grid.  The box side is X / sqrt(t k)."""
    if b != 1 or n != 1 or any(x != 1 for x in a) or any(x != 1 for x in c):
        raise ValueError("only the trivial b, n, a, c restrictions are supported")
    side = math.isqrt(X * X // (t * k))
    if side > LOD_MAX_SIDE:
        raise GuardError(f"box side {side} exceeds {LOD_MAX_SIDE}")
    if D_grid is None:
        Dtop = max(1, int(side * side / math.log(max(side, 3))))
        D_grid = sorted({max(1, Dtop // 2 ** j) for j in range(8)})
    D_grid = sorted(int(x) for x in D_grid)
    D = D_grid[-1]
    if D > LOD_MAX_D:
        raise GuardError(f"D = {D} exceeds {LOD_MAX_D}")
    F = S.F
    if sum(abs(x) for x in F.coeffs) * float(side) ** F.degree >= 2.0 ** 62:
        raise GuardError("form values overflow int64")
    Fc = np.array(list(F.coeffs) + [0] * (F.degree + 1 - len(F.coeffs)), dtype=np.int64)
    g = Fc[::-1].copy()  # F(1, t) = sum Fc[i] t^(deg - i)
    ps = primes_upto(D).astype(np.int64)
    roots, nroots = K.roots_by_scan(g, ps, F.degree)
    a0 = int(Fc[0])
    Sarr = np.zeros(D + 1, dtype=np.int64)
    zero_g = np.zeros(side + 1, dtype=np.int64)
    K.lod_sieve(side, Fc, ps, roots, nroots, a0, D, Sarr, zero_g)
    # points on F = 0: every d coprime to gcd(x, y); (0, 0) only for d = 1
    Sarr[1] += zero_g[0]
    if zero_g[1:].any():
        C = np.zeros(D + 1, dtype=np.int64)
        for e in range(1, D + 1):
            C[e] = zero_g[e:side + 1:e].sum() if e <= side else 0
        mu = np.array([0] + [moebius(e) for e in range(1, D + 1)], dtype=np.int64)
        for e in range(1, D + 1):
            if mu[e] and C[e]:
                Sarr[e::e] += mu[e] * C[e]
    cont = abs(math.gcd(*F.coeffs)) if F.coeffs else 0
    f_dis = S.f.discriminant()
    special = set()
    for v in (a0, int(Fc[-1]), cont, f_dis, S.f.lc):
        if v:
            special |= set(factorint(abs(v))) if abs(v) > 1 else set()
    rho = _rho_proj_table(F, D, nroots, ps, special)
    d = np.arange(D + 1, dtype=np.float64)
    phi = _phi_table(D).astype(np.float64)
    pred = np.zeros(D + 1)
    A = float(2 * side + 1) ** 2
    pred[1:] = A * rho[1:] * phi[1:] / (d[1:] * d[1:])
    err = np.abs(Sarr - pred)
    err[0] = 0.0
    cE, cM, cS = np.cumsum(err), np.cumsum(pred), np.cumsum(Sarr)
    return LodScanResult(S.label, t, k, b, n, tuple(a), tuple(c), side, D_grid,
                         [float(cE[x]) for x in D_grid], [float(cM[x]) for x in D_grid],
                         [int(cS[x]) for x in D_grid], Sarr, pred)


def _phi_table(N: int) -> np.ndarray:
    phi = np.arange(N + 1, dtype=np.int64)
    for p in primes_upto(N).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi


def divisor_window_count(S: ChateletSurface, X: int, lo: int, hi: int) -> int:
    """Oracle: sum over (x, y) in [-X, X]^2 of #{lo < d <= hi : d | F(x, y),
    gcd(x, y, d) = 1}, by direct divisor enumeration."""
    tot = 0
    for x in range(-X, X + 1):
        for y in range(-X, X + 1):
            v = S.F(x, y)
            g = math.gcd(x, y)
            if v == 0:
                tot += sum(1 for d in range(lo + 1, hi + 1) if math.gcd(d, g) == 1)
                continue
            for d in divisors_from(factorint(abs(v))) if abs(v) > 1 else [1]:
                if lo < d <= hi and math.gcd(d, g) == 1:
                    tot += 1
    return tot


# ------------------------------------------------- Eisenstein multiplicativity

def _eps_direct(q1: int, q2: int, n: int) -> int:
    return sum(kronecker(q1, d) * kronecker(q2, n // d)
               for d in (divisors_from(factorint(n)) if n > 1 else [1]))


def eisenstein_mult_check(q1: int, q2: int, n: int, m: int) -> bool:
    """eps(nm) = sum_{c | gcd(n, m)} mu(c) chi(c) eps(n/c) eps(m/c), chi = chi_q1 chi_q2,
    every eps evaluated as a divisor sum."""
    if n < 1 or m < 1:
        raise ValueError("n, m must be positive")
    lhs = _eps_direct(q1, q2, n * m)
    g = math.gcd(n, m)
    rhs = 0
    for c in (divisors_from(factorint(g)) if g > 1 else [1]):
        mu = moebius(c)
        if mu:
            rhs += mu * kronecker(q1, c) * kronecker(q2, c) * \
                _eps_direct(q1, q2, n // c) * _eps_direct(q1, q2, m // c)
    return lhs == rhs


def _char_tab(q: int, N: int) -> np.ndarray:
    m = abs(q)
    per = np.array([kronecker(q, r) for r in range(m)], dtype=np.int64)
    return per[np.arange(N + 1) % m]


@dataclass(frozen=True)
class MultHarness:
    pairs: int
    failures: int
    first_failure: tuple | None


def eisenstein_mult_harness(q1: int, q2: int, pairs: int = 100_000, N: int = 10_000,
                            seed: int | None = None) -> MultHarness:
    """The identity on random pairs n, m <= N.  eps(nm) is an explicit divisor sum;
    the right side uses a table of eps(k), k <= N, built by convolution."""
    if q1 * q2 % 4 not in (0, 1) or abs(q1) == 0 or abs(q2) == 0:
        raise ValueError("q1, q2 must be discriminants")
    rng = np.random.default_rng(_seed() if seed is None else seed)
    c1 = _char_tab(q1, N)
    c2 = _char_tab(q2, N)
    eps = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        eps[d::d] += c1[d] * c2[np.arange(1, N // d + 1)]
    spf = spf_sieve(N)
    mu = np.array([0] + [moebius(e) for e in range(1, N + 1)], dtype=np.int64)
    m1, m2 = abs(q1), abs(q2)
    t1 = [kronecker(q1, r) for r in range(m1)]
    t2 = [kronecker(q2, r) for r in range(m2)]
    ns = rng.integers(1, N + 1, size=pairs)
    ms = rng.integers(1, N + 1, size=pairs)
    fails, first = 0, None
    for n, m in zip(ns.tolist(), ms.tolist()):
        fac: dict = {}
        for x in (n, m):
            while x > 1:
                p = int(spf[x])
                fac[p] = fac.get(p, 0) + 1
                x //= p
        nm = n * m
        lhs = 0
        for d in divisors_from(fac) if fac else [1]:
            lhs += t1[d % m1] * t2[(nm // d) % m2]
        g = math.gcd(n, m)
        rhs = 0
        for c in range(1, g + 1):
            if g % c == 0 and mu[c]:
                rhs += int(mu[c]) * t1[c % m1] * t2[c % m2] * int(eps[n // c]) * int(eps[m // c])
        if lhs != rhs:
            fails += 1
            if first is None:
                first = (n, m)
    return MultHarness(pairs, fails, first)


# --------------------------------------------------------------- genus sums

def genus_sum_check(G: FormClassGroup, n: int) -> bool:
    """sum over genus characters of eps_{q1,q2}(n) equals (number of genus
    characters) times the number of ideals of norm n in the principal genus."""
    if n < 1 or math.gcd(n, 2 * G.delta) != 1:
        raise ValueError("n must be positive and coprime to 2*delta")
    chars = genus_characters(G)
    lhs = sum(_eps_direct(g.q1, g.q2, n) for g in chars)
    sq = set(G.squares)
    pg = sum(v for cl, v in ideal_classes_of_norm(G, n).items() if cl in sq)
    return lhs == len(chars) * pg


# ----------------------------------------------------------- character sums

def _coprime_part(m: int, delta: int) -> int:
    m = abs(m)
    for p in factorint(2 * abs(delta)):
        while m % p == 0:
            m //= p
    return m


def core_form(S: ChateletSurface):
    """f homogenised at its own degree (no auxiliary factor v for cubic f)."""
    return S.f.homogenize(S.f.degree)


def _box_pairs(L: int):
    for u in range(-L, L + 1):
        for v in range(0, L + 1):
            if v == 0 and u <= 0:
                continue
            if math.gcd(u, v) == 1:
                yield u, v


@dataclass
class CuspReport:
    delta: int
    L: int
    character: tuple
    class_counts: dict         # class index -> number of (pair, ideal) terms
    cusp: complex
    eisenstein: int
    nonprincipal_primes: list  # split primes p | F(u, v) with non-principal class

    @property
    def degenerate(self) -> bool:
        return not self.nonprincipal_primes

    @property
    def ratio(self) -> float:
        return abs(self.cusp) / self.eisenstein if self.eisenstein else 0.0


def _order3_char(G: FormClassGroup):
    for vals in G.characters():
        if char_order(vals) >= 3:
            return tuple(vals)
    raise ValueError(f"class group of delta={G.delta} has no character of order >= 3")


def cusp_partial_sum(S: ChateletSurface, B: int, psi=None, G: FormClassGroup | None = None) -> CuspReport:
    """sum over coprime (u, v) with |u|, |v| <= sqrt(B), one per sign class, of
    sum_{N(a) = m} psi(a), m the part of core_form(S)(u, v) prime to 2*delta; alongside the
    trivial-character count.  psi: phases per class, 'trivial', or None for the
    first character of order >= 3."""
    if S.delta < 0:
        raise ValueError("cusp sums need delta > 0")
    if B > CHAR_SUM_MAX_B:
        raise GuardError(f"B limited to {CHAR_SUM_MAX_B}")
    G = G or reduced_forms(S.delta)
    if psi is None:
        psi = _order3_char(G)
    elif psi == "trivial":
        psi = tuple(Fraction(0) for _ in range(G.h))
    L = math.isqrt(B)
    F = core_form(S)
    counts: dict = {}
    bad = set()
    for u, v in _box_pairs(L):
        val = F(u, v)
        if val == 0:
            continue
        m = _coprime_part(val, S.delta)
        for p in (factorint(m) if m > 1 else {}):
            if kronecker_chi(S.delta, p) == 1 and G.prime_class(p) != G.identity:
                bad.add(p)
        for cl, cnt in ideal_classes_of_norm(G, m).items():
            counts[cl] = counts.get(cl, 0) + cnt
    cusp = sum(cnt * char_value(psi[cl]) for cl, cnt in counts.items())
    eis = sum(counts.values())
    return CuspReport(S.delta, L, tuple(psi), dict(sorted(counts.items())), complex(cusp),
                      eis, sorted(bad))


class _PrimeGenerators:
    """Generators of norm +-p in Z[sqrt d], d = -delta, for class number one."""

    def __init__(self, delta: int):
        self.ctx = _Ctx(delta)
        self.d = -delta
        self.D = 4 * self.d
        Pm, Mm = reduce_indefinite((-1, 0, self.d), self.D)
        from .quadring import indefinite_cycle
        cyc, _ = indefinite_cycle(Pm, self.D)
        self.mcycle = {f: _matmul(Mm, C) for f, C in cyc}
        self.cache: dict = {}

    def __call__(self, p: int):
        if p in self.cache:
            return self.cache[p]
        b0 = sqrt_mod_prime_power(self.d % p, p, 1)[0]
        f = (p, 2 * b0, (b0 * b0 - self.d) // p)
        R, M = reduce_indefinite(f, self.D)
        for table, sgn in ((self.ctx.pcycle, 1), (self.mcycle, -1)):
            g = table.get(R)
            if g is not None:
                T = _matmul(g, _matinv(M))
                x, y = T[0][0], T[1][0]
                if x * x - self.d * y * y != sgn * p:
                    raise ArithmeticError("generator search failed")
                self.cache[p] = (x, y)
                return x, y
        raise ValueError(f"prime {p} has no principal ideal above it")


@dataclass
class GrossenReport:
    delta: int
    L: int
    h: int
    value: float
    eisenstein: int
    max_term_excess: int   # max over terms of |sigma| - tau(n); <= 0 expected


def grossen_partial_sum(S: ChateletSurface, B: int, h: int = 1, absolute: bool = True,
                        pell=None) -> GrossenReport:
    """sum over coprime (u, v), |u|, |v| <= sqrt(B), one per sign class, of
    |sigma(m, Psi^h)|, sigma(m, chi) = sum_{N(a) = m} chi(a) over ideals of
    Z[sqrt(-delta)], m the part of core_form(S)(u, v) prime to 2*delta.  Every
    ideal must be principal."""
    if S.delta >= 0:
        raise ValueError("Grossencharacter sums need delta < 0")
    if B > CHAR_SUM_MAX_B:
        raise GuardError(f"B limited to {CHAR_SUM_MAX_B}")
    G = reduced_forms(S.delta)
    d = -S.delta
    if {G.class_of((1, 0, -d)), G.class_of((-1, 0, d))} != set(range(G.h)):
        raise ValueError("only rings with every ideal principal are supported")
    pell = pell or pell_fundamental(S.delta)
    gens = _PrimeGenerators(S.delta)
    psi_cache: dict = {}

    def psi_p(p):
        if p not in psi_cache:
            x, y = gens(p)
            psi_cache[p] = (psi_argument(S.delta, x, y, pell) ** h,
                            psi_argument(S.delta, x, -y, pell) ** h)
        return psi_cache[p]

    L = math.isqrt(B)
    F = core_form(S)
    total = 0.0 if absolute else 0j
    eis = 0
    excess = -10 ** 9
    for u, v in _box_pairs(L):
        val = F(u, v)
        if val == 0:
            continue
        m = _coprime_part(val, S.delta)
        sig = 1 + 0j
        r = 1
        tau = 1
        for p, e in (factorint(m).items() if m > 1 else ()):
            tau *= e + 1
            if kronecker_chi(S.delta, p) == 1:
                z, w = psi_p(p)
                sig *= sum(z ** i * w ** (e - i) for i in range(e + 1))
                r *= e + 1
            elif e % 2:
                sig = 0j
                r = 0
        eis += r
        excess = max(excess, math.ceil(abs(sig) - 1e-9) - tau)
        total += abs(sig) if absolute else sig
    if not absolute:
        total = total.real if abs(total.imag) < 1e-9 else total
    return GrossenReport(S.delta, L, h, total, eis, excess)
