"""Exact point counts N(X, B) on x^2 + delta*y^2 = f(z), two ways.

Height convention: a tuple ((x, y), (u, v), t) with x^2 + delta*y^2 = t^2 F(u, v),
gcd(x, y, t) = gcd(u, v) = 1 and F(u, v) != 0 is counted at height
    h = max(t*M^2, |x| + ceil(|y|*sqrt(-delta)))   (delta < 0)
    h = t*M^2                                        (delta > 0)
with M = max(|u|, |v|).  For delta > 0 the norm bound |x + y*sqrt(-delta)| <= nu*B is
implied by t*M^2 <= B, so only the first coordinate matters.  N(B) is half the number
of tuples of height <= B.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .arith import (BinaryForm, GuardError, IntPoly, PellSolution, check_delta,
                    chi_table, factor_poly, factorint, pell_fundamental,
                    primes_upto, resultant, signed_content, spf_sieve,
                    sqrt_count_mod_prime_power, sqrt_mod_prime_power)
from .quadring import (_matinv, _matmul, indefinite_cycle, reduce_indefinite,
                       reduced_forms)

DEFAULT_BRUTE_CEILING = 20_000
INT64_SAFE = 1 << 62


# ----------------------------------------------------------------- surface

def homogenize(f: IntPoly) -> BinaryForm:
    """F(u, v) = v^4 f(u/v)."""
    if f.degree not in (3, 4):
        raise ValueError("f must have degree 3 or 4")
    return f.homogenize(4)


def _nu(F: BinaryForm) -> float:
    # max of |F| over [-1,1]^2 sits on the boundary |u| = 1 or |v| = 1
    import sympy
    s = sympy.Symbol("s")
    best = 0.0
    for g in (F.dehomogenize(), F.swap().dehomogenize()):
        P = sympy.Poly(list(reversed(g.coeffs)) or [0], s)
        pts = [sympy.Integer(-1), sympy.Integer(1)]
        dP = P.diff(s)
        if dP.degree() > 0:
            pts += [r for r in dP.real_roots() if -1 <= r <= 1]
        for r in pts:
            best = max(best, abs(float(P.eval(r).evalf(30))))
    return math.sqrt(best)


@dataclass
class ChateletSurface:
    delta: int
    f: IntPoly
    factors: list = field(init=False)
    content: int = field(init=False)
    F: BinaryForm = field(init=False)
    nu: float = field(init=False)

    def __post_init__(self):
        check_delta(self.delta)
        if not isinstance(self.f, IntPoly):
            self.f = IntPoly(self.f)
        self.F = homogenize(self.f)
        self.factors = factor_poly(self.f)
        if any(m > 1 for _, m in self.factors):
            raise ValueError("f must be separable")
        self.content = signed_content(self.f)
        self.nu = _nu(self.F) if self.delta > 0 else 1.0

    @property
    def forms(self) -> list:
        """Primitive factor forms F_i, each homogenised at its own degree; for
        deg f = 3 the extra linear factor v comes last."""
        out = [g.homogenize(g.degree) for g, _ in self.factors]
        if self.f.degree == 3:
            out.append(BinaryForm((0, 1), 1).swap())  # v
        return out

    @property
    def label(self) -> str:
        return f"delta={self.delta};f={','.join(map(str, self.f.coeffs))}"

    def check_resultants(self):
        fs = self.forms
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                if resultant(fs[i], fs[j]) == 0:
                    raise ValueError("factors share a root")


def surface(delta: int, coeffs) -> ChateletSurface:
    return ChateletSurface(delta, IntPoly(coeffs))


# -------------------------------------------------------------- pair tables

def coprime_pairs(Mmax: int, half: bool):
    """Coprime (u, v) with max(|u|, |v|) <= Mmax.  half=True keeps one of each
    +-(u, v): v > 0, or v = 0 and u = 1."""
    r = np.arange(-Mmax, Mmax + 1, dtype=np.int64)
    u, v = np.meshgrid(r, r, indexing="ij")
    u, v = u.ravel(), v.ravel()
    keep = np.gcd(u, v) == 1
    if half:
        keep &= (v > 0) | ((v == 0) & (u == 1))
    return u[keep], v[keep]


def _F_values(F: BinaryForm, u, v):
    bound = sum(abs(c) for c in F.coeffs) * max(1, int(np.abs(u).max(initial=0)),
                                                 int(np.abs(v).max(initial=0))) ** 4
    if bound < INT64_SAFE:
        return F.eval_array(u, v)
    raise GuardError("F(u, v) exceeds 64-bit range")


def _isqrt_arr(a):
    """floor(sqrt(a)) for non-negative int64 arrays, exact."""
    s = np.sqrt(a.astype(np.float64)).astype(np.int64)
    s -= (s * s > a)
    s += ((s + 1) * (s + 1) <= a)
    return s


def _conj_height(x, y, d):
    """|x| + ceil(|y| sqrt(d)) elementwise, d > 0 nonsquare."""
    y = np.abs(y)
    s = _isqrt_arr(y * y * d)
    return np.abs(x) + s + (y > 0)


# ------------------------------------------------------------------- brute

def count_brute_hist(S: ChateletSurface, B: int, ceiling: int = DEFAULT_BRUTE_CEILING):
    """hist[h] = number of tuples of height exactly h (so N(B) = hist[:B+1].sum()/2),
    by enumerating lattice points (x, y) and matching x^2 + delta*y^2 against t^2 F."""
    if B > ceiling:
        raise GuardError(f"brute count refuses B={B} above ceiling {ceiling}")
    hist = np.zeros(B + 1, dtype=np.int64)
    if B <= 0:
        return hist
    delta = S.delta
    Mmax = math.isqrt(B)
    u, v = coprime_pairs(Mmax, half=False)
    Fv = _F_values(S.F, u, v)
    keep = Fv > 0 if delta > 0 else Fv != 0
    u, v, Fv = u[keep], v[keep], Fv[keep]
    if len(Fv) == 0:
        return hist
    M = np.maximum(np.abs(u), np.abs(v))
    T = B // (M * M)
    n = int(T.sum())
    pair = np.repeat(np.arange(len(Fv)), T)
    t = np.arange(n, dtype=np.int64) - np.repeat(np.cumsum(T) - T, T) + 1
    Ft = Fv[pair]
    if np.abs(Fv).max() * B * B >= INT64_SAFE:
        raise GuardError("t^2 F exceeds 64-bit range")
    m = t * t * Ft
    hM = t * M[pair] * M[pair]
    if delta < 0:
        # norm bound |x| + |y| sqrt(d) <= B also forces |m| <= B^2
        ok = np.abs(m) <= B * B
        m, hM, t = m[ok], hM[ok], t[ok]
    order = np.argsort(m, kind="stable")
    m, hM, t = m[order], hM[order], t[order]
    if len(m) == 0:
        return hist

    lo_m, hi_m = int(m[0]), int(m[-1])
    span = hi_m - lo_m + 1
    bits = np.zeros(span // 8 + 1, dtype=np.uint8)
    off = m - lo_m
    np.bitwise_or.at(bits, off >> 3, (1 << (off & 7)).astype(np.uint8))

    xs, ys, ms = [], [], []
    if delta > 0:
        sq = np.arange(math.isqrt(hi_m) + 1, dtype=np.int64) ** 2
        ymax = math.isqrt(hi_m // delta)
        for y in range(ymax + 1):
            base = delta * y * y
            xmax = math.isqrt(hi_m - base)
            mm = sq[:xmax + 1] + base
            o = mm - lo_m
            sel = o >= 0
            hit = np.zeros(len(mm), dtype=bool)
            oo = o[sel]
            hit[sel] = (bits[oo >> 3] >> (oo & 7).astype(np.uint8)) & 1 == 1
            xi = np.flatnonzero(hit)
            if len(xi):
                xs.append(xi)
                ys.append(np.full(len(xi), y, dtype=np.int64))
                ms.append(mm[xi])
    else:
        d = -delta
        sq = np.arange(B + 1, dtype=np.int64) ** 2
        ymax = math.isqrt(B * B // d)
        for y in range(ymax + 1):
            ceil_y = math.isqrt(y * y * d) + (y > 0)
            xmax = B - ceil_y
            if xmax < 0:
                break
            mm = sq[:xmax + 1] - d * y * y
            o = mm - lo_m
            sel = (o >= 0) & (o < span)
            hit = np.zeros(len(mm), dtype=bool)
            oo = o[sel]
            hit[sel] = (bits[oo >> 3] >> (oo & 7).astype(np.uint8)) & 1 == 1
            xi = np.flatnonzero(hit)
            if len(xi):
                xs.append(xi)
                ys.append(np.full(len(xi), y, dtype=np.int64))
                ms.append(mm[xi])
    if not xs:
        return hist
    x = np.concatenate(xs).astype(np.int64)
    y = np.concatenate(ys)
    mh = np.concatenate(ms)
    lo = np.searchsorted(m, mh, "left")
    hi = np.searchsorted(m, mh, "right")
    cnt = hi - lo
    tot = int(cnt.sum())
    idx = np.repeat(lo, cnt) + np.arange(tot) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    X, Y = np.repeat(x, cnt), np.repeat(y, cnt)
    tt, hh = t[idx], hM[idx]
    ok = np.gcd(np.gcd(X, Y), tt) == 1
    X, Y, hh = X[ok], Y[ok], hh[ok]
    w = (1 + (X > 0)) * (1 + (Y > 0))
    if delta < 0:
        hh = np.maximum(hh, _conj_height(X, Y, -delta))
    ok = hh <= B
    hist += np.bincount(hh[ok], weights=w[ok], minlength=B + 1).astype(np.int64)[:B + 1]
    return hist


def count_brute(S: ChateletSurface, B: int, ceiling: int = DEFAULT_BRUTE_CEILING) -> int:
    two_n = int(count_brute_hist(S, B, ceiling).sum())
    return two_n // 2


# -------------------------------------------------------------------- fast

class _Ctx:
    """Per-surface data shared by the fast counter."""

    def __init__(self, delta: int):
        self.delta = delta
        self.G = reduced_forms(delta)
        self.D = -4 * delta
        if delta > 0:
            self.w = 4 if delta == 1 else 2
            self.principal = self.G.forms[self.G.identity]
        else:
            self.pell = pell_fundamental(delta)
            self.d = -delta
            P0, M0 = reduce_indefinite((1, 0, -self.d), self.D)
            cyc, _ = indefinite_cycle(P0, self.D)
            # reduced principal form R -> matrix g with Q o g = R, Q = x^2 - d y^2
            self.pcycle = {f: _matmul(M0, C) for f, C in cyc}
        self.sqrt_d = math.sqrt(abs(delta))


def _roots_mod(delta: int, fac: dict) -> list:
    """All b mod n (n = prod p^k) with b^2 = -delta mod n, by CRT."""
    sols, mod = [0], 1
    for p, k in fac.items():
        q = p**k
        rs = sqrt_mod_prime_power(-delta, p, k)
        if not rs:
            return []
        inv = pow(mod, -1, q)
        sols = [s + mod * ((r - s) * inv % q) for s in sols for r in rs]
        mod *= q
    return sols


def _orbit_heights(ctx: _Ctx, p: int, r: int, g: int, hmin: int, B: int, out: list):
    """Heights <= B of the elements +-eps^k (p + r sqrt d) g; appends one entry per
    element up to sign."""
    d = ctx.d
    x0, y0 = ctx.pell.x0, ctx.pell.y0
    le = ctx.pell.eps_log
    n = p * p - d * r * r
    big = abs(p) + abs(r) * ctx.sqrt_d
    lbig = math.log(big)
    lsmall = math.log(abs(n)) - lbig
    # log|p + r sqrt d| and log|p - r sqrt d|
    la, lb = (lbig, lsmall) if p * r >= 0 else (lsmall, lbig)
    k0 = round((lb - la) / (2 * le))
    x, y = p, r
    if k0 > 0:
        for _ in range(k0):
            x, y = x0 * x + d * y0 * y, y0 * x + x0 * y
    else:
        for _ in range(-k0):
            x, y = x0 * x - d * y0 * y, -y0 * x + x0 * y

    def height(a, b):
        a, b = abs(a) * g, abs(b) * g
        return max(hmin, a + math.isqrt(b * b * d) + (b > 0))

    a, b, k = x, y, 0
    while True:
        h = height(a, b)
        if h <= B:
            out.append(h)
        elif k >= 1:
            break
        a, b = x0 * a + d * y0 * b, y0 * a + x0 * b
        k += 1
    a, b, k = x0 * x - d * y0 * y, -y0 * x + x0 * y, -1
    while True:
        h = height(a, b)
        if h <= B:
            out.append(h)
        elif k <= -2:
            break
        a, b = x0 * a - d * y0 * b, -y0 * a + x0 * b
        k -= 1


def _tuple_heights(ctx: _Ctx, Ffac: dict, Fsign: int, t: int, tfac: dict, hmin: int,
                   B: int, out: list):
    """Append (height, weight) contributions of all (x, y) for one (t, u, v)."""
    delta = ctx.delta
    gparts = [(p, e // 2) for p, e in Ffac.items() if e >= 2 and p not in tfac]
    gchoices = [()]
    for p, jmax in gparts:
        gchoices = [c + ((p, j),) for c in gchoices for j in range(jmax + 1)]
    for choice in gchoices:
        fac = {p: 2 * a for p, a in tfac.items()}
        for p, e in Ffac.items():
            fac[p] = fac.get(p, 0) + e
        g = 1
        for p, j in choice:
            fac[p] -= 2 * j
            g *= p**j
        fac = {p: k for p, k in fac.items() if k}
        nabs = 1
        for p, k in fac.items():
            nabs *= p**k
        n = Fsign * nabs
        if delta > 0:
            if ctx.G.h == 1:
                nroots = 1
                for p, k in fac.items():
                    nroots *= sqrt_count_mod_prime_power(-delta, p, k)
                    if not nroots:
                        break
                if nroots:
                    out.append((hmin, ctx.w * nroots))
                continue
            for b in _roots_mod(delta, fac):
                c = (b * b + delta) // n
                if ctx.G.reduce((n, 2 * b, c)) == tuple(ctx.principal):
                    out.append((hmin, ctx.w))
        else:
            hs = []
            for b in _roots_mod(delta, fac):
                c = (b * b + delta) // n
                R, M1 = reduce_indefinite((n, 2 * b, c), ctx.D)
                gam = ctx.pcycle.get(R)
                if gam is None:
                    continue
                gam = _matmul(gam, _matinv(M1))
                _orbit_heights(ctx, gam[0][0], gam[1][0], g, hmin, B, hs)
            for h in hs:
                out.append((h, 2))


def _pairs_half(S: ChateletSurface, B: int):
    Mmax = math.isqrt(B)
    u, v = coprime_pairs(Mmax, half=True)
    Fv = _F_values(S.F, u, v)
    keep = Fv > 0 if S.delta > 0 else Fv != 0
    return u[keep], v[keep], Fv[keep]


def _generic_block(args):
    delta, coeffs, B, t_lo, t_hi = args
    S = ChateletSurface(delta, IntPoly(coeffs))
    ctx = _Ctx(delta)
    hist = np.zeros(B + 1, dtype=np.int64)
    u, v, Fv = _pairs_half(S, B)
    spf = spf_sieve(max(B, 2))
    from .arith import factor_spf
    tcache = {}
    for i in range(len(Fv)):
        M = max(abs(int(u[i])), abs(int(v[i])))
        M2 = M * M
        T = min(B // M2, t_hi)
        if T < t_lo:
            continue
        F = int(Fv[i])
        Ffac = factorint(abs(F))
        out = []
        for t in range(t_lo, T + 1):
            tfac = tcache.get(t)
            if tfac is None:
                tfac = tcache[t] = factor_spf(t, spf)
            _tuple_heights(ctx, Ffac, 1 if F > 0 else -1, t, tfac, t * M2, B, out)
        for h, w in out:
            hist[h] += 2 * w  # (u, v) and (-u, -v)
    return hist


def _split_t(B: int, workers: int):
    # contiguous t-blocks; work per t decays like 1/t so cut on a sqrt scale
    cuts = sorted({max(1, min(B + 1, round((B + 1) ** (i / workers)))) for i in range(workers + 1)}
                  | {1, B + 1})
    return [(a, b - 1) for a, b in zip(cuts, cuts[1:]) if b > a]


def count_fast_generic_hist(S: ChateletSurface, B: int, workers: int = 1):
    hist = np.zeros(max(B, 0) + 1, dtype=np.int64)
    if B <= 0:
        return hist
    blocks = _split_t(B, max(1, workers))
    jobs = [(S.delta, S.f.coeffs, B, a, b) for a, b in blocks]
    if workers <= 1 or len(jobs) == 1:
        for j in jobs:
            hist += _generic_block(j)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for h in ex.map(_generic_block, jobs):
                hist += h
    return hist


# vectorised trial division for the class-number-one kernel
def _factor_many(vals: np.ndarray):
    """CSR factorisation (ptr, primes, exps) of positive int64 values."""
    from ._kernels import trial_divide
    ps = primes_upto(10_000).astype(np.int64)
    fp, fe, cnt, cof = trial_divide(vals.astype(np.int64), ps, 48)
    extra = {}
    for i in np.flatnonzero(cof > 1):
        c = int(cof[i])
        if c < 10_000**2 or gmpy2.is_prime(c):
            extra[i] = {c: 1}
        else:
            extra[i] = factorint(c, trial_limit=1)
    n = len(vals)
    sizes = cnt.astype(np.int64).copy()
    for i, fac in extra.items():
        sizes[i] += len(fac)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(sizes, out=ptr[1:])
    primes = np.empty(ptr[-1], dtype=np.int64)
    exps = np.empty(ptr[-1], dtype=np.int64)
    for_rows = np.arange(fp.shape[1])
    mask = for_rows[None, :] < cnt[:, None]
    # rows without extras: copy in bulk
    dst = ptr[:-1, None] + for_rows[None, :]
    primes[dst[mask]] = fp[mask]
    exps[dst[mask]] = fe[mask]
    for i, fac in extra.items():
        j = ptr[i] + cnt[i]
        for p, e in fac.items():
            primes[j] = p
            exps[j] = e
            j += 1
    return ptr, primes, exps


def _rho_tables(delta: int):
    bad = sorted(factorint(2 * abs(delta)))
    width = 24
    tab = np.zeros((len(bad), width), dtype=np.int64)
    for i, p in enumerate(bad):
        for k in range(width):
            tab[i, k] = sqrt_count_mod_prime_power(-delta, p, k) if k < 12 or p > 2 else tab[i, k - 1]
    return np.array(bad, dtype=np.int64), tab


def count_fast_h1_hist(S: ChateletSurface, B: int):
    """Class-number-one definite case: the count for (t, u, v) is
    w * sum_{g^2 | F, (g, t) = 1} rho(t^2 F / g^2), evaluated prime by prime."""
    from ._kernels import h1_count_kernel
    if not (S.delta > 0 and reduced_forms(S.delta).h == 1):
        raise ValueError("class-number-one path needs delta > 0 with h = 1")
    hist = np.zeros(max(B, 0) + 1, dtype=np.int64)
    if B <= 0:
        return hist
    u, v, Fv = _pairs_half(S, B)
    if len(Fv) == 0:
        return hist
    Ms = np.maximum(np.abs(u), np.abs(v)).astype(np.int64)
    ptr, primes, exps = _factor_many(Fv)
    spf = spf_sieve(max(B, 2)).astype(np.int64)
    chi = chi_table(S.delta).astype(np.int64)
    bad_p, bad_tab = _rho_tables(S.delta)
    w = 4 if S.delta == 1 else 2
    h1_count_kernel(B, Ms, ptr, primes, exps, spf, chi, bad_p, bad_tab, 2 * w, hist)
    return hist


def count_fast_hist(S: ChateletSurface, B: int, workers: int = 1, path: str = "auto"):
    if path == "auto":
        path = "h1" if S.delta > 0 and reduced_forms(S.delta).h == 1 else "generic"
    if path == "h1":
        return count_fast_h1_hist(S, B)
    if path == "generic":
        return count_fast_generic_hist(S, B, workers)
    raise ValueError(f"unknown path {path!r}")


def count_fast(S: ChateletSurface, B: int, workers: int = 1, path: str = "auto") -> int:
    return int(count_fast_hist(S, B, workers, path).sum()) // 2


def counted_tuples_sample(S: ChateletSurface, B: int, limit: int = 1000, seed: int = 0):
    """Random sample of counted tuples (x, y, u, v, t) from the brute enumeration,
    for spot checks of the height bounds."""
    rng = np.random.default_rng(seed)
    out = []
    u, v, Fv = _pairs_half(S, B)
    for i in rng.permutation(len(Fv)):
        M = max(abs(int(u[i])), abs(int(v[i])))
        for t in range(1, B // (M * M) + 1):
            m = t * t * int(Fv[i])
            if S.delta > 0:
                for y in range(0, math.isqrt(m // S.delta) + 1):
                    r = m - S.delta * y * y
                    x = math.isqrt(r)
                    if x * x == r and math.gcd(math.gcd(x, y), t) == 1:
                        out.append((x, y, int(u[i]), int(v[i]), t))
            else:
                d = -S.delta
                for y in range(0, math.isqrt(B * B // d) + 1):
                    r = m + d * y * y
                    if r < 0:
                        continue
                    x = math.isqrt(r)
                    if x * x == r and math.gcd(math.gcd(x, y), t) == 1 \
                            and x + math.isqrt(y * y * d) + (y > 0) <= B:
                        out.append((x, y, int(u[i]), int(v[i]), t))
            if len(out) >= limit:
                return out[:limit]
    return out


# ------------------------------------------------------------ unit orbits

def unit_orbit_count(pell: PellSolution, alpha_abs: float, alphabar_abs: float, B: float) -> int:
    """#{k : |eps^k alpha| <= B and |eps^-k alphabar| <= B}."""
    if alpha_abs <= 0 or alphabar_abs <= 0:
        raise ValueError("zero norm")
    le = pell.eps_log
    tol = 1e-9
    hi = math.log(B / alpha_abs) / le
    lo = math.log(alphabar_abs / B) / le
    n = math.floor(hi + tol) - math.ceil(lo - tol) + 1
    return max(n, 0)


# ------------------------------------------------------------------ series

@dataclass
class CountSeries:
    surface: str
    grid: list  # (B, N, seconds)
    method: str

    def __post_init__(self):
        Bs = [g[0] for g in self.grid]
        if any(b2 <= b1 for b1, b2 in zip(Bs, Bs[1:])):
            raise ValueError("grid must be strictly increasing")


def count_series(S: ChateletSurface, B_grid, method: str = "fast", workers: int = 1,
                 ceiling: int = DEFAULT_BRUTE_CEILING) -> CountSeries:
    grid = []
    for B in sorted(B_grid):
        t0 = time.perf_counter()
        if method == "brute":
            n = count_brute(S, B, ceiling)
        else:
            n = count_fast(S, B, workers)
        grid.append((int(B), n, time.perf_counter() - t0))
    return CountSeries(S.label, grid, method)


class _NoPoints:
    def __repr__(self):
        return "NO_POINTS"


NO_POINTS = _NoPoints()


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    residual: float


def fit_exponent(series):
    """Least-squares slope of log(N/B) against log log B; NO_POINTS if nothing counted."""
    grid = series.grid if isinstance(series, CountSeries) else series
    pts = [(B, N) for B, N, *_ in grid if N > 0 and B > math.e]
    if len(pts) < 2:
        return NO_POINTS
    x = np.array([math.log(math.log(B)) for B, _ in pts])
    y = np.array([math.log(N / B) for B, N in pts])
    slope, icpt = np.polyfit(x, y, 1)
    res = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    return ExponentFit(float(slope), res)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
