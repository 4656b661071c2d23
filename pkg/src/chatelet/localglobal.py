"""Local densities, the Manin exponent, torsor candidates, local solvability
and the vanishing verdict for the leading constant."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np

from .arith import (BinaryForm, GuardError, IntPoly, check_delta, contains_sqrt_minus_delta,
                    factorint, kronecker, kronecker_chi, primes_upto,
                    rational_sign_points, resultant)
from .counting import ChateletSurface
from .quadring import genus_characters, reduced_forms

DEFAULT_DEPTH_CEILING = 12
RHO_POLY_GUARD = 10**6
RHO_FORM_GUARD = 10**4


def _v(n: int, p: int) -> int:
    """p-adic valuation; infinity (a large sentinel) for n = 0."""
    if n == 0:
        return 1 << 30
    return int(gmpy2.remove(gmpy2.mpz(n), p)[1])


# --------------------------------------------------------------- densities

def rho_poly(f: IntPoly, m: int) -> int:
    """#{x mod m : f(x) = 0 mod m} by scanning all residues."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m > RHO_POLY_GUARD:
        raise GuardError(f"rho_poly scan refuses modulus {m}")
    x = np.arange(m, dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % m
    return int(np.count_nonzero(acc == 0))


def _taylor(g: IntPoly, z0: int) -> list:
    """Coefficients of g(z0 + s) in s, lowest first."""
    c = list(g.coeffs)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += z0 * c[j + 1]
    return c


def _chart_polys(F: BinaryForm):
    # chart 0: (z : 1), z in Z_p; chart 1: (1 : w), w in pZ_p
    return IntPoly(F.coeffs), F.swap().dehomogenize()


def _proj_count_pk(forms, p: int, js) -> int:
    """#{(u : v) in P^1(Z/p^K) : p^j_i | F_i(u, v)}, K = sum js."""
    K = sum(js)
    if K == 0:
        return 1
    active = [(_chart_polys(F), j) for F, j in zip(forms, js) if j > 0]
    total = 0
    for chart, k0 in ((0, 0), (1, 1)):
        polys = [(cp[chart], j) for cp, j in active]
        stack = [(0, k0)]
        while stack:
            z0, k = stack.pop()
            if k >= K:
                if all(g(z0) % p**j == 0 for g, j in polys):
                    total += 1
                continue
            decided, ok = True, True
            for g, j in polys:
                c = _taylor(g, z0)
                v0 = _v(c[0], p)
                P = min((_v(cj, p) + i * k for i, cj in enumerate(c) if i and cj), default=1 << 30)
                if v0 >= j and P >= j:
                    continue
                if v0 < j and v0 < P:
                    ok = False
                    break
                decided = False
            if not ok:
                continue
            if decided:
                total += p ** (K - k)
                continue
            step = p**k
            stack.extend((z0 + a * step, k + 1) for a in range(p))
    return total


def rho_form_vector(forms, d) -> int:
    """#{(u, v) mod m : gcd(u, v, m) = 1, d_i | F_i(u, v)} / phi(m), m = prod d_i:
    the number of points of P^1(Z/m) meeting the divisibility conditions."""
    d = [int(x) for x in d]
    if len(d) != len(forms) or any(x < 1 for x in d):
        raise ValueError("need one positive modulus per form")
    m = math.prod(d)
    if m > RHO_FORM_GUARD:
        raise GuardError(f"rho_form_vector refuses modulus {m}")
    return _rho_vec(tuple(forms), tuple(d))


def _rho_vec(forms, d) -> int:
    m = math.prod(d)
    out = 1
    for p in factorint(m):
        out *= _proj_count_pk(forms, p, [_v(x, p) for x in d])
        if out == 0:
            break
    return out


def rho_form_vector_brute(forms, d) -> int:
    """Oracle: direct scan of (u, v) mod m."""
    m = math.prod(int(x) for x in d)
    if m > 300:
        raise GuardError("brute scan limited to m <= 300")
    r = np.arange(m, dtype=np.int64)
    u, v = np.meshgrid(r, r, indexing="ij")
    u, v = u.ravel(), v.ravel()
    ok = np.gcd(np.gcd(u, v), m) == 1
    for F, di in zip(forms, d):
        ok &= F.eval_array(u, v) % int(di) == 0
    phi = sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)
    cnt = int(np.count_nonzero(ok))
    assert cnt % phi == 0
    return cnt // phi


# -------------------------------------------------------- Manin exponent

def manin_exponent(S: ChateletSurface) -> int:
    return 2 + sum(contains_sqrt_minus_delta(g, S.delta) for g, _ in S.factors)


def _root_counts(coeffs, primes):
    from ._kernels import poly_root_counts
    return poly_root_counts(np.array(coeffs, dtype=np.int64), primes.astype(np.int64))


@dataclass(frozen=True)
class XiPartial:
    X: int
    partial_sum: object  # gmpy2.mpq, exact
    slope: float
    grid: list  # (X_j, float partial sum)


def xi_partial(S: ChateletSurface, X: int, grid_points: int = 24) -> XiPartial:
    """sum_{p <= X} chi(p) rho_f(p) / p exactly, and its slope against log log X."""
    if X > 10**7:
        raise GuardError("xi_partial limited to X <= 10^7")
    ps = primes_upto(X)
    if len(ps) == 0:
        return XiPartial(X, gmpy2.mpq(0), float("nan"), [])
    rho = _root_counts(S.f.coeffs, ps)
    chi = np.array([kronecker_chi(S.delta, int(p)) for p in ps[:64]] +
                   [0] * max(0, len(ps) - 64), dtype=np.int64)
    if len(ps) > 64:
        from .arith import chi_table
        tab = chi_table(S.delta).astype(np.int64)
        chi[64:] = tab[ps[64:] % len(tab)]
    a = chi * rho
    nz = np.flatnonzero(a)

    def split(lo, hi):
        if hi - lo == 1:
            i = nz[lo]
            return gmpy2.mpz(int(a[i])), gmpy2.mpz(int(ps[i]))
        mid = (lo + hi) // 2
        n1, d1 = split(lo, mid)
        n2, d2 = split(mid, hi)
        return n1 * d2 + n2 * d1, d1 * d2

    exact = gmpy2.mpq(*split(0, len(nz))) if len(nz) else gmpy2.mpq(0)
    cum = np.cumsum(a / ps)
    lo = max(10.0, float(ps[0]))
    grid = []
    slope = float("nan")
    if X > lo * 10:
        xs = np.unique(np.geomspace(lo, X, grid_points).astype(np.int64))
        idx = np.searchsorted(ps, xs, side="right") - 1
        keep = idx >= 0
        xs, idx = xs[keep], idx[keep]
        vals = cum[idx]
        grid = [(int(x), float(y)) for x, y in zip(xs, vals)]
        slope = float(np.polyfit(np.log(np.log(xs.astype(float))), vals, 1)[0])
    return XiPartial(X, exact, slope, grid)


# ------------------------------------------------------------------ torsors

@dataclass(frozen=True)
class TorsorSpec:
    """x_i^2 + delta*y_i^2 = alpha_i * c_i * F_i(u, v), c_1 the signed content, c_i = 1
    otherwise; F_i the primitive factor forms (the extra v for cubic f)."""
    delta: int
    forms: tuple
    alphas: tuple
    content: int = 1

    @property
    def r(self) -> int:
        return len(self.forms)

    def twisted(self) -> list:
        """The forms alpha_i c_i F_i."""
        out = []
        for i, (F, a) in enumerate(zip(self.forms, self.alphas)):
            out.append(F.scale(a * (self.content if i == 0 else 1)))
        return out

    def validate(self):
        prod = math.prod(self.alphas)
        if prod <= 0 or math.isqrt(prod) ** 2 != prod:
            raise ValueError("product of alphas must be a square")
        for i, a in enumerate(self.alphas):
            for q in factorint(abs(a)):
                if kronecker_chi(self.delta, q) != -1:
                    raise ValueError("alpha supported off inert primes")
            R = math.prod(resultant(self.forms[i], F) for j, F in enumerate(self.forms) if j != i)
            if R % a:
                raise ValueError("alpha_i must divide the resultants")
        return self


def surface_torsor(S: ChateletSurface) -> TorsorSpec:
    """The surface itself as a one-factor system x^2 + delta*y^2 = F(u, v)."""
    return TorsorSpec(S.delta, (S.F,), (1,), 1)


def torsor_candidates(S: ChateletSurface) -> list:
    forms = tuple(S.forms)
    r = len(forms)
    if r == 1:
        return [TorsorSpec(S.delta, forms, (1,), S.content)]
    res = {}
    for i in range(r):
        for j in range(i + 1, r):
            res[i, j] = res[j, i] = resultant(forms[i], forms[j])
    allowed = []
    for i in range(r):
        R = math.prod(res[i, j] for j in range(r) if j != i)
        allowed.append(sorted(q for q in factorint(abs(R)) if kronecker_chi(S.delta, q) == -1))
    choices = []
    for i in range(r):
        opts = []
        for k in range(len(allowed[i]) + 1):
            for sub in itertools.combinations(allowed[i], k):
                m = math.prod(sub)
                opts += [m, -m]
        choices.append(sorted(opts, key=lambda a: (abs(a), a < 0)))
    out = []
    for alphas in itertools.product(*choices):
        prod = math.prod(alphas)
        if prod > 0 and math.isqrt(prod) ** 2 == prod:
            out.append(TorsorSpec(S.delta, forms, tuple(alphas), S.content))
    out.sort(key=lambda T: (sum(abs(a) for a in T.alphas), [a < 0 for a in T.alphas], T.alphas))
    return out


# ---------------------------------------------------------- local solvability

def hilbert_symbol(a: int, b: int, p: int) -> int:
    """(a, b)_p for nonzero integers a, b."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    al, u = _v(a, p), a // p ** _v(a, p)
    be, w = _v(b, p), b // p ** _v(b, p)
    if p != 2:
        s = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
        if be % 2:
            s *= kronecker(u, p)
        if al % 2:
            s *= kronecker(w, p)
        return s

    def eps(x):
        return ((x - 1) // 2) % 2

    def omg(x):
        return ((x * x - 1) // 8) % 2
    e = eps(u) * eps(w) + al * omg(w) + be * omg(u)
    return -1 if e % 2 else 1


def _unit_classes(p: int) -> list:
    # (u, v) stays primitive, so only unit rescalings are allowed
    if p == 2:
        return [1, 3, 5, 7]
    n = 2
    while kronecker(n, p) != -1:
        n += 1
    return [1, n]


@dataclass
class LocalReport:
    place: object  # prime or "real"
    status: str  # "solvable" | "unsolvable" | "undecided"
    witness: object = None
    density: object = None

    @property
    def solvable(self) -> bool:
        return self.status == "solvable"


def _hensel_depth(T: TorsorSpec, p: int, depth: int | None) -> int:
    if depth is not None:
        return depth
    F = T.forms[0]
    for G in T.forms[1:]:
        F = F * G
    data = abs(IntPoly(F.coeffs).discriminant() or 1) * abs(F.coeffs[-1] if F.coeffs else 1)
    data *= abs(F.swap().coeffs[-1] if F.swap().coeffs else 1) or 1
    data *= abs(math.prod(T.alphas)) * abs(T.content) * 4 * abs(T.delta)
    return 2 * _v(data, p) + 3 + (4 if p == 2 else 0)


def _node_status(polys, lam_pows, p, z0, k, nd):
    """'ok' | 'dead' | 'split' for the node z = z0 + p^k Z_p.
    polys: (g_i(z), degree_i, twist_i); the value tested is twist_i*lam^d_i*g_i(z)."""
    c_need = 3 if p == 2 else 1
    free = 0
    for (g, deg, tw), lp in zip(polys, lam_pows):
        c = _taylor(g, z0)
        v0 = _v(c[0], p)
        terms = [(_v(cj, p) + i * k, i) for i, cj in enumerate(c) if i and cj]
        P = min((t for t, _ in terms), default=1 << 30)
        if v0 < (1 << 29) and v0 + c_need <= P:
            if hilbert_symbol(tw * lp * c[0], nd, p) != 1:
                return "dead"
            continue
        if v0 >= P and terms:
            mins = [i for t, i in terms if t == P]
            if mins == [1]:
                free += 1
                continue
        return "split"
    return "ok" if free <= 1 else "split"


def _local_finite(T: TorsorSpec, p: int, depth: int | None) -> LocalReport:
    nd = -T.delta
    maxk = _hensel_depth(T, p, depth)
    tw = T.twisted()
    undecided = False
    for lam in _unit_classes(p):
        for chart, k0 in ((0, 0), (1, 1)):
            polys = []
            for G in tw:
                g = _chart_polys(G)[chart]
                polys.append((g, G.degree, 1))
            lam_pows = [lam ** G.degree for G in tw]
            stack = [(0, k0)]
            while stack:
                z0, k = stack.pop()
                st = _node_status(polys, lam_pows, p, z0, k, nd)
                if st == "ok":
                    return LocalReport(p, "solvable", {"chart": chart, "z0": z0, "k": k, "lam": lam})
                if st == "dead":
                    continue
                if k >= maxk:
                    undecided = True
                    continue
                stack.extend((z0 + a * p**k, k + 1) for a in range(p))
    return LocalReport(p, "undecided" if undecided else "unsolvable",
                       {"depth": maxk} if undecided else None)


def verify_witness(T: TorsorSpec, rep: LocalReport) -> bool:
    """Re-check a stored witness independently of the search that produced it."""
    if not rep.solvable:
        return False
    if rep.place == "real":
        u, v = rep.witness["u"], rep.witness["v"]
        return all(G(u, v) > 0 for G in T.twisted()) or T.delta < 0
    w = rep.witness
    p = rep.place
    polys = [(_chart_polys(G)[w["chart"]], G.degree, 1) for G in T.twisted()]
    lam_pows = [w["lam"] ** G.degree for G in T.twisted()]
    return _node_status(polys, lam_pows, p, w["z0"], w["k"], -T.delta) == "ok"


def _local_real(T: TorsorSpec) -> LocalReport:
    if T.delta < 0:
        return LocalReport("real", "solvable", {"u": 1, "v": 0, "note": "indefinite norm form"})
    tw = T.twisted()
    pts = rational_sign_points([G.dehomogenize() for G in tw])
    for z in pts:
        fr = Fraction(z)
        u, v = fr.numerator, fr.denominator
        for s in (1, -1):
            if all(G(s * u, s * v) > 0 for G in tw):
                return LocalReport("real", "solvable", {"u": s * u, "v": s * v})
    return LocalReport("real", "unsolvable")


def local_solvable(T: TorsorSpec, place, depth: int | None = None) -> LocalReport:
    if place == "real":
        return _local_real(T)
    p = int(place)
    if not gmpy2.is_prime(p):
        raise ValueError("place must be a prime or 'real'")
    return _local_finite(T, p, depth)


# ---------------------------------------------------------------- L_p, nabla

def _lp_exps(S: ChateletSurface, c, p):
    e = [_v(int(x), p) for x in c]
    e[0] += _v(S.content, p)
    return e


def local_factor_Lp(S: ChateletSurface, c, p: int, max_depth: int = DEFAULT_DEPTH_CEILING) -> Fraction:
    """L_p(c) = sum_i chi(p)^|i| rho_F((p^(e+i))) / p^|i| summed exactly: past the
    stabilisation index every coordinate tail is geometric."""
    forms = tuple(S.forms)
    r = len(forms)
    c = list(c) if c is not None else [1] * r
    if len(c) != r:
        raise ValueError("c must have one entry per factor form")
    e = _lp_exps(S, c, p)
    chi = kronecker_chi(S.delta, p)
    data = abs(S.f.discriminant()) * abs(S.f.lc) * abs(S.content)
    for i in range(r):
        for j in range(i + 1, r):
            data *= abs(resultant(forms[i], forms[j]))
    J0 = 2 * _v(data, p) + 2

    @lru_cache(maxsize=None)
    def g(js):
        return _proj_count_pk(forms, p, js)

    def stable(J):
        # rho constant in each coordinate from J-1 on, for all others in the box
        for i in range(r):
            for rest in itertools.product(range(J + 1), repeat=r - 1):
                a = list(rest[:i]) + [J] + list(rest[i:])
                b = list(rest[:i]) + [J - 1] + list(rest[i:])
                a2 = list(rest[:i]) + [J - 2] + list(rest[i:])
                ea = tuple(x + y for x, y in zip(e, a))
                eb = tuple(x + y for x, y in zip(e, b))
                ec = tuple(x + y for x, y in zip(e, a2))
                if not (g(ea) == g(eb) == g(ec)):
                    return False
        return True

    J = max(J0, 2)
    while not stable(J):
        J += 1
        if J > max_depth:
            raise GuardError(f"L_p stabilisation not reached within depth {max_depth} at p={p}")
    tail = Fraction(1) / (1 - Fraction(chi, p))
    total = Fraction(0)
    for idx in itertools.product(range(J + 1), repeat=r):
        n = sum(idx)
        val = g(tuple(x + y for x, y in zip(e, idx)))
        if not val:
            continue
        term = Fraction(chi**n * val, p**n)
        for x in idx:
            if x == J:
                term *= tail
        total += term
    return total


@dataclass(frozen=True)
class NablaResult:
    value: Fraction  # truncated double sum
    tail_bound: Fraction  # size of the last n-block summed
    zero: bool  # from local solvability at primes dividing 2*delta
    n_max: int


def _discriminant_primes(delta: int) -> list:
    return sorted(factorint(4 * abs(delta)))


def nabla(S: ChateletSurface, c=None, N: int | None = None) -> NablaResult:
    """Genus-weighted local density at the primes dividing the discriminant 4|delta|.
    Residues a run mod D = 4|delta| and n over integers supported on primes of 2*delta
    with n*D <= N (default: the largest n with (n*D)^2 <= 4*10^6)."""
    forms = list(S.forms)
    r = len(forms)
    c = [1] * r if c is None else [int(x) for x in c]
    D = 4 * abs(S.delta)
    ells = _discriminant_primes(S.delta)
    if N is None:
        N = max(D, math.isqrt(4 * 10**6))
    G = reduced_forms(S.delta)
    gens = [(gc.q1, gc.q2) for gc in genus_characters(G)]
    # forms with content folded into the first
    tw = [F.scale(S.content) if i == 0 else F for i, F in enumerate(forms)]
    cinv = []
    for x in c:
        if math.gcd(x, D) != 1:
            raise ValueError("c entries must be coprime to 2*delta")
        cinv.append(pow(x, -1, D))
    chi_D = [kronecker(-4 * S.delta, a) for a in range(D)]

    ns = [1]
    for l in ells:
        ns = [n * l**k for n in ns for k in range(64) if n * l**k * D <= N]
    ns.sort()
    total = Fraction(0)
    last = Fraction(0)
    for n in ns:
        m = n * D
        rr = np.arange(m, dtype=np.int64)
        u, v = np.meshgrid(rr, rr, indexing="ij")
        u, v = u.ravel(), v.ravel()
        ok = np.ones(len(u), dtype=bool)
        for l in ells:
            ok &= (u % l != 0) | (v % l != 0)
        vals = [F.eval_array(u[ok], v[ok]) for F in tw]
        keep = np.ones(len(vals[0]), dtype=bool)
        for x in vals:
            keep &= x != 0
        vals = [x[keep] for x in vals]
        # Delta-part of each F_i and of the product
        parts = []
        odd = []
        for x in vals:
            npart = np.ones(len(x), dtype=np.int64)
            rest = np.abs(x).copy()
            for l in ells:
                while True:
                    dv = rest % l == 0
                    if not dv.any():
                        break
                    rest[dv] //= l
                    npart[dv] *= l
            parts.append(npart)
            odd.append(np.sign(x) * rest)
        prod_part = np.ones(len(vals[0]), dtype=np.int64)
        for x in parts:
            prod_part *= x
        sel = prod_part == n
        last = Fraction(0)
        if not sel.any():
            continue
        a_cls = [((o[sel] % D) * ci) % D for o, ci in zip(odd, cinv)]
        weight = np.ones(int(sel.sum()), dtype=np.int64)
        for a in a_cls:
            weight *= 1 + np.array(chi_D, dtype=np.int64)[a]
        if not weight.any():
            continue
        a_prod = np.ones(len(weight), dtype=np.int64)
        for a in a_cls:
            a_prod = (a_prod * a) % D
        gsum = np.zeros(len(weight), dtype=np.int64)
        for q1, q2 in gens:
            n_q2 = math.prod(l ** _v(n, l) for l in ells if q2 % l == 0)
            n_q1 = math.prod(l ** _v(n, l) for l in ells if q1 % l == 0)
            const = kronecker(q1, n_q2) * kronecker(q2, n_q1)
            chi_q1 = np.array([kronecker(q1, int(a)) for a in range(D)], dtype=np.int64)
            gsum += const * chi_q1[a_prod]
        s = int((weight * gsum).sum())
        last = Fraction(s, m * m)
        total += last
    T = TorsorSpec(S.delta, tuple(forms), tuple(c), S.content)
    zero = any(local_solvable(T, l).status == "unsolvable" for l in ells)
    return NablaResult(total, abs(last), zero, ns[-1])


# ------------------------------------------------------------------ verdict

@dataclass
class Verdict:
    constant_zero: bool | None  # None when undecided
    witness: TorsorSpec | None = None
    obstructions: list = field(default_factory=list)  # (alphas, [places])
    reports: dict = field(default_factory=dict)  # alphas -> [LocalReport]
    undecided: bool = False


def bad_places(S: ChateletSurface, T: TorsorSpec) -> list:
    data = 2 * abs(S.delta) * abs(math.prod(T.alphas)) * abs(S.content)
    data *= abs(S.f.discriminant()) * abs(S.f.lc)
    fs = T.forms
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            data *= abs(resultant(fs[i], fs[j]))
    return ["real"] + sorted(factorint(data))


def torsor_reports(S: ChateletSurface, T: TorsorSpec, depth: int | None = None) -> list:
    return [local_solvable(T, pl, depth) for pl in bad_places(S, T)]


def constant_verdict(S: ChateletSurface, depth: int | None = None) -> Verdict:
    out = Verdict(constant_zero=True)
    for T in torsor_candidates(S):
        reps = torsor_reports(S, T, depth)
        out.reports[T.alphas] = reps
        if all(r.solvable for r in reps):
            out.constant_zero = False
            out.witness = T
            out.obstructions = []
            return out
        bad = [r.place for r in reps if r.status == "unsolvable"]
        if bad:
            out.obstructions.append((T.alphas, bad))
        else:
            out.undecided = True
    if out.undecided:
        out.constant_zero = None
    return out


def surface_local_reports(S: ChateletSurface, plimit: int = 100, depth: int | None = None) -> list:
    """X(Q_p) checks for the surface itself at the real place and all p <= plimit
    (plus the bad primes)."""
    T = surface_torsor(S)
    places = ["real"] + sorted(set(int(p) for p in primes_upto(plimit)) |
                               set(p for p in bad_places(S, T) if p != "real"))
    return [local_solvable(T, pl, depth) for pl in places]


def find_point(S: ChateletSurface, H: int):
    """Smallest-height rational point (x, y, z) = (x/t, y/t, u/v) with all of
    |x|, |y|, |u|, |v|, t bounded by H, or None.  Returns (x, y, u, v, t)."""
    for M in range(0, H + 1):
        ring = [(u, M) for u in range(-M, M + 1)] + [(M, v) for v in range(0, M)]
        for u, v in sorted(ring, key=lambda uv: (uv[1] == 0, abs(uv[0]), uv[0] < 0)):
            if math.gcd(u, v) != 1:
                continue
            Fv = S.F(u, v)
            if Fv == 0 or (S.delta > 0 and Fv < 0):
                continue
            for t in range(1, max(1, H // max(1, M * M)) + 1):
                m = t * t * Fv
                if S.delta > 0:
                    for y in range(0, math.isqrt(m // S.delta) + 1):
                        rr = m - S.delta * y * y
                        x = math.isqrt(rr)
                        if x * x == rr and math.gcd(math.gcd(x, y), t) == 1:
                            return (x, y, u, v, t)
                else:
                    d = -S.delta
                    for y in range(0, H + 1):
                        rr = m + d * y * y
                        if rr < 0:
                            continue
                        x = math.isqrt(rr)
                        if x * x == rr and math.gcd(math.gcd(x, y), t) == 1:
                            return (x, y, u, v, t)
    return None
