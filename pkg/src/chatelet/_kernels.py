"""numba kernels for the hot loops (point counts, Hooley sweeps)."""
import numpy as np
from numba import njit


@njit(cache=True)
def _rho_pk(p, k, chi_tab, bad_p, bad_tab):
    # number of square roots of -delta mod p^k
    if k == 0:
        return 1
    for i in range(bad_p.shape[0]):
        if bad_p[i] == p:
            if k < bad_tab.shape[1]:
                return bad_tab[i, k]
            return bad_tab[i, bad_tab.shape[1] - 1]
    return 1 + chi_tab[p % chi_tab.shape[0]]


@njit(cache=True)
def h1_count_kernel(B, Ms, fptr, fprimes, fexps, spf, chi_tab, bad_p, bad_tab, weight, hist):
    """Accumulate weight * sum_g rho(t^2 F / g^2) into hist[t*M^2].

    One row per (u, v) pair: F's factorisation is fprimes/fexps[fptr[i]:fptr[i+1]].
    """
    npairs = Ms.shape[0]
    for i in range(npairs):
        M2 = Ms[i] * Ms[i]
        T = B // M2
        lo = fptr[i]
        hi = fptr[i + 1]
        for t in range(1, T + 1):
            S = 1
            # primes of t
            r = t
            while r > 1:
                p = spf[r]
                a = 0
                while r % p == 0:
                    r //= p
                    a += 1
                b = 0
                for j in range(lo, hi):
                    if fprimes[j] == p:
                        b = fexps[j]
                S *= _rho_pk(p, 2 * a + b, chi_tab, bad_p, bad_tab)
                if S == 0:
                    break
            if S == 0:
                continue
            # primes of F not dividing t
            for j in range(lo, hi):
                p = fprimes[j]
                if t % p == 0:
                    continue
                b = fexps[j]
                L = 0
                for jj in range(b // 2 + 1):
                    L += _rho_pk(p, b - 2 * jj, chi_tab, bad_p, bad_tab)
                S *= L
                if S == 0:
                    break
            if S != 0:
                hist[t * M2] += weight * S


@njit(cache=True)
def divisor_csr(N):
    """Sorted divisor lists of 1..N in CSR form."""
    cnt = np.zeros(N + 2, dtype=np.int64)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            cnt[m] += 1
    ptr = np.zeros(N + 2, dtype=np.int64)
    for n in range(1, N + 1):
        ptr[n + 1] = ptr[n] + cnt[n]
    fill = ptr.copy()
    divs = np.empty(ptr[N + 1], dtype=np.int64)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            divs[fill[m]] = d
            fill[m] += 1
    return ptr, divs


@njit(cache=True)
def hooley_arrays(N, chi_tab):
    """(Delta(n), Delta(n, chi), tau(n)) for n <= N, closed windows [D, 2D]."""
    ptr, divs = divisor_csr(N)
    dl = np.zeros(N + 1, dtype=np.int64)
    dt = np.zeros(N + 1, dtype=np.int64)
    tau = np.zeros(N + 1, dtype=np.int64)
    m = chi_tab.shape[0]
    for n in range(1, N + 1):
        lo = ptr[n]
        hi = ptr[n + 1]
        k = hi - lo
        tau[n] = k
        # untwisted: best window starts at a divisor
        best = 0
        j = lo
        for i in range(lo, hi):
            if j < i:
                j = i
            while j + 1 < hi and divs[j + 1] <= 2 * divs[i]:
                j += 1
            if j - i + 1 > best:
                best = j - i + 1
        dl[n] = best
        # twisted: every window set arises for D in {d, d/2} or between them
        pre = np.zeros(k + 1, dtype=np.int64)
        for i in range(k):
            pre[i + 1] = pre[i] + chi_tab[divs[lo + i] % m]
        # candidate D (doubled to stay integral): 2d and d, and midpoints
        cands = np.empty(4 * k, dtype=np.int64)
        for i in range(k):
            cands[2 * i] = 2 * divs[lo + i]
            cands[2 * i + 1] = divs[lo + i]
        cands[:2 * k].sort()
        nc = 2 * k
        for i in range(2 * k - 1):
            cands[nc] = cands[i] + cands[i + 1]  # this is 2*midpoint*2 -> scaled by 4
            nc += 1
        bestt = 0
        for c in range(nc):
            # window [D, 2D] with D = cands[c]/2 (first 2k) or cands[c]/4 (midpoints)
            if c < 2 * k:
                num = cands[c]
                den = 2
            else:
                num = cands[c]
                den = 4
            # divisors d with num <= d*den <= 2*num
            a = 0
            while a < k and divs[lo + a] * den < num:
                a += 1
            b = a
            while b < k and divs[lo + b] * den <= 2 * num:
                b += 1
            s = pre[b] - pre[a]
            if s < 0:
                s = -s
            if s > bestt:
                bestt = s
        dt[n] = bestt
    return dl, dt, tau


@njit(cache=True)
def trial_divide(vals, primes, width):
    """Strip primes from each value; returns (primes, exps, counts, cofactors)."""
    n = vals.shape[0]
    fp = np.zeros((n, width), dtype=np.int64)
    fe = np.zeros((n, width), dtype=np.int64)
    cnt = np.zeros(n, dtype=np.int64)
    cof = np.empty(n, dtype=np.int64)
    for i in range(n):
        r = vals[i]
        for j in range(primes.shape[0]):
            p = primes[j]
            if p * p > r:
                break
            if r % p == 0:
                e = 0
                while r % p == 0:
                    r //= p
                    e += 1
                fp[i, cnt[i]] = p
                fe[i, cnt[i]] = e
                cnt[i] += 1
        # remaining r is 1, a prime (if below the last prime squared) or unfactored
        if r > 1 and r <= primes[primes.shape[0] - 1] ** 2:
            fp[i, cnt[i]] = r
            fe[i, cnt[i]] = 1
            cnt[i] += 1
            r = 1
        cof[i] = r
    return fp, fe, cnt, cof


@njit(cache=True)
def _inv_mod(a, p):
    # p prime
    r = 1
    e = p - 2
    b = a % p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def _polymulmod(a, b, f, d, p, out):
    # a, b of length d (degree < d), f monic of degree d (length d+1); out length d
    prod = np.zeros(2 * d, dtype=np.int64)
    for i in range(d):
        if a[i] == 0:
            continue
        for j in range(d):
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        if c != 0:
            for j in range(d + 1):
                prod[k - d + j] = (prod[k - d + j] - c * f[j]) % p
    for i in range(d):
        out[i] = prod[i]


@njit(cache=True)
def _root_count(coeffs, p):
    n = coeffs.shape[0]
    f = np.zeros(n, dtype=np.int64)
    d = -1
    for i in range(n):
        f[i] = coeffs[i] % p
        if f[i] != 0:
            d = i
    if d == -1:
        return p
    if d == 0:
        return 0
    inv = _inv_mod(f[d], p)
    fm = np.zeros(d + 1, dtype=np.int64)
    for i in range(d + 1):
        fm[i] = f[i] * inv % p
    if d == 1:
        return 1
    # r = x^p mod fm
    r = np.zeros(d, dtype=np.int64)
    r[0] = 1
    base = np.zeros(d, dtype=np.int64)
    base[1] = 1
    tmp = np.zeros(d, dtype=np.int64)
    e = p
    while e > 0:
        if e & 1:
            _polymulmod(r, base, fm, d, p, tmp)
            r[:] = tmp
        e >>= 1
        if e > 0:
            _polymulmod(base, base, fm, d, p, tmp)
            base[:] = tmp
    # g = r - x
    g = r.copy()
    g[1] = (g[1] - 1) % p
    # gcd(fm, g)
    a = fm.copy()
    da = d
    b = np.zeros(d + 1, dtype=np.int64)
    db = -1
    for i in range(d):
        b[i] = g[i]
        if g[i] != 0:
            db = i
    if db == -1:
        return d
    while db >= 0:
        # a = a mod b
        ib = _inv_mod(b[db], p)
        while da >= db:
            c = a[da] * ib % p
            if c != 0:
                for j in range(db + 1):
                    a[da - db + j] = (a[da - db + j] - c * b[j]) % p
            da -= 1
            while da >= 0 and a[da] == 0:
                da -= 1
        a, b = b, a
        da, db = db, da
    return da


@njit(cache=True)
def poly_root_counts(coeffs, primes):
    out = np.zeros(primes.shape[0], dtype=np.int64)
    for i in range(primes.shape[0]):
        out[i] = _root_count(coeffs, primes[i])
    return out


@njit(cache=True)
def roots_by_scan(coeffs, primes, maxroots):
    """Roots of g mod p (coeffs lowest degree first) by direct scan; -1 padding.
    A row with nroots = -1 means g vanishes identically mod p."""
    n = primes.shape[0]
    out = np.full((n, maxroots), -1, dtype=np.int64)
    nr = np.zeros(n, dtype=np.int64)
    deg = coeffs.shape[0] - 1
    for i in range(n):
        p = primes[i]
        allzero = True
        for c in coeffs:
            if c % p != 0:
                allzero = False
                break
        if allzero:
            nr[i] = -1
            continue
        for t in range(p):
            acc = 0
            for j in range(deg, -1, -1):
                acc = (acc * t + coeffs[j]) % p
            if acc == 0:
                if nr[i] < maxroots:
                    out[i, nr[i]] = t
                nr[i] += 1
    return out, nr


@njit(cache=True)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def lod_sieve(X, Fc, primes, roots, nroots, a0, D, S, zero_g):
    """S[d] += #{(x, y) in [-X, X]^2 : F(x, y) != 0, d | F(x, y), gcd(x, y, d) = 1}
    for d <= D; zero_g[g] counts points with F(x, y) = 0 and gcd(x, y) = g
    ((0, 0) goes to index 0).

    F(x, y) = sum Fc[i] x^i y^(deg-i).  A prime p divides F(x, y) with p not
    dividing gcd(x, y) iff y = r x mod p for a root r of F(1, t) (x a unit mod p)
    or p | x and p | F(0, 1)."""
    W = 2 * X + 1
    deg = Fc.shape[0] - 1
    vals = np.empty(W, dtype=np.int64)
    width = 24
    fp = np.zeros((W, width), dtype=np.int64)
    fe = np.zeros((W, width), dtype=np.int64)
    cnt = np.zeros(W, dtype=np.int64)
    divs = np.empty(1 << 15, dtype=np.int64)
    nprimes = primes.shape[0]
    for x in range(-X, X + 1):
        for j in range(W):
            y = j - X
            acc = 0
            for i in range(deg, -1, -1):
                acc = acc * x + Fc[i] * y ** (deg - i)
            vals[j] = abs(acc)
            cnt[j] = 0
        for ip in range(nprimes):
            p = primes[ip]
            xm = x % p
            if xm == 0:
                if a0 % p != 0:
                    continue
                for j in range(W):
                    y = j - X
                    if y % p == 0 or vals[j] == 0:
                        continue
                    e = 0
                    while vals[j] % p == 0:
                        vals[j] //= p
                        e += 1
                    if e > 0:
                        fp[j, cnt[j]] = p
                        fe[j, cnt[j]] = e
                        cnt[j] += 1
                continue
            nr = nroots[ip]
            if nr == -1:
                nr = p
            for k in range(nr):
                r = roots[ip, k] if nroots[ip] != -1 else k
                y0 = (r * xm) % p
                start = (y0 - (-X)) % p  # index j with j - X = y0 mod p
                for j in range(start, W, p):
                    if vals[j] == 0:
                        continue
                    e = 0
                    while vals[j] % p == 0:
                        vals[j] //= p
                        e += 1
                    if e > 0:
                        fp[j, cnt[j]] = p
                        fe[j, cnt[j]] = e
                        cnt[j] += 1
        for j in range(W):
            y = j - X
            g = _gcd(x, y)
            acc = 0
            for i in range(deg, -1, -1):
                acc = acc * x + Fc[i] * y ** (deg - i)
            if acc == 0:
                zero_g[g] += 1
                continue
            # divisors <= D built from the recorded prime powers
            nd = 1
            divs[0] = 1
            for q in range(cnt[j]):
                p = fp[j, q]
                base = nd
                pk = 1
                for _ in range(fe[j, q]):
                    pk *= p
                    if pk > D:
                        break
                    for s in range(base):
                        v = divs[s] * pk
                        if v <= D:
                            divs[nd] = v
                            nd += 1
            for s in range(nd):
                S[divs[s]] += 1
