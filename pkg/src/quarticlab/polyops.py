"""Univariate polynomial kernels over a field context.

Polynomials are plain lists of raw field values in ascending order with no
trailing zeros; the zero polynomial is ``[]``.  Every function takes the
field context ``F`` first and only uses its raw-value methods, so the same
code runs over prime fields, tabulated extensions and nested towers.
"""

from __future__ import annotations

import random


def trim(a, zero):
    n = len(a)
    while n and a[n - 1] == zero:
        n -= 1
    if n != len(a):
        del a[n:]
    return a


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    fadd = F.add
    for i, c in enumerate(b):
        out[i] = fadd(out[i], c)
    return trim(out, F.zero)


def sub(F, a, b):
    fsub, fneg = F.sub, F.neg
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a):
            out.append(fsub(a[i], b[i]) if i < len(b) else a[i])
        else:
            out.append(fneg(b[i]))
    return trim(out, F.zero)


def neg(F, a):
    return [F.neg(c) for c in a]


def scale(F, a, c):
    if c == F.zero:
        return []
    fmul = F.mul
    return trim([fmul(x, c) for x in a], F.zero)


def mul(F, a, b):
    if not a or not b:
        return []
    zero = F.zero
    fadd, fmul = F.add, F.mul
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == zero:
            continue
        for j, y in enumerate(b):
            if y != zero:
                out[i + j] = fadd(out[i + j], fmul(x, y))
    return trim(out, zero)


def shift(F, a, k):
    return [F.zero] * k + list(a) if a else []


def divmod_(F, a, b):
    """Quotient and remainder of ``a`` by nonzero ``b``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    zero = F.zero
    db = len(b) - 1
    r = list(a)
    if len(r) <= db:
        return [], r
    fsub, fmul = F.sub, F.mul
    inv_lc = F.inv(b[-1])
    quo = [zero] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == zero:
            continue
        c = fmul(c, inv_lc)
        quo[k - db] = c
        for j in range(db):
            bj = b[j]
            if bj != zero:
                r[k - db + j] = fsub(r[k - db + j], fmul(c, bj))
        r[k] = zero
    return trim(quo, zero), trim(r[:db], zero)


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def monic(F, a):
    if not a or a[-1] == F.one:
        return list(a)
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b):
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a, b = list(a), list(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def xgcd(F, a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], [], []
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def mulmod(F, a, b, m):
    return mod(F, mul(F, a, b), m)


def powmod(F, a, e, m):
    result = [F.one]
    base = mod(F, a, m)
    while e:
        if e & 1:
            result = mulmod(F, result, base, m)
        e >>= 1
        if e:
            base = mulmod(F, base, base, m)
    return mod(F, result, m)


def frobenius_mod(F, a, m, times=1):
    """``a^(|F|^times) mod m``, using coefficient-wise Frobenius when cheap."""
    return powmod(F, a, F.q ** times, m)


def derivative(F, a):
    out = []
    p = F.p
    for i in range(1, len(a)):
        k = i % p
        out.append(F.mul(a[i], F.from_int(k)) if k else F.zero)
    return trim(out, F.zero)


def evaluate(F, a, x):
    acc = F.zero
    fadd, fmul = F.add, F.mul
    for c in reversed(a):
        acc = fadd(fmul(acc, x), c)
    return acc


def pth_root_poly(F, a):
    """Inverse of ``g -> g^p`` for a polynomial whose exponents are all multiples of p."""
    p = F.p
    return trim([F.pth_root(a[i]) for i in range(0, len(a), p)], F.zero)


def is_one(F, a):
    return len(a) == 1 and a[0] == F.one


def squarefree(F, f):
    """Monic squarefree factors with multiplicities (input need not be monic)."""
    if not f:
        raise ValueError("squarefree decomposition of the zero polynomial")
    f = monic(F, f)
    groups: dict[int, list] = {}

    def record(g, m):
        if len(g) > 1:
            groups[m] = mul(F, groups[m], g) if m in groups else g

    def rec(f, factor):
        if len(f) <= 1:
            return
        df = derivative(F, f)
        if not df:
            rec(pth_root_poly(F, f), factor * F.p)
            return
        c = gcd(F, f, df)
        w = divmod_(F, f, c)[0]
        i = 1
        while len(w) > 1:
            y = gcd(F, w, c)
            record(monic(F, divmod_(F, w, y)[0]), i * factor)
            w = y
            c = divmod_(F, c, y)[0]
            i += 1
        if len(c) > 1:
            rec(pth_root_poly(F, monic(F, c)), factor * F.p)

    rec(f, 1)
    return sorted(((monic(F, g), m) for m, g in groups.items()), key=lambda gm: gm[1])


def is_irreducible(F, f):
    """Ben-Or test: ``gcd(f, t^(q^k) - t) = 1`` for every ``k <= deg/2``."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(F, f)
    x = [F.zero, F.one]
    h = x
    q = F.q
    for _ in range(n // 2):
        h = powmod(F, h, q, f)
        if len(gcd(F, f, sub(F, h, x))) > 1:
            return False
    return True


def distinct_degree(F, f):
    """Split squarefree monic ``f`` into products of equal-degree irreducibles."""
    out = []
    x = [F.zero, F.one]
    h = x
    q = F.q
    d = 0
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, q, f)
        g = gcd(F, f, sub(F, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if len(f) > 1:
        out.append((monic(F, f), len(f) - 1))
    return out


def _trace_poly(F, a, m):
    """Absolute trace map ``a + a^2 + ... + a^(2^(n-1))`` modulo m (characteristic 2)."""
    t = mod(F, a, m)
    acc = t
    for _ in range(F.degree - 1):
        t = mulmod(F, t, t, m)
        acc = add(F, acc, t)
    return acc


def equal_degree(F, f, d, rng):
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    n = len(f) - 1
    if n == d:
        return [monic(F, f)]
    q = F.q
    while True:
        a = trim([F.random_raw(rng) for _ in range(n)], F.zero)
        if len(a) < 2:
            continue
        if F.p == 2:
            # trace over F_q of degree-d extension: sum of a^(q^i), then F_2-trace of that
            b = a
            acc = mod(F, a, f)
            for _ in range(d - 1):
                b = powmod(F, b, q, f)
                acc = add(F, acc, b)
            b = _trace_poly(F, acc, f)
        else:
            b = powmod(F, a, (q ** d - 1) // 2, f)
            b = sub(F, b, [F.one])
        g = gcd(F, f, b)
        if 1 < len(g) < len(f):
            h = divmod_(F, f, g)[0]
            return equal_degree(F, g, d, rng) + equal_degree(F, monic(F, h), d, rng)


def factor(F, f, rng=None):
    """Monic irreducible factors with multiplicities, sorted by (degree, coefficients)."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if rng is None:
        rng = F.make_rng()
    out = []
    for g, m in squarefree(F, f):
        for part, d in distinct_degree(F, g):
            for h in equal_degree(F, part, d, rng):
                out.append((h, m))
    out.sort(key=lambda hm: (len(hm[0]), [F.encode(c) for c in hm[0]], hm[1]))
    return out


SCAN_LIMIT = 128  # brute-force scan below this size; gcd with t^q - t above


def roots(F, f, rng=None):
    """Distinct roots of ``f`` in ``F`` (sorted by encoding)."""
    if not f:
        raise ValueError("roots of the zero polynomial")
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [F.neg(F.div(f[0], f[1]))]
    if F.q <= SCAN_LIMIT:
        return [x for x in F.elements() if evaluate(F, f, x) == F.zero]
    f = monic(F, f)
    x = [F.zero, F.one]
    g = gcd(F, f, sub(F, powmod(F, x, F.q, f), x))
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [F.neg(g[0])]
    if rng is None:
        rng = F.make_rng()
    rs = [F.neg(h[0]) for h in equal_degree(F, g, 1, rng)]
    return sorted(rs, key=F.encode)


def root_count(F, f):
    """Number of distinct roots of nonzero ``f`` in ``F``."""
    if len(f) <= 1:
        return 0
    if len(f) == 2:
        return 1
    if F.q <= SCAN_LIMIT:
        return sum(1 for x in F.elements() if evaluate(F, f, x) == F.zero)
    f = monic(F, f)
    x = [F.zero, F.one]
    return len(gcd(F, f, sub(F, powmod(F, x, F.q, f), x))) - 1


def resultant(F, a, b):
    """Resultant of two polynomials over a field via the Euclidean remainder sequence."""
    if not a or not b:
        return F.zero
    da, db = len(a) - 1, len(b) - 1
    res = F.one
    while True:
        if db == 0:
            return F.mul(res, F.pow(b[0], da))
        if da < db:
            a, b, da, db = b, a, db, da
            if da % 2 and db % 2:
                res = F.neg(res)
        r = mod(F, a, b)
        if not r:
            return F.zero
        dr = len(r) - 1
        # Res(a, b) = (-1)^(da*db) lc(b)^(da-dr) Res(b, r)
        if da % 2 and db % 2:
            res = F.neg(res)
        res = F.mul(res, F.pow(b[-1], da - dr))
        a, b, da, db = b, r, db, dr


def make_rng(seed):
    return random.Random(seed)
