"""Finite fields F_{p^n}, prime fields and (possibly nested) extensions.

A field context does all the arithmetic on *raw* values; ``FieldElement``
is a thin operator-overloading wrapper used by the public API and by the
generic resultant code.  Raw values are ints for prime fields and for
tabulated extensions (q <= 2**16, log/exp tables), and tuples of base-field
raw values for every other extension.  In both cases the integer encoding
of an element is sum(c_i * p**i) over its flattened coefficient vector.
"""

from __future__ import annotations

import functools
import random

from . import polyops

TABLE_LIMIT = 1 << 16
MAX_CARDINALITY = 1 << 48


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """Common interface; concrete subclasses implement the raw operations."""

    p: int
    degree: int  # absolute degree over F_p
    q: int
    base: "FieldCtx | None" = None
    modulus: tuple | None = None
    zero = 0
    one = 1
    seed = 0

    # -- raw arithmetic --------------------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def frobenius(self, a):
        return self.pow(a, self.p)

    def pth_root(self, a):
        for _ in range(self.degree - 1):
            a = self.frobenius(a)
        return a

    def from_int(self, n: int):
        """Image of the integer ``n`` in the prime subfield."""
        return self.decode(n % self.p)

    def is_square(self, a) -> bool:
        if a == self.zero or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one

    def sqrt(self, a):
        """Some square root of a square ``a`` (None for non-squares)."""
        if a == self.zero:
            return a
        if self.p == 2:
            return self.pth_root(a)
        if not self.is_square(a):
            return None
        # Tonelli-Shanks
        q = self.q
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = next(x for x in self.elements() if x != self.zero and not self.is_square(x))
        m, c = s, self.pow(z, t)
        r, u = self.pow(a, (t + 1) // 2), self.pow(a, t)
        while u != self.one:
            i, v = 0, u
            while v != self.one:
                v, i = self.mul(v, v), i + 1
            b = c
            for _ in range(m - i - 1):
                b = self.mul(b, b)
            m, c = i, self.mul(b, b)
            r, u = self.mul(r, b), self.mul(u, c)
        return r

    def abs_trace(self, a):
        """Trace down to F_p, returned as an int in [0, p)."""
        acc, t = a, a
        for _ in range(self.degree - 1):
            t = self.frobenius(t)
            acc = self.add(acc, t)
        return self.encode(acc)

    # -- enumeration, encodings ------------------------------------------
    def elements(self):
        return (self.decode(i) for i in range(self.q))

    def random_raw(self, rng):
        return self.decode(rng.randrange(self.q))

    def make_rng(self):
        return random.Random(self.seed)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx is not self:
                return FieldElement(self, self.embed(value.raw, value.ctx))
            return value
        return FieldElement(self, self.decode(value))

    def element(self, raw) -> "FieldElement":
        return FieldElement(self, raw)

    @property
    def gen(self) -> "FieldElement":
        """The class of t in base[t]/(modulus); 1 for prime fields."""
        return FieldElement(self, self.generator_raw())

    def generator_raw(self):
        return self.one

    def enumerate(self):
        return [FieldElement(self, x) for x in self.elements()]

    def random_element(self, seed) -> "FieldElement":
        return FieldElement(self, self.random_raw(random.Random(seed)))

    # -- towers ------------------------------------------------------------
    def tower(self):
        """Chain of contexts from the prime field up to self."""
        chain, c = [], self
        while c is not None:
            chain.append(c)
            c = c.base
        return chain[::-1]

    def is_subfield_of(self, other: "FieldCtx") -> bool:
        return self in other.tower()

    def embed(self, raw, source: "FieldCtx"):
        """Map ``raw`` from an ancestor ``source`` of this tower into self."""
        if source is self:
            return raw
        if self.base is None:
            raise FieldError("contexts do not share a tower")
        return self.lift(self.base.embed(raw, source))

    def lift(self, raw_base):
        raise NotImplementedError

    def descend(self, raw):
        """Raw value in ``base`` if ``raw`` lies there, else None."""
        raise NotImplementedError

    def extension(self, k: int) -> "FieldCtx":
        """Deterministic degree-k extension of self (cached)."""
        return _extension(self, k)

    def descriptor(self) -> str:
        if self.base is None:
            return str(self.p)
        if self.base.base is None:
            mod = ",".join(str(self.base.encode(c)) for c in self.modulus)
            return f"{self.p}:{self.degree}:{mod}"
        return f"ext({self.base.descriptor()};{','.join(str(self.base.encode(c)) for c in self.modulus)})"

    def __repr__(self):
        return f"GF({self.p}^{self.degree})" if self.degree > 1 else f"GF({self.p})"


class PrimeField(FieldCtx):
    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.degree = 1
        self.q = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def frobenius(self, a):
        return a

    def pth_root(self, a):
        return a

    def from_int(self, n):
        return n % self.p

    def is_square(self, a):
        return a == 0 or self.p == 2 or pow(a, (self.p - 1) // 2, self.p) == 1

    def abs_trace(self, a):
        return a

    def encode(self, a):
        return a

    def decode(self, n):
        if not 0 <= n < self.p:
            raise FieldError(f"encoding {n} out of range for GF({self.p})")
        return n

    def elements(self):
        return iter(range(self.p))

    def random_raw(self, rng):
        return rng.randrange(self.p)

    def descend(self, raw):
        return None


class ExtensionField(FieldCtx):
    """base[t]/(modulus) with tuple raw values of length deg(modulus)."""

    def __init__(self, base: FieldCtx, modulus, check: bool = True):
        modulus = tuple(modulus)
        n = len(modulus) - 1
        if n < 2:
            raise FieldError("modulus must have degree >= 2")
        if modulus[-1] != base.one:
            raise FieldError("modulus must be monic")
        if check and not polyops.is_irreducible(base, list(modulus)):
            raise FieldError("modulus is not irreducible")
        self.base = base
        self.modulus = modulus
        self.n = n
        self.p = base.p
        self.degree = base.degree * n
        self.q = base.q ** n
        self.zero = (base.zero,) * n
        self.one = (base.one,) + (base.zero,) * (n - 1)

    def generator_raw(self):
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.n - 2)

    def add(self, a, b):
        badd = self.base.add
        return tuple(badd(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        bsub = self.base.sub
        return tuple(bsub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        bneg = self.base.neg
        return tuple(bneg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        zero = B.zero
        badd, bmul, bsub = B.add, B.mul, B.sub
        n = self.n
        prod = [zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if x == zero:
                continue
            for j, y in enumerate(b):
                if y != zero:
                    prod[i + j] = badd(prod[i + j], bmul(x, y))
        m = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c == zero:
                continue
            for j in range(n):
                mj = m[j]
                if mj != zero:
                    prod[k - n + j] = bsub(prod[k - n + j], bmul(c, mj))
        return tuple(prod[:n])

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("division by zero")
        B = self.base
        g, s, _ = polyops.xgcd(B, polyops.trim(list(a), B.zero), list(self.modulus))
        s = list(s) + [B.zero] * (self.n - len(s))
        return tuple(s)

    def encode(self, a):
        qb = self.base.q
        v = 0
        for c in reversed(a):
            v = v * qb + self.base.encode(c)
        return v

    def decode(self, n):
        if not 0 <= n < self.q:
            raise FieldError(f"encoding {n} out of range")
        qb = self.base.q
        out = []
        for _ in range(self.n):
            n, r = divmod(n, qb)
            out.append(self.base.decode(r))
        return tuple(out)

    def vector(self, a):
        return tuple(a)

    def from_vector(self, vec):
        return tuple(vec)

    def lift(self, raw_base):
        return (raw_base,) + (self.base.zero,) * (self.n - 1)

    def descend(self, raw):
        if all(c == self.base.zero for c in raw[1:]):
            return raw[0]
        return None


class TabulatedField(ExtensionField):
    """Extension with q <= TABLE_LIMIT; raw values are integer encodings."""

    def __init__(self, base: FieldCtx, modulus, check: bool = True):
        super().__init__(base, modulus, check)
        if not isinstance(base, (PrimeField, TabulatedField)):
            raise FieldError("tabulated fields need an int-encoded base")
        if self.q > TABLE_LIMIT:
            raise FieldError("field too large to tabulate")
        self.zero, self.one = 0, 1
        self._build_tables()

    def _build_tables(self):
        slow = ExtensionField(self.base, self.modulus, check=False)
        q, p = self.q, self.p
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for i in range(2, q) if q > 2 else []:
            g = ExtensionField.decode(slow, i)
            if all(slow.pow(g, order // r) != slow.one for r in factors):
                gen = g
                break
        if gen is None:  # q == 2 cannot happen for an extension
            raise FieldError("no primitive element")
        exp = [0] * (2 * order)
        log = [0] * q
        x = slow.one
        for k in range(order):
            e = ExtensionField.encode(slow, x)
            exp[k] = e
            log[e] = k
            x = slow.mul(x, gen)
        exp[order:] = exp[:order]
        self._exp, self._log, self._order = exp, log, order
        self.primitive = exp[1]
        if p == 2:
            self.add = self.sub = _xor
            self.neg = _ident
        else:
            digits = self.degree
            lo_digits = (digits + 1) // 2
            self._lo = lo = p ** lo_digits
            hi = p ** (digits - lo_digits)

            def digit_add(a, b, nd, sign):
                v, scale = 0, 1
                for _ in range(nd):
                    a, da = divmod(a, p)
                    b, db = divmod(b, p)
                    v += ((da + sign * db) % p) * scale
                    scale *= p
                return v

            self._addlo = [digit_add(a, b, lo_digits, 1) for a in range(lo) for b in range(lo)]
            self._addhi = [digit_add(a, b, digits - lo_digits, 1) for a in range(hi) for b in range(hi)]
            self._neg = [digit_add(0, a, digits, -1) for a in range(q)]
        # F_p-linear trace functional as a digit mask (p = 2 only)
        if p == 2:
            mask = 0
            for i in range(self.degree):
                if FieldCtx.abs_trace(self, 1 << i):
                    mask |= 1 << i
            self._trace_mask = mask

    def add(self, a, b):
        lo = self._lo
        ah, al = divmod(a, lo)
        bh, bl = divmod(b, lo)
        return self._addhi[ah * (self.q // lo) + bh] * lo + self._addlo[al * lo + bl]

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return self._exp[self._order - self._log[a]]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return 0
        return self._exp[self._log[a] + self._order - self._log[b]]

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("division by zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._order]

    def frobenius(self, a):
        return self.pow(a, self.p)

    def pth_root(self, a):
        return self.pow(a, self.p ** (self.degree - 1))

    def from_int(self, n):
        return n % self.p

    def is_square(self, a):
        return a == 0 or self.p == 2 or self._log[a] % 2 == 0

    def abs_trace(self, a):
        if self.p == 2:
            return bin(a & self._trace_mask).count("1") & 1
        return FieldCtx.abs_trace(self, a)

    def encode(self, a):
        return a

    def decode(self, n):
        if not 0 <= n < self.q:
            raise FieldError(f"encoding {n} out of range")
        return n

    def elements(self):
        return iter(range(self.q))

    def random_raw(self, rng):
        return rng.randrange(self.q)

    def generator_raw(self):
        return self.base.q

    def vector(self, a):
        qb = self.base.q
        out = []
        for _ in range(self.n):
            a, r = divmod(a, qb)
            out.append(r)
        return tuple(out)

    def from_vector(self, vec):
        qb = self.base.q
        v = 0
        for c in reversed(vec):
            v = v * qb + c
        return v

    def lift(self, raw_base):
        return raw_base

    def descend(self, raw):
        return raw if raw < self.base.q else None


def _xor(a, b):
    return a ^ b


def _ident(a):
    return a


def adjoin(base: FieldCtx, modulus, check: bool = False) -> FieldCtx:
    """Extension by a root of a monic irreducible polynomial (raw coefficients)."""
    modulus = list(modulus)
    if len(modulus) == 2:
        return base
    return ExtensionField(base, modulus, check=check)


def find_irreducible(base: FieldCtx, k: int) -> tuple:
    """First monic irreducible degree-k polynomial in encoding order of its lower coefficients."""
    qb = base.q
    for code in range(qb ** k):
        coeffs = []
        c = code
        for _ in range(k):
            c, r = divmod(c, qb)
            coeffs.append(base.decode(r))
        poly = coeffs + [base.one]
        if coeffs[0] != base.zero and polyops.is_irreducible(base, poly):
            return tuple(poly)
    raise FieldError("no irreducible polynomial found")


def _make_extension(base: FieldCtx, modulus, check=True) -> FieldCtx:
    q = base.q ** (len(modulus) - 1)
    if q <= TABLE_LIMIT and isinstance(base, (PrimeField, TabulatedField)):
        return TabulatedField(base, modulus, check)
    return ExtensionField(base, modulus, check)


@functools.lru_cache(maxsize=None)
def _extension(base: FieldCtx, k: int) -> FieldCtx:
    if k == 1:
        return base
    return _make_extension(base, find_irreducible(base, k), check=False)


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@functools.lru_cache(maxsize=None)
def field_create(p: int, n: int = 1, modulus: tuple | None = None) -> FieldCtx:
    """F_{p^n}; the modulus is given as ascending integer coefficients (monic)."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("degree must be >= 1")
    if p ** n > MAX_CARDINALITY:
        raise FieldError("field too large (q > 2^48)")
    Fp = prime_field(p)
    if n == 1:
        if modulus is not None and len(modulus) != 2:
            raise FieldError("modulus degree must equal n")
        return Fp
    if modulus is None:
        return _extension(Fp, n)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != n + 1 or modulus[-1] != 1:
        raise FieldError("modulus must be monic of degree n")
    return _make_extension(Fp, modulus, check=True)


def parse_field(text: str) -> FieldCtx:
    """Parse a descriptor ``p[:n[:c0,c1,...,1]]``."""
    parts = text.strip().split(":")
    try:
        p = int(parts[0])
        n = int(parts[1]) if len(parts) > 1 else 1
        mod = tuple(int(c) for c in parts[2].split(",")) if len(parts) > 2 else None
    except (ValueError, IndexError) as exc:
        raise FieldError(f"bad field descriptor {text!r}") from exc
    if len(parts) > 3:
        raise FieldError(f"bad field descriptor {text!r}")
    return field_create(p, n, mod)


class FieldElement:
    __slots__ = ("ctx", "raw")

    def __init__(self, ctx: FieldCtx, raw):
        self.ctx = ctx
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise FieldError("elements belong to different fields")
            return other.raw
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.sub(o, self.raw))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.div(o, self.raw))

    # exact division, so generic ring code can use ``//`` uniformly
    __floordiv__ = __truediv__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.raw))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.raw, e))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.raw))

    def frobenius(self):
        return FieldElement(self.ctx, self.ctx.frobenius(self.raw))

    def pth_root(self):
        return FieldElement(self.ctx, self.ctx.pth_root(self.raw))

    def __bool__(self):
        return self.raw != self.ctx.zero

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.raw))

    def __int__(self):
        return self.ctx.encode(self.raw)

    def __repr__(self):
        return f"{self.ctx!r}({int(self)})"


def pth_root(x: FieldElement) -> FieldElement:
    return x.pth_root()


def enumerate_field(ctx: FieldCtx) -> list[FieldElement]:
    return ctx.enumerate()


def random_element(ctx: FieldCtx, seed) -> FieldElement:
    return ctx.random_element(seed)
