"""Univariate polynomials, binary and ternary forms over a field context.

Ternary forms of degree d keep their C(d+2, 2) coefficients in descending
lex order on exponent triples (i, j, k) for x^i y^j z^k.  For quartics:

    x^4, x^3y, x^3z, x^2y^2, x^2yz, x^2z^2, xy^3, xy^2z, xyz^2, xz^3,
    y^4, y^3z, y^2z^2, yz^3, z^4

The char-3 flex formulas index the generic quartic as a_ij = coefficient of
x^i z^j y^(4-i-j); see ``aij`` below.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from . import polyops
from .field import FieldCtx, FieldElement, FieldError


# --------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Polynomial in one variable over ``ctx`` (ascending raw coefficients)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        self.ctx = ctx
        self.coeffs = tuple(polyops.trim(list(coeffs), ctx.zero))

    @classmethod
    def from_ints(cls, ctx, ints):
        return cls(ctx, [ctx.decode(c % ctx.q) if isinstance(c, int) else c for c in ints])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ctx.zero

    def _wrap(self, c):
        return UniPoly(self.ctx, c)

    def _other(self, o):
        if isinstance(o, UniPoly):
            if o.ctx is not self.ctx:
                raise FieldError("polynomials over different fields")
            return list(o.coeffs)
        if isinstance(o, FieldElement):
            return [o.raw] if o else []
        if isinstance(o, int):
            c = self.ctx.from_int(o)
            return [c] if c != self.ctx.zero else []
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else self._wrap(polyops.add(self.ctx, list(self.coeffs), o))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else self._wrap(polyops.sub(self.ctx, list(self.coeffs), o))

    def __rsub__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else self._wrap(polyops.sub(self.ctx, o, list(self.coeffs)))

    def __neg__(self):
        return self._wrap(polyops.neg(self.ctx, self.coeffs))

    def __mul__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else self._wrap(polyops.mul(self.ctx, list(self.coeffs), o))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = UniPoly(self.ctx, [self.ctx.one])
        for _ in range(e):
            out = out * self
        return out

    def __divmod__(self, o):
        o = self._other(o)
        qq, r = polyops.divmod_(self.ctx, list(self.coeffs), o)
        return self._wrap(qq), self._wrap(r)

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, o):
        if isinstance(o, UniPoly):
            return self.ctx is o.ctx and self.coeffs == o.coeffs
        if isinstance(o, int):
            return self.coeffs == tuple(self._other(o))
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __call__(self, x):
        if isinstance(x, FieldElement):
            raw = polyops.evaluate(x.ctx, [x.ctx.embed(c, self.ctx) for c in self.coeffs], x.raw)
            return FieldElement(x.ctx, raw)
        return polyops.evaluate(self.ctx, list(self.coeffs), x)

    def derivative(self):
        return self._wrap(polyops.derivative(self.ctx, list(self.coeffs)))

    def monic(self):
        return self._wrap(polyops.monic(self.ctx, list(self.coeffs)))

    def gcd(self, o):
        return self._wrap(polyops.gcd(self.ctx, list(self.coeffs), self._other(o)))

    def __repr__(self):
        terms = [f"{self.ctx.encode(c)}*t^{i}" for i, c in enumerate(self.coeffs) if c != self.ctx.zero]
        return "UniPoly(" + (" + ".join(reversed(terms)) or "0") + ")"


@dataclass(frozen=True)
class SquarefreeDecomposition:
    unit: object  # raw
    factors: tuple  # ((factor, multiplicity), ...)


def squarefree_decomposition(f):
    """For a UniPoly or BinaryForm."""
    if isinstance(f, BinaryForm):
        return f.squarefree()
    if not f:
        raise ValueError("squarefree decomposition of the zero polynomial")
    F = f.ctx
    parts = polyops.squarefree(F, list(f.coeffs))
    return SquarefreeDecomposition(f.lc, tuple((UniPoly(F, g), m) for g, m in parts))


def factor(f: UniPoly, rng=None):
    return [(UniPoly(f.ctx, g), m) for g, m in polyops.factor(f.ctx, list(f.coeffs), rng)]


# --------------------------------------------------------------------------
# generic resultant (subresultant PRS over an integral domain)


def _trim_generic(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _prem(A, B):
    """Pseudo-remainder of A by B: lc(B)^(deg A - deg B + 1) A mod B."""
    R = list(A)
    d = len(B) - 1
    lcB = B[-1]
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= d:
        lr = R[-1]
        s = len(R) - 1 - d
        R = [r * lcB for r in R]
        for j, b in enumerate(B):
            R[s + j] = R[s + j] - lr * b
        R = _trim_generic(R)
        e -= 1
    if e > 0 and R:
        f = lcB ** e
        R = [r * f for r in R]
    return R


def generic_resultant(A, B, one):
    """Resultant of two coefficient lists (ascending) with ring elements.

    Ring elements need +, -, *, ** (int), truthiness and exact ``//``.
    """
    A, B = _trim_generic(A), _trim_generic(B)
    if not A or not B:
        return one - one
    s = one
    dA, dB = len(A) - 1, len(B) - 1
    if dA < dB:
        A, B = B, A
        dA, dB = dB, dA
        if dA % 2 and dB % 2:
            s = -s
    if dB == 0:
        return s * B[0] ** dA
    g = h = one
    while True:
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _prem(A, B)
        A = B
        if not R:
            return one - one
        divisor = g * h ** delta
        B = [r // divisor for r in R]
        g = A[-1]
        h = g ** delta // h ** (delta - 1) if delta else h
        dA, dB = len(A) - 1, len(B) - 1
        if dB == 0:
            return s * (B[0] ** dA // h ** (dA - 1)) if dA > 1 else s * B[0] ** dA
    # unreachable


def resultant(f, g):
    """Resultant of two UniPolys, or of two lists of UniPoly/FieldElement coefficients."""
    if isinstance(f, UniPoly):
        return FieldElement(f.ctx, polyops.resultant(f.ctx, list(f.coeffs), list(g.coeffs)))
    one = _one_like(f, g)
    return generic_resultant(f, g, one)


def _one_like(*seqs):
    for s in seqs:
        for c in s:
            if isinstance(c, UniPoly):
                return UniPoly(c.ctx, [c.ctx.one])
            if isinstance(c, FieldElement):
                return FieldElement(c.ctx, c.ctx.one)
    raise ValueError("cannot infer coefficient ring")


# --------------------------------------------------------------------------
# binary forms


class BinaryForm:
    """g(s, t) = sum c_i s^(d-i) t^i; coefficients stored as raw values."""

    __slots__ = ("ctx", "d", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)
        self.d = len(self.coeffs) - 1

    @classmethod
    def from_ints(cls, ctx, ints):
        return cls(ctx, [ctx.from_int(c) for c in ints])

    def is_zero(self):
        return all(c == self.ctx.zero for c in self.coeffs)

    def dehomogenize(self):
        """Ascending coefficients of g(s, 1) as a polynomial in s."""
        return polyops.trim(list(reversed(self.coeffs)), self.ctx.zero)

    def infinity_multiplicity(self):
        """Multiplicity of the root (1:0), i.e. the power of t dividing g."""
        n = 0
        for c in self.coeffs:
            if c != self.ctx.zero:
                break
            n += 1
        return n

    def __eq__(self, o):
        return isinstance(o, BinaryForm) and self.ctx is o.ctx and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, s, t):
        F = self.ctx
        acc = F.zero
        d = self.d
        for i, c in enumerate(self.coeffs):
            if c != F.zero:
                acc = F.add(acc, F.mul(c, F.mul(F.pow(s, d - i), F.pow(t, i))))
        return acc

    @classmethod
    def homogenize(cls, ctx, poly, d):
        """Binary form of degree d from ascending coefficients of g(s, 1)."""
        coeffs = list(poly) + [ctx.zero] * (d + 1 - len(poly))
        return cls(ctx, list(reversed(coeffs)))

    def squarefree(self) -> SquarefreeDecomposition:
        F = self.ctx
        if self.is_zero():
            raise ValueError("squarefree decomposition of the zero form")
        g = self.dehomogenize()
        inf = self.d - (len(g) - 1)
        unit = g[-1]
        parts = {m: BinaryForm.homogenize(F, h, len(h) - 1) for h, m in polyops.squarefree(F, g)} if len(g) > 1 else {}
        if inf:
            t_form = BinaryForm(F, [F.zero, F.one])
            parts[inf] = parts[inf].mul(t_form) if inf in parts else t_form
        return SquarefreeDecomposition(unit, tuple((f, m) for m, f in sorted(parts.items())))

    def mul(self, o: "BinaryForm") -> "BinaryForm":
        F = self.ctx
        out = [F.zero] * (self.d + o.d + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return BinaryForm(F, out)

    def factor(self, rng=None):
        """Monic irreducible factors (as binary forms) with multiplicities."""
        F = self.ctx
        g = self.dehomogenize()
        out = []
        if len(g) > 1:
            out = [(BinaryForm.homogenize(F, h, len(h) - 1), m) for h, m in polyops.factor(F, g, rng)]
        inf = self.d - (len(g) - 1)
        if inf:
            out.insert(0, (BinaryForm(F, [F.zero, F.one]), inf))
        return out

    def __repr__(self):
        return f"BinaryForm({[self.ctx.encode(c) for c in self.coeffs]})"


def roots_with_multiplicity(g: BinaryForm, rng=None):
    """Rational roots (as normalized (s, t) raw pairs) with multiplicity, plus residual pattern.

    The residual pattern lists (degree, multiplicity) of irreducible factors of
    degree >= 2, sorted descending.
    """
    F = g.ctx
    if g.is_zero():
        raise ValueError("zero form")
    rational = []
    residual = []
    for h, m in g.factor(rng):
        if h.d == 1:
            a, b = h.coeffs  # a s + b t
            rational.append(((F.one, F.zero) if b == F.zero and a == F.zero else
                             ((F.one, F.zero) if a == F.zero else (F.neg(F.div(b, a)), F.one)), m))
        else:
            residual.append((h.d, m))
    residual.sort(reverse=True)
    rational.sort(key=lambda rm: (rm[0][1] != F.zero, F.encode(rm[0][0])))
    return rational, residual


def is_perfect_square(g: BinaryForm) -> bool:
    """Geometric square test: every squarefree multiplicity is even."""
    return all(m % 2 == 0 for _, m in g.squarefree().factors)


# --------------------------------------------------------------------------
# ternary forms


def monomials(d: int):
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


_MONO_INDEX = {}


def _mono_index(d):
    if d not in _MONO_INDEX:
        _MONO_INDEX[d] = {m: n for n, m in enumerate(monomials(d))}
    return _MONO_INDEX[d]


def aij(i: int, j: int):
    """Exponent triple of the char-3 generic-quartic coefficient a_ij: x^i z^j y^(4-i-j)."""
    return (i, 4 - i - j, j)


class TernaryForm:
    """Homogeneous polynomial in x, y, z; ``terms`` maps (i, j, k) to nonzero raw."""

    __slots__ = ("ctx", "d", "terms")

    def __init__(self, ctx: FieldCtx, d: int, terms=None):
        self.ctx = ctx
        self.d = d
        zero = ctx.zero
        self.terms = {e: c for e, c in (terms or {}).items() if c != zero}
        for e in self.terms:
            if sum(e) != d:
                raise ValueError("not homogeneous")

    @classmethod
    def from_coeffs(cls, ctx, d, coeffs):
        mons = monomials(d)
        if len(coeffs) != len(mons):
            raise ValueError(f"expected {len(mons)} coefficients, got {len(coeffs)}")
        return cls(ctx, d, dict(zip(mons, coeffs)))

    @classmethod
    def from_ints(cls, ctx, d, ints):
        return cls.from_coeffs(ctx, d, [ctx.decode(c) for c in ints])

    def coeff_vector(self):
        zero = self.ctx.zero
        return [self.terms.get(m, zero) for m in monomials(self.d)]

    def coeff(self, e):
        return self.terms.get(tuple(e), self.ctx.zero)

    def is_zero(self):
        return not self.terms

    def __eq__(self, o):
        return isinstance(o, TernaryForm) and self.ctx is o.ctx and self.d == o.d and self.terms == o.terms

    def __hash__(self):
        return hash((self.d, tuple(sorted(self.terms.items()))))

    def __add__(self, o):
        if self.d != o.d and self.terms and o.terms:
            raise ValueError("not homogeneous")
        F = self.ctx
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = F.add(out.get(e, F.zero), c)
        return TernaryForm(F, self.d if self.terms else o.d, out)

    def __neg__(self):
        F = self.ctx
        return TernaryForm(F, self.d, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        F = self.ctx
        return TernaryForm(F, self.d, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, o):
        F = self.ctx
        if isinstance(o, int):
            return self.scale(F.from_int(o))
        if isinstance(o, FieldElement):
            return self.scale(o.raw)
        out = {}
        fadd, fmul = F.add, F.mul
        for (a, b, c), u in self.terms.items():
            for (i, j, k), v in o.terms.items():
                e = (a + i, b + j, c + k)
                out[e] = fadd(out.get(e, F.zero), fmul(u, v))
        return TernaryForm(F, self.d + o.d, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TernaryForm(self.ctx, 0, {(0, 0, 0): self.ctx.one})
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, var: int) -> "TernaryForm":
        """Formal partial derivative; var is 0, 1, 2 or 'x', 'y', 'z'."""
        if isinstance(var, str):
            var = "xyz".index(var)
        F = self.ctx
        out = {}
        for e, c in self.terms.items():
            k = e[var] % F.p
            if k:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = F.mul(c, F.from_int(k))
        return TernaryForm(F, max(self.d - 1, 0), out)

    def evaluate(self, pt, E: FieldCtx | None = None):
        """Value at a raw coordinate triple; ``E`` is the field of the coordinates."""
        F = E or self.ctx
        src = self.ctx
        x, y, z = pt
        acc = F.zero
        fadd, fmul, fpow = F.add, F.mul, F.pow
        for (i, j, k), c in self.terms.items():
            if F is not src:
                c = F.embed(c, src)
            v = c
            if i:
                v = fmul(v, fpow(x, i))
            if j:
                v = fmul(v, fpow(y, j))
            if k:
                v = fmul(v, fpow(z, k))
            acc = fadd(acc, v)
        return acc

    def over(self, E: FieldCtx) -> "TernaryForm":
        if E is self.ctx:
            return self
        return TernaryForm(E, self.d, {e: E.embed(c, self.ctx) for e, c in self.terms.items()})

    def linear_substitute(self, rows) -> "TernaryForm":
        """F(L0, L1, L2) where L_i = rows[i][0] x + rows[i][1] y + rows[i][2] z (raw entries)."""
        F = self.ctx
        lin = [TernaryForm(F, 1, {(1, 0, 0): r[0], (0, 1, 0): r[1], (0, 0, 1): r[2]}) for r in rows]
        powers = [[TernaryForm(F, 0, {(0, 0, 0): F.one})] for _ in range(3)]
        for v in range(3):
            for _ in range(self.d):
                powers[v].append(powers[v][-1] * lin[v])
        out = TernaryForm(F, self.d)
        for (i, j, k), c in self.terms.items():
            out = out + (powers[0][i] * powers[1][j] * powers[2][k]).scale(c)
        return out

    def restrict(self, P, Q, E: FieldCtx | None = None) -> BinaryForm:
        """Binary form g(s, t) = F(s P + t Q) for raw coordinate triples over E."""
        F = E or self.ctx
        src = self.ctx
        zero = F.zero
        d = self.d
        fadd, fmul = F.add, F.mul
        # powers of the three binary linear forms (descending in s)
        lin_pows = []
        for v in range(3):
            a, b = P[v], Q[v]
            pw = [[F.one]]
            for _ in range(d):
                prev = pw[-1]
                nxt = [zero] * (len(prev) + 1)
                for n, c in enumerate(prev):
                    if c != zero:
                        nxt[n] = fadd(nxt[n], fmul(c, a))
                        nxt[n + 1] = fadd(nxt[n + 1], fmul(c, b))
                pw.append(nxt)
            lin_pows.append(pw)
        out = [zero] * (d + 1)
        for (i, j, k), c in self.terms.items():
            if F is not src:
                c = F.embed(c, src)
            a, b, cc = lin_pows[0][i], lin_pows[1][j], lin_pows[2][k]
            ab = [zero] * (i + j + 1)
            for m, u in enumerate(a):
                if u != zero:
                    for n, v in enumerate(b):
                        if v != zero:
                            ab[m + n] = fadd(ab[m + n], fmul(u, v))
            for m, u in enumerate(ab):
                if u != zero:
                    u = fmul(u, c)
                    for n, v in enumerate(cc):
                        if v != zero:
                            out[m + n] = fadd(out[m + n], fmul(u, v))
        return BinaryForm(F, out)

    def to_bivariate(self, var=1, chart=2):
        """Dehomogenize at ``chart`` = 1 and view as polynomial in ``var``.

        Returns a list (ascending powers of ``var``) of UniPoly in the remaining variable.
        """
        F = self.ctx
        other = 3 - var - chart
        rows: dict[int, dict[int, object]] = {}
        for e, c in self.terms.items():
            rows.setdefault(e[var], {})[e[other]] = c
        top = max(rows) if rows else -1
        out = []
        for n in range(top + 1):
            r = rows.get(n, {})
            cs = [r.get(m, F.zero) for m in range(max(r) + 1)] if r else []
            out.append(UniPoly(F, cs))
        return out

    def binary_at(self, var_zero: int) -> BinaryForm:
        """Restriction to the coordinate line ``x_{var_zero} = 0`` in the remaining order."""
        a, b = [v for v in range(3) if v != var_zero]
        F = self.ctx
        out = [F.zero] * (self.d + 1)
        for e, c in self.terms.items():
            if e[var_zero] == 0:
                out[e[b]] = c
        return BinaryForm(F, out)

    def __repr__(self):
        return f"TernaryForm({serialize(self)!r} over {self.ctx!r})"


def partial_derivative(F: TernaryForm, var) -> TernaryForm:
    return F.derivative(var)


def restrict_to_line(F: TernaryForm, line) -> BinaryForm:
    g = F.restrict(line.basis[0].coords, line.basis[1].coords, line.ctx)
    if g.is_zero():
        raise ValueError("line contained in curve (input not smooth)")
    return g


# --------------------------------------------------------------------------
# parsing and serialization


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([xyzg])|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokenize(text):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            nxt = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected symbol {text[pos + nxt]!r}", pos + nxt)
        kind = m.lastindex
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append((0, "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, ctx):
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2])
        self.i += 1
        return t

    def exponent(self):
        if self.peek()[0] == 3:
            self.take()
            return int(self.take(1)[1])
        return 1

    def scalar_sum(self):
        """Sum of scalar terms (inside parentheses)."""
        F = self.ctx
        acc = F.zero
        sign = 1
        first = True
        while True:
            t = self.peek()
            if t[0] in (5, 6):
                self.take()
                sign = -1 if t[0] == 6 else 1
            elif not first:
                break
            v = self.scalar_term()
            acc = F.add(acc, v if sign == 1 else F.neg(v))
            first = False
            sign = 1
            if self.peek()[0] not in (5, 6):
                break
        return acc

    def scalar_term(self):
        F = self.ctx
        v = F.one
        while True:
            t = self.peek()
            if t[0] == 1:
                self.take()
                v = F.mul(v, F.from_int(int(t[1])))
            elif t[0] == 2 and t[1] == "g":
                self.take()
                v = F.mul(v, F.pow(F.generator_raw(), self.exponent()))
            elif t[0] == 7:
                self.take()
                v = F.mul(v, self.scalar_sum())
                self.take(8)
            else:
                raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2])
            if self.peek()[0] == 4 and self.toks[self.i + 1][0] in (1, 7) or (
                    self.peek()[0] == 4 and self.toks[self.i + 1][1] == "g"):
                self.take()
                continue
            break
        return v

    def polynomial(self):
        F = self.ctx
        terms = {}
        degree = None
        sign = 1
        first = True
        while True:
            t = self.peek()
            if t[0] == 0:
                if first:
                    raise ParseError("empty expression", t[2])
                break
            if t[0] in (5, 6):
                self.take()
                sign = -sign if t[0] == 6 else sign
                continue
            if not first and t[0] not in (5, 6) and sign == 1 and self.toks[self.i - 1][0] not in (5, 6):
                raise ParseError(f"unexpected {t[1]!r}", t[2])
            start = t[2]
            coeff, expo = self.term()
            if degree is None:
                degree = sum(expo)
            elif sum(expo) != degree:
                raise ParseError("not homogeneous", start)
            if sign == -1:
                coeff = F.neg(coeff)
            terms[expo] = F.add(terms.get(expo, F.zero), coeff)
            sign = 1
            first = False
        return TernaryForm(F, degree, terms)

    def term(self):
        F = self.ctx
        coeff = F.one
        expo = [0, 0, 0]
        need = True
        while True:
            t = self.peek()
            if t[0] == 1:
                self.take()
                coeff = F.mul(coeff, F.from_int(int(t[1])))
            elif t[0] == 2:
                self.take()
                e = self.exponent()
                if t[1] == "g":
                    coeff = F.mul(coeff, F.pow(F.generator_raw(), e))
                else:
                    expo["xyz".index(t[1])] += e
            elif t[0] == 7:
                self.take()
                coeff = F.mul(coeff, self.scalar_sum())
                self.take(8)
            elif need:
                raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2])
            else:
                break
            need = False
            if self.peek()[0] == 4:
                self.take()
                need = True
            elif self.peek()[0] in (1, 2, 7):
                continue  # implicit multiplication
            else:
                break
        return coeff, tuple(expo)


def parse_ternary_form(text: str, ctx: FieldCtx) -> TernaryForm:
    return _Parser(text, ctx).polynomial()


def _scalar_text(F: FieldCtx, c) -> str:
    if F.base is None:
        return str(c)
    if F.base.base is not None:
        raise ValueError("expression output supports prime fields and their simple extensions; use coeffs")
    vec = F.vector(c)
    if all(v == 0 for v in vec[1:]):
        return str(vec[0])
    parts = []
    for i in range(len(vec) - 1, -1, -1):
        v = vec[i]
        if v == 0:
            continue
        mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
        if not mono:
            parts.append(str(v))
        elif v == 1:
            parts.append(mono)
        else:
            parts.append(f"{v}*{mono}")
    return "(" + " + ".join(parts) + ")"


def serialize(F: TernaryForm) -> str:
    if not F.terms:
        return "0"
    out = []
    for e in monomials(F.d):
        c = F.terms.get(e)
        if c is None:
            continue
        mono = "*".join(
            v if n == 1 else f"{v}^{n}" for v, n in zip("xyz", e) if n
        )
        s = _scalar_text(F.ctx, c)
        if not mono:
            out.append(s)
        elif s == "1":
            out.append(mono)
        else:
            out.append(f"{s}*{mono}")
    return " + ".join(out)


def serialize_coeffs(F: TernaryForm) -> str:
    return ",".join(str(F.ctx.encode(c)) for c in F.coeff_vector())


def parse_coeffs(text: str, ctx: FieldCtx, d: int = 4) -> TernaryForm:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise ParseError("bad coefficient list", 0) from exc
    return TernaryForm.from_coeffs(ctx, d, [ctx.decode(v) for v in vals])


# --------------------------------------------------------------------------
# divisibility of ternary forms


def _solve_linear(F, rows, rhs):
    """Solve rows * x = rhs over F (raw); return one solution or None."""
    n = len(rows[0]) if rows else 0
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != F.zero), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(v, inv) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != F.zero:
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(M)):
        if M[i][n] != F.zero:
            return None
    x = [F.zero] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return x


def ternary_divisibility(G: TernaryForm, F: TernaryForm):
    """Cofactor L with G = L * F, or None."""
    K = G.ctx
    e = G.d - F.d
    if e < 0:
        return None
    if G.is_zero():
        return TernaryForm(K, e)
    unknowns = monomials(e)
    target = monomials(G.d)
    idx = {m: n for n, m in enumerate(target)}
    rows = [[K.zero] * len(unknowns) for _ in target]
    for u, (a, b, c) in enumerate(unknowns):
        for (i, j, k), v in F.terms.items():
            rows[idx[(a + i, b + j, c + k)]][u] = v
    rhs = [G.coeff(m) for m in target]
    sol = _solve_linear(K, rows, rhs)
    if sol is None:
        return None
    return TernaryForm.from_coeffs(K, e, sol)
