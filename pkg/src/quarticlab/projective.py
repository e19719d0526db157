"""Points and lines of the projective plane over a field context."""

from __future__ import annotations

from .field import FieldCtx, FieldElement


def normalize(F: FieldCtx, coords):
    """Scale so that the last nonzero coordinate is 1."""
    zero = F.zero
    for c in reversed(coords):
        if c != zero:
            inv = F.inv(c)
            return tuple(F.mul(v, inv) for v in coords)
    raise ValueError("all coordinates are zero")


class ProjPoint:
    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: FieldCtx, coords, normalized: bool = False):
        self.ctx = ctx
        coords = tuple(coords)
        if len(coords) != 3:
            raise ValueError("a plane point needs three coordinates")
        self.coords = coords if normalized else normalize(ctx, coords)

    @classmethod
    def from_ints(cls, ctx, ints):
        return cls(ctx, [ctx.decode(v) for v in ints])

    @property
    def elements(self):
        return tuple(FieldElement(self.ctx, c) for c in self.coords)

    def encode(self):
        return tuple(self.ctx.encode(c) for c in self.coords)

    def over(self, E: FieldCtx) -> "ProjPoint":
        if E is self.ctx:
            return self
        return ProjPoint(E, [E.embed(c, self.ctx) for c in self.coords], normalized=True)

    def is_rational_over(self, F: FieldCtx) -> bool:
        """True if every coordinate lies in the subfield F of ``self.ctx``."""
        E = self.ctx
        return all(E.pow(c, F.q) == c for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.ctx is other.ctx and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ":".join(str(v) for v in self.encode()) + ")"


def line_basis(F: FieldCtx, coeffs):
    """Two points spanning the line a x + b y + c z = 0 (coefficients normalized)."""
    a, b, c = coeffs
    zero, one = F.zero, F.one
    if c != zero:
        return (ProjPoint(F, (one, zero, F.neg(a))), ProjPoint(F, (zero, one, F.neg(b))))
    if b != zero:
        return (ProjPoint(F, (one, F.neg(a), zero)), ProjPoint(F, (zero, zero, one)))
    return (ProjPoint(F, (zero, one, zero)), ProjPoint(F, (zero, zero, one)))


class ProjLine:
    """Line with dual coordinates (a:b:c) and a stored parametrization basis."""

    __slots__ = ("ctx", "coeffs", "basis")

    def __init__(self, ctx: FieldCtx, coeffs, basis=None):
        self.ctx = ctx
        self.coeffs = normalize(ctx, tuple(coeffs))
        if basis is None:
            basis = line_basis(ctx, self.coeffs)
        else:
            basis = tuple(basis)
            for P in basis:
                if not self.contains(P):
                    raise ValueError("basis point not on the line")
            if cross(ctx, basis[0].coords, basis[1].coords) == (ctx.zero,) * 3:
                raise ValueError("basis points coincide")
        self.basis = basis

    @classmethod
    def from_ints(cls, ctx, ints):
        return cls(ctx, [ctx.decode(v) for v in ints])

    @classmethod
    def through(cls, P: ProjPoint, Q: ProjPoint) -> "ProjLine":
        F = P.ctx
        return cls(F, cross(F, P.coords, Q.coords), basis=(P, Q))

    def contains(self, P: ProjPoint) -> bool:
        F = self.ctx
        a, b, c = self.coeffs
        x, y, z = P.coords
        return F.add(F.add(F.mul(a, x), F.mul(b, y)), F.mul(c, z)) == F.zero

    def point(self, s, t) -> ProjPoint:
        """The point s*B0 + t*B1 for raw parameters."""
        F = self.ctx
        P, Q = self.basis
        return ProjPoint(F, [F.add(F.mul(s, u), F.mul(t, v)) for u, v in zip(P.coords, Q.coords)])

    def encode(self):
        return tuple(self.ctx.encode(c) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, ProjLine) and self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "[" + ":".join(str(v) for v in self.encode()) + "]"


def cross(F: FieldCtx, u, v):
    m, s = F.mul, F.sub
    return (
        s(m(u[1], v[2]), m(u[2], v[1])),
        s(m(u[2], v[0]), m(u[0], v[2])),
        s(m(u[0], v[1]), m(u[1], v[0])),
    )


def enumerate_points(F: FieldCtx):
    """All q^2 + q + 1 points of P^2(F) in a fixed order."""
    zero, one = F.zero, F.one
    els = list(F.elements())
    for x in els:
        for y in els:
            yield ProjPoint(F, (x, y, one), normalized=True)
    for x in els:
        yield ProjPoint(F, (x, one, zero), normalized=True)
    yield ProjPoint(F, (one, zero, zero), normalized=True)


def enumerate_lines(F: FieldCtx):
    """All q^2 + q + 1 lines of P^2(F): (a:b:1), then (a:1:0), then (1:0:0)."""
    zero, one = F.zero, F.one
    els = list(F.elements())
    for a in els:
        for b in els:
            yield ProjLine(F, (a, b, one))
    for a in els:
        yield ProjLine(F, (a, one, zero))
    yield ProjLine(F, (one, zero, zero))


# -- 3x3 matrices over raw values ------------------------------------------


def mat_det(F, M):
    m, a, s = F.mul, F.add, F.sub
    return a(a(m(M[0][0], s(m(M[1][1], M[2][2]), m(M[1][2], M[2][1]))),
               F.neg(m(M[0][1], s(m(M[1][0], M[2][2]), m(M[1][2], M[2][0]))))),
             m(M[0][2], s(m(M[1][0], M[2][1]), m(M[1][1], M[2][0]))))


def mat_inv(F, M):
    d = mat_det(F, M)
    if d == F.zero:
        raise ValueError("matrix is singular")
    di = F.inv(d)
    m, s = F.mul, F.sub
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = s(m(M[r[0]][c[0]], M[r[1]][c[1]]), m(M[r[0]][c[1]], M[r[1]][c[0]]))
            cof[i][j] = minor if (i + j) % 2 == 0 else F.neg(minor)
    return [[m(cof[j][i], di) for j in range(3)] for i in range(3)]


def mat_vec(F, M, v):
    m, a = F.mul, F.add
    return tuple(a(a(m(M[i][0], v[0]), m(M[i][1], v[1])), m(M[i][2], v[2])) for i in range(3))


def vec_mat(F, v, M):
    m, a = F.mul, F.add
    return tuple(a(a(m(v[0], M[0][j]), m(v[1], M[1][j])), m(v[2], M[2][j])) for j in range(3))
