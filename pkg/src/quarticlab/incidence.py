"""Lines meeting a quartic: intersection taxonomy, split lines, split tangents, pencils."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import polyops
from .forms import BinaryForm, TernaryForm, roots_with_multiplicity
from .projective import ProjLine, ProjPoint, enumerate_lines, mat_det
from .quartic import PlaneQuartic, restriction_at, tangent_line

CASE_BY_PATTERN = {(1, 1, 1, 1): 1, (2, 1, 1): 2, (3, 1): 3, (2, 2): 4, (4,): 5}


@dataclass(frozen=True)
class IntersectionDivisor:
    line: ProjLine
    rational: tuple   # ((ProjPoint, multiplicity), ...)
    residual: tuple   # ((degree, multiplicity), ...) of irreducible factors of degree >= 2
    case: int
    split: bool

    def multiplicities(self):
        ms = [m for _, m in self.rational] + [m for d, m in self.residual for _ in range(d)]
        return tuple(sorted(ms, reverse=True))

    def degree(self) -> int:
        return sum(m for _, m in self.rational) + sum(d * m for d, m in self.residual)

    def record(self) -> dict:
        return {
            "line": list(self.line.encode()),
            "case": self.case,
            "rational": [[list(P.encode()), m] for P, m in self.rational],
            "residual": [[d, m] for d, m in self.residual],
            "split": self.split,
        }


def case_label(mults) -> int:
    return CASE_BY_PATTERN[tuple(sorted(mults, reverse=True))]


def divisor_from_restriction(L: ProjLine, g: BinaryForm, rng=None) -> IntersectionDivisor:
    rational, residual = roots_with_multiplicity(g, rng)
    pts = tuple((L.point(s, t), m) for (s, t), m in rational)
    mults = [m for _, m in rational] + [m for d, m in residual for _ in range(d)]
    return IntersectionDivisor(L, pts, tuple(residual), case_label(mults), not residual)


def intersection_divisor(C: PlaneQuartic, L: ProjLine, rng=None) -> IntersectionDivisor:
    return divisor_from_restriction(L, restriction_at(C, L), rng)


def splits_completely(g: BinaryForm) -> bool:
    """All roots of the binary form are rational (counted with multiplicity)."""
    F = g.ctx
    p = g.dehomogenize()
    if len(p) <= 2:
        return True
    p = polyops.monic(F, p)
    x = [F.zero, F.one]
    if F.q <= polyops.SCAN_LIMIT:
        r = [F.one]
        for a in F.elements():
            if polyops.evaluate(F, p, a) == F.zero:
                r = polyops.mul(F, r, [F.neg(a), F.one])
    else:
        r = polyops.gcd(F, p, polyops.sub(F, polyops.powmod(F, x, F.q, p), x))
    total, cur = 0, p
    while len(r) > 1:
        cur = polyops.divmod_(F, cur, r)[0]
        total += len(r) - 1
        r = polyops.gcd(F, cur, r)
    return total == len(p) - 1


def find_split_line(C: PlaneQuartic):
    """First line (in enumeration order) meeting C only in rational points, with its divisor."""
    for L in enumerate_lines(C.ctx):
        g = restriction_at(C, L)
        if splits_completely(g):
            return L, divisor_from_restriction(L, g)
    return None


def count_split_lines(C: PlaneQuartic) -> int:
    return sum(1 for L in enumerate_lines(C.ctx) if splits_completely(restriction_at(C, L)))


def tangent_divisor(C: PlaneQuartic, P: ProjPoint):
    L = tangent_line(C, P)
    return L, restriction_at(C, L)


def find_split_tangent(C: PlaneQuartic, points=None):
    """First rational point whose tangent meets C only in rational points."""
    for P in (points if points is not None else C.iter_points()):
        L, g = tangent_divisor(C, P)
        if splits_completely(g):
            return P, L, divisor_from_restriction(L, g)
    return None


def serre_weil_floor(q: int) -> int:
    return q + 1 - 3 * math.isqrt(4 * q)


def _le_sqrt(r: Fraction, c: int, q: int) -> bool:
    """r <= c * sqrt(q), exactly."""
    return r <= 0 or r * r <= c * c * q


def chebotarev_threshold(q: int) -> bool:
    """(q+1)/6 > sqrt(q) + 10, the condition forcing a completely split member."""
    r = Fraction(q + 1, 6) - 10
    return r > 0 and r * r > q


def chebotarev_window(q: int, D: int):
    """Float rendering of [(q+1)/6 - sqrt q - D, (q+1)/3 + 2 sqrt q + D]."""
    s = math.sqrt(q)
    return ((q + 1) / 6 - s - D, (q + 1) / 3 + 2 * s + D)


def in_chebotarev_window(N: int, q: int, D: int) -> bool:
    low_ok = _le_sqrt(Fraction(q + 1, 6) - D - N, 1, q)
    high_ok = _le_sqrt(N - Fraction(q + 1, 3) - D, 2, q)
    return low_ok and high_ok


# -- pencils ------------------------------------------------------------------


def completing_basis(P: ProjPoint):
    """Two standard basis vectors A, B with det(P, A, B) != 0."""
    F = P.ctx
    e = [(F.one, F.zero, F.zero), (F.zero, F.one, F.zero), (F.zero, F.zero, F.one)]
    for i in range(3):
        for j in range(i + 1, 3):
            if mat_det(F, [P.coords, e[i], e[j]]) != F.zero:
                return e[i], e[j]
    raise ValueError("degenerate point")


@dataclass
class PencilData:
    """F(sP + tA + uB) organised by the power of s; c[n] is a binary form of degree n in (t, u)."""
    point: ProjPoint
    A: tuple
    B: tuple
    c: list  # TernaryForms in (y, z) <-> (t, u), x-exponent 0

    def direction_point(self, t, u):
        F = self.point.ctx
        return ProjPoint(F, [F.add(F.mul(t, a), F.mul(u, b)) for a, b in zip(self.A, self.B)])

    def fiber_cubic(self, t, u):
        """Raw coefficients (c1, c2, c3, c4) of the residual cubic c1 s^3 + c2 s^2 w + c3 s w^2 + c4 w^3."""
        F = self.point.ctx
        return [self.c[n].evaluate((F.zero, t, u)) for n in range(1, 5)]

    def discriminant(self) -> TernaryForm:
        a, b, c, d = self.c[1], self.c[2], self.c[3], self.c[4]
        return cubic_discriminant(a, b, c, d)


def cubic_discriminant(a, b, c, d):
    """b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd for ring elements supporting + - * and int scaling."""
    return (b * b * c * c) - (a * c * c * c) * 4 - (b * b * b * d) * 4 - (a * a * d * d) * 27 + (a * b * c * d) * 18


def pencil_data(C: PlaneQuartic, P: ProjPoint) -> PencilData:
    F = P.ctx
    if not C.contains(P):
        raise ValueError(f"point {P} is not on the curve")
    A, B = completing_basis(P)
    rows = [(P.coords[i], A[i], B[i]) for i in range(3)]
    G = C.over(F).linear_substitute(rows)
    c = [TernaryForm(F, n) for n in range(5)]
    for (i, j, k), v in G.terms.items():
        n = 4 - i
        c[n] = c[n] + TernaryForm(F, n, {(0, j, k): v})
    return PencilData(P, A, B, c)


def binary_of(T: TernaryForm) -> BinaryForm:
    """TernaryForm in (y, z) only, as a binary form in (s, t) = (y, z)."""
    return T.binary_at(0)


def radical_degree(g: BinaryForm) -> int:
    return sum(h.d for h, _ in g.squarefree().factors)


@dataclass
class PencilReport:
    point: ProjPoint
    fibers: list                 # per direction: {"direction", "line", "type", "tangent", "ramified"}
    N: int                       # unramified completely split fibres off the tangent
    D: int                       # degree of the branch locus (|D|)
    D_exact: bool
    tangent_split: bool          # residual of the tangent line is three distinct rational points
    split_tangent: ProjLine | None = None  # a ramified fibre with only rational points, if any
    discriminant: BinaryForm | None = None

    @property
    def q(self):
        return self.point.ctx.q

    @property
    def within_window(self) -> bool:
        return in_chebotarev_window(self.N, self.q, self.D)

    @property
    def flagged(self) -> bool:
        return self.N == 0

    def record(self) -> dict:
        lo, hi = chebotarev_window(self.q, self.D)
        return {
            "point": list(self.point.encode()),
            "N": self.N,
            "D": self.D,
            "D_exact": self.D_exact,
            "window": [round(lo, 6), round(hi, 6)],
            "within_window": self.within_window,
            "tangent_split": self.tangent_split,
            "split_tangent": list(self.split_tangent.encode()) if self.split_tangent else None,
            "flagged": self.flagged,
        }


def _cubic_type(F, cub):
    """Splitting type of a nonzero binary cubic as sorted ((degree, mult), ...), rational roots listed as degree 1."""
    g = BinaryForm(F, cub)
    out = []
    for h, m in g.factor():
        out.append((h.d, m))
    return tuple(sorted(out, key=lambda dm: (-dm[0], -dm[1])))


def pencil_report(C: PlaneQuartic, P: ProjPoint) -> PencilReport:
    F = P.ctx
    data = pencil_data(C, P)
    disc = binary_of(data.discriminant())
    if disc.is_zero():
        D, exact = 10, False
    else:
        D, exact = radical_degree(disc), True
    directions = [(F.one, u) for u in F.elements()] + [(F.zero, F.one)]
    fibers = []
    N = 0
    tangent_split = False
    split_tangent = None
    for t, u in directions:
        cub = data.fiber_cubic(t, u)
        Q = data.direction_point(t, u)
        line = ProjLine.through(P, Q)
        tangent = cub[0] == F.zero
        typ = _cubic_type(F, cub)
        ramified = any(m > 1 for _, m in typ)
        all_rational = all(d == 1 for d, _ in typ)
        distinct_rational = all_rational and not ramified
        if tangent:
            tangent_split = distinct_rational
        elif distinct_rational:
            N += 1
        full_ramified = ramified or tangent
        if all_rational and full_ramified and split_tangent is None:
            split_tangent = line
        fibers.append({"direction": (F.encode(t), F.encode(u)), "line": line, "type": typ,
                       "tangent": tangent, "ramified": ramified})
    return PencilReport(P, fibers, N, D, exact, tangent_split, split_tangent, disc)
