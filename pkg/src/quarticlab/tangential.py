"""The tangential correspondence T(P) = (T_P C . C) - 2P and the curve X_C of its graph."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .forms import BinaryForm, TernaryForm, roots_with_multiplicity, ternary_divisibility
from .projective import ProjPoint, cross
from .quartic import DEFAULT_BUDGET, PlaneQuartic, restriction_at, tangent_line


@dataclass(frozen=True)
class TangentialImage:
    point: ProjPoint
    rational: tuple       # ((ProjPoint, multiplicity), ...)
    residual_degree: int  # 2 when T(P) is a conjugate pair, else 0

    def degree(self) -> int:
        return sum(m for _, m in self.rational) + self.residual_degree

    def support_size(self) -> int:
        return len(self.rational)

    def record(self) -> dict:
        return {"point": list(self.point.encode()),
                "rational": [[list(Q.encode()), m] for Q, m in self.rational],
                "residual_degree": self.residual_degree}


def tangential_image(C: PlaneQuartic, P: ProjPoint) -> TangentialImage:
    """Residual of the tangent section after removing exactly 2P."""
    L = tangent_line(C, P)
    g = restriction_at(C, L)
    E = L.ctx
    c = g.coeffs
    if c[0] != E.zero or c[1] != E.zero:
        raise ValueError("tangent restriction lacks the double root at P")
    r = BinaryForm(E, c[2:])
    rational, residual = roots_with_multiplicity(r)
    pts = tuple((L.point(s, t), m) for (s, t), m in rational)
    return TangentialImage(P, pts, sum(d * m for d, m in residual))


# -- counting X_C -------------------------------------------------------------


def _evaluator(form: TernaryForm, E):
    """Fast raw evaluation of ``form`` at a point of E^3."""
    terms = [(E.embed(v, form.ctx) if form.ctx is not E else v, e) for e, v in form.terms.items()]
    mul, add, zero, one = E.mul, E.add, E.zero, E.one

    def ev(pt):
        x, y, z = pt
        px = [one, x, mul(x, x)]
        py = [one, y, mul(y, y)]
        pz = [one, z, mul(z, z)]
        for pows, v in ((px, x), (py, y), (pz, z)):
            pows.append(mul(pows[2], v))
            pows.append(mul(pows[3], v))
        acc = zero
        for c, (i, j, k) in terms:
            acc = add(acc, mul(c, mul(px[i], mul(py[j], pz[k]))))
        return acc

    return ev


def _second_point(E, grad, P):
    """A point of the line grad . v = 0 different from P."""
    a, b, c = grad
    zero, one = E.zero, E.one
    if c != zero:
        cands = ((c, zero, E.neg(a)), (zero, c, E.neg(b)))
    elif b != zero:
        cands = ((b, E.neg(a), zero), (zero, zero, one))
    else:
        cands = ((zero, one, zero), (zero, zero, one))
    for Q in cands:
        if cross(E, Q, P) != (zero, zero, zero):
            return Q
    raise ValueError("degenerate tangent line")


def _quadratic_support(E, c2, c3, c4) -> int:
    """Number of distinct rational roots of c2 s^2 + c3 s t + c4 t^2 (not identically zero)."""
    zero = E.zero
    if c2 == zero:
        return 2 if c3 != zero else 1
    if E.p == 2:
        if c3 == zero:
            return 1
        u = E.div(E.mul(c2, c4), E.mul(c3, c3))
        return 2 if E.abs_trace(u) == zero else 0
    disc = E.sub(E.mul(c3, c3), E.mul(E.from_int(4), E.mul(c2, c4)))
    if disc == zero:
        return 1
    return 2 if E.is_square(disc) else 0


def fiber_sizes(C: PlaneQuartic, m: int = 1, budget: int = DEFAULT_BUDGET):
    """Yield (P, number of distinct rational points of T(P)) over F_{q^m}."""
    F = C.ctx
    E = F.extension(m) if m > 1 else F
    form = C.over(E)
    ev = _evaluator(form, E)
    grads = [_evaluator(form.derivative(v), E) for v in range(3)]
    add, sub, mul, zero = E.add, E.sub, E.mul, E.zero
    for P in C.iter_points(m, budget):
        p = P.coords
        g = [d(p) for d in grads]
        if g == [zero, zero, zero]:
            raise ValueError(f"singular point {P}")
        Q = _second_point(E, g, p)
        # F(sP + tQ) = c2 s^2 t^2 + c3 s t^3 + c4 t^4 on the tangent
        c4 = ev(Q)
        gq = [d(Q) for d in grads]
        c3 = add(add(mul(p[0], gq[0]), mul(p[1], gq[1])), mul(p[2], gq[2]))
        c2 = sub(sub(ev(tuple(add(u, v) for u, v in zip(p, Q))), c3), c4)
        yield P, _quadratic_support(E, c2, c3, c4)


def count_xc_points(C: PlaneQuartic, m: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """Set count of X_C(F_{q^m}) = {(P, Q) : Q in supp T(P)}."""
    return sum(n for _, n in fiber_sizes(C, m, budget))


# -- Frobenius non-classicality ------------------------------------------------


def frobenius_form(C: PlaneQuartic) -> TernaryForm:
    """x^q F_x + y^q F_y + z^q F_z."""
    F = C.ctx
    q = F.q
    out = TernaryForm(F, q + 3)
    for v, g in enumerate(C.gradient):
        e = [0, 0, 0]
        e[v] = q
        out = out + TernaryForm(F, q, {tuple(e): F.one}) * g
    return out


def is_frobenius_nonclassical(C: PlaneQuartic) -> bool:
    G = frobenius_form(C)
    if G.is_zero():
        return True
    return ternary_divisibility(G, C.form) is not None


# -- genus bookkeeping ---------------------------------------------------------


@dataclass(frozen=True)
class GenusConstants:
    nu: int
    deg_pi1: int
    deg_pi2: int
    a: int
    b: int
    arithmetic_genus: int
    riemann_hurwitz_genus: int
    curve_genus: int
    branch_degree: int

    def record(self) -> dict:
        return dict(self.__dict__)


def genus_constants(d: int = 4) -> GenusConstants:
    """Arithmetic genus of X_C from its class a F1 + b F2 in C x C, and from Riemann-Hurwitz."""
    g_C = (d - 1) * (d - 2) // 2
    nu = 2                                  # T(P) + 2P is the tangent section
    deg_pi1 = d - 2                         # points of T(P)
    deg_pi2 = d * (d - 1) - 2               # tangents through a point Q, less the one at Q
    a, b = deg_pi2 + nu, deg_pi1 + nu
    # class a F1 + b F2 - nu Delta on C x C; adjunction with K = (2g-2)(F1 + F2)
    k = 2 * g_C - 2
    diag_sq = -k
    self_int = 2 * a * b - 2 * nu * (a + b) + nu * nu * diag_sq
    canon = k * (a + b) - nu * 2 * k
    arithmetic = (self_int + canon) // 2 + 1
    # pi_1 has degree deg_pi1 over C, ramified at the bitangency points (2 per bitangent)
    bitangents = (d * (d - 2) * (d * d - 9)) // 2
    branch = 2 * bitangents
    rh = ((deg_pi1 * (2 * g_C - 2) + branch) + 2) // 2
    return GenusConstants(nu, deg_pi1, deg_pi2, a, b, arithmetic, rh, g_C, branch)


# -- irreducibility verdict ------------------------------------------------------


def _isqrt_le(lhs: int, c: int, q: int, m: int) -> bool:
    """lhs <= c * q^(m/2), exactly."""
    if lhs <= 0:
        return True
    return lhs * lhs <= c * c * q ** m


def irreducible_margin(N: int, q: int, m: int, pi: int = 33) -> float:
    """2 pi q^(m/2) - |N - (q^m + 1)|, nonnegative iff the Aubry-Perret bound holds."""
    return 2 * pi * q ** (m / 2) - abs(N - (q ** m + 1))


def crossing_correction(pi: int = 33, g_C: int = 3) -> int:
    """Total delta invariant of two genus-g_C components making up arithmetic genus pi."""
    return pi + 1 - 2 * g_C


def reducible_margin(N: int, q: int, m: int, g_C: int = 3, pi: int = 33) -> float:
    return 2 * 2 * g_C * q ** (m / 2) + crossing_correction(pi, g_C) - abs(N - 2 * (q ** m + 1))


def in_irreducible_window(N: int, q: int, m: int, pi: int = 33) -> bool:
    return _isqrt_le(abs(N - (q ** m + 1)), 2 * pi, q, m)


def in_reducible_window(N: int, q: int, m: int, g_C: int = 3, pi: int = 33) -> bool:
    return _isqrt_le(abs(N - 2 * (q ** m + 1)) - crossing_correction(pi, g_C), 4 * g_C, q, m)


def separating_degrees(q: int, pi: int = 33, g_C: int = 3, count: int = 2):
    """First ``count`` consecutive m where the two windows are disjoint."""
    m = 1
    while True:
        lo_red = 2 * (q ** m + 1) - crossing_correction(pi, g_C)
        hi_irr = q ** m + 1
        # disjoint iff lo_red - hi_irr > (2 pi + 4 g_C) q^(m/2)
        gap = lo_red - hi_irr
        if gap > 0 and gap * gap > (2 * pi + 4 * g_C) ** 2 * q ** m:
            return list(range(m, m + count))
        m += 1


@dataclass
class CorrespondenceCensus:
    verdict: str                  # irreducible | reducible | inconclusive
    method: str
    rows: list = field(default_factory=list)  # {m, count, irr_margin, red_margin, verdict}
    tag: str | None = None

    def record(self) -> dict:
        return {"verdict": self.verdict, "method": self.method, "tag": self.tag, "rows": self.rows}


def census_row(C: PlaneQuartic, m: int, budget: int = DEFAULT_BUDGET) -> dict:
    q = C.ctx.q
    N = count_xc_points(C, m, budget)
    irr = in_irreducible_window(N, q, m)
    red = in_reducible_window(N, q, m)
    verdict = "irreducible" if irr and not red else "reducible" if red and not irr else "inconclusive"
    return {"m": m, "count": N, "irr_margin": round(irreducible_margin(N, q, m), 6),
            "red_margin": round(reducible_margin(N, q, m), 6), "verdict": verdict}


def xc_irreducibility_verdict(C: PlaneQuartic, budget: int = DEFAULT_BUDGET, degrees=None) -> CorrespondenceCensus:
    F = C.ctx
    if F.p != 2:
        from .special import bitangency_classification, exceptional_family
        tag = exceptional_family(C) if F.p == 3 else None
        if tag is not None:
            return CorrespondenceCensus("irreducible", "special path", tag=tag)
        cls = bitangency_classification(C, k_max=1 if F.q <= 32 else 0)
        return CorrespondenceCensus("irreducible", "ramification at a bitangency point (" + cls["evidence"] + ")")
    if degrees is None:
        degrees = separating_degrees(F.q)
    rows = [census_row(C, m, budget) for m in degrees]
    verdicts = {r["verdict"] for r in rows}
    verdict = verdicts.pop() if len(verdicts) == 1 else "inconclusive"
    return CorrespondenceCensus(verdict, "weil windows", rows)


def aubry_bound_check(C: PlaneQuartic, m: int = 1, budget: int = DEFAULT_BUDGET) -> dict:
    q = C.ctx.q
    N = count_xc_points(C, m, budget)
    return {"m": m, "count": N, "center": q ** m + 1, "bound": 2 * genus_constants().arithmetic_genus * math.sqrt(q ** m),
            "margin": irreducible_margin(N, q, m), "holds": in_irreducible_window(N, q, m)}
