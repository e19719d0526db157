"""Common zeros of ternary forms over the algebraic closure, as closed points.

Affine chart z = 1 is handled by eliminating y with a resultant, factoring the
eliminant in x, adjoining a root of each factor and solving for y by a
univariate gcd.  The line z = 0 and the point (1:0:0) are handled directly.
When every pairwise resultant vanishes the system is split along a bivariate
gcd and each branch is solved recursively.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from . import polyops
from .field import ExtensionField, FieldCtx
from .forms import TernaryForm, UniPoly, generic_resultant, _prem
from .projective import ProjPoint


@dataclass(frozen=True)
class ClosedPoint:
    point: ProjPoint  # one representative over its field of definition
    degree: int       # number of conjugates over the base field


class PositiveDimensional(Exception):
    """The forms share a curve component; ``witness`` is a point on it."""

    def __init__(self, witness: ProjPoint):
        super().__init__("common zero set is a curve")
        self.witness = witness


@functools.lru_cache(maxsize=4096)
def adjoin_root(F: FieldCtx, modulus: tuple):
    """Field generated over F by a root of the monic irreducible ``modulus``; returns (E, root)."""
    if len(modulus) == 2:
        return F, F.neg(modulus[0])
    E = ExtensionField(F, modulus, check=False)
    return E, E.generator_raw()


def roots_in_extensions(F: FieldCtx, poly, rng=None):
    """One root per irreducible factor of ``poly``: list of (E, root, degree)."""
    out = []
    for g, _ in polyops.factor(F, poly, rng):
        E, r = adjoin_root(F, tuple(g))
        out.append((E, r, len(g) - 1))
    return out


# -- bivariate helpers: lists (ascending in y) of UniPoly in x ---------------


def _btrim(A):
    A = list(A)
    while A and not A[-1]:
        A.pop()
    return A


def _content(A):
    g = None
    for c in A:
        if c:
            g = c.monic() if g is None else g.gcd(c)
            if g.degree == 0:
                break
    return g


def _primitive(A):
    c = _content(A)
    if c is None or c.degree == 0:
        return _btrim(A)
    return _btrim([a // c for a in A])


def bivariate_gcd(A, B):
    """Gcd in F[x][y], normalized so the leading y-coefficient is monic in x."""
    A, B = _btrim(A), _btrim(B)
    if not A:
        return B
    if not B:
        return A
    c = _content(A).gcd(_content(B))
    A, B = _primitive(A), _primitive(B)
    if len(A) < len(B):
        A, B = B, A
    while B and len(B) > 1:
        R = _btrim(_prem(A, B))
        A, B = B, _primitive(R) if R else []
    K = c.ctx
    g = _primitive(A) if not B else [UniPoly(K, [K.one])]
    inv = UniPoly(K, [K.inv(g[-1].lc)])
    return [x * inv * c for x in g]


def bivariate_divide(A, G):
    """Exact quotient A / G in F[x][y]."""
    A, G = _btrim(A), _btrim(G)
    one = UniPoly(G[0].ctx, [G[0].ctx.one])
    dg = len(G) - 1
    lc = G[-1]
    R = list(A)
    Q = [one - one] * max(len(A) - dg, 1)
    scale_pow = 0
    # pseudo-division keeping track of the lc power
    while R and len(R) - 1 >= dg:
        s = len(R) - 1 - dg
        lr = R[-1]
        R = [r * lc for r in R]
        Q = [qq * lc for qq in Q]
        Q[s] = Q[s] + lr
        for j, g in enumerate(G):
            R[s + j] = R[s + j] - lr * g
        R = _btrim(R)
        scale_pow += 1
    if R:
        raise ValueError("not divisible")
    if scale_pow:
        d = lc ** scale_pow
        Q = [qq // d for qq in Q]
    return _btrim(Q)


def _is_constant(A):
    return len(A) == 1 and A[0].degree == 0


def _specialize(E, F, A, alpha):
    """A(alpha, y) over E as raw coefficient list."""
    out = []
    for c in A:
        cs = [E.embed(v, F) for v in c.coeffs]
        out.append(polyops.evaluate(E, cs, alpha))
    return polyops.trim(out, E.zero)


def _point_on_curve(F, A, rng):
    """Some point (over an extension) of the affine curve A(x, y) = 0, A nonconstant."""
    if len(A) == 1:
        E, r, _ = roots_in_extensions(F, list(A[0].coeffs), rng)[0]
        return ProjPoint(E, (r, E.zero, E.one))
    k = 1
    while True:
        K = F.extension(k) if k > 1 else F
        for x in K.elements():
            spec = _specialize(K, F, A, x)
            if len(spec) >= 2:
                E, r, _ = roots_in_extensions(K, spec, rng)[0]
                return ProjPoint(E, (E.embed(x, K), r, E.one))
        k += 1


def _affine_points(F, system, rng):
    system = [_btrim(A) for A in system]
    system = [A for A in system if A]
    if any(_is_constant(A) for A in system):
        return []
    if not system:
        raise PositiveDimensional(ProjPoint(F, (F.zero, F.zero, F.one)))
    if len(system) == 1:
        raise PositiveDimensional(_point_on_curve(F, system[0], rng))
    one = UniPoly(F, [F.one])
    elim = None
    for A in system:
        if len(A) == 1:
            elim = A[0]
            break
    if elim is None:
        n = len(system)
        for i in range(n):
            for j in range(i + 1, n):
                R = generic_resultant(system[i], system[j], one)
                if R:
                    elim = R
                    break
            if elim is not None:
                break
    if elim is None:
        # every pair shares a factor: split along gcd of the first two
        A, B = system[0], system[1]
        G = bivariate_gcd(A, B)
        rest = system[2:]
        pts = _affine_points(F, [G] + rest, rng)
        pts += _affine_points(F, [bivariate_divide(A, G), bivariate_divide(B, G)] + rest, rng)
        return _dedupe(pts)
    out = []
    for g, _ in polyops.factor(F, list(elim.coeffs), rng):
        E, alpha = adjoin_root(F, tuple(g))
        k = len(g) - 1
        specs = [_specialize(E, F, A, alpha) for A in system]
        specs = [s for s in specs if s]
        if not specs:
            raise PositiveDimensional(ProjPoint(E, (alpha, E.zero, E.one)))
        h = specs[0]
        for s in specs[1:]:
            h = polyops.gcd(E, h, s)
            if len(h) <= 1:
                break
        if len(h) <= 1:
            continue
        for rho, _ in polyops.factor(E, h, rng):
            E2, beta = adjoin_root(E, tuple(rho))
            out.append(ClosedPoint(ProjPoint(E2, (E2.embed(alpha, E), beta, E2.one)), k * (len(rho) - 1)))
    return out


def _dedupe(pts):
    seen = set()
    out = []
    for cp in pts:
        key = (id(cp.point.ctx), cp.point.coords)
        if key not in seen:
            seen.add(key)
            out.append(cp)
    return out


def closed_points(forms, rng=None):
    """All common zeros of ``forms`` (ternary forms over one ctx) as closed points.

    Raises PositiveDimensional when the zero set contains a curve.
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        raise ValueError("no nonzero forms")
    F = forms[0].ctx
    if rng is None:
        rng = F.make_rng()
    out = _affine_points(F, [f.to_bivariate(var=1, chart=2) for f in forms], rng)
    # line z = 0, chart y = 1
    polys = []
    for f in forms:
        cs = [F.zero] * (f.d + 1)
        for (i, j, k), c in f.terms.items():
            if k == 0:
                cs[i] = c
        polys.append(polyops.trim(cs, F.zero))
    polys = [p for p in polys if p]
    if not polys:
        raise PositiveDimensional(ProjPoint(F, (F.zero, F.one, F.zero)))
    h = polys[0]
    for p in polys[1:]:
        h = polyops.gcd(F, h, p)
    if len(h) > 1:
        for g, _ in polyops.factor(F, h, rng):
            E, r = adjoin_root(F, tuple(g))
            out.append(ClosedPoint(ProjPoint(E, (r, E.one, E.zero)), len(g) - 1))
    if all(f.coeff((f.d, 0, 0)) == F.zero for f in forms):
        out.append(ClosedPoint(ProjPoint(F, (F.one, F.zero, F.zero)), 1))
    return out


def first_common_zero(forms, rng=None):
    """A common zero (ProjPoint over some extension) or None."""
    try:
        pts = closed_points(forms, rng)
    except PositiveDimensional as exc:
        return exc.witness
    return pts[0].point if pts else None


def _eliminant(F, system):
    one = UniPoly(F, [F.one])
    for A in system:
        if len(A) == 1:
            return A[0]
    for i in range(len(system)):
        for j in range(i + 1, len(system)):
            R = generic_resultant(system[i], system[j], one)
            if R:
                return R
    return None


def rational_common_zeros(forms, rng=None):
    """Common zeros of ``forms`` with coordinates in the base field (sorted, normalized)."""
    forms = [f for f in forms if not f.is_zero()]
    F = forms[0].ctx
    if rng is None:
        rng = F.make_rng()
    system = [_btrim(f.to_bivariate(var=1, chart=2)) for f in forms]
    system = [A for A in system if A]
    out = []
    if any(_is_constant(A) for A in system):
        pass
    else:
        elim = _eliminant(F, system) if len(system) > 1 else None
        if elim is None:
            pts = closed_points(forms, rng)
            return [cp.point for cp in pts if cp.degree == 1]
        for x0 in polyops.roots(F, list(elim.coeffs), rng):
            specs = [s for s in (_specialize(F, F, A, x0) for A in system) if s]
            if not specs:
                raise PositiveDimensional(ProjPoint(F, (x0, F.zero, F.one)))
            h = specs[0]
            for s in specs[1:]:
                h = polyops.gcd(F, h, s)
            if len(h) > 1:
                for y0 in polyops.roots(F, h, rng):
                    out.append(ProjPoint(F, (x0, y0, F.one), normalized=True))
    polys = []
    for f in forms:
        cs = [F.zero] * (f.d + 1)
        for (i, j, k), c in f.terms.items():
            if k == 0:
                cs[i] = c
        polys.append(polyops.trim(cs, F.zero))
    polys = [p for p in polys if p]
    if not polys:
        raise PositiveDimensional(ProjPoint(F, (F.zero, F.one, F.zero)))
    h = polys[0]
    for p in polys[1:]:
        h = polyops.gcd(F, h, p)
    if len(h) > 1:
        for x0 in polyops.roots(F, h, rng):
            out.append(ProjPoint(F, (x0, F.one, F.zero), normalized=True))
    if all(f.coeff((f.d, 0, 0)) == F.zero for f in forms):
        out.append(ProjPoint(F, (F.one, F.zero, F.zero), normalized=True))
    return out
