"""Flexes, bitangents, the characteristic-3 flex conic and Galois points."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import polyops
from .elimination import ClosedPoint, PositiveDimensional, closed_points, rational_common_zeros
from .field import FieldCtx
from .forms import BinaryForm, TernaryForm, aij, ternary_divisibility
from .incidence import binary_of, pencil_data
from .projective import ProjLine, ProjPoint, enumerate_lines
from .quartic import (DEFAULT_BUDGET, PlaneQuartic, apply_pgl3, random_matrix, restriction_at,
                      tangent_line)


def field_degree(E: FieldCtx, base: FieldCtx) -> int:
    return E.degree // base.degree


def definition_degree(values, E: FieldCtx, base: FieldCtx) -> int:
    """Smallest j with all ``values`` (raw, in E) fixed by x -> x^(q^j), q = |base|."""
    n = field_degree(E, base)
    for j in range(1, n + 1):
        if n % j:
            continue
        Q = base.q ** j
        if all(E.pow(v, Q) == v for v in values):
            return j
    return n


# -- flexes -------------------------------------------------------------------


@dataclass(frozen=True)
class FlexRecord:
    point: ProjPoint
    degree: int          # degree of the closed point over the curve's field
    tangent: ProjLine
    contact: int
    weight: int | None

    def record(self) -> dict:
        out = {"point": list(self.point.encode()), "degree": self.degree, "contact": self.contact,
               "tangent": list(self.tangent.encode())}
        if self.weight is not None:
            out["weight"] = self.weight
        return out


def flex_weight(p: int, contact: int):
    if p > 3:
        return contact - 2
    if p == 3 and contact == 3:
        return 3
    return None


def _flex_record(C: PlaneQuartic, P: ProjPoint, degree: int):
    L = tangent_line(C, P)
    m = restriction_at(C, L).infinity_multiplicity()
    if m < 3:
        return None
    return FlexRecord(P, degree, L, m, flex_weight(C.ctx.p, m))


def flexes_rational(C: PlaneQuartic, k: int = 1, budget: int = DEFAULT_BUDGET):
    """Flexes with coordinates in F_{q^k}, by contact order at every point."""
    out = []
    for P in C.iter_points(k, budget):
        rec = _flex_record(C, P, 1)
        if rec is not None:
            out.append(rec)
    return out


def hessian(C: PlaneQuartic) -> TernaryForm:
    f = C.form
    d = [f.derivative(v) for v in range(3)]
    H = [[d[i].derivative(j) for j in range(3)] for i in range(3)]
    return (H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1])
            - H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0])
            + H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]))


class HessianDegenerate(ValueError):
    pass


def hessian_flexes(C: PlaneQuartic):
    """(Hessian, rational flexes from C meet Hessian); needs p >= 5."""
    if C.ctx.p in (2, 3):
        raise HessianDegenerate("Hessian degenerate in this characteristic")
    H = hessian(C)
    pts = rational_common_zeros([C.form, H])
    recs = []
    for P in pts:
        rec = _flex_record(C, P, 1)
        if rec is None:
            raise AssertionError(f"Hessian point {P} is not a flex")
        recs.append(rec)
    return H, recs


# -- the characteristic-3 conic ---------------------------------------------------


@dataclass
class Char3FlexConic:
    hbar2: TernaryForm        # 2 f1 f2 f12 - f1^2 f22 - f2^2 f11
    a: object                 # raw correction coefficients
    b: object
    c: object
    htilde: TernaryForm | None  # sextic with hbar2 - a20 f^2 - f (a x^3 + b y^3 + c z^3) z = htilde z^2
    h: TernaryForm | None       # cube root of htilde (the conic in these coordinates)
    identity_holds: bool
    support_ok: bool
    degenerate: bool
    conic: TernaryForm | None = None   # flex conic pulled back from admissible coordinates
    transform: list | None = None      # matrix M used (conic(v) = h'(M v)); None means identity
    retries: int = 0

    SUPPORT = frozenset({(6, 0, 0), (0, 6, 0), (0, 0, 6), (3, 3, 0), (3, 0, 3), (0, 3, 3)})


def _abc(f: TernaryForm):
    F = f.ctx
    A = lambda i, j: f.coeff(aij(i, j))
    m, ad, neg = F.mul, F.add, F.neg
    two = F.from_int(2)
    a = ad(ad(m(A(4, 0), A(1, 1)), m(A(2, 1), A(3, 0))), neg(m(two, m(A(2, 0), A(3, 1)))))
    b = ad(ad(m(A(1, 0), A(1, 1)), m(A(0, 0), A(2, 1))), neg(m(two, m(A(2, 0), A(0, 1)))))
    c = ad(ad(ad(ad(m(two, m(A(1, 2), A(1, 2))), m(A(1, 3), A(1, 1))), m(A(2, 0), A(0, 4))),
                 m(A(0, 3), A(2, 1))), m(A(0, 2), A(2, 2)))
    return a, b, c


def _conic_data(f: TernaryForm):
    F = f.ctx
    f1, f2 = f.derivative(0), f.derivative(1)
    hbar2 = f1 * f2 * f1.derivative(1) * 2 - f1 * f1 * f2.derivative(1) - f2 * f2 * f1.derivative(0)
    a, b, c = _abc(f)
    cubic = TernaryForm(F, 3, {(3, 0, 0): a, (0, 3, 0): b, (0, 0, 3): c})
    z = TernaryForm(F, 1, {(0, 0, 1): F.one})
    R = hbar2 - (f * f).scale(f.coeff(aij(2, 0))) - f * cubic * z
    if R.is_zero():
        htilde = TernaryForm(F, 6)
    else:
        htilde = ternary_divisibility(R, z * z)
    if htilde is None:
        return hbar2, (a, b, c), None, None, False, False
    support_ok = all(e in Char3FlexConic.SUPPORT for e in htilde.terms)
    h = TernaryForm(F, 2, {tuple(v // 3 for v in e): F.pth_root(cf) for e, cf in htilde.terms.items()}) \
        if support_ok else None
    return hbar2, (a, b, c), htilde, h, True, support_ok


def _admissible(C: PlaneQuartic) -> bool:
    """(0:1:0) not on C and no flex on z = 0."""
    f = C.form
    F = C.ctx
    if f.coeff((0, 4, 0)) == F.zero:
        return False
    z = TernaryForm(F, 1, {(0, 0, 1): F.one})
    for cp in closed_points([f, z]):
        if C.contact_order(cp.point) >= 3:
            return False
    return True


def char3_flex_conic(C: PlaneQuartic, seed: int = 0, retries: int = 64) -> Char3FlexConic:
    F = C.ctx
    if F.p != 3:
        raise ValueError("the flex conic construction is for characteristic 3")
    hbar2, (a, b, c), htilde, h, ok, support_ok = _conic_data(C.form)
    out = Char3FlexConic(hbar2, a, b, c, htilde, h, ok, support_ok,
                         degenerate=bool(ok and support_ok and h.is_zero()))
    if not (ok and support_ok) or out.degenerate:
        return out
    if _admissible(C):
        out.conic = h
        return out
    rng = random.Random(seed)
    for n in range(1, retries + 1):
        M = random_matrix(F, rng)
        C2 = apply_pgl3(C, M)
        if not _admissible(C2):
            continue
        _, _, _, h2, ok2, sup2 = _conic_data(C2.form)
        if not (ok2 and sup2):
            continue
        out.conic = h2.linear_substitute(M)
        out.transform = M
        out.retries = n
        return out
    raise RuntimeError("no admissible coordinates found for the flex conic")


def conic_flexes_rational(C: PlaneQuartic, k: int = 1, seed: int = 0):
    """Flexes over F_{q^k} as rational points of C meet the flex conic (p = 3)."""
    data = char3_flex_conic(C, seed)
    if data.degenerate:
        raise ValueError("infinitely many flexes")
    E = C.ctx.extension(k) if k > 1 else C.ctx
    pts = rational_common_zeros([C.over(E), data.conic.over(E)])
    recs = []
    for P in pts:
        rec = _flex_record(C, P, 1)
        if rec is not None:
            recs.append(rec)
    return recs


# -- geometric flexes ------------------------------------------------------------


@dataclass
class FlexReport:
    flexes: list            # FlexRecord per closed point (representative)
    method: str
    weight_sum: int | None  # sum of degree * weight when weights are defined
    geometric_count: int    # sum of degrees
    rejected: int = 0       # candidate points failing the contact test


class FunnyCurve(ValueError):
    pass


def geometric_flexes(C: PlaneQuartic, k_max_char2: int = 4, seed: int = 0) -> FlexReport:
    F = C.ctx
    p = F.p
    if p == 2:
        recs = []
        for k in range(1, k_max_char2 + 1):
            E = F.extension(k) if k > 1 else F
            for P in C.iter_points(k):
                if definition_degree(P.coords, E, F) != k:
                    continue
                rec = _flex_record(C, P, k)
                if rec is not None:
                    recs.append(rec)
        return FlexReport(recs, "contact-order", None, sum(r.degree for r in recs))
    if p == 3:
        data = char3_flex_conic(C, seed)
        if data.degenerate:
            raise FunnyCurve("infinitely many flexes")
        aux, method = data.conic, "char3-conic"
    else:
        aux, method = hessian(C), "hessian"
    recs, rejected = [], 0
    for cp in closed_points([C.form, aux]):
        rec = _flex_record(C, cp.point, cp.degree)
        if rec is None:
            rejected += 1
        else:
            recs.append(rec)
    wsum = sum(r.degree * r.weight for r in recs) if p > 3 else None
    return FlexReport(recs, method, wsum, sum(r.degree for r in recs), rejected)


def rational_flex_count(C: PlaneQuartic) -> int:
    """Number of rational flexes, by the fastest exact method for the characteristic."""
    p = C.ctx.p
    if p >= 5:
        return len(hessian_flexes(C)[1])
    return len(flexes_rational(C))


# -- bitangents -----------------------------------------------------------------------


def is_square_quartic(g: BinaryForm) -> bool:
    """Geometric perfect-square test for a nonzero binary quartic."""
    F = g.ctx
    c = g.coeffs
    zero = F.zero
    if F.p == 2:
        return c[1] == zero and c[3] == zero
    two = F.from_int(2)
    if c[0] == zero:
        if c[1] != zero:
            return False
        # t^2 (c2 s^2 + c3 s t + c4 t^2): need c3^2 = 4 c2 c4
        return F.mul(c[3], c[3]) == F.mul(F.from_int(4), F.mul(c[2], c[4]))
    inv = F.inv(c[0])
    e1, e2, e3, e4 = (F.mul(v, inv) for v in c[1:])
    h1 = F.div(e1, two)
    h0 = F.div(F.sub(e2, F.mul(h1, h1)), two)
    return F.mul(two, F.mul(h1, h0)) == e3 and F.mul(h0, h0) == e4


@dataclass(frozen=True)
class BitangentRecord:
    line: ProjLine
    degree: int                 # field of definition degree over the curve's field
    tangency: tuple             # tangency points (over the line field or its quadratic extension)
    hyperflex: bool
    tangency_degree: int        # 1 if the tangency points are defined over the line's field, else 2

    def record(self) -> dict:
        return {"line": list(self.line.encode()), "degree": self.degree,
                "tangency_points": [list(P.encode()) for P in self.tangency],
                "hyperflex_flags": [self.hyperflex] * len(self.tangency)}


def _square_root_quadratic(g: BinaryForm):
    """h with g = c h^2 (h monic-ish binary quadratic, raw coefficients)."""
    F = g.ctx
    parts = []
    for h, m in g.squarefree().factors:
        parts.extend([h] * (m // 2))
    out = BinaryForm(F, [F.one])
    for h in parts:
        out = out.mul(h)
    return out


def _tangency_points(L: ProjLine, g: BinaryForm):
    """Tangency points of a bitangent line and a hyperflex flag."""
    E = L.ctx
    h = _square_root_quadratic(g)
    roots = []
    factors = h.factor()
    if all(f.d == 1 for f, _ in factors):
        for f, _ in factors:
            a, b = f.coeffs
            s, t = (E.one, E.zero) if a == E.zero else (E.neg(E.div(b, a)), E.one)
            roots.append(L.point(s, t))
        return tuple(roots), len(roots) == 1, 1
    E2 = E.extension(2)
    poly = [E2.embed(c, E) for c in h.dehomogenize()]
    B0, B1 = [P.over(E2) for P in L.basis]
    for s in polyops.roots(E2, poly):
        coords = [E2.add(E2.mul(s, u), v) for u, v in zip(B0.coords, B1.coords)]
        roots.append(ProjPoint(E2, coords))
    return tuple(roots), False, 2


@dataclass
class BitangentReport:
    records: list
    k_max: int
    truncated: bool
    base_count: int
    total: int
    two_rank: int | None


TWO_RANK_BY_COUNT = {7: 3, 4: 2, 2: 1, 1: 0}


def bitangents(C: PlaneQuartic, k_max: int = 2, line_budget: int = 1 << 20) -> BitangentReport:
    F = C.ctx
    recs = []
    used = 0
    truncated = False
    for k in range(1, k_max + 1):
        E = F.extension(k) if k > 1 else F
        n_lines = E.q * E.q + E.q + 1
        if used + n_lines > line_budget:
            truncated = True
            break
        used += n_lines
        form = C.over(E)
        for L in enumerate_lines(E):
            if k > 1 and definition_degree(L.coeffs, E, F) != k:
                continue
            g = form.restrict(L.basis[0].coords, L.basis[1].coords, E)
            if g.is_zero():
                raise ValueError("line contained in curve (input not smooth)")
            if is_square_quartic(g):
                pts, hyper, tdeg = _tangency_points(L, g)
                recs.append(BitangentRecord(L, k, pts, hyper, tdeg))
    base = sum(1 for r in recs if r.degree == 1)
    two_rank = None
    if F.p == 2 and base in TWO_RANK_BY_COUNT and C.is_smooth():
        two_rank = TWO_RANK_BY_COUNT[base]
    return BitangentReport(recs, k_max, truncated, base, len(recs), two_rank)


def char2_normal_form_of(C: PlaneQuartic):
    """(family, Q coefficients a..f) if C is literally Q^2 + a family product, else None."""
    from .quartic import CHAR2_FAMILY_PRODUCTS
    from .forms import parse_ternary_form
    F = C.ctx
    if F.p != 2:
        return None
    for fam, text in sorted(CHAR2_FAMILY_PRODUCTS.items()):
        rest = C.form - parse_ternary_form(text, F)
        if all(v % 2 == 0 for e in rest.terms for v in e):
            r = lambda e: F.pth_root(rest.coeff(e))
            Q = (r((4, 0, 0)), r((0, 4, 0)), r((0, 0, 4)), r((2, 2, 0)), r((0, 2, 2)), r((2, 0, 2)))
            return fam, Q
    return None


def exceptional_family(C: PlaneQuartic):
    """Tag from the exceptional list of the bitangency classification, when decidable."""
    F = C.ctx
    if F.p == 3:
        data = char3_flex_conic(C)
        return "char-3 Fermat" if data.degenerate else None
    nf = char2_normal_form_of(C)
    if nf is None:
        return None
    fam, (a, b, c, d, e, f) = nf
    z = F.zero
    if fam == 1 and e == z:
        return "supersingular family S"
    if fam == 2 and e == z and f == z:
        return "2-rank one"
    if fam == 3 and d == z and e == z and f == z:
        return "2-rank two"
    return None


def bitangency_classification(C: PlaneQuartic, k_max: int = 2) -> dict:
    rep = bitangents(C, k_max)
    found = any(not r.hyperflex for r in rep.records)
    tag = exceptional_family(C)
    if found:
        verdict, evidence = True, "bitangent search"
    elif tag is not None:
        verdict, evidence = False, "exceptional family"
    elif C.ctx.p == 2:
        verdict, evidence = None, "undetermined"
    elif rep.total >= 28:
        verdict, evidence = False, "all 28 bitangents are hyperflex lines"
    else:
        # p odd outside the exceptional list: at most 12 hyperflexes against 28 bitangents
        verdict, evidence = True, "counting argument"
    return {"has_non_hyperflex_bitangency_point": verdict, "exceptional_family": tag,
            "evidence": evidence, "bitangents_found": rep.total, "k_max": k_max}


# -- Galois points ---------------------------------------------------------------------


@dataclass
class GaloisVerdict:
    point: ProjPoint
    verdict: str   # galois | not_galois | undetermined
    evidence: dict
    depth: int


def _fiber_witness(C: PlaneQuartic, data, depth: int, even: bool = False):
    """A direction whose unramified fibre splits as rational point + irreducible quadratic.

    With ``even`` only F_{q^2j} is searched: there the arithmetic and geometric monodromy
    agree, so a witness rules out a geometrically Galois projection with a non-rational automorphism.
    """
    F = C.ctx
    for k in (range(2, 2 * depth + 1, 2) if even else range(1, depth + 1)):
        E = F.extension(k) if k > 1 else F
        zero = E.zero
        directions = itertools.chain(((E.one, v) for v in E.elements()), [(zero, E.one)])
        for t, u in directions:
            if k > 1 and not even and definition_degree([u], E, F) != k:
                continue
            if even and E.pow(u, F.q ** (k // 2)) == u:
                continue  # a subfield direction cannot split as 1 + 2 over E
            cub = [data.c[n].evaluate((zero, t, u), E) for n in range(1, 5)]
            if cub[0] == zero:
                continue
            fac = BinaryForm(E, cub).factor()
            degs = sorted(h.d for h, m in fac for _ in range(m))
            if degs == [1, 2] and all(m == 1 for _, m in fac):
                return {"k": k, "direction": [E.encode(t), E.encode(u)]}
    return None


def is_galois_point(C: PlaneQuartic, P: ProjPoint, depth: int = 1) -> GaloisVerdict:
    if not C.contains(P):
        raise ValueError(f"point {P} is not on the curve")
    data = pencil_data(C, P)
    F = C.ctx
    evidence = {}
    if F.p != 2:
        disc = binary_of(data.discriminant())
        if disc.is_zero():
            evidence["discriminant"] = "identically zero"
        else:
            mults = [m for _, m in disc.squarefree().factors]
            evidence["discriminant_multiplicities"] = mults
            if all(m % 2 == 0 for m in mults):
                return GaloisVerdict(P, "galois", evidence, depth)
            w = _fiber_witness(C, data, depth)
            if w is not None:
                evidence["fiber_witness"] = w
            return GaloisVerdict(P, "not_galois", evidence, depth)
    w = _fiber_witness(C, data, depth, even=True)
    if w is not None:
        evidence["fiber_witness"] = w
        return GaloisVerdict(P, "not_galois", evidence, depth)
    return GaloisVerdict(P, "undetermined", evidence, depth)
