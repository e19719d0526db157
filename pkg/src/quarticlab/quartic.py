"""Plane quartic curves: smoothness, points, tangents, coordinate changes, fixtures."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import polyops
from .elimination import PositiveDimensional, closed_points
from .field import FieldCtx, FieldElement, field_create, parse_field
from .forms import BinaryForm, TernaryForm, parse_coeffs, parse_ternary_form, serialize, serialize_coeffs
from .projective import ProjLine, ProjPoint, cross, line_basis, mat_inv, mat_vec, normalize, vec_mat

DEFAULT_BUDGET = 1 << 26


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SmoothnessVerdict:
    smooth: bool
    witness: ProjPoint | None = None  # a singular point, possibly over an extension

    def __bool__(self):
        return self.smooth


class PlaneQuartic:
    """The curve F = 0 for a ternary quartic form F."""

    def __init__(self, form: TernaryForm, name: str | None = None):
        if form.d != 4:
            raise ValueError("a plane quartic needs a degree-4 form")
        if form.is_zero():
            raise ValueError("zero form")
        self.form = form
        self.ctx = form.ctx
        self.name = name
        self._smooth = None
        self._grad = None
        self._lifts = {}

    @classmethod
    def parse(cls, text: str, ctx: FieldCtx, name=None):
        return cls(parse_ternary_form(text, ctx), name)

    @classmethod
    def from_coeffs(cls, ctx, coeffs, name=None):
        """Coefficients as encodings (ints) or raw values, in the fixed monomial order."""
        vals = [ctx.decode(c) if isinstance(c, int) else c for c in coeffs]
        return cls(TernaryForm.from_coeffs(ctx, 4, vals), name)

    def coeff_vector(self):
        return [self.ctx.encode(c) for c in self.form.coeff_vector()]

    def __eq__(self, other):
        return isinstance(other, PlaneQuartic) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    def __repr__(self):
        return f"PlaneQuartic({serialize(self.form)!r} over {self.ctx.descriptor()})"

    def expression(self):
        return serialize(self.form)

    # -- derived forms ---------------------------------------------------
    @property
    def gradient(self):
        if self._grad is None:
            self._grad = tuple(self.form.derivative(v) for v in range(3))
        return self._grad

    def over(self, E: FieldCtx) -> TernaryForm:
        """The defining form with coefficients embedded in E (cached)."""
        if E is self.ctx:
            return self.form
        key = id(E)
        if key not in self._lifts:
            self._lifts[key] = (E, self.form.over(E))
        return self._lifts[key][1]

    def contains(self, P: ProjPoint) -> bool:
        E = P.ctx
        return self.form.evaluate(P.coords, E) == E.zero

    # -- smoothness ------------------------------------------------------
    def smoothness(self) -> SmoothnessVerdict:
        if self._smooth is None:
            self._smooth = _decide_smoothness(self)
        return self._smooth

    def is_smooth(self) -> bool:
        return self.smoothness().smooth

    # -- points ----------------------------------------------------------
    def iter_points(self, k: int = 1, budget: int = DEFAULT_BUDGET, rng=None):
        E = self.ctx.extension(k) if k > 1 else self.ctx
        if E.q > budget:
            raise BudgetExceeded("field too large; use counting bound instead")
        return _iter_points(self.over(E), E, rng)

    def rational_points(self, k: int = 1, budget: int = DEFAULT_BUDGET):
        return list(self.iter_points(k, budget))

    def point_count(self, k: int = 1, budget: int = DEFAULT_BUDGET) -> int:
        return sum(1 for _ in self.iter_points(k, budget))

    # -- tangents --------------------------------------------------------
    def gradient_at(self, P: ProjPoint):
        E = P.ctx
        return tuple(g.evaluate(P.coords, E) for g in self.gradient)

    def tangent_line(self, P: ProjPoint) -> ProjLine:
        return tangent_line(self, P)

    def contact_order(self, P: ProjPoint) -> int:
        """Multiplicity of P in the divisor cut by its tangent line."""
        L = self.tangent_line(P)
        return restriction_at(self, L).infinity_multiplicity()


def restriction_at(C: PlaneQuartic, L: ProjLine) -> BinaryForm:
    """Restriction of C to L parametrized by L.basis (over L.ctx)."""
    g = C.form.restrict(L.basis[0].coords, L.basis[1].coords, L.ctx)
    if g.is_zero():
        raise ValueError("line contained in curve (input not smooth)")
    return g


def tangent_line(C: PlaneQuartic, P: ProjPoint) -> ProjLine:
    """Tangent at P, parametrized with P as the first basis point (so P is (1:0))."""
    E = P.ctx
    if not C.contains(P):
        raise ValueError(f"point {P} is not on the curve")
    grad = C.gradient_at(P)
    if all(g == E.zero for g in grad):
        raise ValueError(f"singular point {P}")
    coeffs = normalize(E, grad)
    B0, B1 = line_basis(E, coeffs)
    Q = B0 if cross(E, B0.coords, P.coords) != (E.zero,) * 3 else B1
    return ProjLine(E, coeffs, basis=(P, Q))


def _iter_points(form: TernaryForm, E: FieldCtx, rng=None):
    rows = [list(r.coeffs) for r in form.to_bivariate(var=1, chart=2)]
    zero, one = E.zero, E.one
    ev = polyops.evaluate
    if rng is None:
        rng = E.make_rng()
    for x in E.elements():
        poly = polyops.trim([ev(E, r, x) for r in rows], zero)
        if not poly:
            raise ValueError("line contained in curve (input not smooth)")
        for y in polyops.roots(E, poly, rng):
            yield ProjPoint(E, (x, y, one), normalized=True)
    # z = 0, y = 1
    cs = [zero] * 5
    for (i, j, k), c in form.terms.items():
        if k == 0:
            cs[i] = c
    poly = polyops.trim(cs, zero)
    if not poly:
        raise ValueError("line contained in curve (input not smooth)")
    for x in polyops.roots(E, poly, rng):
        yield ProjPoint(E, (x, one, zero), normalized=True)
    if form.coeff((4, 0, 0)) == zero:
        yield ProjPoint(E, (one, zero, zero), normalized=True)


def _decide_smoothness(C: PlaneQuartic) -> SmoothnessVerdict:
    forms = [C.form] + [g for g in C.gradient]
    try:
        pts = closed_points(forms)
    except PositiveDimensional as exc:
        return SmoothnessVerdict(False, exc.witness)
    if pts:
        return SmoothnessVerdict(False, pts[0].point)
    return SmoothnessVerdict(True, None)


def is_smooth(C: PlaneQuartic) -> SmoothnessVerdict:
    return C.smoothness()


def rational_points(C: PlaneQuartic, k: int = 1, budget: int = DEFAULT_BUDGET):
    return C.rational_points(k, budget)


# -- coordinate changes ---------------------------------------------------


def _raw_matrix(F: FieldCtx, M):
    out = []
    for row in M:
        r = []
        for v in row:
            if isinstance(v, FieldElement):
                v = v.raw if v.ctx is F else F.embed(v.raw, v.ctx)
            elif isinstance(v, int):
                v = F.decode(v)
            r.append(v)
        out.append(r)
    if len(out) != 3 or any(len(r) != 3 for r in out):
        raise ValueError("expected a 3x3 matrix")
    return out


def apply_pgl3(obj, M):
    """Act by M: points P -> M P, curves F -> F(M^-1 v), lines l -> l M^-1."""
    F = obj.ctx
    Mr = _raw_matrix(F, M)
    Minv = mat_inv(F, Mr)
    if isinstance(obj, ProjPoint):
        return ProjPoint(F, mat_vec(F, Mr, obj.coords))
    if isinstance(obj, ProjLine):
        B = tuple(ProjPoint(F, mat_vec(F, Mr, P.coords)) for P in obj.basis)
        return ProjLine(F, vec_mat(F, obj.coeffs, Minv), basis=B)
    if isinstance(obj, PlaneQuartic):
        return PlaneQuartic(obj.form.linear_substitute(Minv))
    if isinstance(obj, TernaryForm):
        return obj.linear_substitute(Minv)
    raise TypeError(f"cannot transform {type(obj).__name__}")


def random_matrix(F: FieldCtx, rng) -> list:
    """Uniform invertible 3x3 matrix (raw entries)."""
    from .projective import mat_det
    while True:
        M = [[F.random_raw(rng) for _ in range(3)] for _ in range(3)]
        if mat_det(F, M) != F.zero:
            return M


# -- sampling -------------------------------------------------------------


def sample_smooth_quartic(ctx: FieldCtx, seed):
    """Rejection sampling on uniform coefficient vectors; returns (curve, attempts)."""
    rng = random.Random(seed)
    attempts = 0
    while True:
        attempts += 1
        coeffs = [ctx.random_raw(rng) for _ in range(15)]
        if all(c == ctx.zero for c in coeffs):
            continue
        C = PlaneQuartic(TernaryForm.from_coeffs(ctx, 4, coeffs))
        if C.is_smooth():
            return C, attempts


def random_smooth_quartic(ctx: FieldCtx, seed) -> PlaneQuartic:
    return sample_smooth_quartic(ctx, seed)[0]


# -- fixtures ---------------------------------------------------------------

_F9_A = (2, 2, 1)  # a^2 - a - 1 = 0 over F_3

FIXTURE_EQUATIONS = {
    "klein_twist_1": ((2, 1, None), "x^4 + x^2*y^2 + x^2*y*z + x^2*z^2 + x*y^2*z + x*y*z^2 + y^4 + y^2*z^2 + z^4"),
    "klein_twist_2": ((2, 1, None), "x^4 + x^3*z + x*y^3 + x*y*z^2 + y^4 + y*z^3 + z^4"),
    "char3_orbit8": ((3, 1, None), "2x^4 + 2x^3y + x^3z + 2x^2z^2 + xy^3 + 2xy^2z + y^3z + yz^3"),
    "char3_orbit7": ((3, 1, None), "x^3y + x^2z^2 + 2xy^3 + xy^2z + 2xyz^2 + 2xz^3 + y^4 + 2yz^3"),
    "char3_orbit6": ((3, 2, _F9_A),
                     "g^6 x^4 + g x^3 y + g^7 x^3 z + g^6 x^2 y^2 + g^2 x^2 z^2 + g^7 x y^3 + g^7 x y^2 z"
                     " + x y z^2 + g^5 x z^3 + g^5 y^4 + g^3 y^3 z + g^5 y^2 z^2 + 2 y z^3 + g^7 z^4"),
    # quarantined: singular at (0:1:0) as printed
    "galois_extremal": ((None, None, None), "y*z^3 + x^4 + z^4"),
    "klein": ((None, None, None), "x^3*y + y^3*z + z^3*x"),
    "fermat": ((None, None, None), "x^4 + y^4 + z^4"),
}

CHAR2_FAMILY_PRODUCTS = {
    1: "x*y^3 + x^3*z",          # x (y^3 + x^2 z)
    2: "x*y^3 + x^2*y*z",        # x y (y^2 + x z)
    3: "x*y^2*z + x*y*z^2",      # x y z (y + z)
    4: "x^2*y*z + x*y^2*z + x*y*z^2",  # x y z (x + y + z)
}

QUARANTINED = {"galois_extremal"}

# first admissible smooth Q over F_2 in lexicographic order, per family
CHAR2_DEFAULT_Q = {1: (0, 0, 1, 0, 0, 0), 2: (1, 0, 1, 0, 0, 0), 3: (1, 1, 1, 0, 1, 0), 4: (1, 1, 1, 1, 1, 1)}


def fixture_names():
    return sorted(FIXTURE_EQUATIONS) + ["char2_normal_form"]


def fixture(name: str, ctx: FieldCtx | None = None, **kw) -> PlaneQuartic:
    """Named test curve; ``fermat``, ``klein`` and ``galois_extremal`` take a field."""
    if name == "char2_normal_form":
        family = kw.get("family", 4)
        return char2_normal_form(family, kw.get("Q", CHAR2_DEFAULT_Q[family]), ctx)
    if name not in FIXTURE_EQUATIONS:
        raise KeyError(f"unknown fixture {name!r}")
    (p, n, mod), text = FIXTURE_EQUATIONS[name]
    if p is None:
        if ctx is None:
            raise ValueError(f"fixture {name!r} needs a field")
    else:
        fixed = field_create(p, n, mod)
        if ctx is not None and ctx is not fixed:
            raise ValueError(f"fixture {name!r} is defined over {fixed.descriptor()}")
        ctx = fixed
    return PlaneQuartic.parse(text, ctx, name=name)


def char2_normal_form(family: int, Q, ctx: FieldCtx | None = None) -> PlaneQuartic:
    """Q^2 + (family product), Q = a x^2 + b y^2 + c z^2 + d xy + e yz + f zx."""
    ctx = ctx or field_create(2)
    if ctx.p != 2:
        raise ValueError("normal forms are for characteristic 2")
    if family not in CHAR2_FAMILY_PRODUCTS:
        raise ValueError("family must be 1, 2, 3 or 4")
    a, b, c, d, e, f = [ctx.decode(v) if isinstance(v, int) else v for v in Q]
    quad = TernaryForm(ctx, 2, {(2, 0, 0): a, (0, 2, 0): b, (0, 0, 2): c, (1, 1, 0): d, (0, 1, 1): e, (1, 0, 1): f})
    prod = parse_ternary_form(CHAR2_FAMILY_PRODUCTS[family], ctx)
    return PlaneQuartic(quad * quad + prod, name=f"char2_family{family}")


# -- curve files ------------------------------------------------------------


def parse_curve_record(line: str) -> PlaneQuartic:
    """``<field> <c0,...,c14>`` or ``<field> expr:<expression>``."""
    text = line.strip()
    desc, _, rest = text.partition(" ")
    ctx = parse_field(desc)
    rest = rest.strip()
    if rest.startswith("expr:"):
        return PlaneQuartic(parse_ternary_form(rest[5:], ctx))
    if rest.startswith("coeffs:"):
        rest = rest[7:]
    return PlaneQuartic(parse_coeffs(rest.replace(" ", ""), ctx))


def read_curve_file(path):
    curves = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                curves.append(parse_curve_record(line))
    return curves


def curve_record(C: PlaneQuartic) -> str:
    return f"{C.ctx.descriptor()} {serialize_coeffs(C.form)}"
