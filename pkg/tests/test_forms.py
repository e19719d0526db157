import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from quarticlab import polyops
from quarticlab.field import field_create
from quarticlab.forms import (BinaryForm, ParseError, TernaryForm, UniPoly, factor, is_perfect_square,
                              monomials, parse_coeffs, parse_ternary_form, resultant, roots_with_multiplicity,
                              serialize, serialize_coeffs, squarefree_decomposition, ternary_divisibility)
from quarticlab.quartic import FIXTURE_EQUATIONS, fixture

TEST_FIELDS = [(2, 1), (3, 1), (5, 1), (3, 2), (3, 3)]


def sylvester_det(F, a, b):
    """Resultant oracle: determinant of the Sylvester matrix by Gaussian elimination."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([F.zero] * i + list(reversed(a)) + [F.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([F.zero] * i + list(reversed(b)) + [F.zero] * (size - n - 1 - i))
    det = F.one
    for c in range(size):
        piv = next((r for r in range(c, size) if rows[r][c] != F.zero), None)
        if piv is None:
            return F.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = F.neg(det)
        det = F.mul(det, rows[c][c])
        inv = F.inv(rows[c][c])
        for r in range(c + 1, size):
            f = F.mul(rows[r][c], inv)
            if f != F.zero:
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[c])]
    return det


def rand_poly(F, rng, deg):
    p = [F.random_raw(rng) for _ in range(deg)] + [F.decode(rng.randrange(1, F.q))]
    return p


@pytest.mark.parametrize("pn", TEST_FIELDS)
def test_resultant_matches_sylvester(pn):
    F = field_create(*pn)
    rng = random.Random(1)
    for _ in range(60):
        a = rand_poly(F, rng, rng.randrange(1, 6))
        b = rand_poly(F, rng, rng.randrange(1, 6))
        assert polyops.resultant(F, a, b) == sylvester_det(F, a, b)
        # the subresultant route over UniPoly coefficients agrees on constant coefficients
        A = [UniPoly(F, [c]) for c in a]
        B = [UniPoly(F, [c]) for c in b]
        R = resultant(A, B)
        assert (R.coeffs[0] if R else F.zero) == sylvester_det(F, a, b)
    f = UniPoly(F, rand_poly(F, rng, 3))
    assert resultant(f, f) == F.zero


def _divides(F, d, f):
    return not polyops.divmod_(F, f, d)[1]


@pytest.mark.parametrize("pn", TEST_FIELDS)
def test_factor_reconstructs_and_is_irreducible(pn):
    F = field_create(*pn)
    rng = random.Random(2)
    small = []
    if F.q <= 5:
        for deg in (1, 2, 3):
            for tail in itertools.product(list(F.elements()), repeat=deg):
                small.append(list(tail) + [F.one])
    for _ in range(120):
        f = rand_poly(F, rng, rng.randrange(1, 13))
        parts = polyops.factor(F, f)
        prod = [f[-1]]
        for g, m in parts:
            assert g[-1] == F.one
            for _ in range(m):
                prod = polyops.mul(F, prod, g)
        assert prod == f
        for g, _ in parts:
            if F.q <= 5 and len(g) - 1 <= 7:
                # no proper factor of degree <= deg/2, by exhaustive trial division
                assert not any(len(d) - 1 <= (len(g) - 1) // 2 and _divides(F, d, g) for d in small)


def test_factor_examples(F3, F5):
    t4 = UniPoly.from_ints(F5, [1, 0, 0, 0, 1])
    assert sorted(g.degree for g, _ in factor(t4)) == [2, 2]
    assert [g.degree for g, _ in factor(UniPoly.from_ints(F3, [2, 2, 1]))] == [2]
    parts = factor(UniPoly.from_ints(F3, [0, 2, 0, 1]))
    assert sorted(g.coeffs for g, _ in parts) == [(0, 1), (1, 1), (2, 1)]


def test_squarefree_examples(F3, F5):
    f = UniPoly.from_ints(F3, [1, 0, 0, 1])  # (x+1)^3
    sq = squarefree_decomposition(f)
    assert [(g.coeffs, m) for g, m in sq.factors] == [((1, 1), 3)]
    g = BinaryForm.from_ints(F5, [1, 0, 0, 0, 1])
    assert [m for _, m in squarefree_decomposition(g).factors] == [1]
    h = BinaryForm.from_ints(F3, [2, 1, 0, 1, 2])  # 2(s - t)^4
    sq = h.squarefree()
    assert sq.unit == 2 and [(f.coeffs, m) for f, m in sq.factors] == [((1, 2), 4)]


@pytest.mark.parametrize("pn", TEST_FIELDS)
def test_squarefree_reconstructs_with_pth_powers(pn):
    F = field_create(*pn)
    rng = random.Random(3)
    for _ in range(80):
        g = rand_poly(F, rng, rng.randrange(1, 5))
        if rng.random() < 0.5:
            # force a p-th power: g(t^p) times something
            gp = [F.zero] * (F.p * (len(g) - 1) + 1)
            for i, c in enumerate(g):
                gp[F.p * i] = c
            g = polyops.mul(F, gp, rand_poly(F, rng, rng.randrange(0, 3)))
        parts = polyops.squarefree(F, g)
        prod = [g[-1]]
        for h, m in parts:
            for _ in range(m):
                prod = polyops.mul(F, prod, h)
        assert prod == g
        ms = [m for _, m in parts]
        assert len(set(ms)) == len(ms)
        for (a, _), (b, _) in itertools.combinations(parts, 2):
            assert len(polyops.gcd(F, a, b)) == 1


def test_roots_with_multiplicity(F3, F5):
    rat, res = roots_with_multiplicity(BinaryForm.from_ints(F5, [1, 0, 0, 0, 1]))
    assert rat == [] and res == [(2, 1), (2, 1)]
    rat, res = roots_with_multiplicity(BinaryForm.from_ints(F3, [2, 1, 0, 1, 2]))
    assert rat == [((1, 1), 4)] and res == []
    # s t (s + t)(s + 2t)
    g = BinaryForm.from_ints(F5, [0, 1, 0])
    for lin in ([1, 1], [1, 2]):
        g = g.mul(BinaryForm.from_ints(F5, lin))
    rat, res = roots_with_multiplicity(g)
    assert len(rat) == 4 and all(m == 1 for _, m in rat) and res == []


def test_perfect_square(F3, F5):
    sq = BinaryForm.from_ints(F5, [1, 0, 1]).mul(BinaryForm.from_ints(F5, [1, 0, 1]))
    assert is_perfect_square(sq)
    assert is_perfect_square(BinaryForm.from_ints(F3, [2, 1, 0, 1, 2]))
    assert not is_perfect_square(BinaryForm.from_ints(F5, [1, 0, 0, 0, 1]))


def test_parse_examples(F2, F3, F5):
    kt = parse_ternary_form("x^4 + x^2*y^2 + x^2*y*z + x^2*z^2 + x*y^2*z + x*y*z^2 + y^4 + y^2*z^2 + z^4", F2)
    assert sum(kt.coeff_vector()) == 9 and len(kt.coeff_vector()) == 15
    assert parse_ternary_form("x^4 + x^4", F2).is_zero()
    assert parse_ternary_form("x^4+y^4+z^4", F3).coeff_vector() == [1] + [0] * 9 + [1, 0, 0, 0, 1]
    assert parse_ternary_form("3x^2y^2", F5) == parse_ternary_form("3*x^2*y^2", F5)
    with pytest.raises(ParseError, match="not homogeneous"):
        parse_ternary_form("x^4 + y^3", F5)
    with pytest.raises(ParseError) as exc:
        parse_ternary_form("x^4 + w^4", F5)
    assert exc.value.pos == 6


def test_monomial_order():
    assert monomials(4) == [(4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0), (2, 1, 1), (2, 0, 2), (1, 3, 0),
                            (1, 2, 1), (1, 1, 2), (1, 0, 3), (0, 4, 0), (0, 3, 1), (0, 2, 2), (0, 1, 3),
                            (0, 0, 4)]


def test_derivatives(F2):
    kt2 = fixture("klein_twist_2")
    assert kt2.form.derivative(0) == parse_ternary_form("x^2*z + y^3 + y*z^2", F2)
    assert parse_ternary_form("x^4", F2).derivative(0).is_zero()


@pytest.mark.parametrize("pn", [(2, 1), (3, 1), (5, 1), (7, 1), (3, 2)])
def test_euler_relation(pn):
    F = field_create(*pn)
    rng = random.Random(4)
    x, y, z = (TernaryForm(F, 1, {e: F.one}) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    for _ in range(100):
        f = TernaryForm.from_coeffs(F, 4, [F.random_raw(rng) for _ in range(15)])
        lhs = x * f.derivative(0) + y * f.derivative(1) + z * f.derivative(2)
        assert lhs == f.scale(F.from_int(4))


def test_divisibility(F5):
    F9 = field_create(3, 2)
    f = parse_ternary_form("x^4+y^4+z^4", F9)
    G = parse_ternary_form("x^12+y^12+z^12", F9)
    assert ternary_divisibility(G, f) == f * f
    assert ternary_divisibility(parse_ternary_form("x^5", F5), parse_ternary_form("x^4+y^4+z^4", F5)) is None


def test_fixture_round_trip():
    for name, ((p, n, mod), text) in FIXTURE_EQUATIONS.items():
        ctx = field_create(p, n, mod) if p else field_create(7)
        f = parse_ternary_form(text, ctx)
        assert parse_ternary_form(serialize(f), ctx) == f
        assert parse_coeffs(serialize_coeffs(f), ctx) == f


FORM_FIELDS = [(2, 1), (3, 1), (5, 1), (3, 2), (2, 3)]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FORM_FIELDS), st.integers(1, 4), st.data())
def test_parse_serialize_round_trip(pn, d, data):
    F = field_create(*pn)
    coeffs = data.draw(st.lists(st.integers(0, F.q - 1), min_size=len(monomials(d)), max_size=len(monomials(d))))
    f = TernaryForm.from_coeffs(F, d, [F.decode(c) for c in coeffs])
    if f.is_zero():
        return
    assert parse_ternary_form(serialize(f), F) == f


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FORM_FIELDS), st.data())
def test_restriction_degree_accounting(pn, data):
    F = field_create(*pn)
    seed = data.draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    f = TernaryForm.from_coeffs(F, 4, [F.random_raw(rng) for _ in range(15)])
    P = [F.random_raw(rng) for _ in range(3)]
    Q = [F.random_raw(rng) for _ in range(3)]
    g = f.restrict(P, Q)
    if g.is_zero():
        return
    rat, res = roots_with_multiplicity(g)
    assert sum(m for _, m in rat) + sum(dg * m for dg, m in res) == 4
    for (s, t), _ in rat:
        assert g(s, t) == F.zero
