import random

import pytest
from hypothesis import given, settings, strategies as st

from quarticlab.elimination import PositiveDimensional, closed_points, rational_common_zeros
from quarticlab.field import field_create
from quarticlab.forms import TernaryForm, parse_ternary_form
from quarticlab.projective import ProjPoint, enumerate_lines, enumerate_points
from quarticlab.quartic import apply_pgl3, fixture, random_matrix, random_smooth_quartic, restriction_at
from quarticlab.special import (FunnyCurve, HessianDegenerate, bitangency_classification, bitangents,
                                char2_normal_form_of, char3_flex_conic, conic_flexes_rational,
                                definition_degree, exceptional_family, flexes_rational, geometric_flexes,
                                hessian, hessian_flexes, is_galois_point, is_square_quartic,
                                rational_flex_count)


# -- elimination -------------------------------------------------------------------


def brute_common(forms, E):
    return {P.coords for P in enumerate_points(E) if all(f.over(E).evaluate(P.coords) == E.zero for f in forms)}


@pytest.mark.parametrize("pn", [(2, 1), (3, 1), (5, 1), (2, 2), (7, 1)])
def test_rational_common_zeros_against_brute_force(pn):
    F = field_create(*pn)
    rng = random.Random(1)
    for _ in range(8):
        f = TernaryForm.from_coeffs(F, 3, [F.random_raw(rng) for _ in range(10)])
        g = TernaryForm.from_coeffs(F, 2, [F.random_raw(rng) for _ in range(6)])
        try:
            got = {P.coords for P in rational_common_zeros([f, g])}
        except PositiveDimensional:
            continue
        assert got == brute_common([f, g], F)


def test_closed_points_degrees_match_extension_counts():
    F = field_create(3)
    C = random_smooth_quartic(F, 2)
    H = parse_ternary_form("x^2 + y^2 - z^2", F)
    cps = closed_points([C.form, H])
    assert sum(cp.degree for cp in cps) <= 8  # Bezout bounds the support
    for k in (1, 2, 4):
        E = F.extension(k) if k > 1 else F
        expect = sum(cp.degree for cp in cps if k % cp.degree == 0)
        assert len(brute_common([C.form, H], E)) == expect


def test_positive_dimensional_detected(F5):
    f = parse_ternary_form("x*y", F5)
    g = parse_ternary_form("x*z", F5)
    with pytest.raises(PositiveDimensional):
        closed_points([f, g])


# -- flexes ------------------------------------------------------------------------


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_hessian_matches_contact_order(p):
    F = field_create(p)
    for seed in range(8):
        C = random_smooth_quartic(F, seed)
        brute = {r.point for r in flexes_rational(C)}
        _, recs = hessian_flexes(C)
        assert {r.point for r in recs} == brute
        assert rational_flex_count(C) == len(brute)


def test_hessian_degree_and_degeneracy(F3, F5):
    assert hessian(random_smooth_quartic(F5, 0)).d == 6
    with pytest.raises(HessianDegenerate):
        hessian_flexes(random_smooth_quartic(F3, 0))


@pytest.mark.parametrize("p", [5, 7, 13])
def test_weight_sum_24(p):
    F = field_create(p)
    for seed in range(4):
        rep = geometric_flexes(random_smooth_quartic(F, seed))
        assert rep.weight_sum == 24 and rep.rejected == 0
    assert geometric_flexes(fixture("klein", field_create(13))).weight_sum == 24


def test_fermat_hyperflexes_f5():
    rep = geometric_flexes(fixture("fermat", field_create(5)))
    assert rep.geometric_count == 12 and rep.weight_sum == 24
    assert {r.contact for r in rep.flexes} == {4}


@pytest.mark.parametrize("pn", [(3, 1), (3, 2), (3, 3)])
def test_char3_conic_identity_and_flexes(pn):
    F = field_create(*pn)
    for seed in range(6):
        C = random_smooth_quartic(F, seed)
        data = char3_flex_conic(C, seed)
        assert data.identity_holds and data.support_ok and not data.degenerate
        assert set(data.htilde.terms) <= data.SUPPORT
        for k in (1, 2):
            if F.q ** k > 1 << 12:
                continue
            brute = {r.point for r in flexes_rational(C, k)}
            E = C.ctx.extension(k) if k > 1 else C.ctx
            assert all(data.conic.over(E).evaluate(P.coords) == E.zero for P in brute)
            assert {r.point for r in conic_flexes_rational(C, k, seed)} == brute


def test_char3_conic_is_coordinate_independent():
    F = field_create(3, 2, (2, 2, 1))
    C = random_smooth_quartic(F, 9)
    a = {r.point for r in conic_flexes_rational(C, 1, seed=0)}
    b = {r.point for r in conic_flexes_rational(C, 1, seed=5)}
    assert a == b == {r.point for r in flexes_rational(C)}


def test_char3_conic_rejects_other_characteristic(F5):
    with pytest.raises(ValueError):
        char3_flex_conic(random_smooth_quartic(F5, 0))


def test_fermat_char3_is_funny(F9):
    C = fixture("fermat", F9)
    assert char3_flex_conic(C).degenerate
    with pytest.raises(FunnyCurve):
        geometric_flexes(C)
    assert all(C.contact_order(P) >= 3 for P in C.rational_points())
    assert exceptional_family(C) == "char-3 Fermat"


def test_orbit_fixtures_flex_counts():
    assert [len(flexes_rational(fixture(n))) for n in ("char3_orbit8", "char3_orbit7", "char3_orbit6")] == [0, 1, 6]
    for n in ("char3_orbit8", "char3_orbit7", "char3_orbit6"):
        assert geometric_flexes(fixture(n)).geometric_count == 8


def test_char2_contact_order_flexes(F2, F4):
    C = random_smooth_quartic(F4, 1)
    rep = geometric_flexes(C, k_max_char2=2)
    assert rep.method == "contact-order"
    assert {r.point for r in rep.flexes if r.degree == 1} == {r.point for r in flexes_rational(C)}


def test_definition_degree(F3):
    E = F3.extension(4)
    g = E.generator() if hasattr(E, "generator") else E.decode(3)
    assert definition_degree([E.one, E.zero], E, F3) == 1
    assert definition_degree([E.pow(g, 10)], E, F3) in (1, 2)
    assert definition_degree([E.pow(g, 1)], E, F3) == 4


# -- bitangents ------------------------------------------------------------------------


def test_square_quartic_test(F5, F2):
    f = lambda F, *c: __import__("quarticlab.forms", fromlist=["BinaryForm"]).BinaryForm(F, [F.from_int(v) for v in c])
    assert is_square_quartic(f(F5, 1, 2, 3, 2, 1))        # (s^2 + s t + t^2)^2
    assert is_square_quartic(f(F5, 2, 0, 0, 0, 0))        # 2 s^4: geometric square
    assert is_square_quartic(f(F5, 0, 0, 1, 2, 1))        # t^2 (s + t)^2
    assert not is_square_quartic(f(F5, 1, 0, 1, 0, 1))
    assert is_square_quartic(f(F2, 1, 0, 1, 0, 1))
    assert not is_square_quartic(f(F2, 1, 1, 0, 0, 1))


@pytest.mark.parametrize("pn", [(3, 1), (5, 1), (2, 2), (7, 1)])
def test_bitangents_against_brute_force(pn):
    F = field_create(*pn)
    for seed in range(3):
        C = random_smooth_quartic(F, seed)
        rep = bitangents(C, k_max=1)
        brute = set()
        for L in enumerate_lines(F):
            D = restriction_at(C, L)
            fac = D.factor()
            if all(m % 2 == 0 for _, m in fac) or (F.p == 2 and D.coeffs[1] == D.coeffs[3] == F.zero):
                brute.add(L)
        assert {r.line for r in rep.records} == brute
        for r in rep.records:
            E = r.tangency[0].ctx
            for P in r.tangency:
                assert C.over(E).evaluate(P.coords) == E.zero


def test_bitangent_degrees_are_frobenius_orbits():
    F = field_create(3)
    for seed in range(3):
        rep = bitangents(random_smooth_quartic(F, seed), k_max=3)
        assert rep.total <= 28
        for k in (1, 2, 3):
            assert sum(r.degree == k for r in rep.records) % k == 0
    rep = bitangents(fixture("fermat", F), k_max=2)
    assert rep.total == 28 and all(r.hyperflex for r in rep.records)


def test_char2_bitangent_counts_and_two_rank():
    for fam, n, rank in [(1, 1, 0), (2, 2, 1), (3, 4, 2), (4, 7, 3)]:
        rep = bitangents(fixture("char2_normal_form", family=fam), k_max=1)
        assert rep.base_count == n and rep.two_rank == rank


def test_char2_normal_form_recognition(F2):
    for fam in (1, 2, 3, 4):
        C = fixture("char2_normal_form", family=fam)
        got = char2_normal_form_of(C)
        assert got is not None and got[0] == fam
    assert char2_normal_form_of(random_smooth_quartic(field_create(3), 0)) is None


def test_bitangency_classification(F3, F5):
    c = bitangency_classification(fixture("fermat", F3))
    assert c["has_non_hyperflex_bitangency_point"] is False and c["exceptional_family"] == "char-3 Fermat"
    c = bitangency_classification(fixture("klein_twist_1"))
    assert c["has_non_hyperflex_bitangency_point"] is True
    c = bitangency_classification(random_smooth_quartic(F5, 3), k_max=0)
    assert c["has_non_hyperflex_bitangency_point"] is True and c["evidence"] == "counting argument"
    c = bitangency_classification(fixture("char2_normal_form", family=1), k_max=1)
    assert c["exceptional_family"] == "supersingular family S"


# -- Galois points ----------------------------------------------------------------------


def test_fermat_f9_galois_points(F9):
    C = fixture("fermat", F9)
    verdicts = [is_galois_point(C, P).verdict for P in C.rational_points()]
    assert verdicts.count("galois") == 28 == len(verdicts)


def test_galois_witness_is_genuine(F7):
    C = random_smooth_quartic(F7, 4)
    for P in C.rational_points():
        v = is_galois_point(C, P)
        assert v.verdict in ("not_galois", "galois")
        if "fiber_witness" in v.evidence:
            assert v.verdict == "not_galois"


@pytest.mark.parametrize("p", [5, 13])
def test_fermat_galois_points_odd(p):
    """(0:1:a) with a^4 = -1 on Fermat is Galois: the projection is x -> (y:z) quotient by x -> ix."""
    F = field_create(p)
    C = fixture("fermat", F)
    for P in C.rational_points():
        if P.coords[0] == F.zero:
            assert is_galois_point(C, P).verdict == "galois"


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_flex_counts_invariant_under_pgl3(seed):
    F = field_create(3, 2, (2, 2, 1))
    C = random_smooth_quartic(F, seed)
    D = apply_pgl3(C, random_matrix(F, random.Random(seed)))
    assert len(conic_flexes_rational(C)) == len(conic_flexes_rational(D)) == len(flexes_rational(D))


def test_char2_galois_witness_uses_even_degree():
    F = field_create(2, 3)
    C = random_smooth_quartic(F, 0)
    for P in C.rational_points():
        v = is_galois_point(C, P)
        if v.verdict == "not_galois":
            assert v.evidence["fiber_witness"]["k"] % 2 == 0
