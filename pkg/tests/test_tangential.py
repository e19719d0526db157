import math

import pytest
from hypothesis import given, settings, strategies as st

from quarticlab.field import field_create
from quarticlab.projective import ProjPoint
from quarticlab.quartic import fixture, random_smooth_quartic
from quarticlab.tangential import (aubry_bound_check, census_row, count_xc_points, crossing_correction,
                                   fiber_sizes, frobenius_form, genus_constants, in_irreducible_window,
                                   in_reducible_window, irreducible_margin, is_frobenius_nonclassical,
                                   reducible_margin, separating_degrees, tangential_image,
                                   xc_irreducibility_verdict)


def brute_xc(C, k=1):
    """#{(P, Q)}: Q != P on the tangent at P, or Q = P a flex."""
    pts = list(C.iter_points(k))
    n = 0
    for P in pts:
        L = C.tangent_line(P)
        n += sum(1 for Q in pts if Q != P and L.contains(Q))
        n += C.contact_order(P) >= 3
    return n


@pytest.mark.parametrize("pn", [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2)])
def test_xc_count_against_geometric_definition(pn):
    F = field_create(*pn)
    for seed in range(4):
        C = random_smooth_quartic(F, seed)
        assert count_xc_points(C) == brute_xc(C)
        if F.q <= 4:
            assert count_xc_points(C, 2) == brute_xc(C, 2)


@pytest.mark.parametrize("pn", [(5, 1), (7, 1), (2, 3), (3, 2)])
def test_fiber_sizes_match_tangential_image(pn):
    F = field_create(*pn)
    C = random_smooth_quartic(F, 1)
    for P, n in fiber_sizes(C):
        T = tangential_image(C, P)
        assert T.degree() == 2
        assert n == T.support_size()
        assert all(C.contains(Q) for Q, _ in T.rational)


def test_tangential_image_examples(F3, F5):
    P = ProjPoint.from_ints(F3, (1, 1, 1))
    T = tangential_image(fixture("fermat", F3), P)
    assert [(Q, m) for Q, m in T.rational] == [(P, 2)]
    Q = ProjPoint.from_ints(F5, (1, 0, 1))
    from quarticlab.quartic import PlaneQuartic
    T = tangential_image(PlaneQuartic.parse("x^4+y^4+4z^4", F5), Q)
    assert [(R, m) for R, m in T.rational] == [(Q, 2)]


def test_genus_two_derivations():
    g = genus_constants()
    assert (g.nu, g.deg_pi1, g.deg_pi2, g.a, g.b) == (2, 2, 10, 12, 4)
    assert g.arithmetic_genus == g.a * g.b - 15 == 33
    assert g.riemann_hurwitz_genus == 33
    assert 2 * g.riemann_hurwitz_genus - 2 == g.deg_pi1 * (2 * g.curve_genus - 2) + g.branch_degree
    assert g.branch_degree == 56


def test_window_helpers():
    assert crossing_correction() == 28
    assert separating_degrees(2) == [13, 14]
    for q in (2, 4, 8):
        m = separating_degrees(q)[0]
        lo = 2 * (q ** m + 1) - 28 - 12 * math.sqrt(q ** m)
        hi = q ** m + 1 + 66 * math.sqrt(q ** m)
        assert lo > hi
    assert in_irreducible_window(2 ** 13 + 1, 2, 13) and not in_reducible_window(2 ** 13 + 1, 2, 13)
    assert in_irreducible_window(129, 128, 1) and in_reducible_window(129, 128, 1)  # windows overlap here
    q, m = 2, 13
    N = 2 * (q ** m + 1)
    assert in_reducible_window(N, q, m) and not in_irreducible_window(N, q, m)
    assert irreducible_margin(q ** m + 1, q, m) == pytest.approx(66 * q ** (m / 2))
    assert reducible_margin(N, q, m) == pytest.approx(12 * q ** (m / 2) + 28)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 9), st.integers(1, 6), st.integers(0, 10 ** 6))
def test_windows_exact_vs_float(q, m, N):
    c = abs(N - (q ** m + 1))
    if abs(c - 66 * q ** (m / 2)) > 1e-6:
        assert in_irreducible_window(N, q, m) == (c <= 66 * q ** (m / 2))
    r = abs(N - 2 * (q ** m + 1)) - 28
    if abs(r - 12 * q ** (m / 2)) > 1e-6:
        assert in_reducible_window(N, q, m) == (r <= 12 * q ** (m / 2))


def test_frobenius_nonclassical(F5, F9):
    assert is_frobenius_nonclassical(fixture("fermat", F9))
    assert not is_frobenius_nonclassical(fixture("fermat", F5))
    assert is_frobenius_nonclassical(fixture("klein_twist_1"))
    assert not is_frobenius_nonclassical(fixture("klein_twist_2"))
    assert frobenius_form(fixture("fermat", F5)).d == 5 + 3


def test_frobenius_nonclassical_geometry(F9):
    """Frobenius image of each F_81-point lies on its tangent."""
    C = fixture("fermat", F9)
    E = F9.extension(2)
    for P in list(C.iter_points(2))[:200]:
        L = C.tangent_line(P)
        img = ProjPoint(E, [E.pow(c, F9.q) for c in P.coords])
        assert L.contains(img)


def test_verdict_odd_characteristic(F3, F5):
    v = xc_irreducibility_verdict(fixture("fermat", F3))
    assert v.verdict == "irreducible" and v.tag == "char-3 Fermat"
    v = xc_irreducibility_verdict(random_smooth_quartic(F5, 0))
    assert v.verdict == "irreducible" and not v.rows


def test_verdict_char2_small_degrees_inconclusive():
    C = fixture("klein_twist_2")
    v = xc_irreducibility_verdict(C, degrees=[1, 2])
    assert v.verdict == "inconclusive" and [r["m"] for r in v.rows] == [1, 2]
    row = census_row(C, 1)
    assert row["count"] == 0 and row["verdict"] == "inconclusive"


def test_aubry_bound(F7):
    for seed in range(5):
        r = aubry_bound_check(random_smooth_quartic(F7, seed))
        assert r["holds"] and r["margin"] >= 0 and r["center"] == 8
