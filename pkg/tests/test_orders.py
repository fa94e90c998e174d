from fractions import Fraction
from math import pi

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint, primefactors, totient

from quatdom.arith import QuatAlgebra
from quatdom.lattice import is_valid_pair
from quatdom.orders import (SPLIT, NotAnOrder, QuatOrder, canonical_covolume,
                            covolume_closed_form, eichler_invariant_form,
                            eichler_invariant_radical, jacobson_radical, local_unit_index,
                            maximal_covolume_over_pi, norm_index, normalized_volume,
                            unit_norm_index)
from oracles import eichler_bruteforce, norm_index_bruteforce, radical_bruteforce

PAIRS = [(p, a) for p in range(3, 51) for a in range(2, min(p, 51)) if is_valid_pair(p, a)]


def test_canonical_discriminant():
    O = QuatOrder.canonical(5, 2)
    assert O.reduced_discriminant == 40
    assert not O.is_maximal()
    for p, a in [(3, 2), (7, 3), (13, 5), (17, 12)]:
        assert QuatOrder.canonical(p, a).reduced_discriminant == 4 * a * p


def test_suborder_discriminant_scales_by_index():
    H = QuatAlgebra(2, 5)
    O = QuatOrder([H.element(1), H.element(0, 2), H.element(0, 0, 1), H.element(0, 0, 0, 2)])
    assert O.reduced_discriminant == 4 * 40


def test_non_order_is_rejected():
    H = QuatAlgebra(2, 5)
    with pytest.raises(NotAnOrder):
        QuatOrder([H.element(1), H.element(0, Fraction(1, 2)), H.element(0, 0, 1),
                   H.element(0, 0, 0, 1)])


def test_dual_basis():
    O = QuatOrder.canonical(5, 2)
    b = O.dual_basis
    assert b[0] == O.algebra.element(Fraction(1, 2))
    for i in range(4):
        for j in range(4):
            assert (b[i] * O.basis[j]).trace() == (1 if i == j else 0)


@pytest.mark.parametrize("p,a", [(3, 2), (5, 2), (7, 3), (13, 8), (17, 12)])
def test_ternary_form(p, a):
    f = QuatOrder.canonical(p, a).ternary_form
    assert f.coefficients() == (-p, -a, 1, 0, 0, 0)
    # the same form as X1^2 - a X2^2 - p X3^2 up to sign and reversing the variables
    printed = lambda X: -X[0] ** 2 + a * X[1] ** 2 + p * X[2] ** 2  # noqa: E731
    for X in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3), (-2, 5, 1)]:
        assert f(X) == -printed(X[::-1])


UNIMODULAR = [
    [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [3, 1, 0, 0], [0, 2, 1, 0], [1, 0, 4, 1]],
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]],
]


@pytest.mark.parametrize("U", UNIMODULAR)
def test_form_invariant_under_basis_change(U):
    O = QuatOrder.canonical(7, 3)
    O2 = O.change_basis(U)
    assert O2.reduced_discriminant == O.reduced_discriminant
    assert O2.ternary_form.is_integral()
    assert abs(O2.ternary_form.determinant()) == abs(O.ternary_form.determinant())
    for q in (3, 7):
        assert eichler_invariant_form(O2.ternary_form, q) == eichler_invariant_form(O.ternary_form, q)
        assert eichler_invariant_radical(O2, q) == eichler_invariant_radical(O, q)


@pytest.mark.parametrize("p,a,q", [(3, 2, 2), (3, 2, 3), (5, 3, 3), (7, 3, 3), (7, 6, 3),
                                   (5, 2, 2), (11, 6, 2), (7, 6, 2)])
def test_radical_matches_bruteforce(p, a, q):
    O = QuatOrder.canonical(p, a)
    J, _ = jacobson_radical(O, q)
    J_brute, _ = radical_bruteforce(O, q)
    assert q ** len(J) == len(J_brute)
    assert eichler_invariant_radical(O, q) == eichler_bruteforce(O, q)


def test_matrix_algebra_is_split():
    # Z[1, i, j, ij] with i^2 = 1 is M(2, Z_q) at primes away from 2 and b
    O = QuatOrder.canonical(7, 1)
    assert eichler_invariant_radical(O, 3) == SPLIT


def test_form_and_radical_agree_on_all_small_pairs():
    bad = []
    for p, a in PAIRS:
        O = QuatOrder.canonical(p, a)
        for q in primefactors(O.reduced_discriminant):
            if q == 2:
                continue
            if eichler_invariant_form(O.ternary_form, q) != eichler_invariant_radical(O, q):
                bad.append((p, a, q))
    assert bad == []


def test_norm_index_rule_and_enumeration():
    # the closed-form rule says 2 whenever 4 | a ...
    assert norm_index(17, 12, 2) == 2
    assert norm_index(17, 12, 17) == 1
    # ... but the unit norms of Z_2[1, i, j, ij] for (17, 12) cover all of Z_2^*
    assert unit_norm_index(QuatOrder.canonical(17, 12), 2) == 1
    assert unit_norm_index(QuatOrder.canonical(11, 8), 2) == 2


@pytest.mark.parametrize("p,a", [(3, 2), (5, 2), (7, 3), (11, 8), (13, 8), (17, 12), (19, 8),
                                 (23, 20), (29, 8), (31, 12)])
def test_norm_index_matches_integer_points(p, a):
    O = QuatOrder.canonical(p, a)
    for q in (2, p):
        assert unit_norm_index(O, q) == norm_index_bruteforce(p, a, q, box=4)


def test_local_unit_index_examples():
    assert local_unit_index(3, 1, -1, True, 1) == 2
    assert local_unit_index(5, 1, 0, False, 1) == Fraction(6, 5)
    assert local_unit_index(2, 3, 1, True, 2) == Fraction(4 * 3, 1 * 2)
    with pytest.raises(ValueError):
        local_unit_index(3, 0, 1, True, 1)
    with pytest.raises(ValueError):
        local_unit_index(3, 1, 2, True, 1)


@pytest.mark.parametrize("dH,expected", [(6, Fraction(2, 3)), (10, Fraction(4, 3)),
                                         (14, Fraction(2)), (15, Fraction(8, 3))])
def test_maximal_volume(dH, expected):
    assert maximal_covolume_over_pi(dH) == expected
    assert normalized_volume(dH) == Fraction(int(totient(dH)), 6)


@given(st.sampled_from(PAIRS))
@settings(max_examples=40, deadline=None)
def test_covolume_closed_form(pair):
    O = QuatOrder.canonical(*pair)
    cov = canonical_covolume(*pair)
    assert covolume_closed_form(O) == cov.over_pi
    assert cov.over_pi == cov.maximal_over_pi * cov.index
    assert cov.area == pytest.approx(float(cov.over_pi) * pi, rel=1e-15)
    assert cov.over_pi > 0


def test_covolume_values():
    assert canonical_covolume(3, 2).over_pi == 4
    assert canonical_covolume(5, 2).over_pi == 8
    assert canonical_covolume(17, 12).over_pi == 128
    assert canonical_covolume(13, 8).over_pi == 96
    assert canonical_covolume(11, 8).over_pi == 40


def test_covolume_rejects_definite():
    from quatdom.orders import covolume
    with pytest.raises(ValueError):
        covolume(QuatOrder(QuatAlgebra(-1, -1).basis()))


def test_local_data_consistent():
    for p, a in PAIRS[:40]:
        cov = canonical_covolume(p, a)
        d = QuatOrder.canonical(p, a).reduced_discriminant
        assert [li.q for li in cov.local] == sorted(factorint(d))
        assert all(li.unit_index > 0 for li in cov.local)
