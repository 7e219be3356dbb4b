import pytest

from cmfibers.errors import DomainError, UsageError
from cmfibers.oddcm import (
    CLASS_NUMBER_ONE,
    class_number_one,
    closed_form_odd_degree,
    d_odd_cm,
    odd_class_number_shape,
    odd_cm_report,
    odd_degree_exists,
    primitive_odd_degree,
)
from cmfibers.quadarith import class_number


def test_class_number_one_scan():
    assert tuple(class_number_one(200)) == CLASS_NUMBER_ONE
    assert len(CLASS_NUMBER_ONE) == 13


def test_odd_class_number_shape():
    for d in range(-3, -3000, -1):
        if d % 4 in (0, 1):
            assert odd_class_number_shape(d) == (class_number(d) % 2 == 1), d


@pytest.mark.parametrize("delta,M,N,want", [
    (-4, 2, 2, True), (-8, 1, 4, False), (-343, 1, 49, True), (-7, 1, 3, False), (-15, 1, 1, False),
])
def test_odd_degree_exists(delta, M, N, want):
    assert odd_degree_exists(delta, M, N) is want


@pytest.mark.parametrize("delta,N,want", [(-7, 7, 1), (-27, 27, 1), (-28, 14, 1), (-3, 1, 1), (-3, 9, 1), (-3, 27, 3)])
def test_primitive_odd_degree(delta, N, want):
    assert primitive_odd_degree(delta, 1, N) == want


def test_closed_form_matches_engine():
    for ell in (7, 11, 19, 23, 31):
        for L in range(2):
            for four in (1, 4):
                delta = -four * ell ** (2 * L + 1)
                for a in range(4):
                    for N in (ell ** a, 2 * ell ** a, 4 * ell ** a):
                        assert closed_form_odd_degree(delta, N) == primitive_odd_degree(delta, 1, N), (delta, N)


def test_closed_form_two_factor_at_minus_four_ell():
    # 11 = 3 mod 8, so the factor 2 - (11/2) = 3 applies to -44 even at odd level
    assert closed_form_odd_degree(-44, 11) == 3 == class_number(-44)
    with pytest.raises(DomainError):
        closed_form_odd_degree(-15, 3)


def test_d_odd_cm():
    assert d_odd_cm(1, 11) == (1, [-11])
    assert d_odd_cm(1, 49) == (7, [-7, -28, -343, -1372])
    assert d_odd_cm(1, 49, "x1") == (147, [-7, -28, -343, -1372])
    assert d_odd_cm(1, 14) == (1, [-7, -28])
    assert d_odd_cm(2, 2) == (1, [-4])
    assert d_odd_cm(1, 5) is None
    assert d_odd_cm(3, 3) is None


def test_d_odd_cm_at_level_two_includes_minus_28():
    best, discs = d_odd_cm(1, 2)
    assert best == 1 and -28 in discs and -11 not in discs


def test_levels_with_a_rational_odd_cm_point():
    ones = [N for N in range(1, 200) if (d_odd_cm(1, N) or (0,))[0] == 1]
    assert ones == [1, 2, 3, 4, 6, 7, 9, 11, 14, 19, 27, 43, 67, 163]


def test_report():
    r = odd_cm_report(1, 49, -343)
    assert r.exists and r.primitive_odd_degree == 7 and r.d_odd_cm == 7
    assert not odd_cm_report(1, 5).exists


def test_level_errors():
    with pytest.raises(DomainError):
        d_odd_cm(2, 3)
    with pytest.raises(UsageError):
        d_odd_cm(0, 3)
    with pytest.raises(UsageError):
        d_odd_cm(1, 3, "x2")
