import pytest

from cmfibers.classfields import K, Q, minimal_label, primitive_subset
from cmfibers.errors import DomainError
from cmfibers.fiberengine import x0_two_level
from cmfibers.primdeg import (
    minimal_degrees,
    primitive_compile,
    primitive_x0_prime_power,
    primitive_x0_two_level,
    primitive_x1,
    table_row,
)
from cmfibers.quadarith import class_number

from primtable import TABLE

DKS = (-7, -11, -15, -19, -20, -24, -8, -40, -52, -23, -35)


def table_points():
    for dk in DKS:
        for ell, top, amax in ((2, 5, 9), (3, 3, 7), (5, 2, 5)):
            for L in range(top + 1):
                delta = dk * ell ** (2 * L)
                for a in range(1, amax + 1):
                    for ap in (0, 1) if ell == 2 else (0,):
                        if ap <= a:
                            yield delta, ell, ap, a, L


def test_table_reproduced():
    seen = set()
    for delta, ell, ap, a, L in table_points():
        row = table_row(delta, ell, ap, a)
        case = row[0]
        if case not in TABLE:
            continue
        seen.add(case)
        assert row[1:] == TABLE[case](ell, L, a), (delta, ell, ap, a, case)
    assert seen == set(TABLE)


def test_only_case_one_five_b_loses_divisibility():
    for delta, ell, ap, a, _ in table_points():
        row = table_row(delta, ell, ap, a)
        if row[5] is False:
            assert row[0] == "1.5b"


def test_prime_power_examples():
    r = primitive_x0_prime_power(-99, 3, 3)
    assert r.fields == [Q(9), K(3)] and r.degrees == [4, 6] and r.dreaded
    assert class_number(-891) == 6 and 2 * class_number(-99) == 4
    assert primitive_x0_prime_power(-11, 2, 1).fields == [Q(2)]
    # 5 splits in Q(sqrt(-11)) but is inert in Q(sqrt(-7))
    r = primitive_x0_prime_power(-11, 5, 2)
    assert r.fields == [Q(25), K(1)] and r.degrees == [2] and not r.dreaded
    r = primitive_x0_prime_power(-7, 5, 2)
    assert r.fields == [Q(25)] and r.degrees == [30]


def test_two_level_examples():
    assert primitive_x0_two_level(-15, 2, 1, 1).fields == [K(2)]
    assert primitive_x0_two_level(-20, 2, 1, 1).fields == [Q(2)]
    # the full fiber is {K(3):9, K(9):3}, so K(3) is the primitive field
    assert primitive_x0_two_level(-11, 3, 1, 2).fields == [K(3)]


def test_compile_examples():
    # 2 and 5 both split in Q(sqrt(-31)), h(-31) = 3
    r = primitive_compile(-31, 1, 10)
    assert r.fields == [Q(5), K(1)] and r.degrees == [6]
    r = primitive_compile(-7, 1, 10)
    assert r.fields == [Q(5)] and r.degrees == [6]
    r = primitive_compile(-99, 1, 27)
    assert r.degrees == [4, 6] and r.dreaded
    r = primitive_compile(-63, 1, 1)
    assert r.fields == [Q(3)] and r.degrees == [class_number(-63)]


def test_x1_examples():
    assert primitive_x1(-99, 1, 27) == [36, 54]
    assert primitive_x1(-7, 1, 2) == [1]
    assert primitive_x1(-63, 1, 9) == [12]


def test_primitive_fields_agree_with_full_spectrum():
    for delta, ell, ap, a, _ in table_points():
        if a > 6:
            continue
        disc_dk = [d for d in DKS if delta % d == 0 and (delta // d) ** 0.5 % 1 == 0][0]
        S = x0_two_level(delta, ell, ap, a)
        want = sorted({minimal_label(F, disc_dk) for F in primitive_subset(S, disc_dk)}, key=lambda F: F.sort_key)
        rep = primitive_x0_two_level(delta, ell, ap, a)
        got = sorted({minimal_label(F, disc_dk) for F in rep.fields}, key=lambda F: F.sort_key)
        assert got == want, (delta, ell, ap, a)
        assert rep.degrees == minimal_degrees(S.degrees(disc_dk))


def test_rejects_small_fields():
    with pytest.raises(DomainError):
        primitive_compile(-3, 1, 9)
