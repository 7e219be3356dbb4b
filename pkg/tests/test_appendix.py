import pytest

from cmfibers.appendix import CASES, cases_for, local_invariants, printed_spectrum
from cmfibers.checks import appendix_status
from cmfibers.classfields import K, Q, Spectrum
from cmfibers.fiberengine import x0_prime_power

# Printed tables that break the degree sum somewhere on the sweep.
DISPUTED = {"18", "25", "36", "40", "44", "73", "88"}


@pytest.fixture(scope="module")
def status():
    return appendix_status()


def test_case_ids_are_unique_and_complete():
    ids = [c.id for c in CASES]
    assert len(ids) == len(set(ids)) == 97
    assert {int(i.rstrip("'")) for i in ids} == set(range(1, 96))


def test_every_case_realised(status):
    assert {c.id for c in CASES} == set(status)


def test_no_mismatch(status):
    assert not [k for k, v in status.items() if v["mismatch"]]


def test_disputed_set(status):
    assert {k for k, v in status.items() if v["disputed"]} == DISPUTED


def test_case_ten():
    (case,) = cases_for(-63, 3, 2)
    assert case.id == "10"
    want = Spectrum({Q(3): 1, K(3): 1, Q(27): 1})
    assert printed_spectrum(case, -63, 3, 2) == want == x0_prime_power(-63, 3, 2)


def test_case_forty_four_multiplicity():
    (case,) = [c for c in cases_for(-28, 2, 2) if c.id == "44"]
    assert printed_spectrum(case, -28, 2, 2) == Spectrum({Q(8): 1, K(2): 2})
    assert x0_prime_power(-28, 2, 2) == Spectrum({Q(8): 1, K(2): 1})


def test_case_twenty_five_breaks_degree_sum():
    (case,) = [c for c in cases_for(-72171, 3, 5) if c.id == "25"]
    printed = printed_spectrum(case, -72171, 3, 5)
    assert printed.degree_sum(81, -11) != 4 * 3 ** 4
    assert x0_prime_power(-72171, 3, 5).degree_sum(81, -11) == 4 * 3 ** 4


def test_local_invariants():
    assert local_invariants(-63, 3) == (-1, 0, 1)
    assert local_invariants(-80, 2) == (0, 2, 1)
    assert local_invariants(-8 * 9, 2) == (0, 3, 0)
