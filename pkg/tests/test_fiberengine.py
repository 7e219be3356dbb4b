import random

import pytest

from cmfibers.classfields import K, Q, Spectrum
from cmfibers.errors import DomainError, UsageError
from cmfibers.fiberengine import (
    degree_sum_check,
    expected_degree,
    path_type_emissions,
    x0_degrees,
    x0_general,
    x0_prime_power,
    x0_two_level,
    x1_degrees,
)
from cmfibers.quadarith import arith, split_discriminant


def test_prime_power_examples():
    assert x0_prime_power(-63, 3, 2) == Spectrum({Q(3): 1, K(3): 1, Q(27): 1})
    assert x0_prime_power(-15, 2, 1) == Spectrum({K(1): 1, Q(2): 1})
    assert x0_prime_power(-63, 5, 0) == Spectrum({Q(3): 1})


def test_emissions_sum_to_psi():
    for delta in (-7, -28, -63, -20, -80, -24, -96, -52, -8 * 9):
        for ell in (2, 3, 5):
            for a in range(1, 6):
                disc = split_discriminant(delta)
                S = Spectrum(
                    ((Q if kind.value == "rational" else K)(ell ** e * disc.conductor), n)
                    for _, kind, e, n in path_type_emissions(delta, ell, a)
                )
                assert S.degree_sum(disc.conductor, disc.fundamental) == arith(ell ** a)[1]


def test_two_level():
    # 2 splits in Q(sqrt(-15)), so K(2) and K(1) are the same field
    assert x0_two_level(-15, 2, 1, 1).normalized(-15) == Spectrum({K(1): 3})
    assert x0_two_level(-63, 3, 0, 2) == x0_prime_power(-63, 3, 2)
    assert K(3) in x0_two_level(-15, 3, 1, 1).labels()


def test_general():
    assert x0_general(-7, 1, 6) == Spectrum({K(3): 1, Q(6): 1})
    assert x0_general(-63, 1, 1) == Spectrum({Q(3): 1})
    for delta, M, N in ((-20, 2, 12), (-63, 3, 9), (-15, 1, 30)):
        for F in x0_general(delta, M, N).labels():
            assert N * 3 % (F.conductor // (3 if delta == -63 else 1)) == 0


def test_x1_degrees():
    assert x0_degrees(-63, 1, 9) == [4, 8, 36]
    assert x1_degrees(-63, 1, 9) == [12, 24, 108]
    assert x1_degrees(-7, 1, 2) == [1, 2]
    assert x1_degrees(-15, 2, 2) == [4, 4, 4]


def test_degree_sum_check():
    assert degree_sum_check(x0_prime_power(-63, 3, 2), -63, 1, 9)
    assert degree_sum_check(Spectrum({K(2): 1, Q(8): 1}), -28, 1, 4)
    assert not degree_sum_check(Spectrum(), -28, 1, 4)
    assert expected_degree(2, 4) == 2 * 1 * 6


def test_sampled_degree_sums():
    rng = random.Random(7)
    for _ in range(60):
        N = rng.randint(1, 60)
        M = rng.choice([m for m in range(1, N + 1) if N % m == 0])
        delta = rng.choice((-7, -15, -20, -63, -99, -96, -200))
        assert degree_sum_check(x0_general(delta, M, N), delta, M, N)


def test_errors():
    with pytest.raises(DomainError):
        x0_general(-4, 1, 3)
    with pytest.raises(DomainError):
        x0_general(-7, 2, 3)
    with pytest.raises(UsageError):
        x0_general(-7, 0, 3)
