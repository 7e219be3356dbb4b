"""Rationality of cyclic isogenies and related closed forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy.ntheory import is_quad_residue

from .classfields import FieldLabel, K, Q
from .errors import UnsupportedCaseError, UsageError
from .fiberengine import cm_discriminant
from .quadarith import kronecker, ord_p, prime_factors, require_prime

BRUTE_LIMIT = 1 << 20


class Unbounded:
    """Marker for an isogeny degree that can grow without bound."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "unbounded"

    __str__ = __repr__


UNBOUNDED = Unbounded()


def kwon_m(delta: int, ell: int) -> int:
    """Largest a such that a delta-CM curve has a cyclic ell^a-isogeny rational over Q(f)."""
    disc = cm_discriminant(delta)
    require_prime(ell)
    L = disc.level(ell)
    chi = kronecker(disc.fundamental, ell)
    if ell > 2:
        return 2 * L + 1 if chi == 0 else 2 * L
    if delta % 2:
        return 1 if kronecker(delta, 2) == 1 else 0
    if chi != 0:
        return 1 if L == 1 else 2 * L - 2
    if ord_p(disc.fundamental, 2) == 2:
        return 1 if L == 0 else 2 * L
    return 2 * L + 1


def m_support(delta: int) -> dict[int, int]:
    """The primes with m_ell(delta) > 0; every other prime has m = 0."""
    out = {}
    for ell in prime_factors(2 * abs(delta)):
        m = kwon_m(delta, ell)
        if m:
            out[ell] = m
    return out


def cyclic_over_Qf(delta: int, N: int) -> bool:
    """Whether some delta-CM curve has a cyclic N-isogeny defined over Q(f)."""
    cm_discriminant(delta)
    if N < 1:
        raise UsageError(f"N must be positive, got {N}")
    return all(a <= kwon_m(delta, p) for p, a in prime_factors(N).items())


def k_rational_max(delta: int, ell: int) -> int | Unbounded:
    """Largest a with a cyclic ell^a-isogeny over K(f), or UNBOUNDED when ell splits in K."""
    disc = cm_discriminant(delta)
    require_prime(ell)
    L = disc.level(ell)
    chi = kronecker(disc.fundamental, ell)
    if chi == 1:
        return UNBOUNDED
    if chi == 0:
        return 2 * L + 1
    return 2 * L


def is_square_mod(delta: int, m: int) -> bool:
    """Whether x^2 = delta (mod m) has a solution."""
    if m < 1:
        raise UsageError(f"modulus must be positive, got {m}")
    if m <= BRUTE_LIMIT:
        x = np.arange(m, dtype=np.int64)
        return bool(np.any(x * x % m == delta % m))
    return bool(is_quad_residue(delta % m, m))


def projective_torsion_field(delta: int, N: int) -> FieldLabel:
    """Field cut out by the scalar action of Galois on E[N]."""
    disc = cm_discriminant(delta)
    if N < 2:
        raise UsageError(f"N must be at least 2, got {N}")
    if N == 2 and delta % 2 == 0:
        return Q(2 * disc.conductor)
    return K(N * disc.conductor)


def real_cyclic_subgroup_count(N: int, t: int) -> int | tuple[int, int]:
    """Real cyclic order-N subgroups given t real points of order 2; a pair when only the two candidates are known."""
    if N < 1 or t not in (1, 3):
        raise UsageError(f"need N >= 1 and t in {{1, 3}}, got N={N}, t={t}")
    r = sum(1 for p in prime_factors(N) if p > 2)
    e = ord_p(N, 2)
    if e == 0:
        return 2 ** r
    if e == 1:
        return t * 2 ** r
    if e == 2:
        return (2 ** (r + 1), 2 ** (r + 2))
    raise UnsupportedCaseError(f"N={N} is divisible by 8")


@dataclass(frozen=True)
class IsogenyRationality:
    m: dict[int, int]
    M_over_K: dict[int, int | Unbounded]


def isogeny_rationality(delta: int, primes: list[int]) -> IsogenyRationality:
    return IsogenyRationality(
        {p: kwon_m(delta, p) for p in primes},
        {p: k_rational_max(delta, p) for p in primes},
    )
