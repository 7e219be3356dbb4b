"""Closed-form CM fibers on X_0(l^a), X_0(l^a', l^a), X_0(M, N) and degrees on X_1(M, N)."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

from .classfields import FieldLabel, K, Kind, Q, Spectrum, rel_degree
from .errors import DomainError, InvariantError, UsageError
from .quadarith import Discriminant, arith, kronecker, ord_p, prime_factors, require_prime, split_discriminant

log = logging.getLogger(__name__)

# (rule id, field kind, exponent e of l in the label l^e * f, number of closed points)
Emission = tuple[str, Kind, int, int]

R, C = Kind.RATIONAL, Kind.RINGCLASS


@dataclass(frozen=True)
class LocalData:
    """Everything the path-type rules depend on."""

    ell: int
    chi: int
    ord2: int
    L: int
    a: int


@dataclass(frozen=True)
class PathTypeRule:
    id: str
    applies: Callable[[LocalData], bool]
    emit: Callable[[LocalData], Iterator[tuple[Kind, int, int]]]


def _one(kind: Kind, e: Callable[[LocalData], int]):
    return lambda p: iter([(kind, e(p), 1)])


def _emit_v_odd(p: LocalData):
    l, L, a = p.ell, p.L, p.a
    for b in range(1, min(a - 1, L - 1) + 1):
        yield C, max(a - 2 * b, 0), (l - 1) // 2 * l ** (min(b, a - b) - 1)


def _emit_xi(p: LocalData):
    l, L, a = p.ell, p.L, p.a
    for h in range(1, a - L):
        yield C, max(a - 2 * L - h, 0), (l - 1) * l ** (min(L, a - L - h) - 1)


def _pair(rational: int, complex_: int, e: int):
    """Emit a rational count and a ring class count sharing one exponent."""
    return iter([(R, e, rational), (C, e, complex_)])


_COMMON = [
    PathTypeRule("I", lambda p: p.a >= 1, _one(R, lambda p: p.a)),
    PathTypeRule("II", lambda p: 1 <= p.a <= p.L, _one(R, lambda p: 0)),
    PathTypeRule("III", lambda p: p.L == 0 and p.chi == 0 and p.a >= 1, _one(R, lambda p: p.a - 1)),
    PathTypeRule(
        "IV",
        lambda p: p.L == 0 and p.chi == 1 and p.a >= 1,
        lambda p: ((C, p.a - h, 1) for h in range(1, p.a + 1)),
    ),
    PathTypeRule("X", lambda p: p.L >= 1 and p.a > p.L and p.chi == 1, _one(C, lambda p: 0)),
    PathTypeRule("XI", lambda p: p.L >= 1 and p.a - p.L >= 2 and p.chi == 1, _emit_xi),
]

_ODD = [
    PathTypeRule("V", lambda p: p.L >= 2, _emit_v_odd),
    PathTypeRule(
        "VI",
        lambda p: p.a > p.L >= 1 and p.chi == -1,
        lambda p: _pair(1, (p.ell ** min(p.L, p.a - p.L) - 1) // 2, max(p.a - 2 * p.L, 0)),
    ),
    PathTypeRule(
        "VII",
        lambda p: p.a >= p.L + 1 >= 2 and p.chi == 0,
        lambda p: _pair(0, (p.ell - 1) // 2 * p.ell ** (min(p.L, p.a - p.L) - 1), max(p.a - 2 * p.L, 0)),
    ),
    PathTypeRule(
        "VIII",
        lambda p: p.a >= p.L + 1 >= 2 and p.chi == 0,
        lambda p: _pair(1, (p.ell ** min(p.L, p.a - p.L - 1) - 1) // 2, max(p.a - 2 * p.L - 1, 0)),
    ),
    PathTypeRule(
        "IX",
        lambda p: p.a >= p.L + 1 >= 2 and p.chi == 1,
        lambda p: _pair(
            1, ((p.ell - 2) * p.ell ** (min(p.L, p.a - p.L) - 1) - 1) // 2, max(p.a - 2 * p.L, 0)
        ),
    ),
]

_TWO_SHARED_V = [
    PathTypeRule("V1", lambda p: p.L >= 2 and p.a >= 2, _one(R, lambda p: p.a - 2)),
    PathTypeRule("V2", lambda p: p.L >= p.a >= 3, _one(R, lambda p: 0)),
]


def _emit_v4(p: LocalData, top: int):
    for b in range(2, min(top, p.a - 2) + 1):
        yield C, max(p.a - 2 * b, 0), 2 ** (min(b, p.a - b) - 2)


_TWO_UNRAMIFIED = _TWO_SHARED_V + [
    PathTypeRule(
        "V3",
        lambda p: p.a > p.L >= 3,
        lambda p: _pair(2, 2 ** (min(p.a - p.L + 1, p.L - 1) - 2) - 1, max(p.a - 2 * p.L + 2, 0)),
    ),
    PathTypeRule("V4", lambda p: p.L >= 4 and p.a >= 4, lambda p: _emit_v4(p, p.L - 2)),
    PathTypeRule(
        "VI",
        lambda p: p.a > p.L >= 1 and p.chi == -1,
        lambda p: _pair(0, 2 ** (min(p.L, p.a - p.L) - 1), max(p.a - 2 * p.L, 0)),
    ),
]


def _two_ramified(ord2: int) -> list[PathTypeRule]:
    def vi3(p: LocalData):
        e = max(p.a - 2 * p.L, 0)
        k = 2 ** (min(p.L, p.a - p.L) - 2)
        return _pair(2, k - 1, e) if ord2 == 2 else _pair(0, k, e)

    def viii2(p: LocalData):
        e = max(p.a - 2 * p.L - 1, 0)
        k = 2 ** (min(p.L, p.a - 1 - p.L) - 1)
        return _pair(0, k, e) if ord2 == 2 else _pair(2, k - 1, e)

    return _TWO_SHARED_V + [
        PathTypeRule("V3", lambda p: p.L >= 3 and p.a >= 4, lambda p: _emit_v4(p, p.L - 1)),
        PathTypeRule("VI1", lambda p: p.L == 1 and p.a >= 2, _one(R, lambda p: p.a - 2)),
        PathTypeRule("VI2", lambda p: p.a == p.L + 1 >= 3, _one(R, lambda p: 0)),
        PathTypeRule("VI3", lambda p: p.a >= p.L + 2 >= 4, vi3),
        PathTypeRule("VIII1", lambda p: p.L >= 1 and p.a == p.L + 1, _one(R, lambda p: 0)),
        PathTypeRule("VIII2", lambda p: p.L >= 1 and p.a >= p.L + 2, viii2),
    ]


_RULESETS = {
    "odd": _COMMON + _ODD,
    "two": _COMMON + _TWO_UNRAMIFIED,
    "two-2": _COMMON + _two_ramified(2),
    "two-3": _COMMON + _two_ramified(3),
}


def rules_for(ell: int, dk: int) -> list[PathTypeRule]:
    if ell > 2:
        return _RULESETS["odd"]
    if dk % 2:
        return _RULESETS["two"]
    return _RULESETS[f"two-{ord_p(dk, 2)}"]


def _local(disc: Discriminant, ell: int, a: int) -> LocalData:
    dk = disc.fundamental
    return LocalData(ell, kronecker(dk, ell), ord_p(dk, 2) if dk % 2 == 0 else 0, disc.level(ell), a)


def path_type_emissions(delta: int, ell: int, a: int) -> list[Emission]:
    """(rule, kind, exponent, count) for each rule that fires on (delta, ell, a)."""
    disc = cm_discriminant(delta)
    require_prime(ell)
    if a < 0:
        raise UsageError("a must be non-negative")
    p = _local(disc, ell, a)
    out: list[Emission] = []
    for rule in rules_for(ell, disc.fundamental):
        if rule.applies(p):
            out.extend((rule.id, kind, e, n) for kind, e, n in rule.emit(p) if n)
    return out


def cm_discriminant(delta: int) -> Discriminant:
    disc = split_discriminant(delta)
    if disc.fundamental >= -4:
        raise DomainError(f"fundamental discriminant {disc.fundamental} is not below -4")
    return disc


def _label(kind: Kind, conductor: int) -> FieldLabel:
    return Q(conductor) if kind is Kind.RATIONAL else K(conductor)


def x0_prime_power(delta: int, ell: int, a: int) -> Spectrum:
    disc = cm_discriminant(delta)
    if a == 0:
        require_prime(ell)
        return Spectrum({Q(disc.conductor): 1})
    f = disc.conductor
    counts: dict[FieldLabel, int] = defaultdict(int)
    for _, kind, e, n in path_type_emissions(delta, ell, a):
        counts[_label(kind, ell ** e * f)] += n
    S = Spectrum(counts)
    _require_sum(S, disc, 1, ell ** a)
    return S


def _join(F: FieldLabel, G: FieldLabel) -> FieldLabel:
    """The composite field F G inside a common algebraic closure."""
    c = math.lcm(F.conductor, G.conductor)
    return Q(c) if F.is_real and G.is_real else K(c)


def torsion_label(disc: Discriminant, ell: int, a_prime: int) -> FieldLabel:
    """The field cut out by the projective l^a'-torsion over Q(f)."""
    f = disc.conductor
    if ell ** a_prime == 2 and disc.value % 2 == 0:
        return Q(2 * f)
    return K(ell ** a_prime * f)


def _two_by_correspondence(disc: Discriminant, a: int) -> Spectrum:
    """X_0(2, 2^a) via the isomorphism with X_0(2^(a+1)).

    A point (E, D, C) with D of order 2 and C cyclic of order 2^a corresponds to the
    cyclic 2^(a+1)-isogeny from E/D through E.  Sorting those by where E/D sits:
    one level down (every path from there except the pure descent), one level up
    (its pure descent), or beside E on the surface (the paths starting horizontally).
    """
    f, L = disc.conductor, disc.level(2)
    counts: dict[FieldLabel, int] = defaultdict(int)
    for rule, kind, e, n in path_type_emissions(4 * disc.value, 2, a + 1):
        if rule != "I":
            counts[_label(kind, 2 ** e * 2 * f)] += n
    if L >= 1:
        counts[Q(2 ** a * f)] += 1
    else:
        for rule, kind, e, n in path_type_emissions(disc.value, 2, a + 1):
            if rule in ("III", "IV"):
                counts[_label(kind, 2 ** e * f)] += n
    return Spectrum(counts)


def _by_torsion_field(disc: Discriminant, ell: int, a_prime: int, base: Spectrum) -> Spectrum:
    """Each point above P has residue field Q(P) K(l^a' f); K(c) is Galois so the join is canonical."""
    dk, f = disc.fundamental, disc.conductor
    q = ell ** a_prime
    cover = q * arith(q)[0]
    T = torsion_label(disc, ell, a_prime)
    if T.is_real:
        raise InvariantError("a real torsion field has no canonical join")
    counts: dict[FieldLabel, int] = defaultdict(int)
    for F, m in base:
        G = _join(F, T)
        num = m * cover * rel_degree(F, f, dk)
        den = rel_degree(G, f, dk)
        if num % den:
            raise InvariantError(f"non-integral multiplicity {num}/{den} above {F}")
        counts[G] += num // den
    return Spectrum(counts)


def x0_two_level(delta: int, ell: int, a_prime: int, a: int) -> Spectrum:
    disc = cm_discriminant(delta)
    require_prime(ell)
    if not 0 <= a_prime <= a:
        raise UsageError(f"need 0 <= a' <= a, got a'={a_prime}, a={a}")
    if a_prime == 0:
        return x0_prime_power(delta, ell, a)
    if ell ** a_prime == 2 and delta % 2 == 0:
        S = _two_by_correspondence(disc, a)
    else:
        S = _by_torsion_field(disc, ell, a_prime, x0_prime_power(delta, ell, a))
    _require_sum(S, disc, ell ** a_prime, ell ** a)
    return S


def prime_levels(M: int, N: int) -> dict[int, tuple[int, int]]:
    if M < 1 or N < 1:
        raise UsageError(f"levels must be positive, got M={M}, N={N}")
    if N % M:
        raise DomainError(f"M={M} does not divide N={N}")
    return {p: (ord_p(M, p) if M % p == 0 else 0, e) for p, e in prime_factors(N).items()}


def x0_general(delta: int, M: int, N: int) -> Spectrum:
    disc = cm_discriminant(delta)
    levels = prime_levels(M, N)
    local = [list(x0_two_level(delta, p, ap, a)) for p, (ap, a) in levels.items()]
    counts: dict[FieldLabel, int] = defaultdict(int)
    f = disc.conductor
    for choice in product(*local):
        c, mult, s = f, 1, 0
        for F, m in choice:
            c = math.lcm(c, F.conductor)
            mult *= m
            s += not F.is_real
        label = Q(c) if s == 0 else K(c)
        counts[label] += mult * (2 ** (s - 1) if s else 1)
    S = Spectrum(counts)
    _require_sum(S, disc, M, N)
    return S


def x1_scale(N: int) -> int:
    return max(arith(N)[0] // 2, 1)


def x0_degrees(delta: int, M: int, N: int) -> list[int]:
    """Absolute degrees of the delta-CM closed points on X_0(M, N), ascending."""
    disc = cm_discriminant(delta)
    return x0_general(delta, M, N).degrees(disc.fundamental)


def x1_degrees(delta: int, M: int, N: int) -> list[int]:
    """X_1(M, N) -> X_0(M, N) is inert over CM points, so degrees scale uniformly."""
    k = x1_scale(N)
    return [k * d for d in x0_degrees(delta, M, N)]


def expected_degree(M: int, N: int) -> int:
    return M * arith(M)[0] * arith(N)[1]


def degree_sum_check(S: Spectrum, delta: int, M: int, N: int) -> bool:
    disc = cm_discriminant(delta)
    got = S.degree_sum(disc.conductor, disc.fundamental)
    want = expected_degree(M, N)
    if got != want:
        log.warning("degree sum %d for %r on X_0(%d,%d) at %d, expected %d", got, S, M, N, delta, want)
    return got == want


def _require_sum(S: Spectrum, disc: Discriminant, M: int, N: int) -> None:
    if not degree_sum_check(S, disc.value, M, N):
        raise InvariantError(f"degree sum violated for {S} on X_0({M},{N}) at {disc.value}")
