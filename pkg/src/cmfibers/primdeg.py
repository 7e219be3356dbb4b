"""Primitive residue fields and primitive degrees of CM points on X_0 and X_1."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .classfields import FieldLabel, K, Q, abs_degree, rel_degree
from .errors import UsageError
from .fiberengine import cm_discriminant, prime_levels, x1_scale
from .quadarith import Discriminant, kronecker, ord_p, require_prime


@dataclass(frozen=True)
class LocalPrimitive:
    """Primitive fields at one prime: Q(l^b f) and/or K(l^c f), with the case that produced them."""

    case: str
    b: int | None
    c: int | None

    @property
    def two_fields(self) -> bool:
        return self.b is not None and self.c is not None

    @property
    def has_complex(self) -> bool:
        return self.c is not None


@dataclass(frozen=True)
class PrimitiveReport:
    fields: list[FieldLabel]
    degrees: list[int]
    dreaded: bool = False
    case: str = ""
    local: dict[int, LocalPrimitive] = field(default_factory=dict)


def _case_prime_power(disc: Discriminant, ell: int, a: int) -> LocalPrimitive:
    dk = disc.fundamental
    L = disc.level(ell)
    chi = kronecker(dk, ell)
    if a == 0:
        return LocalPrimitive("trivial", 0, None)
    if ell ** a == 2:
        return LocalPrimitive("1.1b", 1, None) if kronecker(disc.value, 2) == -1 else LocalPrimitive("1.1a", 0, None)
    if L == 0:
        if chi == 1:
            return LocalPrimitive("1.2", a, 0)
        if chi == -1:
            return LocalPrimitive("1.3", a, None)
        return LocalPrimitive("1.4", a - 1, None)
    if ell > 2:
        if chi == 1:
            return LocalPrimitive("1.5a", 0, None) if a <= 2 * L else LocalPrimitive("1.5b", a - 2 * L, 0)
        if chi == -1:
            return LocalPrimitive("1.6a", 0, None) if a <= 2 * L else LocalPrimitive("1.6b", a - 2 * L, None)
        return LocalPrimitive("1.7a", 0, None) if a <= 2 * L + 1 else LocalPrimitive("1.7b", a - 2 * L - 1, None)
    if chi == 1:
        if L == 1:
            return LocalPrimitive("1.8a", a, 0)
        if a <= 2 * L - 2:
            return LocalPrimitive("1.8b", 0, None)
        return LocalPrimitive("1.8c", a - 2 * L + 2, 0)
    if chi == -1:
        if L == 1:
            return LocalPrimitive("1.9a", a, a - 2)
        if a <= 2 * L - 2:
            return LocalPrimitive("1.9b", 0, None)
        return LocalPrimitive("1.9c", a - 2 * L + 2, max(a - 2 * L, 0))
    if ord_p(dk, 2) == 2:
        return LocalPrimitive("1.10a", 0, None) if a <= 2 * L else LocalPrimitive("1.10b", a - 2 * L, a - 2 * L - 1)
    if a <= 2 * L + 1:
        return LocalPrimitive("1.11a", 0, None)
    return LocalPrimitive("1.11b", a - 2 * L - 1, None)


def _case_two_even(disc: Discriminant, a: int) -> LocalPrimitive:
    """Level structure (2, 2^a) with delta even."""
    dk = disc.fundamental
    L = disc.level(2)
    chi = kronecker(dk, 2)
    o = ord_p(dk, 2) if chi == 0 else 0
    if a == 1:
        return LocalPrimitive("2.0", 1, None)
    if L == 0:
        return LocalPrimitive("2.1", a, a - 1) if o == 2 else LocalPrimitive("2.2", a - 1, None)
    if chi == 1:
        if L == 1:
            return LocalPrimitive("2.3", a, 1)
        if a <= 2 * L - 1:
            return LocalPrimitive("2.4", 1, None)
        return LocalPrimitive("2.5", a - 2 * L + 2, 1)
    if chi == -1:
        if L == 1:
            return LocalPrimitive("2.6", 2, 1) if a == 2 else LocalPrimitive("2.7", a, a - 2)
        if a <= 2 * L - 1:
            return LocalPrimitive("2.8", 1, None)
        if a == 2 * L:
            return LocalPrimitive("2.9", 2, 1)
        return LocalPrimitive("2.10", a - 2 * L + 2, a - 2 * L)
    if o == 2:
        return LocalPrimitive("2.11", 1, None) if a <= 2 * L + 1 else LocalPrimitive("2.12", a - 2 * L, a - 2 * L - 1)
    return LocalPrimitive("2.13", 1, None) if a <= 2 * L + 1 else LocalPrimitive("2.14", a - 2 * L - 1, None)


def _case_ringclass(disc: Discriminant, ell: int, a_prime: int, a: int) -> LocalPrimitive:
    """Levels whose torsion field contains K: the answer is a single ring class field."""
    base = _case_prime_power(disc, ell, a)
    inner = base.c if base.two_fields else base.b
    c = max(a_prime, inner)
    if ell == 2 and a_prime == 1:
        if a == 1:
            case = "3.1"
        else:
            case = "3.2" if kronecker(disc.value, 2) == 1 else "3.3"
    else:
        case = {1: "4.1", -1: "4.2", 0: "4.3"}[kronecker(disc.fundamental, ell)]
    return LocalPrimitive(case, None, c)


def local_primitive(delta: int, ell: int, a_prime: int, a: int) -> LocalPrimitive:
    disc = cm_discriminant(delta)
    require_prime(ell)
    if not 0 <= a_prime <= a:
        raise UsageError(f"need 0 <= a' <= a, got a'={a_prime}, a={a}")
    if a_prime == 0:
        return _case_prime_power(disc, ell, a)
    if ell ** a_prime == 2 and disc.value % 2 == 0:
        return _case_two_even(disc, a)
    return _case_ringclass(disc, ell, a_prime, a)


def _local_fields(lp: LocalPrimitive, ell: int, f: int) -> list[FieldLabel]:
    out = []
    if lp.b is not None:
        out.append(Q(ell ** lp.b * f))
    if lp.c is not None:
        out.append(K(ell ** lp.c * f))
    return out


def minimal_degrees(degrees: list[int]) -> list[int]:
    """Degrees not a proper multiple of another one in the list."""
    ds = sorted(set(degrees))
    return [d for d in ds if not any(e != d and d % e == 0 for e in ds)]


def primitive_x0_two_level(delta: int, ell: int, a_prime: int, a: int) -> PrimitiveReport:
    disc = cm_discriminant(delta)
    lp = local_primitive(delta, ell, a_prime, a)
    fields = _local_fields(lp, ell, disc.conductor)
    degrees = minimal_degrees([abs_degree(F, disc.fundamental) for F in fields])
    return PrimitiveReport(fields, degrees, lp.case == "1.5b", lp.case, {ell: lp})


def primitive_x0_prime_power(delta: int, ell: int, a: int) -> PrimitiveReport:
    return primitive_x0_two_level(delta, ell, 0, a)


def primitive_compile(delta: int, M: int, N: int) -> PrimitiveReport:
    disc = cm_discriminant(delta)
    dk, f = disc.fundamental, disc.conductor
    levels = prime_levels(M, N)
    local = {p: local_primitive(delta, p, ap, a) for p, (ap, a) in levels.items()}
    if M == 1 or (M == 2 and disc.value % 2 == 0):
        B = math.prod(p ** lp.b for p, lp in local.items())
        C = math.prod(p ** (lp.c if lp.two_fields else lp.b) for p, lp in local.items())
        doubles = [lp for lp in local.values() if lp.two_fields]
        if not doubles:
            F = Q(B * f)
            return PrimitiveReport([F], [abs_degree(F, dk)], False, "rational", local)
        fields = [Q(B * f), K(C * f)]
        if any(lp.case != "1.5b" for lp in doubles):
            return PrimitiveReport(fields, [abs_degree(fields[1], dk)], False, "two-fields", local)
        degrees = sorted(abs_degree(F, dk) for F in fields)
        return PrimitiveReport(fields, degrees, True, "two-degrees", local)
    C = math.prod(p ** (lp.c if lp.has_complex else lp.b) for p, lp in local.items())
    F = K(C * f)
    return PrimitiveReport([F], [abs_degree(F, dk)], False, "ringclass", local)


def primitive_x1(delta: int, M: int, N: int) -> list[int]:
    k = x1_scale(N)
    return [k * d for d in primitive_compile(delta, M, N).degrees]


def table_row(delta: int, ell: int, a_prime: int, a: int) -> tuple:
    """(case, b, d_b, c, d_c, d_c | d_b) with degrees relative to Q(f); absent entries are None."""
    disc = cm_discriminant(delta)
    lp = local_primitive(delta, ell, a_prime, a)
    f, dk = disc.conductor, disc.fundamental
    d_b = rel_degree(Q(ell ** lp.b * f), f, dk) if lp.b is not None else None
    if lp.two_fields:
        d_c = rel_degree(K(ell ** lp.c * f), f, dk)
        return (lp.case, lp.b, d_b, lp.c, d_c, d_b % d_c == 0)
    return (lp.case, lp.b, d_b, None, None, None)
