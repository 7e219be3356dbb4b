"""Odd-degree CM points on X_0(M,N) and X_1(M,N)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, UsageError
from .fiberengine import x1_scale
from .primdeg import primitive_compile
from .quadarith import class_number, ord_p, prime_factors, split_discriminant

CLASS_NUMBER_ONE = (-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163)


@dataclass(frozen=True)
class OddCmReport:
    exists: bool
    primitive_odd_degree: int | None = None
    d_odd_cm: int | None = None
    corresponding_discriminants: list[int] = field(default_factory=list)


def _check_level(M: int, N: int) -> None:
    if M < 1 or N < 1:
        raise UsageError(f"levels must be positive, got ({M}, {N})")
    if N % M:
        raise DomainError(f"M={M} does not divide N={N}")


def _curve_scale(curve: str, N: int) -> int:
    if curve == "x0":
        return 1
    if curve == "x1":
        return x1_scale(N)
    raise UsageError(f"unknown curve {curve!r}")


def odd_class_number_shape(delta: int) -> bool:
    """Whether h(delta) is odd, read off from the shape of delta alone."""
    if delta in (-4, -8, -12, -16):
        return True
    n = -delta
    if n % 8 == 4:
        n //= 4
    elif n % 2 == 0:
        return False
    ps = prime_factors(n)
    if len(ps) != 1:
        return False
    (p, e), = ps.items()
    return p % 4 == 3 and e % 2 == 1


def class_number_one(bound: int = 200) -> list[int]:
    """Discriminants delta >= -bound with h(delta) = 1, in decreasing order."""
    out = []
    for d in range(-3, -bound - 1, -1):
        if d % 4 in (0, 1) and class_number(d) == 1:
            out.append(d)
    return out


def _unit_case_degree(delta: int, M: int, N: int) -> int | None:
    """Delta_K in {-3, -4}: hardcoded from the known classification."""
    if M >= 2:
        return 1 if (M, N, delta) == (2, 2, -4) else None
    if delta in (-4, -16):
        return 1 if N in (1, 2, 4) else None
    if delta % 3 or ord_p(-delta, 2) not in (0, 2):
        return None
    rest = -delta >> ord_p(-delta, 2)
    e3 = ord_p(rest, 3)
    if rest != 3 ** e3 or e3 % 2 == 0:
        return None
    L = (e3 - 1) // 2
    twice = N % 2 == 0
    core = N >> 1 if twice else N
    a = ord_p(core, 3)
    if core != 3 ** a or ord_p(N, 2) > 1:
        return None
    slack = max(a - 2 * L - 1, 0)
    if delta == -3:
        if a == 0:
            return 1
        return 3 ** (a - 1) if twice else 3 ** max(a - 2, 0)
    if delta % 4 == 0:
        return 3 ** (L + slack)
    return 3 ** (L + slack) if twice else 3 ** (L - 1 + slack)


def primitive_odd_degree(delta: int, M: int, N: int, curve: str = "x0") -> int | None:
    """The unique primitive odd degree of a delta-CM point, or None when every degree is even."""
    _check_level(M, N)
    scale = _curve_scale(curve, N)
    dk = split_discriminant(delta).fundamental
    if dk >= -4:
        d = _unit_case_degree(delta, M, N)
    else:
        odd = [d for d in primitive_compile(delta, M, N).degrees if d % 2]
        d = odd[0] if odd else None
    return None if d is None else scale * d


def odd_degree_exists(delta: int, M: int, N: int) -> bool:
    return primitive_odd_degree(delta, M, N) is not None


def _two_symbol(ell: int) -> int:
    """(ell/2) for odd ell: 1 when ell = +-1 mod 8, else -1."""
    return 1 if ell % 8 in (1, 7) else -1


def closed_form_odd_degree(delta: int, N: int) -> int | None:
    """Explicit formula for delta = -l^(2L+1) or -4 l^(2L+1) with 3 < l = 3 mod 4 on X_0(N)."""
    n = -delta
    four = n % 4 == 0
    if four:
        n //= 4
    ps = prime_factors(n)
    if len(ps) != 1:
        raise DomainError(f"{delta} is not of the form -l^(2L+1) or -4 l^(2L+1)")
    (ell, e), = ps.items()
    if ell <= 3 or ell % 4 != 3 or e % 2 == 0:
        raise DomainError(f"{delta} is not of the form -l^(2L+1) or -4 l^(2L+1)")
    L = (e - 1) // 2
    twice = N % 2 == 0
    core = N >> 1 if twice else N
    a = ord_p(core, ell)
    if core != ell ** a or ord_p(N, 2) > 1:
        return None
    base = class_number(-ell) * ell ** (L + max(a - 2 * L - 1, 0))
    return (2 - _two_symbol(ell)) * base if twice or four else base


def _candidates(M: int, N: int) -> list[int]:
    if M >= 2:
        return [-4]
    out = set(CLASS_NUMBER_ONE) if N <= 2 else set()
    if N == 4:
        out |= {-4, -16}
    for p, a in prime_factors(N).items():
        if p % 4 == 3:
            for L in range(a + 2):
                out |= {-p ** (2 * L + 1), -4 * p ** (2 * L + 1)}
    return sorted(out, reverse=True)


def d_odd_cm(M: int, N: int, curve: str = "x0") -> tuple[int, list[int]] | None:
    """Least primitive odd CM degree over all delta, with every delta attaining it."""
    _check_level(M, N)
    found: dict[int, list[int]] = {}
    for delta in _candidates(M, N):
        d = primitive_odd_degree(delta, M, N, curve)
        if d is not None:
            found.setdefault(d, []).append(delta)
    if not found:
        return None
    best = min(found)
    return best, found[best]


def odd_cm_report(M: int, N: int, delta: int | None = None, curve: str = "x0") -> OddCmReport:
    best = d_odd_cm(M, N, curve)
    d_min, discs = best if best else (None, [])
    if delta is None:
        return OddCmReport(best is not None, None, d_min, discs)
    d = primitive_odd_degree(delta, M, N, curve)
    return OddCmReport(d is not None, d, d_min, discs)
