"""Imaginary quadratic discriminants, binary quadratic forms and their class groups."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime, jacobi_symbol

from .errors import DomainError, InvariantError, ResourceError, UsageError

_LIMIT = 1 << 127


def checked(*values: int) -> None:
    """Raise if any value leaves the signed 128-bit range."""
    for v in values:
        if not -_LIMIT < v < _LIMIT:
            raise InvariantError(f"integer overflow: {v} exceeds 128 bits")


def ord_p(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise DomainError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def prime_factors(n: int) -> dict[int, int]:
    return dict(sorted(factorint(abs(n)).items()))


def require_prime(ell: int) -> None:
    if not isinstance(ell, int) or not isprime(ell):
        raise UsageError(f"{ell} is not prime")


def kronecker(delta: int, ell: int) -> int:
    """Kronecker symbol (delta / ell) for a prime ell; the ell = 2 case reads delta mod 8."""
    require_prime(ell)
    if delta % 4 not in (0, 1):
        raise UsageError(f"{delta} is not a discriminant")
    if delta % ell == 0:
        return 0
    if ell == 2:
        return 1 if delta % 8 == 1 else -1
    return int(jacobi_symbol(delta % ell, ell))


def is_fundamental(d: int) -> bool:
    if d == 1 or d % 4 not in (0, 1):
        return False
    if d % 4 == 1:
        return all(e == 1 for e in prime_factors(d).values())
    m = d // 4
    return m % 4 in (2, 3) and all(e == 1 for e in prime_factors(m).values())


@dataclass(frozen=True)
class Discriminant:
    value: int
    fundamental: int
    conductor: int

    def level(self, ell: int) -> int:
        """L = ord_ell(f)."""
        return ord_p(self.conductor, ell)

    def prime_to(self, ell: int) -> int:
        """f0, the prime-to-ell part of the conductor."""
        f = self.conductor
        while f % ell == 0:
            f //= ell
        return f

    @property
    def units(self) -> int:
        return {-3: 6, -4: 4}.get(self.value, 2)

    @property
    def tau(self) -> tuple[int, int]:
        """Generator of the order as (t, n) with tau^2 = t*tau - n."""
        d = self.value
        return (0, -d // 4) if d % 4 == 0 else (1, (1 - d) // 4)


def split_discriminant(delta: int) -> Discriminant:
    if delta >= 0 or delta % 4 not in (0, 1):
        raise DomainError(f"{delta} is not a negative discriminant")
    checked(delta)
    f = 1
    dk = delta
    for p, e in prime_factors(delta).items():
        for _ in range(e // 2):
            cand = dk // (p * p)
            if cand % 4 in (0, 1):
                dk = cand
                f *= p
    if not is_fundamental(dk):
        raise InvariantError(f"failed to factor {delta}")
    return Discriminant(delta, dk, f)


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    def is_reduced(self) -> bool:
        a, b, c = self
        if not abs(b) <= a <= c:
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def is_ambiguous(self) -> bool:
        """For a reduced form: its class has order at most two."""
        return self.b == 0 or self.b == self.a or self.a == self.c


def reduce_form(a: int, b: int, c: int) -> QuadForm:
    d = b * b - 4 * a * c
    if a <= 0 or d >= 0:
        raise DomainError(f"({a},{b},{c}) is not positive definite")
    while True:
        if not -a < b <= a:
            b += 2 * a * ((a - b) // (2 * a))
            c = (b * b - d) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        checked(a, b, c)
        return QuadForm(a, b, c)


def principal_form(delta: int) -> QuadForm:
    k = delta % 2
    return QuadForm(1, k, (k - delta) // 4)


def inverse(f: QuadForm) -> QuadForm:
    return reduce_form(f.a, -f.b, f.c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Gauss composition of two primitive forms of one discriminant, reduced."""
    if f1.disc != f2.disc:
        raise UsageError(f"discriminant mismatch: {f1.disc} vs {f2.disc}")
    if f1.a > f2.a:
        f1, f2 = f2, f1
    a1, b1, _ = f1
    a2, b2, c2 = f2
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    checked(a3, b3, c3)
    return reduce_form(a3, b3, c3)


def power(f: QuadForm, k: int) -> QuadForm:
    result = principal_form(f.disc)
    base = f if k >= 0 else inverse(f)
    k = abs(k)
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


@dataclass(frozen=True)
class ClassGroup:
    discriminant: Discriminant
    classes: tuple[QuadForm, ...]

    @property
    def order(self) -> int:
        return len(self.classes)

    def ambiguous(self) -> tuple[QuadForm, ...]:
        return tuple(f for f in self.classes if f.is_ambiguous())


CLASS_GROUP_LIMIT = 10**9


def reduced_forms(delta: int) -> list[QuadForm]:
    """All reduced primitive forms of discriminant delta, sorted by (a, b, c)."""
    if -delta > CLASS_GROUP_LIMIT:
        raise ResourceError(f"class group of {delta} is too large to enumerate")
    amax = math.isqrt(-delta // 3)
    a = np.arange(1, amax + 1, dtype=np.int64)
    out = []
    step = max(1, 4_000_000 // (2 * amax + 1))
    for lo in range(0, amax, step):
        aa = a[lo:lo + step]
        bb = np.arange(-int(aa[-1]), int(aa[-1]) + 1, dtype=np.int64)
        A, B = np.meshgrid(aa, bb, indexing="ij")
        num = B * B - delta
        ok = (np.abs(B) <= A) & (num % (4 * A) == 0)
        A, B, num = A[ok], B[ok], num[ok]
        C = num // (4 * A)
        keep = (A <= C) & ~(((np.abs(B) == A) | (A == C)) & (B < 0))
        keep &= np.gcd(np.gcd(A, B), C) == 1
        out.extend(zip(A[keep].tolist(), B[keep].tolist(), C[keep].tolist()))
    return sorted(QuadForm(*t) for t in out)


@lru_cache(maxsize=4096)
def class_group(delta: int) -> ClassGroup:
    disc = split_discriminant(delta)
    return ClassGroup(disc, tuple(reduced_forms(delta)))


@lru_cache(maxsize=None)
def class_number(delta: int) -> int:
    return class_group(delta).order


def two_torsion_rank(delta: int) -> int:
    """nu with Pic O(delta)[2] of order 2^nu, by genus theory."""
    split_discriminant(delta)
    r = sum(1 for p in prime_factors(delta) if p != 2)
    if delta % 4 == 1 or delta % 16 == 4:
        return r - 1
    if delta % 16 in (8, 12) or delta % 32 == 16:
        return r
    return r + 1


def dee(f: int, dk: int) -> int:
    """[K(f) : K(1)] for a fundamental dk < -4."""
    if dk >= -4 or not is_fundamental(dk):
        raise DomainError(f"dee needs a fundamental discriminant below -4, got {dk}")
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    out = 1
    for p, e in prime_factors(f).items():
        out *= p ** (e - 1) * (p - kronecker(dk, p))
    return out


def arith(n: int) -> tuple[int, int]:
    """(phi(n), psi(n))."""
    if n < 1:
        raise UsageError(f"{n} is not a positive integer")
    phi = psi = 1
    for p, e in prime_factors(n).items():
        phi *= p ** (e - 1) * (p - 1)
        psi *= p ** (e - 1) * (p + 1)
    return phi, psi


def _real_ideal_closed_form(delta: int, n: int) -> bool:
    for p, a in prime_factors(n).items():
        k = ord_p(delta, p)
        if p > 2:
            if a != k:
                return False
        elif k == 0 or delta % 16 == 4:
            # delta = 4 mod 16 means 2 | f with odd Delta_K: no norm-2 ideal is invertible
            return False
        elif k >= 4:
            if a not in (2, k - 2):
                return False
        elif a != 1:
            return False
    return True


ORACLE_MAX_N = 500
ORACLE_MAX_DISC = 10**5


def _real_ideal_oracle(delta: int, n: int) -> bool:
    """Scan the index-n sublattices a Z + (b + c w) Z of Z[w] directly."""
    t, m = split_discriminant(delta).tau
    for c in range(1, n + 1):
        if n % c:
            continue
        a = n // c
        for b in range(a):
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            # w * a lies in the lattice
            if a % c or (-(a // c) * b) % a:
                continue
            # w * (b + c w) = -c m + (b + c t) w lies in the lattice
            if (b + c * t) % c:
                continue
            k = (b + c * t) // c
            if (-c * m - k * b) % a:
                continue
            # multiplier ring is the whole order iff the attached form is primitive
            big_a, bp = a // c, b // c
            big_b = 2 * bp + t
            norm = bp * bp + t * bp + m
            if norm % big_a:
                raise InvariantError("sublattice is not an ideal")
            if math.gcd(math.gcd(big_a, big_b), norm // big_a) != 1:
                continue
            # stable under conjugation w -> t - w
            if (2 * b + c * t) % a == 0:
                return True
    return False


def exists_primitive_proper_real_ideal(delta: int, n: int, mode: str = "closed_form") -> bool:
    split_discriminant(delta)
    if n < 1:
        raise UsageError(f"index must be positive, got {n}")
    if mode == "closed_form":
        return _real_ideal_closed_form(delta, n)
    if mode == "oracle":
        if n > ORACLE_MAX_N or -delta > ORACLE_MAX_DISC:
            raise ResourceError("ideal enumeration limited to N <= 500, |delta| <= 1e5")
        return _real_ideal_oracle(delta, n)
    raise UsageError(f"unknown mode {mode!r}")
