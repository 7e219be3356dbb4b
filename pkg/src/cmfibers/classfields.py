"""Symbolic ring class fields K(c) and rational ring class fields Q(c) over a fixed Delta_K."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import DomainError, InvariantError
from .quadarith import class_number, dee


class Kind(str, Enum):
    RATIONAL = "rational"
    RINGCLASS = "ringclass"

    @property
    def rank(self) -> int:
        return 0 if self is Kind.RATIONAL else 1


@dataclass(frozen=True)
class FieldLabel:
    kind: Kind
    conductor: int

    def __post_init__(self):
        if self.conductor < 1:
            raise DomainError(f"conductor must be positive, got {self.conductor}")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.kind.rank, self.conductor)

    def __lt__(self, other: "FieldLabel") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{'Q' if self.kind is Kind.RATIONAL else 'K'}({self.conductor})"

    @property
    def is_real(self) -> bool:
        return self.kind is Kind.RATIONAL


def Q(c: int) -> FieldLabel:
    return FieldLabel(Kind.RATIONAL, c)


def K(c: int) -> FieldLabel:
    return FieldLabel(Kind.RINGCLASS, c)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def abs_degree(F: FieldLabel, dk: int) -> int:
    """[F : Q]."""
    h = dee(F.conductor, dk) * class_number(dk)
    return h if F.is_real else 2 * h


def rel_degree(F: FieldLabel, f: int, dk: int) -> int:
    """[F : Q(f)] for f dividing the conductor of F."""
    if F.conductor % f:
        raise DomainError(f"{F} does not lie over Q({f})")
    ratio = dee(F.conductor, dk) // dee(f, dk)
    return ratio if F.is_real else 2 * ratio


def embeds(F1: FieldLabel, F2: FieldLabel, dk: int) -> bool:
    """True when F1 is a subfield of F2."""
    if not F1.is_real and F2.is_real:
        return False
    return dee(_lcm(F1.conductor, F2.conductor), dk) == dee(F2.conductor, dk)


def same_field(F1: FieldLabel, F2: FieldLabel, dk: int) -> bool:
    return F1.kind is F2.kind and embeds(F1, F2, dk) and embeds(F2, F1, dk)


def compositum(F1: FieldLabel, F2: FieldLabel, dk: int) -> tuple[FieldLabel, int]:
    """Tensor product over the common rational base, as (field, number of copies)."""
    dee(1, dk)
    c = _lcm(F1.conductor, F2.conductor)
    if F1.is_real and F2.is_real:
        return Q(c), 1
    if F1.is_real or F2.is_real:
        return K(c), 1
    return K(c), 2


def join_j_pair(f1: int, f2: int, coreal: bool, dk: int) -> FieldLabel:
    """Q(j, j') for j, j' of conductors f1, f2."""
    dee(1, dk)
    c = _lcm(f1, f2)
    return Q(c) if coreal else K(c)


def minimal_label(F: FieldLabel, dk: int) -> FieldLabel:
    """The label of smallest conductor naming the same field as F."""
    for d in sorted(_divisors(F.conductor)):
        G = FieldLabel(F.kind, d)
        if dee(d, dk) == dee(F.conductor, dk):
            return G
    return F


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0] if n < 10**4 else _big_divisors(n)


def _big_divisors(n: int) -> list[int]:
    from sympy import divisors

    return list(divisors(n))


class Spectrum:
    """Canonical multiset of residue fields, sorted by (kind, conductor)."""

    __slots__ = ("entries",)

    def __init__(self, items: Mapping[FieldLabel, int] | Iterable[tuple[FieldLabel, int]] = ()):
        counts: Counter[FieldLabel] = Counter()
        pairs = items.items() if isinstance(items, Mapping) else items
        for label, mult in pairs:
            if mult < 0:
                raise InvariantError(f"negative multiplicity for {label}")
            counts[label] += mult
        self.entries: tuple[tuple[FieldLabel, int], ...] = tuple(
            sorted(((k, v) for k, v in counts.items() if v), key=lambda kv: kv[0].sort_key)
        )

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Spectrum) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{k}:{v}" for k, v in self.entries) + "}"

    def labels(self) -> list[FieldLabel]:
        return [k for k, _ in self.entries]

    def as_dict(self) -> dict[FieldLabel, int]:
        return dict(self.entries)

    def normalized(self, dk: int) -> "Spectrum":
        """Merge labels naming the same field under their minimal conductor."""
        return Spectrum((minimal_label(k, dk), v) for k, v in self.entries)

    def degree_sum(self, f: int, dk: int) -> int:
        return sum(v * rel_degree(k, f, dk) for k, v in self.entries)

    def degrees(self, dk: int) -> list[int]:
        """Absolute degrees of the closed points, with repetition, ascending."""
        return sorted(d for k, v in self.entries for d in [abs_degree(k, dk)] * v)


def primitive_subset(S: Spectrum | Iterable[FieldLabel], dk: int) -> list[FieldLabel]:
    """Fields of S not properly containing another field of S, one label per field."""
    labels = S.labels() if isinstance(S, Spectrum) else sorted(set(S), key=lambda F: F.sort_key)
    distinct: list[FieldLabel] = []
    for F in sorted(labels, key=lambda F: F.sort_key):
        if not any(same_field(F, G, dk) for G in distinct):
            distinct.append(F)
    return [
        F for F in distinct
        if not any(G != F and embeds(G, F, dk) for G in distinct)
    ]
