"""Printed prime-power fiber tables, one entry per case, evaluated at concrete parameters.

Each table lists (kind, e, multiplicity) with field conductor ell^e * f. Entries are
transcribed as printed, including apparent misprints; the checks flag tables whose
degree sum is wrong instead of correcting them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .classfields import FieldLabel, K, Q, Spectrum
from .errors import DomainError
from .fiberengine import cm_discriminant
from .quadarith import kronecker, ord_p

Row = tuple[str, int, int]


@dataclass(frozen=True)
class AppendixCase:
    id: str
    ell: str  # "odd", "two" or "any"
    chi: int | None  # (dk/ell); None for any
    ord2: int | None  # ord_2(dk) for ramified ell = 2
    when: Callable[[int, int], bool]  # (L, a)
    rows: Callable[[int, int, int], list[Row]]  # (ell, L, a)

    def applies(self, ell: int, chi: int, ord2: int, L: int, a: int) -> bool:
        if self.ell == "odd" and ell == 2 or self.ell == "two" and ell != 2:
            return False
        if self.chi is not None and chi != self.chi:
            return False
        if self.ord2 is not None and ord2 != self.ord2:
            return False
        return a >= 1 and self.when(L, a)


def tail(ell: int, lo: int, a: int) -> list[Row]:
    """K(ell^e f) for e = lo, lo+2, ..., a-2 with multiplicity (ell-1) ell^((a-2-e)/2) / 2."""
    return [("K", e, (ell - 1) * ell ** ((a - 2 - e) // 2) // 2) for e in range(lo, a - 1, 2)]


def tail2(lo: int, a: int) -> list[Row]:
    """K(2^e f) for e = lo, lo+2, ..., a-4 with multiplicity 2^((a-4-e)/2)."""
    return [("K", e, 2 ** ((a - 4 - e) // 2)) for e in range(lo, a - 3, 2)]


def run(kind: str, lo: int, hi: int, mult: int) -> list[Row]:
    return [(kind, e, mult) for e in range(lo, hi + 1)]


def geom(ell: int, lo: int, hi: int) -> int:
    return sum(ell ** k for k in range(lo, hi + 1))


def _gamma(a: int) -> int:
    return 1 if a % 2 else 2


def _surface_odd(ell, L, a):
    return [("Q", 0, 1), ("K", 0, (ell ** (a // 2) - 1) // 2)] + tail(ell, _gamma(a), a) + [("Q", a, 1)]


def _two_deep(ell, L, a):
    lo = 2 if a % 2 == 0 else 1
    return [("Q", 0, 2), ("K", 0, 2 ** (a // 2 - 1) - 1)] + tail2(lo, a) + [("Q", a - 2, 1), ("Q", a, 1)]


def _two_ladder(k0: Callable[[int, int], int], lo: int):
    def rows(ell, L, a):
        return [("Q", 0, 2), ("K", 0, k0(L, a))] + tail2(lo, a) + [("Q", a - 2, 1), ("Q", a, 1)]
    return rows


def _two_rational_top(top: Callable[[int], int], shift: int):
    """Tables headed by K(f) with multiplicity 2^top and Q(2^shift f) twice."""
    def rows(ell, L, a):
        return ([("K", 0, 2 ** top(L)), ("Q", shift, 2), ("K", shift, 2 ** (L - 3) - 1)]
                + tail2(shift + 2, a) + [("Q", a - 2, 1), ("Q", a, 1)])
    return rows


def _c73(ell, L, a):
    b = a - 2 * L
    out = [("K", b - 1, 2 ** (L - 1)), ("Q", b, 2), ("K", b, 2 ** (L - 2) - 1), ("K", b + 2, 2 ** (L - 3))]
    if L >= 4:
        out += [("K", b + 4, 2 ** (L - 2))] + tail2(b + 6, a)
    return out + [("Q", a - 2, 1), ("Q", a, 1)]


def _c88(ell, L, a):
    b = a - 2 * L - 1
    out = [("Q", b, 2), ("K", b, 2 ** (L - 1) - 1), ("K", b + 1, 2 ** (L - 2)), ("K", b + 3, 2 ** (L - 3))]
    if L >= 4:
        out += [("K", b + 5, 2 ** (L - 2))] + tail2(b + 7, a)
    return out + [("Q", a - 2, 1), ("Q", a, 1)]


def _static(*rows: Row):
    return lambda ell, L, a: list(rows)


def _at(**kw):
    return lambda L, a: all({"L": L, "a": a}[k] == v for k, v in kw.items())


CASES: list[AppendixCase] = [
    AppendixCase("1", "any", -1, None, lambda L, a: L == 0, lambda ell, L, a: [("Q", a, 1)]),
    AppendixCase("2", "any", 0, None, lambda L, a: L == 0, lambda ell, L, a: [("Q", a - 1, 1), ("Q", a, 1)]),
    AppendixCase("3", "any", 1, None, lambda L, a: L == 0, lambda ell, L, a: run("K", 0, a - 1, 1) + [("Q", a, 1)]),
    AppendixCase("4", "any", None, None, lambda L, a: L >= a == 1, _static(("Q", 0, 1), ("Q", 1, 1))),
    AppendixCase("5", "odd", None, None, lambda L, a: L >= a >= 2, _surface_odd),
    AppendixCase("6", "two", None, None, lambda L, a: L >= a == 2, _static(("Q", 0, 2), ("Q", 2, 1))),
    AppendixCase("7", "two", None, None, lambda L, a: L >= a == 3, _static(("Q", 0, 2), ("Q", 1, 1), ("Q", 3, 1))),
    AppendixCase("8", "two", None, None, lambda L, a: L >= a >= 4 and a % 2 == 0, _two_deep),
    AppendixCase("9", "two", None, None, lambda L, a: L >= a >= 5 and a % 2 == 1, _two_deep),
    # inert, ell odd
    AppendixCase("10", "odd", -1, None, lambda L, a: L == 1 and a >= 2, lambda ell, L, a: [
        ("Q", a - 2, 1), ("K", a - 2, (ell - 1) // 2), ("Q", a, 1)]),
    AppendixCase("11", "odd", -1, None, lambda L, a: 2 <= L and 2 * L <= a, lambda ell, L, a: [
        ("Q", a - 2 * L, 1), ("K", a - 2 * L, (ell ** L - 1) // 2)] + tail(ell, a - 2 * L + 2, a) + [("Q", a, 1)]),
    AppendixCase("12", "odd", -1, None, lambda L, a: a < 2 * L and L < a, _surface_odd),
    # ramified, ell odd
    AppendixCase("13", "odd", 0, None, _at(L=1, a=2), lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 1) // 2), ("Q", a, 1)]),
    AppendixCase("14", "odd", 0, None, _at(L=1, a=3), lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 1) // 2), ("K", 1, (ell - 1) // 2), ("Q", a, 1)]),
    AppendixCase("15", "odd", 0, None, lambda L, a: L == 1 and a >= 4, lambda ell, L, a: [
        ("Q", a - 3, 1), ("K", a - 3, (ell - 1) // 2), ("K", a - 2, (ell - 1) // 2), ("Q", a, 1)]),
    AppendixCase("16", "odd", 0, None, lambda L, a: L >= 2 and a >= 2 * L + 1, lambda ell, L, a: [
        ("Q", a - 2 * L - 1, 1), ("K", a - 2 * L - 1, (ell ** L - 1) // 2),
        ("K", a - 2 * L, (ell - 1) * ell ** (L - 1) // 2)] + tail(ell, a - 2 * L + 2, a) + [("Q", a, 1)]),
    AppendixCase("17", "odd", 0, None, lambda L, a: L >= 2 and a == 2 * L, lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 1) * ell ** (a // 2 - 1) // 2 + (ell ** (a // 2 - 1) - 1) // 2)]
        + tail(ell, 2, a) + [("Q", a, 1)]),
    AppendixCase("18", "odd", 0, None, lambda L, a: L >= 2 and a == 2 * L - 1, lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 1) * ell ** (L - 2) // 2)] + tail(ell, 1, a) + [("Q", a, 1)]),
    AppendixCase("19", "odd", 0, None, lambda L, a: L >= 2 and L + 1 <= a <= 2 * L - 2 and a % 2 == 0,
                 lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 1) * geom(ell, a - L - 1, a // 2 - 1) // 2 + (ell ** (a - L - 1) - 1) // 2)]
        + tail(ell, 2, a) + [("Q", a, 1)]),
    AppendixCase("20", "odd", 0, None, lambda L, a: L >= 2 and L + 1 <= a <= 2 * L - 3 and a % 2 == 1,
                 lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 1) * geom(ell, a - L - 1, (a - 1) // 2 - 1) // 2 + (ell ** (a - L - 1) - 1) // 2)]
        + tail(ell, 1, a) + [("Q", a, 1)]),
    # split, ell odd
    AppendixCase("21", "odd", 1, None, _at(L=1, a=2), lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, (ell - 3) // 2 + 1), ("Q", 2, 1)]),
    AppendixCase("22", "odd", 1, None, lambda L, a: L == 1 and a >= 3, lambda ell, L, a: [
        ("K", 0, ell)] + run("K", 1, a - 3, ell - 1) + [
        ("Q", a - 2, 1), ("K", a - 2, (ell - 3) // 2), ("Q", a, 1)]),
    AppendixCase("23", "odd", 1, None, _at(L=2, a=3), lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, 1 + (ell - 3) // 2), ("K", 1, (ell - 1) // 2), ("Q", 3, 1)]),
    AppendixCase("24", "odd", 1, None, _at(L=3, a=4), lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, 1 + (ell - 3) // 2 + (ell - 1) * ell // 2), ("K", 2, (ell - 1) // 2), ("Q", 4, 1)]),
    AppendixCase("25", "odd", 1, None, _at(L=4, a=5), lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, 1 + (ell - 3) // 2 + (ell - 1) * ell // 2), ("K", 1, (ell - 1) // 2),
        ("K", 3, (ell - 1) // 2), ("Q", 4, 1)]),
    AppendixCase("26", "odd", 1, None, lambda L, a: L >= 5 and L % 2 == 1 and a == L + 1, lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, 1 + (ell - 3) // 2 + (ell - 1) * geom(ell, 1, a // 2 - 1) // 2)]
        + tail(ell, 2, a) + [("Q", a, 1)]),
    AppendixCase("27", "odd", 1, None, lambda L, a: L >= 6 and L % 2 == 0 and a == L + 1, lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, 1 + (ell - 3) // 2 + (ell - 1) * geom(ell, 1, L // 2 - 1) // 2)]
        + tail(ell, 1, a) + [("Q", a, 1)]),
    AppendixCase("28", "odd", 1, None, lambda L, a: L >= 2 and a >= 2 * L + 2, lambda ell, L, a: [
        ("K", 0, ell ** L)] + run("K", 1, a - 2 * L - 1, (ell - 1) * ell ** (L - 1)) + [
        ("Q", a - 2 * L, 1), ("K", a - 2 * L, ((ell - 2) * ell ** (L - 1) - 1) // 2)]
        + tail(ell, a - 2 * L + 2, a) + [("Q", a, 1)]),
    AppendixCase("29", "odd", 1, None, lambda L, a: L >= 2 and a == 2 * L + 1, lambda ell, L, a: [
        ("K", 0, ell ** L), ("Q", 1, 1), ("K", 1, ((ell - 2) * ell ** (L - 1) - 1) // 2)]
        + tail(ell, 3, a) + [("Q", a, 1)]),
    AppendixCase("30", "odd", 1, None, lambda L, a: L >= 2 and a == 2 * L, lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, ell ** (L - 1) + ((ell - 2) * ell ** (L - 1) - 1) // 2)]
        + tail(ell, 2, a) + [("Q", a, 1)]),
    AppendixCase("31", "odd", 1, None, lambda L, a: L >= 2 and a == 2 * L - 1, lambda ell, L, a: [
        ("Q", 0, 1), ("K", 0, ell ** (L - 2) + ((ell - 2) * ell ** (L - 2) - 1) // 2)]
        + tail(ell, 1, a) + [("Q", a, 1)]),
    AppendixCase("32", "odd", 1, None, lambda L, a: L >= 2 and L + 2 <= a <= 2 * L - 2 and a % 2 == 0,
                 lambda ell, L, a: [("Q", 0, 1), ("K", 0, (ell ** (a // 2) - 1) // 2)] + tail(ell, 2, a) + [("Q", a, 1)]),
    AppendixCase("33", "odd", 1, None, lambda L, a: L >= 2 and L + 2 <= a <= 2 * L - 3 and a % 2 == 1,
                 lambda ell, L, a: [("Q", 0, 1), ("K", 0, (ell ** ((a - 1) // 2) - 1) // 2)] + tail(ell, 1, a) + [("Q", a, 1)]),
    # ell = 2 inert
    AppendixCase("34", "two", -1, None, lambda L, a: L == 1 and a >= 2, lambda ell, L, a: [("K", a - 2, 1), ("Q", a, 1)]),
    AppendixCase("35", "two", -1, None, _at(L=2, a=3), _static(("K", 0, 1), ("Q", 1, 1), ("Q", 3, 1))),
    AppendixCase("36", "two", -1, None, lambda L, a: L == 2 and a >= 4, lambda ell, L, a: [
        ("K", a - 4, 2), ("Q", a - 2, 2), ("Q", a, 1)]),
    AppendixCase("37", "two", -1, None, _at(L=3, a=4), _static(("Q", 0, 2), ("K", 0, 1), ("Q", 2, 1), ("Q", 4, 1))),
    AppendixCase("38", "two", -1, None, _at(L=3, a=5), _static(("K", 0, 2), ("Q", 1, 2), ("Q", 3, 1), ("Q", 5, 1))),
    AppendixCase("39", "two", -1, None, lambda L, a: L == 3 and a >= 6, lambda ell, L, a: [
        ("K", a - 6, 4), ("Q", a - 4, 2), ("Q", a - 2, 1), ("Q", a, 1)]),
    AppendixCase("40", "two", -1, None, lambda L, a: 4 <= L < a <= 2 * L - 6 and a % 2 == 0,
                 _two_ladder(lambda L, a: 2 ** (a // 2 - 1), 2)),
    AppendixCase("41", "two", -1, None, lambda L, a: 4 <= L < a <= 2 * L - 5 and a % 2 == 1,
                 _two_ladder(lambda L, a: 2 ** ((a - 3) // 2) - 1, 1)),
    AppendixCase("42", "two", -1, None, lambda L, a: L >= 5 and a == 2 * L - 4,
                 _two_ladder(lambda L, a: 2 ** (a - L + 1) - 1, 2)),
    AppendixCase("43", "two", -1, None, lambda L, a: L >= 4 and a >= 2 * L, lambda ell, L, a: [
        ("K", a - 2 * L, 2 ** (L - 1)), ("Q", a - 2 * L + 2, 2), ("K", a - 2 * L + 2, 2 ** (L - 3) - 1)]
        + tail2(a - 2 * L + 4, a) + [("Q", a - 2, 1), ("Q", a, 1)]),
    # ell = 2 split
    AppendixCase("44", "two", 1, None, _at(L=1, a=2), _static(("K", 0, 2), ("Q", 2, 1))),
    AppendixCase("45", "two", 1, None, _at(L=1, a=3), _static(("K", 0, 2), ("Q", 3, 1))),
    AppendixCase("46", "two", 1, None, lambda L, a: L == 1 and a >= 4, lambda ell, L, a: [
        ("K", 0, 2)] + run("K", 1, a - 3, 1) + [("Q", a, 1)]),
    AppendixCase("47", "two", 1, None, _at(L=2, a=3), _static(("K", 0, 1), ("Q", 1, 1), ("Q", 3, 1))),
    AppendixCase("47'", "two", 1, None, _at(L=2, a=4), _static(("K", 0, 2), ("Q", 2, 1), ("Q", 4, 1))),
    AppendixCase("48", "two", 1, None, _at(L=2, a=5), _static(("K", 0, 4), ("Q", 3, 1), ("Q", 5, 1))),
    AppendixCase("49", "two", 1, None, lambda L, a: L == 2 and a >= 6, lambda ell, L, a: [
        ("K", 0, 4)] + run("K", 1, a - 5, 2) + [("Q", a - 2, 1), ("Q", a, 1)]),
    AppendixCase("50", "two", 1, None, _at(L=3, a=4), _static(("Q", 0, 2), ("K", 0, 1), ("Q", 2, 1), ("Q", 4, 1))),
    AppendixCase("51", "two", 1, None, _at(L=3, a=5), _static(("K", 0, 2), ("Q", 1, 2), ("Q", 3, 1), ("Q", 5, 1))),
    AppendixCase("52", "two", 1, None, _at(L=3, a=6), _static(("K", 0, 4), ("Q", 2, 2), ("Q", 4, 1), ("Q", 6, 1))),
    AppendixCase("53", "two", 1, None, _at(L=3, a=7), _static(("K", 0, 8), ("Q", 3, 2), ("Q", 5, 1), ("Q", 7, 1))),
    AppendixCase("54", "two", 1, None, lambda L, a: L == 3 and a >= 8, lambda ell, L, a: [
        ("K", 0, 8)] + run("K", 1, a - 7, 4) + [("Q", a - 4, 2), ("Q", a - 2, 1), ("Q", a, 1)]),
    AppendixCase("55", "two", 1, None, lambda L, a: 4 <= L < a <= 2 * L - 6 and a % 2 == 0, _two_deep),
    AppendixCase("56", "two", 1, None, lambda L, a: 4 <= L < a <= 2 * L - 5 and a % 2 == 1, _two_deep),
    AppendixCase("57", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L - 4,
                 _two_ladder(lambda L, a: 2 ** (L - 3) - 1, 2)),
    AppendixCase("58", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L - 3,
                 _two_ladder(lambda L, a: 2 ** (L - 3) - 1, 1)),
    AppendixCase("59", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L - 2,
                 _two_ladder(lambda L, a: 2 ** (L - 2) - 1, 2)),
    AppendixCase("60", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L - 2,
                 _two_ladder(lambda L, a: 2 ** (L - 2) - 1, 2)),
    AppendixCase("61", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L - 1, _two_rational_top(lambda L: L - 2, 1)),
    AppendixCase("62", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L, _two_rational_top(lambda L: L - 1, 2)),
    AppendixCase("63", "two", 1, None, lambda L, a: L >= 4 and a == 2 * L + 1, _two_rational_top(lambda L: L, 3)),
    AppendixCase("64", "two", 1, None, lambda L, a: L >= 4 and a >= 2 * L + 2, lambda ell, L, a: [
        ("K", 0, 2 ** L)] + run("K", 1, a - 2 * L - 1, 2 ** (L - 1)) + [
        ("Q", a - 2 * L + 2, 2), ("K", a - 2 * L + 2, 2 ** (L - 3) - 1)]
        + tail2(a - 2 * L + 4, a) + [("Q", a - 2, 1), ("Q", a, 1)]),
]


def _ramified_two(first: int, ord2: int) -> list[AppendixCase]:
    """The two parallel families for ell = 2 ramified; first is the number of the opening case."""
    n = lambda k: str(first + k)
    out = [
        AppendixCase(n(0), "two", 0, ord2, _at(L=1, a=2), _static(("Q", 0, 2), ("Q", 2, 1))),
        AppendixCase(n(2), "two", 0, ord2, _at(L=2, a=3), _static(("Q", 0, 2), ("Q", 1, 1), ("Q", 3, 1))),
        AppendixCase(n(3), "two", 0, ord2, _at(L=2, a=4), _static(("Q", 0, 2), ("K", 0, 1), ("Q", 2, 1), ("Q", 4, 1))),
        AppendixCase(n(5), "two", 0, ord2, _at(L=3, a=4), _static(("Q", 0, 2), ("K", 0, 1), ("Q", 2, 1), ("Q", 4, 1))),
        AppendixCase(n(6), "two", 0, ord2, _at(L=3, a=5),
                     _static(("Q", 0, 2), ("K", 0, 1), ("K", 1, 1), ("Q", 3, 1), ("Q", 5, 1))),
        AppendixCase(n(7), "two", 0, ord2, _at(L=3, a=6),
                     _static(("Q", 0, 2), ("K", 0, 3), ("K", 2, 1), ("Q", 4, 1), ("Q", 6, 1))),
        AppendixCase(n(8), "two", 0, ord2, lambda L, a: L >= 3 and a >= 2 * L + 1, _c73 if ord2 == 2 else _c88),
        AppendixCase(n(9), "two", 0, ord2, lambda L, a: L >= 4 and a == L + 1 and a % 2 == 1,
                     _two_ladder(lambda L, a: 2 ** ((a - 3) // 2) - 1, 1)),
        AppendixCase(n(10), "two", 0, ord2, lambda L, a: L >= 5 and a == L + 1 and a % 2 == 0,
                     _two_ladder(lambda L, a: 2 ** (a // 2 - 1) - 1, 2)),
        AppendixCase(n(11), "two", 0, ord2, lambda L, a: L >= 4 and a == 2 * L,
                     _two_ladder(lambda L, a: 2 ** (L - 1) - 1, 2)),
        AppendixCase(n(12), "two", 0, ord2, lambda L, a: L >= 4 and a == 2 * L - 1,
                     _two_ladder(lambda L, a: 2 ** (L - 2) - 1, 1)),
    ]
    if ord2 == 2:
        out += [
            AppendixCase("66", "two", 0, 2, lambda L, a: L == 1 and a >= 3, lambda ell, L, a: [
                ("K", a - 3, 1), ("Q", a - 2, 1), ("Q", a, 1)]),
            AppendixCase("69", "two", 0, 2, lambda L, a: L == 2 and a >= 5, lambda ell, L, a: [
                ("K", a - 5, 2), ("Q", a - 4, 2), ("Q", a - 2, 1), ("Q", a, 1)]),
            AppendixCase("77'", "two", 0, 2, lambda L, a: L >= 4 and a == 2 * L - 2,
                         _two_ladder(lambda L, a: 2 ** (L - 2) - 1, 2)),
            AppendixCase("78", "two", 0, 2, lambda L, a: L >= 4 and L + 2 <= a <= 2 * L - 3 and a % 2 == 1,
                         _two_ladder(lambda L, a: 2 ** ((a - 1) // 2 - 1) - 1, 1)),
            AppendixCase("79", "two", 0, 2, lambda L, a: L >= 6 and L + 2 <= a <= 2 * L - 4 and a % 2 == 0,
                         _two_ladder(lambda L, a: 2 ** (a // 2 - 1) - 1, 2)),
        ]
    else:
        out += [
            AppendixCase("81", "two", 0, 3, lambda L, a: L == 1 and a >= 3, lambda ell, L, a: [
                ("Q", a - 3, 2), ("Q", a - 2, 1), ("Q", a, 1)]),
            AppendixCase("84", "two", 0, 3, lambda L, a: L == 2 and a >= 5, lambda ell, L, a: [
                ("Q", a - 5, 2), ("K", a - 5, 1), ("K", a - 4, 1), ("Q", a - 2, 1), ("Q", a, 1)]),
            AppendixCase("93", "two", 0, 3, lambda L, a: L >= 4 and a == 2 * L - 2,
                         _two_ladder(lambda L, a: 2 ** (L - 2) - 1, 2)),
            AppendixCase("94", "two", 0, 3, lambda L, a: L >= 4 and L + 2 <= a <= 2 * L - 3 and a % 2 == 1,
                         _two_ladder(lambda L, a: 2 ** ((a - 1) // 2 - 1) - 1, 1)),
            AppendixCase("95", "two", 0, 3, lambda L, a: L >= 6 and L + 2 <= a <= 2 * L - 4 and a % 2 == 0,
                         _two_ladder(lambda L, a: 2 ** (a // 2 - 1) - 1, 2)),
        ]
    return out


CASES += _ramified_two(65, 2) + _ramified_two(80, 3)
CASES.sort(key=lambda c: (int(c.id.rstrip("'")), c.id))


def local_invariants(delta: int, ell: int) -> tuple[int, int, int]:
    """(chi, ord2, L) for delta at ell, with ord2 = 0 unless ell = 2 ramifies."""
    disc = cm_discriminant(delta)
    chi = kronecker(disc.fundamental, ell)
    ord2 = ord_p(disc.fundamental, 2) if ell == 2 and chi == 0 else 0
    return chi, ord2, disc.level(ell)


def cases_for(delta: int, ell: int, a: int) -> list[AppendixCase]:
    chi, ord2, L = local_invariants(delta, ell)
    return [c for c in CASES if c.applies(ell, chi, ord2, L, a)]


def printed_spectrum(case: AppendixCase, delta: int, ell: int, a: int) -> Spectrum:
    """The case table evaluated at (delta, ell^a); raises DomainError for rows that make no sense."""
    disc = cm_discriminant(delta)
    L = disc.level(ell)
    items: list[tuple[FieldLabel, int]] = []
    for kind, e, mult in case.rows(ell, L, a):
        if e < 0 or mult < 0:
            raise DomainError(f"case {case.id} row {kind}({ell}^{e}) x{mult} is out of range")
        items.append(((Q if kind == "Q" else K)(ell ** e * disc.conductor), mult))
    return Spectrum(items)
