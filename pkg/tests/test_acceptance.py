"""The ten acceptance criteria, each reported as a single PASS/FAIL line."""

import json
import random
import time

import pytest

from cmfibers.appendix import CASES
from cmfibers.checks import (
    GRID_DKS,
    appendix_status,
    genus_theory_failures,
    grid_points,
    two_level_failures,
    run_oracle,
    run_structure,
)
from cmfibers.cli import execute
from cmfibers.fiberengine import cm_discriminant, expected_degree, x0_degrees, x0_general, x1_scale
from cmfibers.isogtools import UNBOUNDED, is_square_mod, k_rational_max, kwon_m
from cmfibers.oddcm import CLASS_NUMBER_ONE, class_number_one, d_odd_cm
from cmfibers.primdeg import primitive_compile, primitive_x1, table_row
from cmfibers.quadarith import arith, class_number, dee, is_fundamental
from cmfibers.volcano import rational_path_oracle

from primtable import TABLE


@pytest.fixture(scope="module")
def grid():
    return grid_points()


def test_criterion_01_appendix_reproduction(grid, record):
    t = time.perf_counter()
    res = run_oracle(grid, with_m=False)
    status = appendix_status()
    mismatched = sorted(k for k, v in status.items() if v["mismatch"])
    disputed = sorted((k for k, v in status.items() if v["disputed"]), key=lambda k: int(k.rstrip("'")))
    unrealised = [c.id for c in CASES if c.id not in status]
    secs = time.perf_counter() - t
    ok = res.passed and not mismatched and not unrealised and "44" in disputed and secs < 60
    record(1, ok, f"{len(grid)} points engine == oracle, {len(CASES) - len(disputed)} of {len(CASES)} case tables match, "
                  f"disputed {disputed}, {secs:.1f}s")
    assert ok, res.lines[-5:] + mismatched + unrealised


def test_criterion_02_composite_degree_sums(record):
    t = time.perf_counter()
    rng = random.Random(20240611)
    deltas = [dk * f * f for dk in GRID_DKS + (-23, -35, -39, -56, -84) for f in (1, 2, 3, 5, 6)]
    bad = []
    for _ in range(500):
        delta = rng.choice(deltas)
        N = rng.randint(1, 200)
        M = rng.choice([m for m in range(1, N + 1) if N % m == 0])
        disc = cm_discriminant(delta)
        S = x0_general(delta, M, N)
        if S.degree_sum(disc.conductor, disc.fundamental) != M * arith(M)[0] * arith(N)[1]:
            bad.append((delta, M, N))
    secs = time.perf_counter() - t
    ok = not bad and secs < 60
    record(2, ok, f"500 sampled (delta, M, N), {len(bad)} degree-sum failures, {secs:.1f}s")
    assert ok, bad[:5]


def test_criterion_03_genus_theory(record):
    t = time.perf_counter()
    bad = genus_theory_failures(10 ** 5)
    secs = time.perf_counter() - t
    ok = not bad and secs < 120
    record(3, ok, f"2-rank equals ambiguous-class count for all delta >= -100000, {secs:.1f}s")
    assert ok, bad[:5]


def test_criterion_04_relative_class_number(record):
    bad = []
    n = 0
    for dk in range(-5, -10 ** 4 - 1, -1):
        if not is_fundamental(dk):
            continue
        h = class_number(dk)
        f = 1
        while f * f * -dk <= 10 ** 4:
            n += 1
            if class_number(f * f * dk) != dee(f, dk) * h:
                bad.append((dk, f))
            f += 1
    record(4, not bad, f"h(f^2 dk) = dee(f) h(dk) on {n} pairs with f^2 |dk| <= 10000")
    assert not bad, bad[:5]


def test_criterion_05_rational_isogeny_bound(grid, record):
    pairs = sorted({(d, ell) for d, ell, _ in grid})
    bad = [(d, ell) for d, ell in pairs if kwon_m(d, ell) != rational_path_oracle(d, ell)]
    sandwich = []
    for d, ell in pairs:
        top = k_rational_max(d, ell)
        if top is UNBOUNDED:
            if not all(is_square_mod(d, 4 * ell ** a) for a in range(13)):
                sandwich.append((d, ell))
        elif not (is_square_mod(d, 4 * ell ** top) and not is_square_mod(d, 4 * ell ** (top + 1))):
            sandwich.append((d, ell))
    ok = not bad and not sandwich
    record(5, ok, f"kwon_m == oracle on {len(pairs)} (delta, ell), square-mod sandwich on all")
    assert ok, (bad[:5], sandwich[:5])


def test_criterion_06_structural_lemmas(record):
    res = run_structure()
    record(6, res.passed, f"real-descendant patterns, flat lower levels, norm-2 class; {res.seconds:.1f}s")
    assert res.passed, res.lines


def _literal_fiber_pairs():
    rows = []
    for dk in GRID_DKS:
        for f in (1, 2, 3):
            delta = dk * f * f
            for N in range(1, 26):
                a = x0_general(delta, 2, 2 * N).normalized(dk)
                b = x0_general(delta, 1, 4 * N).normalized(dk)
                rows.append(a == b)
    return rows


@pytest.mark.xfail(strict=True, reason="the isomorphism moves j, so fibers over one j-invariant need not match")
def test_criterion_07_literal_fiber_equality():
    assert all(_literal_fiber_pairs())


def test_criterion_07_correspondence(record):
    literal = _literal_fiber_pairs()
    deltas = [dk * (f0 * 2 ** L) ** 2 for dk in GRID_DKS for f0 in (1, 3) for L in range(4)]
    bad = two_level_failures(deltas, amax=5)
    record(7, False, f"as stated: {literal.count(False)}/{len(literal)} (delta, N) pairs differ; "
                     f"through the moduli map: {len(bad)} failures on {len(deltas)} delta, a <= 5")
    assert not bad, bad[:5]


def test_criterion_08_primitive_table(record):
    seen = set()
    bad = []
    for dk in GRID_DKS + (-23, -35):
        for ell, top, amax in ((2, 5, 9), (3, 3, 7), (5, 2, 5)):
            for L in range(top + 1):
                delta = dk * ell ** (2 * L)
                for a in range(1, amax + 1):
                    for ap in (0, 1) if ell == 2 else (0,):
                        row = table_row(delta, ell, ap, a)
                        if row[0] in TABLE:
                            seen.add(row[0])
                            if row[1:] != TABLE[row[0]](ell, L, a):
                                bad.append((delta, ell, ap, a, row))
    dreaded = primitive_compile(-99, 1, 27)
    ok = (
        not bad
        and seen == set(TABLE)
        and dreaded.dreaded
        and dreaded.degrees == [4, 6]
        and primitive_x1(-99, 1, 27) == [36, 54]
    )
    record(8, ok, f"{len(seen)}/{len(TABLE)} table rows reproduced; (-99, 1, 27) degrees "
                  f"{dreaded.degrees}, X_1 {primitive_x1(-99, 1, 27)}")
    assert ok, bad[:5]


def test_criterion_09_odd_degree_cm(record):
    scan = tuple(class_number_one(200))
    x1_ok = all(
        (d_odd_cm(1, N, "x1") or (None,))[0] == ((d_odd_cm(1, N) or (None,))[0] and d_odd_cm(1, N)[0] * x1_scale(N))
        for N in range(1, 120)
    )
    ok = (
        scan == CLASS_NUMBER_ONE
        and d_odd_cm(1, 11) == (1, [-11])
        and d_odd_cm(1, 49) == (7, [-7, -28, -343, -1372])
        and d_odd_cm(1, 14) == (1, [-7, -28])
        and d_odd_cm(1, 49, "x1") == (147, [-7, -28, -343, -1372])
        and x1_ok
    )
    record(9, ok, f"{len(scan)} class-number-one discriminants; spot checks and X_1 scaling")
    assert ok


def test_criterion_10_x1_through_cli(record):
    bad = []
    n = 0
    for dk in GRID_DKS:
        for f in (1, 2, 3):
            delta = dk * f * f
            for N in range(1, 31):
                for M in (1, 2):
                    if N % M:
                        continue
                    out, code = execute(["fiber", "--delta", str(delta), "--level", f"{M},{N}", "--curve", "x1"])
                    n += 1
                    k = max(arith(N)[0] // 2, 1)
                    if code or json.loads(out)["degrees"] != [k * d for d in x0_degrees(delta, M, N)]:
                        bad.append((delta, M, N))
    record(10, not bad, f"X_1 degrees = X_0 degrees x max(phi(N)/2, 1) on {n} CLI queries")
    assert not bad, bad[:5]


def test_degree_expected_is_the_covering_degree():
    assert expected_degree(2, 4) == 12 and expected_degree(1, 9) == 12
