"""Self-check suites: appendix tables, engine against oracle, and structural invariants.

Each suite returns a CheckResult whose ``lines`` are a human-readable report; the CLI
prints them and the test suite asserts on ``passed``.
"""

from __future__ import annotations

import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .appendix import CASES, cases_for, printed_spectrum
from .errors import DomainError, UsageError
from .classfields import Spectrum
from .fiberengine import cm_discriminant, x0_prime_power, x0_two_level
from .isogtools import kwon_m
from .quadarith import (
    arith,
    class_group,
    is_fundamental,
    ord_p,
    principal_form,
    reduce_form,
    split_discriminant,
    two_torsion_rank,
)
from .volcano import (
    Vertex,
    Volcano,
    VolcanoParams,
    _volcano_for,
    build_volcano,
    closed_points,
    rational_path_oracle,
    spectrum_oracle,
)

GRID_DKS = (-7, -11, -15, -19, -20, -24, -8, -40, -52)
GRID_ELLS = (2, 3, 5)
PSI_BUDGET = 4000
# Deep enough that every appendix case is realised somewhere.
DEEP_LEVELS = {2: 7, 3: 6, 5: 4}


@dataclass
class CheckResult:
    name: str
    passed: bool
    lines: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def report(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.seconds:.1f}s)"
        return "\n".join([head, *("  " + s for s in self.lines)])


def coprime_f0(ell: int) -> int:
    return 3 if ell == 2 else 2


def grid_points() -> list[tuple[int, int, int]]:
    """(delta, ell, a) triples: the base grid under the psi budget plus one point per otherwise missing case."""
    pts = []
    for ell in GRID_ELLS:
        for dk in GRID_DKS:
            for f0 in (1, coprime_f0(ell)):
                for L in range(5 if f0 == 1 else 3):
                    for a in range(1, 9):
                        if arith(ell ** a)[1] <= PSI_BUDGET:
                            pts.append((dk * (f0 * ell ** L) ** 2, ell, a))
    covered = {c.id for p in pts for c in cases_for(*p)}
    for ell, top in DEEP_LEVELS.items():
        for dk in GRID_DKS:
            for L in range(top + 1):
                for a in range(1, 2 * L + 4):
                    delta = dk * ell ** (2 * L)
                    new = {c.id for c in cases_for(delta, ell, a)} - covered
                    if new:
                        pts.append((delta, ell, a))
                        covered |= new
    return pts


def appendix_points() -> list[tuple[int, int, int]]:
    """A wider sweep used to compare the printed case tables against the engine."""
    pts = []
    for ell, top in DEEP_LEVELS.items():
        for dk in GRID_DKS:
            for L in range(top + 1):
                for a in range(1, max(9, 2 * L + 3)):
                    pts.append((dk * ell ** (2 * L), ell, a))
    return pts


def _psi(ell: int, a: int) -> int:
    return arith(ell ** a)[1]


def appendix_status(points=None) -> dict[str, Counter]:
    """Per case id, how often the printed table matches the engine, is disputed, or mismatches.

    A row set is disputed when it cannot be evaluated or its degree sum is not psi(l^a);
    a mismatch is a printed table that passes the degree sum yet differs from the engine.
    """
    status: dict[str, Counter] = defaultdict(Counter)
    for delta, ell, a in points or appendix_points():
        disc = cm_discriminant(delta)
        S = x0_prime_power(delta, ell, a)
        for case in cases_for(delta, ell, a):
            try:
                P = printed_spectrum(case, delta, ell, a)
            except DomainError:
                status[case.id]["disputed"] += 1
                continue
            if P == S:
                status[case.id]["match"] += 1
            elif P.normalized(disc.fundamental) == S.normalized(disc.fundamental):
                status[case.id]["match-normalized"] += 1
            elif P.degree_sum(disc.conductor, disc.fundamental) != _psi(ell, a):
                status[case.id]["disputed"] += 1
            else:
                status[case.id]["mismatch"] += 1
    return status


def run_appendix() -> CheckResult:
    t = time.perf_counter()
    status = appendix_status()
    lines = []
    ok = True
    for case in CASES:
        st = status.get(case.id)
        if not st:
            ok = False
            lines.append(f"case {case.id}: never realised")
            continue
        if st["mismatch"]:
            ok = False
        tag = "MISMATCH" if st["mismatch"] else "disputed" if st["disputed"] else "ok"
        counts = ", ".join(f"{k}={v}" for k, v in sorted(st.items()))
        lines.append(f"case {case.id}: {tag} ({counts})")
    return CheckResult("appendix", ok, lines, time.perf_counter() - t)


def run_oracle(points=None, with_m: bool = True) -> CheckResult:
    t = time.perf_counter()
    pts = points or grid_points()
    lines = []
    bad = 0
    for delta, ell, a in pts:
        disc = cm_discriminant(delta)
        S = x0_prime_power(delta, ell, a)
        O = spectrum_oracle(delta, ell, a)
        psi = _psi(ell, a)
        if S != O or S.degree_sum(disc.conductor, disc.fundamental) != psi:
            bad += 1
            lines.append(f"({delta}, {ell}^{a}): engine {S} oracle {O}")
    lines.append(f"{len(pts)} spectra compared, {bad} disagreements")
    if with_m:
        kbad = 0
        seen = sorted({(d, ell) for d, ell, _ in pts})
        for delta, ell in seen:
            m, o = kwon_m(delta, ell), rational_path_oracle(delta, ell)
            if m != o:
                kbad += 1
                lines.append(f"m_ell ({delta}, {ell}): closed form {m}, oracle {o}")
        lines.append(f"{len(seen)} m_ell values compared, {kbad} disagreements")
        bad += kbad
    return CheckResult("oracle", bad == 0, lines, time.perf_counter() - t)


def two_level_oracle(delta: int, a: int) -> Spectrum:
    """Fiber of X_0(2, 2^a) over J_delta read off X_0(2^(a+1)) through [E, C] -> [E/C_2, C_4/C_2, C/C_2].

    The map moves j, so the sources are the delta/4, delta and 4 delta vertices, keeping
    the paths whose first 2-isogeny lands on a delta-curve.
    """
    disc = cm_discriminant(delta)
    sources = [4 * delta, delta] + ([delta // 4] if disc.level(2) else [])
    counts: dict = defaultdict(int)
    for src in sources:
        V, v0 = _volcano_for(src, 2, a + 1)
        for pc in closed_points(V, v0, a + 1):
            if V.params.disc(pc.representative.edges[0].target.level) == delta:
                counts[pc.field] += 1
    return Spectrum(counts)


def two_level_failures(deltas, amax: int = 5) -> list[tuple[int, int]]:
    """(delta, a) where the engine's X_0(2, 2^a) fiber differs from two_level_oracle."""
    bad = []
    for delta in deltas:
        dk = cm_discriminant(delta).fundamental
        for a in range(1, amax + 1):
            if x0_two_level(delta, 2, 1, a).normalized(dk) != two_level_oracle(delta, a).normalized(dk):
                bad.append((delta, a))
    return bad


# ---------------------------------------------------------------- structure


def _real_kids(V: Volcano, v: Vertex) -> int:
    return sum(w.real for w in V.children(v))


def _pairs_alternate(V: Volcano, level: list[Vertex]) -> bool:
    """Real vertices of a level come in sibling pairs, one with two real children and one with none."""
    groups: dict[Vertex, list[int]] = defaultdict(list)
    for v in level:
        if v.real:
            groups[V.parent(v)].append(_real_kids(V, v))
    return all(sorted(g) == [0, 2] for g in groups.values())


def _surface_cosets_alternate(V: Volcano, surface: list[Vertex]) -> bool:
    """Surface real vertices pair up along the ramified horizontal edge, one with two real children, one with none."""
    for v in surface:
        if not v.real:
            continue
        (h,) = [e.target for e in V.edges(v) if e.kind.value == "horizontal"]
        if h == v or sorted([_real_kids(V, v), _real_kids(V, h)]) != [0, 2]:
            return False
    return True


def descendant_pattern_ok(V: Volcano) -> tuple[bool, str]:
    """Check the real-descendant pattern for the volcano's (ell, splitting) type; returns (ok, rule name)."""
    p = V.params
    levels = V.levels
    depth = p.depth
    inner = range(depth)  # levels whose children are materialised

    def every(L, want):
        return all(_real_kids(V, v) == want for v in levels[L] if v.real)

    if p.ell > 2:
        if p.chi == 0:
            return all(every(L, 1) for L in inner), "odd ramified"
        ok = all(every(L, 2 if L == 0 else 1) for L in inner)
        return ok, "odd unramified"
    ord2 = ord_p(-p.dk, 2)
    if p.chi != 0:
        rule = "two unramified"
        ok = all(
            every(L, 1) if L == 0 else every(L, 2) if L <= 2 else _pairs_alternate(V, levels[L])
            for L in inner
        )
    elif ord2 == 2:
        rule = "two ramified, ord 2"
        ok = all(
            _surface_cosets_alternate(V, levels[0]) if L == 0
            else every(L, 2) if L == 1 else _pairs_alternate(V, levels[L])
            for L in inner
        )
    else:
        rule = "two ramified, ord 3" if p.base != -8 else "two, base -8"
        ok = all(every(L, 2) if L == 0 else _pairs_alternate(V, levels[L]) for L in inner)
    return ok, rule


def below_surface_flat(V: Volcano) -> bool:
    """No horizontal edges and no loops anywhere below the surface."""
    for level in V.levels[1:]:
        for v in level:
            for e in V.edges(v):
                if e.kind.value == "horizontal" or e.target == v:
                    return False
    return True


def reality_counts_ok(V: Volcano) -> bool:
    return all(
        sum(v.real for v in level) == 2 ** two_torsion_rank(V.params.disc(L))
        for L, level in enumerate(V.levels)
    )


STRUCT_DEPTH = {2: 5, 3: 5, 5: 4}


def structure_params() -> list[VolcanoParams]:
    out = []
    for ell in GRID_ELLS:
        for dk in GRID_DKS:
            for f0 in (1, coprime_f0(ell)):
                out.append(VolcanoParams(dk, ell, f0, STRUCT_DEPTH[ell]))
    return out


def norm_two_principal(delta: int) -> bool:
    """Whether the norm-2 ideal class of O(delta) is trivial; needs 2 ramified in O(delta)."""
    disc = split_discriminant(delta)
    if disc.fundamental % 2 or disc.conductor % 2 == 0:
        raise DomainError(f"2 does not ramify in the order of discriminant {delta}")
    b = 0 if delta % 8 == 0 else 2
    return reduce_form(2, b, (b * b - delta) // 8) == principal_form(delta)


def two_ramified_discriminants(bound: int) -> list[int]:
    out = []
    for d in range(-4, -bound - 1, -4):
        disc = split_discriminant(d)
        if disc.fundamental % 2 == 0 and disc.conductor % 2:
            out.append(d)
    return out


def genus_theory_failures(bound: int) -> list[int]:
    """Discriminants delta >= -bound where genus theory disagrees with the ambiguous-class count."""
    bad = []
    for d in range(-3, -bound - 1, -1):
        if d % 4 in (0, 1):
            if 2 ** two_torsion_rank(d) != len(class_group(d).ambiguous()):
                bad.append(d)
    return bad


def run_structure(params=None, norm_two_bound: int = 10_000) -> CheckResult:
    t = time.perf_counter()
    lines = []
    ok = True
    for p in params or structure_params():
        V = build_volcano(p)
        good, rule = descendant_pattern_ok(V)
        flat = below_surface_flat(V)
        real = reality_counts_ok(V)
        if not (good and flat and real):
            ok = False
            lines.append(
                f"volcano dk={p.dk} ell={p.ell} f0={p.f0} depth={p.depth} [{rule}]: "
                f"pattern={good} flat={flat} real-counts={real}"
            )
    principal = [d for d in two_ramified_discriminants(norm_two_bound) if norm_two_principal(d)]
    if principal != [-4, -8]:
        ok = False
        lines.append(f"principal norm-2 classes at {principal}, expected [-4, -8]")
    lines.append(f"norm-2 class principal exactly at {principal} for ramified delta >= -{norm_two_bound}")
    return CheckResult("structure", ok, lines, time.perf_counter() - t)


def run_invariants(genus_bound: int = 20_000, norm_two_bound: int = 10_000) -> CheckResult:
    t = time.perf_counter()
    res = run_structure(norm_two_bound=norm_two_bound)
    bad = genus_theory_failures(genus_bound)
    lines = res.lines + [f"genus theory checked for delta >= -{genus_bound}: {len(bad)} failures"]
    lines += [f"genus theory fails at {d}" for d in bad[:10]]
    return CheckResult("invariants", res.passed and not bad, lines, time.perf_counter() - t)


SUITES = {
    "appendix": run_appendix,
    "oracle": run_oracle,
    "invariants": run_invariants,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [fn() for fn in SUITES.values()]
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}")
    return [SUITES[name]()]


def fundamental_below(bound: int) -> list[int]:
    """Fundamental discriminants -bound <= dk < -4, decreasing."""
    return [d for d in range(-5, -bound - 1, -1) if is_fundamental(d)]
