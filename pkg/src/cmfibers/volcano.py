"""Truncated l-isogeny volcanoes built from form classes, and the brute-force path oracle.

Vertices at level L are classes of primitive forms of discriminant l^(2L) f0^2 Delta_K.
Neighbours come from the l+1 index-l sublattices of the lattice <1, tau> attached to a
form, so no class group ever has to be enumerated to walk the graph.  Complex
conjugation acts on vertices by form inversion and swaps the two split surface labels.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .classfields import FieldLabel, K, Q, Spectrum, rel_degree
from .errors import DomainError, InvariantError, ResourceError, UsageError
from .quadarith import (
    QuadForm,
    class_group,
    compose,
    inverse,
    is_fundamental,
    kronecker,
    principal_form,
    reduce_form,
    require_prime,
    split_discriminant,
)


class EdgeKind(str, Enum):
    UP = "ascending"
    DOWN = "descending"
    HORIZONTAL = "horizontal"


_SWAP = {"p": "pbar", "pbar": "p"}
_INVERSE_LABELS = {("p", "pbar"), ("pbar", "p"), ("h", "h")}


@dataclass(frozen=True)
class VolcanoParams:
    dk: int
    ell: int
    f0: int
    depth: int

    def __post_init__(self):
        require_prime(self.ell)
        if not is_fundamental(self.dk) or self.dk >= 0:
            raise DomainError(f"{self.dk} is not a negative fundamental discriminant")
        if self.f0 < 1 or self.f0 % self.ell == 0:
            raise DomainError(f"f0 = {self.f0} must be positive and prime to {self.ell}")
        if self.f0 ** 2 * self.dk >= -4:
            raise DomainError("volcano needs f0^2 * dk < -4")
        if self.depth < 0:
            raise UsageError("depth must be non-negative")

    @property
    def base(self) -> int:
        return self.f0 ** 2 * self.dk

    @property
    def chi(self) -> int:
        return kronecker(self.dk, self.ell)

    def disc(self, level: int) -> int:
        return self.ell ** (2 * level) * self.base


@dataclass(frozen=True, order=True)
class Vertex:
    level: int
    cls: QuadForm

    @property
    def real(self) -> bool:
        return self.cls.is_ambiguous()

    def conj(self) -> "Vertex":
        return Vertex(self.level, inverse(self.cls))

    @property
    def key(self) -> tuple:
        return (self.level, *self.cls)

    def __str__(self) -> str:
        return f"L{self.level}{self.cls}"


@dataclass(frozen=True)
class Edge:
    kind: EdgeKind
    label: str
    source: Vertex
    target: Vertex

    def conj(self) -> "Edge":
        return Edge(self.kind, _SWAP.get(self.label, self.label), self.source.conj(), self.target.conj())

    @property
    def real(self) -> bool:
        return self.conj() == self

    @property
    def split(self) -> bool:
        return self.label in _SWAP

    @property
    def key(self) -> tuple:
        return (self.kind.value, self.label, *self.target.key)


@dataclass(frozen=True)
class Path:
    start: Vertex
    edges: tuple[Edge, ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def end(self) -> Vertex:
        return self.edges[-1].target if self.edges else self.start

    @property
    def levels(self) -> list[int]:
        return [self.start.level] + [e.target.level for e in self.edges]

    def conj(self) -> "Path":
        return Path(self.start.conj(), tuple(e.conj() for e in self.edges))

    @property
    def key(self) -> tuple:
        return (self.start.key, tuple(e.key for e in self.edges))

    def prefix(self, n: int) -> "Path":
        return Path(self.start, self.edges[:n])


@dataclass(frozen=True)
class PathClass:
    representative: Path
    epsilon: int
    descent: int
    field: FieldLabel
    degree: int


def is_backtrack(prev: Edge, nxt: Edge) -> bool:
    """True when nxt undoes prev (dual isogeny)."""
    if prev.kind is EdgeKind.DOWN:
        return nxt.kind is EdgeKind.UP
    if prev.kind is EdgeKind.UP:
        return nxt.kind is EdgeKind.DOWN and nxt.target == prev.source
    return nxt.kind is EdgeKind.HORIZONTAL and (prev.label, nxt.label) in _INVERSE_LABELS


def sublattice_forms(F: QuadForm, ell: int) -> list[tuple[int, QuadForm]]:
    """The l+1 index-l sublattices of <1, tau_F> as (g, reduced form), g = l^(level drop + 1)."""
    a, b, c = F
    raw = [(a, b * ell, c * ell * ell)]
    for k in range(ell):
        raw.append((a * ell * ell, ell * (b - 2 * a * k), a * k * k - b * k + c))
    out = []
    for x, y, z in raw:
        g = math.gcd(math.gcd(x, y), z)
        out.append((g, reduce_form(x // g, y // g, z // g)))
    return out


def _coprime_representative(F: QuadForm, ell: int) -> QuadForm:
    """An equivalent (not reduced) form whose first coefficient is prime to ell."""
    a, b, c = F
    if a % ell:
        return F
    bound = 16
    while True:
        for x in range(-bound, bound + 1):
            for y in range(0, bound + 1):
                if math.gcd(x, y) != 1:
                    continue
                value = a * x * x + b * x * y + c * y * y
                if value % ell == 0:
                    continue
                # complete (x, y) to a unimodular matrix [[x, r], [y, s]]
                g, s0, r0 = _bezout(x, y)
                r, s = -r0, s0
                assert x * s - y * r == 1
                return QuadForm(
                    value,
                    2 * a * x * r + b * (x * s + y * r) + 2 * c * y * s,
                    a * r * r + b * r * s + c * s * s,
                )
        bound *= 2


def _bezout(x: int, y: int) -> tuple[int, int, int]:
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def pushforward(F: QuadForm, ell: int) -> QuadForm:
    """Class of I*O' where I has discriminant l^2 D and O' has discriminant D."""
    D = F.disc // (ell * ell)
    if F.disc % (ell * ell) or D % 4 not in (0, 1):
        raise UsageError(f"{F} does not lie above a discriminant at the next level up")
    A, B, _ = _coprime_representative(F, ell)
    m = 2 * A
    if A % 2:
        b1 = (B * pow(ell, -1, A)) % A
        b2 = b1 if (b1 - D) % 2 == 0 else b1 + A
    else:
        b2 = (B * pow(ell, -1, m)) % m
    if (b2 * b2 - D) % (4 * A):
        raise InvariantError(f"pushforward of {F} failed")
    return reduce_form(A, b2, (b2 * b2 - D) // (4 * A))


class Volcano:
    """A truncated volcano whose neighbourhoods are computed on demand and cached."""

    SIZE_LIMIT = 200_000

    def __init__(self, params: VolcanoParams):
        self.params = params
        self._edges: dict[Vertex, tuple[Edge, ...]] = {}

    @property
    def ell(self) -> int:
        return self.params.ell

    @cached_property
    def surface_prime(self) -> QuadForm | None:
        """The class of norm l at the surface, or None when l is inert."""
        D = self.params.base
        ell = self.ell
        if self.params.chi == -1:
            return None
        beta = next(x for x in range(2 * ell) if (x * x - D) % (4 * ell) == 0)
        return reduce_form(ell, beta, (beta * beta - D) // (4 * ell))

    def vertex(self, level: int, form: QuadForm) -> Vertex:
        if not 0 <= level <= self.params.depth:
            raise UsageError(f"level {level} outside the truncation depth {self.params.depth}")
        if form.disc != self.params.disc(level):
            raise UsageError(f"{form} does not have discriminant {self.params.disc(level)}")
        return Vertex(level, reduce_form(*form))

    def root(self, level: int) -> Vertex:
        return self.vertex(level, principal_form(self.params.disc(level)))

    def edges(self, v: Vertex) -> tuple[Edge, ...]:
        cached = self._edges.get(v)
        if cached is None:
            cached = self._edges[v] = self._compute_edges(v)
        return cached

    def _compute_edges(self, v: Vertex) -> tuple[Edge, ...]:
        ell = self.ell
        out: list[Edge] = []
        subs = sublattice_forms(v.cls, ell)
        ups = [F for g, F in subs if g == ell * ell]
        downs = sorted(F for g, F in subs if g == 1)
        sides = sorted(F for g, F in subs if g == ell)
        if v.level == 0:
            if ups:
                raise InvariantError(f"surface vertex {v} has an ascending sublattice")
            P = self.surface_prime
            if P is None:
                horiz = []
            elif self.params.chi == 0:
                horiz = [("h", compose(v.cls, P))]
            else:
                horiz = [("p", compose(v.cls, P)), ("pbar", compose(v.cls, inverse(P)))]
            if sorted(F for _, F in horiz) != sides:
                raise InvariantError(f"horizontal edges at {v} disagree with sublattices")
            out.extend(Edge(EdgeKind.HORIZONTAL, lab, v, Vertex(0, F)) for lab, F in horiz)
            if len(downs) != ell - self.params.chi:
                raise InvariantError(f"surface vertex {v} has {len(downs)} children")
        else:
            if len(ups) != 1 or sides:
                raise InvariantError(f"vertex {v} below the surface is malformed")
            parent = pushforward(v.cls, ell)
            if parent != ups[0]:
                raise InvariantError(f"pushforward of {v} disagrees with its sublattice")
            out.append(Edge(EdgeKind.UP, "up", v, Vertex(v.level - 1, parent)))
            if len(downs) != ell:
                raise InvariantError(f"vertex {v} has {len(downs)} children")
        if v.level < self.params.depth:
            out.extend(Edge(EdgeKind.DOWN, "down", v, Vertex(v.level + 1, F)) for F in downs)
        return tuple(out)

    def children(self, v: Vertex) -> list[Vertex]:
        return [e.target for e in self.edges(v) if e.kind is EdgeKind.DOWN]

    def parent(self, v: Vertex) -> Vertex | None:
        ups = [e.target for e in self.edges(v) if e.kind is EdgeKind.UP]
        return ups[0] if ups else None

    @cached_property
    def levels(self) -> list[list[Vertex]]:
        """All vertices by level, from the class groups (materialises the graph)."""
        p = self.params
        h0 = class_group(p.base).order
        total = sum(h0 * ((p.ell - p.chi) * p.ell ** (L - 1) if L else 1) for L in range(p.depth + 1))
        if total > self.SIZE_LIMIT:
            raise ResourceError(f"volcano would have {total} vertices, limit {self.SIZE_LIMIT}")
        return [[Vertex(L, F) for F in class_group(p.disc(L)).classes] for L in range(p.depth + 1)]

    def vertices(self) -> list[Vertex]:
        return [v for level in self.levels for v in level]

    def all_edges(self) -> list[Edge]:
        return [e for v in self.vertices() for e in self.edges(v)]


def build_volcano(params: VolcanoParams) -> Volcano:
    """Materialise every level and verify the volcano shape against the class numbers."""
    V = Volcano(params)
    levels = V.levels
    ell, chi = params.ell, params.chi
    for L in range(1, len(levels)):
        expected = len(levels[L - 1]) * (ell - chi if L == 1 else ell)
        if len(levels[L]) != expected:
            raise InvariantError(f"level {L} has {len(levels[L])} classes, expected {expected}")
    for L, level in enumerate(levels):
        seen = set(level)
        for v in level:
            for e in V.edges(v):
                if e.target.level <= params.depth and e.target not in (
                    seen if e.target.level == L else set(levels[e.target.level])
                ):
                    raise InvariantError(f"edge {e} leaves the vertex set")
        if L >= 1:
            kids = [w for v in levels[L - 1] for w in V.children(v)]
            if sorted(kids) != sorted(level):
                raise InvariantError(f"children of level {L - 1} do not partition level {L}")
    return V


def enumerate_paths(V: Volcano, v0: Vertex, a: int) -> list[Path]:
    """All nonbacktracking paths of length a from v0, in canonical order."""
    if a < 0:
        raise UsageError("path length must be non-negative")
    if v0.level + a > V.params.depth:
        raise UsageError(f"depth {V.params.depth} is too shallow for {a} steps from level {v0.level}")
    out: list[Path] = []

    def walk(v: Vertex, trail: tuple[Edge, ...]):
        if len(trail) == a:
            out.append(Path(v0, trail))
            return
        for e in V.edges(v):
            if trail and is_backtrack(trail[-1], e):
                continue
            walk(e.target, trail + (e,))

    walk(v0, ())
    return out


def _split_path(P: Path) -> tuple[Path, int]:
    """(P1, length of the trailing pure descent P2)."""
    levels = P.levels
    L, L_end = levels[0], levels[-1]
    if L_end <= L:
        return P, 0
    last = max(i for i, x in enumerate(levels) if x == L)
    return P.prefix(last), len(P) - last


def classify_path(P: Path, params: VolcanoParams) -> PathClass:
    P1, descent = _split_path(P)
    epsilon = 1 if P1.conj() == P1 else 2
    ell, f0 = params.ell, params.f0
    L, L_end = P.start.level, P.end.level
    conductor = ell ** max(L, L_end) * f0
    complex_field = epsilon == 2 or any(e.split for e in P.edges)
    F = K(conductor) if complex_field else Q(conductor)
    d = rel_degree(F, ell ** L * f0, params.dk)
    return PathClass(P, epsilon, descent, F, d)


def _class_key(P: Path) -> tuple:
    P1, descent = _split_path(P)
    return (min(P1.key, P1.conj().key), descent)


def closed_points(V: Volcano, v0: Vertex, a: int) -> list[PathClass]:
    """Group the length-a paths from a real vertex into closed points."""
    if not v0.real:
        raise UsageError("closed points are grouped from a real starting vertex")
    groups: dict[tuple, list[Path]] = defaultdict(list)
    for P in enumerate_paths(V, v0, a):
        groups[_class_key(P)].append(P)
    out = []
    for key in sorted(groups):
        members = groups[key]
        pc = classify_path(members[0], V.params)
        if pc.degree != len(members):
            raise InvariantError(
                f"class of {len(members)} paths has residue degree {pc.degree} ({pc.field})"
            )
        out.append(pc)
    return out


def _volcano_for(delta: int, ell: int, a: int) -> tuple[Volcano, Vertex]:
    require_prime(ell)
    if a < 0:
        raise UsageError("a must be non-negative")
    disc = split_discriminant(delta)
    if disc.fundamental >= -4:
        raise DomainError(f"fundamental discriminant {disc.fundamental} is not below -4")
    L = disc.level(ell)
    V = Volcano(VolcanoParams(disc.fundamental, ell, disc.prime_to(ell), L + a))
    return V, V.root(L)


def spectrum_oracle(delta: int, ell: int, a: int) -> Spectrum:
    """Fiber of X_0(l^a) over J_delta by exhaustive path enumeration."""
    V, v0 = _volcano_for(delta, ell, a)
    counts: dict[FieldLabel, int] = defaultdict(int)
    total = 0
    for pc in closed_points(V, v0, a):
        counts[pc.field] += 1
        total += pc.degree
    psi = (ell + 1) * ell ** (a - 1) if a else 1
    if total != psi:
        raise InvariantError(f"oracle degree sum {total} differs from psi = {psi}")
    return Spectrum(counts)


def rational_path_oracle(delta: int, ell: int) -> int:
    """Longest path from the delta vertex whose closed point is rational over Q(f)."""
    disc = split_discriminant(delta)
    cap = 2 * disc.level(ell) + 4
    V, v0 = _volcano_for(delta, ell, cap)
    best = 0

    def walk(P: Path):
        nonlocal best
        best = max(best, len(P))
        if len(P) == cap:
            raise InvariantError("rational path search hit its length cap")
        for e in V.edges(P.end):
            if P.edges and is_backtrack(P.edges[-1], e):
                continue
            Q_ = Path(v0, P.edges + (e,))
            if classify_path(Q_, V.params).degree == 1:
                walk(Q_)

    walk(Path(v0))
    return best


def _graph_dict(V: Volcano) -> dict:
    p = V.params
    verts = V.vertices()
    ids = {v: i for i, v in enumerate(verts)}
    edges = []
    for v in verts:
        for e in V.edges(v):
            if e.kind is EdgeKind.UP:
                continue
            edges.append({
                "source": ids[e.source], "target": ids[e.target], "kind": e.kind.value,
                "label": e.label, "real": e.real,
            })
    return {
        "dk": p.dk, "ell": p.ell, "f0": p.f0, "depth": p.depth,
        "vertices": [
            {"id": ids[v], "level": v.level, "form": list(v.cls), "real": v.real} for v in verts
        ],
        "edges": edges,
    }


def export_graph(V: Volcano, fmt: str = "dot") -> str:
    g = _graph_dict(V)
    if fmt == "json":
        return json.dumps(g, indent=2, sort_keys=True)
    if fmt != "dot":
        raise UsageError(f"unknown graph format {fmt!r}")
    lines = [f'digraph volcano {{', f'  label="dk={g["dk"]} ell={g["ell"]} f0={g["f0"]}";']
    for L in range(g["depth"] + 1):
        ids = [v["id"] for v in g["vertices"] if v["level"] == L]
        if ids:
            lines.append(f"  {{ rank=same; {' '.join(f'v{i};' for i in ids)} }}")
    for v in g["vertices"]:
        a, b, c = v["form"]
        style = "solid" if v["real"] else "dashed"
        lines.append(f'  v{v["id"]} [label="L{v["level"]} ({a},{b},{c})", style={style}];')
    for e in g["edges"]:
        style = "solid" if e["real"] else "dashed"
        label = f', label="{e["label"]}"' if e["kind"] == "horizontal" else ""
        lines.append(f'  v{e["source"]} -> v{e["target"]} [style={style}{label}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> Volcano:
    """Rebuild a volcano from its JSON export, checking that it matches the recomputed graph."""
    g = json.loads(text)
    V = Volcano(VolcanoParams(g["dk"], g["ell"], g["f0"], g["depth"]))
    if _graph_dict(V) != g:
        raise InvariantError("graph JSON does not match the volcano it names")
    return V
