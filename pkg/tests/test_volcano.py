import json

import pytest

from cmfibers.classfields import K, Q, Spectrum
from cmfibers.errors import DomainError, InvariantError
from cmfibers.quadarith import inverse, principal_form, two_torsion_rank
from cmfibers.volcano import (
    EdgeKind,
    Path,
    Volcano,
    VolcanoParams,
    build_volcano,
    classify_path,
    enumerate_paths,
    export_graph,
    rational_path_oracle,
    load_graph,
    pushforward,
    spectrum_oracle,
)


def sizes(V):
    return tuple(len(level) for level in V.levels)


def test_level_sizes():
    assert sizes(build_volcano(VolcanoParams(-15, 2, 1, 2))) == (2, 2, 4)
    assert sizes(build_volcano(VolcanoParams(-7, 3, 1, 2))) == (1, 4, 12)


def test_inert_surface_has_no_horizontal_edges():
    V = build_volcano(VolcanoParams(-11, 2, 1, 1))
    for v in V.levels[0]:
        kinds = [e.kind for e in V.edges(v)]
        assert EdgeKind.HORIZONTAL not in kinds
        assert len(V.children(v)) == 3


def test_minus_eight_surface_loop():
    V = build_volcano(VolcanoParams(-8, 2, 1, 2))
    (v0,) = V.levels[0]
    (loop,) = [e for e in V.edges(v0) if e.kind is EdgeKind.HORIZONTAL]
    assert loop.target == v0 and loop.real
    assert [w.real for w in V.children(v0)] == [True, True]


def test_real_vertex_counts_follow_genus_theory():
    for dk, ell in ((-15, 2), (-20, 3), (-24, 5), (-52, 2)):
        V = build_volcano(VolcanoParams(dk, ell, 1, 3 if ell < 5 else 2))
        for L, level in enumerate(V.levels):
            assert sum(v.real for v in level) == 2 ** two_torsion_rank(V.params.disc(L))


def test_bad_params():
    with pytest.raises(DomainError):
        VolcanoParams(-4, 2, 1, 1)
    with pytest.raises(DomainError):
        VolcanoParams(-7, 2, 2, 1)
    with pytest.raises(DomainError):
        VolcanoParams(-12, 3, 1, 1)


def test_pushforward():
    assert pushforward(principal_form(-60), 2) == principal_form(-15)
    V = build_volcano(VolcanoParams(-15, 2, 1, 1))
    assert len({V.parent(v) for v in V.levels[1]}) == 2


def test_pushforward_commutes_with_conjugation():
    V = build_volcano(VolcanoParams(-23, 2, 1, 3))
    for level in V.levels[1:]:
        for v in level:
            assert pushforward(inverse(v.cls), 2) == inverse(pushforward(v.cls, 2))


def test_enumerate_paths_counts():
    V = Volcano(VolcanoParams(-7, 2, 1, 3))
    v = V.root(1)
    assert enumerate_paths(V, v, 0) == [Path(v)]
    paths = enumerate_paths(V, v, 2)
    shapes = sorted(tuple(e.kind for e in P.edges) for P in paths)
    assert len(paths) == 6
    assert shapes.count((EdgeKind.DOWN, EdgeKind.DOWN)) == 4
    assert shapes.count((EdgeKind.UP, EdgeKind.HORIZONTAL)) == 2
    W = Volcano(VolcanoParams(-7, 3, 1, 2))
    one = enumerate_paths(W, W.root(1), 1)
    assert sorted(P.edges[0].kind.value for P in one) == ["ascending"] + ["descending"] * 3


def test_classify_path():
    V = Volcano(VolcanoParams(-7, 2, 1, 3))
    up_side = [P for P in enumerate_paths(V, V.root(1), 2) if P.edges[1].kind is EdgeKind.HORIZONTAL]
    pc = classify_path(up_side[0], V.params)
    assert (pc.epsilon, pc.field, pc.degree) == (2, K(2), 2)
    down = [P for P in enumerate_paths(V, V.root(0), 2) if P.levels == [0, 1, 2] and P.end.real]
    pc = classify_path(down[0], V.params)
    assert (pc.field, pc.degree) == (Q(4), 2)
    deep = [P for P in enumerate_paths(V, V.root(1), 2) if P.levels == [1, 2, 3] and P.end.real]
    pc = classify_path(deep[0], V.params)
    assert (pc.epsilon, pc.field, pc.degree) == (1, Q(8), 4)


@pytest.mark.parametrize("delta,ell,a,want", [
    (-63, 3, 2, {Q(3): 1, K(3): 1, Q(27): 1}),
    (-7, 3, 1, {Q(3): 1}),
    (-28, 2, 2, {K(2): 1, Q(8): 1}),
    (-15, 2, 1, {K(1): 1, Q(2): 1}),
])
def test_spectrum_oracle(delta, ell, a, want):
    assert spectrum_oracle(delta, ell, a) == Spectrum(want)


def test_rational_path_oracle():
    assert rational_path_oracle(-7, 2) == 1
    assert rational_path_oracle(-63, 3) == 2
    assert rational_path_oracle(-44, 2) == 1


def test_dot_export():
    dot = export_graph(build_volcano(VolcanoParams(-15, 2, 1, 1)))
    assert dot.startswith("digraph volcano {")
    assert dot.count("[label=") == 4
    assert dot.count("rank=same") == 2
    assert 'label="p"' in dot and "style=dashed" in dot
    flat = export_graph(build_volcano(VolcanoParams(-15, 2, 1, 0)))
    assert flat.count("rank=same") == 1 and "->" in flat


def test_export_is_deterministic():
    p = VolcanoParams(-20, 3, 1, 2)
    assert export_graph(build_volcano(p)) == export_graph(build_volcano(p))


def test_json_round_trip():
    V = build_volcano(VolcanoParams(-24, 2, 1, 2))
    text = export_graph(V, "json")
    W = load_graph(text)
    assert export_graph(W, "json") == text
    g = json.loads(text)
    g["vertices"][0]["real"] = not g["vertices"][0]["real"]
    with pytest.raises(InvariantError):
        load_graph(json.dumps(g))
