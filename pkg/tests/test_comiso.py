import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurring.abelian import automorphism_tables, make_group
from schurring.algiso import AlgebraicIso, enumerate_algisos, identity_algiso
from schurring.catalogue import enumerate_srings
from schurring.comiso import (
    IsoCertificate,
    PointMap,
    aut_group,
    aut_group_order,
    aut_lift_holds,
    all_inducing_isos,
    assemble_gwr_iso,
    check_gwr_properties,
    find_inducing,
    find_inducing_iso_bruteforce,
    gwr_data,
    graph_iso_pipeline_result,
    identity_map,
    induced_class_map,
    induces,
    translation_map,
)
from schurring.construct import full_group_ring, gwr_sections, rank2, wreath
from schurring.errors import NotAnIsomorphismError, ShapeError, SizeError

from . import oracles


def _nx_has_inducing(A, B, phi):
    # coloured complete digraphs; colour of (u, w) in B is the class of w - u
    G, H = A.group, B.group
    ga = oracles.coloured_complete_digraph(G.order, lambda u, w: phi[int(A.cls[G.sub[w, u]])])
    gb = oracles.coloured_complete_digraph(H.order, lambda u, w: int(B.cls[H.sub[w, u]]))
    gm = nx.algorithms.isomorphism.DiGraphMatcher(ga, gb, edge_match=lambda a, b: a["c"] == b["c"])
    return gm.is_isomorphic()


@pytest.mark.parametrize("factors", [[4], [6], [2, 2], [2, 4], [8]])
def test_aut_order_matches_vf2(factors):
    G = make_group(factors)
    for A in enumerate_srings(G, up_to="aut"):
        if A.rank <= 2 and G.order > 6:
            continue
        expected = oracles.scheme_automorphism_count(G.order, lambda u, w: int(A.cls[G.sub[w, u]]))
        assert aut_group_order(A) == expected


def test_aut_group_lists_every_automorphism():
    A = wreath(rank2(make_group([2])), rank2(make_group([4])))
    auts = aut_group(A)
    assert len(auts) == aut_group_order(A) == len(set(auts))
    assert all(induces(f, A, A, induced_class_map(f, A, A)) for f in auts)
    assert aut_group_order(full_group_ring(make_group([3, 3]))) == 9
    with pytest.raises(SizeError):
        aut_group_order(full_group_ring(make_group([4, 4, 8])))


def test_point_map_basics():
    G = make_group([2, 4])
    f = translation_map(G, 3)
    assert f.then(f.inverse()) == identity_map(G)
    with pytest.raises(ValueError):
        PointMap(G, G, np.zeros(G.order))
    A = full_group_ring(G)
    # translations act trivially on every Cayley relation
    assert induced_class_map(f, A, A) == tuple(range(A.rank))
    assert f.dump().splitlines()[0] == "pointmap C2xC4 -> C2xC4"


def test_non_induced_map_is_rejected():
    G = make_group([4])
    A = full_group_ring(G)
    f = PointMap(G, G, [0, 1, 3, 2])
    with pytest.raises(NotAnIsomorphismError):
        induced_class_map(f, A, A)
    with pytest.raises(NotAnIsomorphismError):
        IsoCertificate(identity_map(G), AlgebraicIso(A, A, (0, 3, 2, 1)), "test")


@pytest.mark.parametrize("f,g", [([4], [2, 2]), ([2, 4], [8]), ([2, 4], [2, 2, 2]), ([9], [3, 3])])
def test_bruteforce_agrees_with_vf2(f, g):
    RA = enumerate_srings(make_group(f), up_to="aut")
    RB = enumerate_srings(make_group(g), up_to="aut")
    for A in RA:
        for B in RB:
            if A.rank != B.rank or A.rank > 6:
                continue
            for phi in enumerate_algisos(A, B):
                got = find_inducing_iso_bruteforce(A, B, phi.class_map)
                assert (got is not None) == _nx_has_inducing(A, B, phi.class_map)
                if got is not None:
                    assert induces(got, A, B, phi.class_map)


def test_all_inducing_isos_of_identity_is_the_automorphism_group():
    B = wreath(rank2(make_group([2])), rank2(make_group([4])))
    maps = all_inducing_isos(B, B, identity_algiso(B).class_map)
    assert len(maps) == aut_group_order(B)


@given(st.sampled_from([[2, 4], [8], [2, 2, 2], [3, 3], [2, 8]]), st.data())
@settings(max_examples=40, deadline=None)
def test_cascade_output_induces_phi(factors, data):
    rings = enumerate_srings(make_group(factors), up_to="aut")
    A = data.draw(st.sampled_from(rings))
    phi = data.draw(st.sampled_from(list(enumerate_algisos(A, A))))
    res = find_inducing(A, A, phi)
    brute = find_inducing_iso_bruteforce(A, A, phi.class_map)
    assert (res is None) == (brute is None)
    if res is not None:
        f, method = res
        assert method in {"trivial", "cayley", "gwr-assembly", "brute"}
        assert induces(f, A, A, phi.class_map)


def _proper_gwr_cases(factors):
    for A in enumerate_srings(make_group(factors), up_to="aut"):
        for w in gwr_sections(A):
            if w.proper:
                yield A, w


def test_assembly_satisfies_characterisation():
    seen = 0
    for A, w in _proper_gwr_cases([2, 4]):
        for phi in enumerate_algisos(A, A):
            d = gwr_data(A, A, phi, w)
            r1 = find_inducing(d.AU, d.BU, d.phi_U)
            r2 = find_inducing(d.AGL, d.BGL, d.phi_GL)
            if r1 is None or r2 is None or not aut_lift_holds(A, w):
                continue
            f = assemble_gwr_iso(A, A, phi, w, r1[0], r2[0], d)
            assert induces(f, A, A, phi.class_map)
            assert all(check_gwr_properties(A, A, phi, w, f, d).values())
            seen += 1
    assert seen > 0


def test_assembly_rejects_wrong_parts():
    A = wreath(rank2(make_group([2])), full_group_ring(make_group([4])))
    w = next(w for w in gwr_sections(A) if w.proper)
    phi = identity_algiso(A)
    d = gwr_data(A, A, phi, w)
    bad = [m for m in enumerate_algisos(d.AGL, d.BGL) if not m.is_identity()]
    f1 = find_inducing(d.AU, d.BU, d.phi_U)[0]
    assert bad
    f2 = find_inducing(d.AGL, d.BGL, bad[0])[0]
    with pytest.raises(ValueError):
        assemble_gwr_iso(A, A, phi, w, f1, f2, d)


def _cayley_graph(G, X):
    return nx.DiGraph([(u, int(G.add[u, x])) for u in range(G.order) for x in X])


@given(st.sampled_from([[2, 2], [2, 4], [3, 3], [2, 8]]), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_pipeline_agrees_with_vf2(factors, seed):
    G = make_group(factors)
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, G.order))
    X = rng.choice(np.arange(1, G.order), size=k, replace=False).tolist()
    if rng.random() < 0.5:
        # an automorphism image keeps the graphs isomorphic
        T = automorphism_tables(G)
        Y = T[int(rng.integers(len(T)))][X].tolist()
    else:
        Y = rng.choice(np.arange(1, G.order), size=k, replace=False).tolist()
    res = graph_iso_pipeline_result(G, X, G, Y)
    expected = nx.is_isomorphic(_cayley_graph(G, X), _cayley_graph(G, Y))
    assert res.isomorphic == expected
    if res.isomorphic:
        t = res.certificate.point_map.table
        EX, EY = set(_cayley_graph(G, X).edges), set(_cayley_graph(G, Y).edges)
        assert {(int(t[u]), int(t[w])) for u, w in EX} == EY


def test_pipeline_reasons_and_shape():
    G = make_group([2, 4])
    assert graph_iso_pipeline_result(G, [1], G, [1, 2]).reason == "valency"
    with pytest.raises(ShapeError):
        graph_iso_pipeline_result(make_group([5]), [1], make_group([5]), [2])
    with pytest.raises(ValueError):
        graph_iso_pipeline_result(G, [0, 1], G, [1, 2])
