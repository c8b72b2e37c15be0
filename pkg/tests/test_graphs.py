from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homfac import iso
from homfac.errors import InvalidParameters, ParseError
from homfac.ffield import make_field
from homfac.graphs import (
    ConnectionSet,
    Graph,
    cartesian_product,
    cayley,
    complement,
    complete_graph,
    cycle_graph,
    edge_clique_partition,
    empty_graph,
    fp_span_size,
    gpaley,
    gpaley_connection_set,
    gpaley_connectivity_criterion,
    hamming,
    hamming_isomorphism_map,
    hamming_parameter_test,
    orbital_graph,
    tgpaley,
    union,
)
from homfac.perm import PermGroup, psl28_degree28, semilinear_perm, symmetric_group, translation_perms


def test_graph_invariants_enforced():
    with pytest.raises(InvalidParameters):
        Graph(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(InvalidParameters):
        Graph(np.eye(2, dtype=bool))


def test_text_format_is_exact():
    g = cycle_graph(4)
    assert g.to_text() == "4 4\n0 1\n0 3\n1 2\n2 3\n"
    assert Graph.from_text(g.to_text()) == g
    with pytest.raises(ParseError):
        Graph.from_text("3 2\n0 1\n")
    with pytest.raises(ParseError):
        Graph.from_text("3 1\n0 5\n")
    with pytest.raises(ParseError):
        Graph.from_text("x y\n")


def test_cayley_c5():
    F = make_field(5, 1)
    assert cayley(F, [1, 4]) == cycle_graph(5)


def test_cayley_full_set_is_complete():
    F = make_field(3, 2)
    assert cayley(F, range(1, 9)) == complete_graph(9)


def test_cayley_rejects_bad_sets():
    F = make_field(5, 1)
    with pytest.raises(InvalidParameters):
        cayley(F, [0, 1, 4])
    with pytest.raises(InvalidParameters):
        cayley(F, [1])
    with pytest.raises(InvalidParameters):
        ConnectionSet(F, frozenset({1, 2}))


@given(st.sampled_from([(3, 2), (5, 2), (2, 4), (7, 1), (13, 1), (3, 3)]), st.data())
def test_cayley_valency_and_translations(pr, data):
    F = make_field(*pr)
    x = data.draw(st.sets(st.integers(1, F.q - 1), min_size=1, max_size=6))
    S = x | {F.neg(s) for s in x}
    g = cayley(F, S)
    assert g.valency() == len(S)
    assert all(g.is_automorphism(t) for t in translation_perms(F))


def test_gpaley_examples():
    g = gpaley(3, 2, 2)
    assert g.n == 9 and g.valency() == 4
    g = gpaley(3, 4, 40)
    assert g.valency() == 2 and not g.is_connected()
    comps = g.components()
    assert len(comps) == 27
    K3 = complete_graph(3)
    assert all(g.induced_subgraph(c) == K3 for c in comps)
    g = gpaley(2, 4, 5)
    assert g.valency() == 3
    comps = g.components()
    assert len(comps) == 4
    assert all(g.induced_subgraph(c) == complete_graph(4) for c in comps)


def test_gpaley_parameter_errors():
    with pytest.raises(InvalidParameters, match="parity"):
        gpaley(3, 2, 8)
    with pytest.raises(InvalidParameters, match="divide"):
        gpaley(3, 2, 3)
    with pytest.raises(InvalidParameters):
        gpaley(5, 1, 1)


def test_tgpaley_examples():
    g = tgpaley(3, 2, 1)
    assert g.n == 9 and g.valency() == 4
    g = tgpaley(7, 2, 3)
    assert g.n == 49 and g.valency() == 8
    g = tgpaley(7, 2, 1)
    assert g.valency() == 24
    for bad in [(3, 1, 1), (5, 2, 1), (7, 2, 2), (3, 2, 3)]:
        with pytest.raises(InvalidParameters):
            tgpaley(*bad)


def test_tgpaley_contains_minus_one():
    for p, R, h in [(3, 2, 1), (7, 2, 1), (7, 2, 3), (11, 2, 1), (11, 2, 5), (3, 4, 1)]:
        F = make_field(p, R)
        S = set(gpaley_connection_set(p, R, 4 * h).tolist()) if (F.q - 1) // (4 * h) % 2 == 0 else None
        if S is not None:
            assert F.neg(1) in S


def test_hamming_examples():
    assert iso.are_isomorphic(hamming(2, 2), cycle_graph(4))[0]
    h = hamming(9, 2)
    assert h.n == 81 and h.valency() == 16 and h.m == 648
    with pytest.raises(InvalidParameters):
        hamming(1, 3)


def test_orbital_graph_examples():
    assert orbital_graph(symmetric_group(5), (0, 1)) == complete_graph(5)
    P = psl28_degree28()
    for o in P.orbitals():
        assert orbital_graph(P, o.representative).valency() == 9
    for p, R, k in [(3, 2, 2), (5, 2, 3), (2, 4, 3), (3, 3, 13)]:
        F = make_field(p, R)
        G = PermGroup(translation_perms(F) + [semilinear_perm(F, k, 0)])
        assert orbital_graph(G, (0, 1)) == gpaley(p, R, k)
    C3 = PermGroup(translation_perms(make_field(3, 1)))
    with pytest.raises(InvalidParameters):
        orbital_graph(C3, (0, 1))


def test_cartesian_product_examples():
    K9 = complete_graph(9)
    assert cartesian_product(K9, K9) == hamming(9, 2)
    K2 = complete_graph(2)
    assert iso.are_isomorphic(cartesian_product(K2, K2), cycle_graph(4))[0]
    prod = cartesian_product(cycle_graph(5), complete_graph(4))
    assert prod.valency() == 2 + 3


@pytest.mark.parametrize("a,b", [(2, 3), (3, 2), (4, 2), (5, 2)])
def test_cartesian_complete_is_hamming_rule(a, b):
    g = complete_graph(a)
    for _ in range(b - 1):
        g = cartesian_product(complete_graph(a), g) if g.n < a ** b else g
    idx = np.arange(a**b)
    digits = np.stack([(idx // a ** (b - 1 - j)) % a for j in range(b)], axis=1)
    expect = (digits[:, None, :] != digits[None, :, :]).sum(axis=2) == 1
    assert np.array_equal(g.adj, expect)


def test_components_examples():
    assert len(complete_graph(6).components()) == 1
    assert gpaley(3, 4, 40).components()[0].size == 3
    assert len(gpaley(2, 4, 5).components()) == 4


def test_connectivity_criterion_examples():
    assert gpaley_connectivity_criterion(3, 4, 4)
    assert gpaley(3, 4, 4).is_connected()
    assert not gpaley_connectivity_criterion(3, 4, 40)
    for p, k in [(13, 2), (13, 3), (13, 6), (7, 3)]:
        assert gpaley_connectivity_criterion(p, 1, k)


@pytest.mark.parametrize("p,R", [(2, 4), (3, 4), (2, 6), (5, 2), (3, 3)])
def test_disconnected_components_match_span(p, R):
    F = make_field(p, R)
    q1 = F.q - 1
    for k in range(2, q1 + 1):
        if q1 % k or (p % 2 and (q1 // k) % 2):
            continue
        g = gpaley(p, R, k)
        comps = g.components()
        span = fp_span_size(F, gpaley_connection_set(p, R, k))
        assert len(comps) == F.q // span
        assert {c.size for c in comps} == {span}
        if len(comps) > 1:
            first = g.induced_subgraph(comps[0])
            for c in comps[1:]:
                assert iso.are_isomorphic(first, g.induced_subgraph(c))[0]


def test_hamming_parameter_examples():
    assert hamming_parameter_test(5, 2, 3) == 1
    assert hamming_parameter_test(3, 4, 5) == 2
    assert hamming_parameter_test(5, 2, 2) is None
    assert not iso.are_isomorphic(gpaley(5, 2, 2), hamming(5, 2))[0]


@pytest.mark.parametrize("p,R,k,a", [(5, 2, 3, 1), (3, 4, 5, 2), (3, 2, 2, 1), (7, 2, 4, 1), (2, 6, 7, 2), (3, 6, 14, 3)])
def test_hamming_map_is_isomorphism(p, R, k, a):
    assert hamming_parameter_test(p, R, k) == a
    theta = hamming_isomorphism_map(p, R, k, a)
    g = gpaley(p, R, k)
    h = hamming(p**a, R // a)
    assert theta[0] == 0
    assert iso.check_isomorphism(g, h, theta)
    # S goes onto the weight-one vectors
    S = gpaley_connection_set(p, R, k)
    m, b = p**a, R // a
    weight = [sum(1 for j in range(b) if (int(theta[s]) // m**j) % m) for s in S]
    assert weight == [1] * len(S)
    assert len(S) == b * (m - 1)


def test_hamming_map_bad_divisor():
    with pytest.raises(InvalidParameters):
        hamming_isomorphism_map(5, 2, 3, 2)


def test_edge_clique_partition_examples():
    cl = edge_clique_partition(hamming(9, 2))
    assert cl is not None and len(cl) == 18 and {len(c) for c in cl} == {9}
    cl = edge_clique_partition(hamming(5, 2))
    assert cl is not None and len(cl) == 2 * 5 and {len(c) for c in cl} == {5}
    cl = edge_clique_partition(cycle_graph(5))
    assert cl is not None and len(cl) == 5 and {len(c) for c in cl} == {2}
    assert edge_clique_partition(gpaley(3, 2, 2).__class__.from_edges(4, [(0, 1), (1, 2)])) is None


def test_edge_clique_partition_failure():
    # K4 minus an edge: the clique built on a spoke is not a clique.
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert edge_clique_partition(g) is None


def test_complement_and_union():
    assert complement(complete_graph(5)) == empty_graph(5)
    P9 = gpaley(3, 2, 2)
    assert union(P9, complement(P9)) == complete_graph(9)
    assert iso.are_isomorphic(P9, complement(P9))[0]
    with pytest.raises(InvalidParameters):
        union(P9, P9)
    assert union(P9, P9, strict=False) == P9


@pytest.mark.parametrize("p,R,k", [(3, 2, 2), (5, 2, 3), (7, 2, 4), (2, 4, 3), (13, 1, 3)])
def test_gpaley_semilinear_automorphisms(p, R, k):
    F = make_field(p, R)
    g = gpaley(p, R, k)
    for gen in translation_perms(F) + [semilinear_perm(F, k, 0), semilinear_perm(F, 0, 1)]:
        assert g.is_automorphism(gen)
    M0 = PermGroup([semilinear_perm(F, k, 0), semilinear_perm(F, 0, 1)])
    S = gpaley_connection_set(p, R, k)
    assert M0.orbit(int(S[0])).tolist() == sorted(S.tolist())


def test_summary():
    s = gpaley(3, 4, 40).summary()
    assert s == {"n": 81, "m": 81, "valency": 2, "connected": False, "components": 27}


@given(st.integers(3, 8), st.data())
def test_complement_involution(n, data):
    edges = data.draw(st.sets(st.sampled_from(list(itertools.combinations(range(n), 2)))))
    g = Graph.from_edges(n, sorted(edges))
    assert complement(complement(g)) == g
    assert g.m + complement(g).m == n * (n - 1) // 2
