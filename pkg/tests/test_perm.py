from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homfac.errors import CapExceeded, InvalidParameters
from homfac.ffield import make_field
from homfac.perm import (
    Perm,
    PermGroup,
    closure,
    coset_action,
    cyclic_group,
    dihedral_group,
    find_isomorphic_subgroups,
    gl2_group,
    gl2_perm,
    group_isomorphic,
    psl2_8_projective,
    psl28_degree28,
    quaternion_group,
    semilinear_perm,
    symmetric_group,
    translation_perms,
)


def _units(F):
    return [x for x in range(1, F.q)]


def test_perm_basics():
    g = Perm.from_cycles(5, [(0, 1, 2)])
    h = Perm.from_cycles(5, [(2, 3)])
    assert (g * h)(0) == h(g(0))
    assert (g * ~g).is_identity()
    assert g.order() == 3 and (g**3).is_identity()
    assert g**-1 == ~g
    assert g.conjugate(h) == ~h * g * h
    with pytest.raises(InvalidParameters):
        Perm([0, 0, 1])


def test_closure_examples():
    assert len(closure([Perm.from_cycles(3, [(0, 1, 2)])])) == 3
    assert len(closure([Perm.identity(4)])) == 1
    F = make_field(3, 2)
    assert len(closure([semilinear_perm(F, 1, 0)])) == 8
    assert closure([Perm.from_cycles(3, [(0, 1)])])[0].is_identity()
    with pytest.raises(CapExceeded):
        closure(symmetric_group(5).generators, cap=100)
    with pytest.raises(InvalidParameters):
        closure([Perm.identity(2), Perm.identity(3)])


def test_closure_is_deterministic():
    a = [g.key for g in closure(symmetric_group(4).generators)]
    b = [g.key for g in closure(symmetric_group(4).generators)]
    assert a == b and len(a) == 24


def test_orbits_examples():
    F = make_field(3, 2)
    M = PermGroup([semilinear_perm(F, 4, 0)])
    orbs = M.orbits(range(1, 9))
    assert len(orbs) == 4 and all(len(o) == 2 for o in orbs)
    T = PermGroup(translation_perms(F))
    assert len(T.orbits()) == 1 and len(T.orbits()[0]) == 9
    for p, R, k in [(3, 2, 2), (5, 2, 3), (7, 2, 6), (2, 4, 5), (13, 1, 4)]:
        F = make_field(p, R)
        orbs = PermGroup([semilinear_perm(F, k, 0)]).orbits(range(1, F.q))
        assert len(orbs) == k and {len(o) for o in orbs} == {(F.q - 1) // k}


def test_orbitals_examples():
    C3 = cyclic_group(3)
    orb = C3.orbitals()
    assert len(orb) == 2
    assert not any(o.self_paired for o in orb)
    assert orb[0].paired_with == 1 and orb[1].paired_with == 0
    P = psl28_degree28()
    orb = P.orbitals()
    assert len(orb) == 3 and all(o.self_paired for o in orb)
    assert sorted(o.size for o in orb) == [28 * 9] * 3


@pytest.mark.parametrize("G", [dihedral_group(5), symmetric_group(4), dihedral_group(6), cyclic_group(6)])
def test_even_order_transitive_has_self_paired_orbital(G):
    assert G.order % 2 == 0 and G.is_transitive()
    assert any(o.self_paired for o in G.orbitals())


def test_stabilizer_examples():
    F = make_field(5, 1)
    T = PermGroup(translation_perms(F))
    assert T.stabilizer(0).order == 1
    assert symmetric_group(3).stabilizer(0).order == 2
    P = psl28_degree28()
    assert P.order == 504
    assert all(P.stabilizer(v).order == 18 for v in (0, 5, 27))


@pytest.mark.parametrize("G", [symmetric_group(4), dihedral_group(7), psl2_8_projective(), quaternion_group()])
def test_orbit_stabilizer(G):
    for v in range(G.degree):
        assert G.order == G.stabilizer(v).order * len(G.orbit(v))


def test_transitivity_predicates():
    F = make_field(3, 2)
    T = PermGroup(translation_perms(F))
    assert T.is_regular() and T.is_transitive() and T.is_semiregular()
    M = PermGroup([semilinear_perm(F, 2, 0)])
    assert M.is_semiregular(range(1, 9)) and not M.is_transitive(range(1, 9))
    AGL = PermGroup(translation_perms(F) + [semilinear_perm(F, 1, 0), semilinear_perm(F, 0, 1)])
    assert AGL.is_2_homogeneous() and AGL.is_2_transitive()
    assert not dihedral_group(7).is_2_homogeneous()


def test_2_homogeneous_not_2_transitive():
    # The affine group x -> a x + b with a a square in F_7 is 2-homogeneous only.
    F = make_field(7, 1)
    G = PermGroup(translation_perms(F) + [semilinear_perm(F, 2, 0)])
    assert G.order == 21
    assert G.is_2_homogeneous() and not G.is_2_transitive()


def test_coset_action_examples():
    G = symmetric_group(4)
    assert coset_action(G, G).degree == 1
    triv = PermGroup([Perm.identity(4)])
    reg = coset_action(G, triv)
    assert reg.degree == 24 and reg.is_regular()
    P = psl28_degree28()
    assert P.degree == 28 and P.is_transitive()
    H = PermGroup([Perm.from_cycles(4, [(0, 1, 2, 3)])])
    with pytest.raises(InvalidParameters):
        coset_action(PermGroup([Perm.from_cycles(4, [(0, 1)])]), H)


def test_psl28_projective_order():
    G = psl2_8_projective()
    assert G.order == 504 and G.degree == 9
    assert G.is_2_transitive()


def test_semilinear_examples():
    F = make_field(3, 2)
    assert semilinear_perm(F, 0, 0).is_identity()
    C = PermGroup([semilinear_perm(F, 1, 0)])
    assert C.order == 8 and C.is_semiregular(range(1, 9))


@pytest.mark.parametrize("p,R", [(2, 3), (3, 2), (5, 2), (2, 4), (7, 2), (3, 3)])
def test_word_pointwise(p, R):
    """x -> (x omega^e)^(p^s) agrees with the pair (e p^s, s) applied as x^(p^s) omega^(e p^s)."""
    F = make_field(p, R)
    q1 = F.q - 1
    for e in range(q1):
        for s in range(R):
            expect = [F.frobenius(F.mul(x, F.omega_pow(e)), s) for x in range(F.q)]
            got = semilinear_perm(F, (e * p**s) % q1, s).images.tolist()
            assert got == expect


@given(st.sampled_from([(2, 3), (3, 2), (5, 2), (2, 4), (7, 2), (3, 3), (2, 6)]), st.data())
def test_semilinear_composition_law(pr, data):
    p, R = pr
    F = make_field(p, R)
    q1 = F.q - 1
    i, i2 = data.draw(st.integers(0, q1 - 1)), data.draw(st.integers(0, q1 - 1))
    j, j2 = data.draw(st.integers(0, R - 1)), data.draw(st.integers(0, R - 1))
    lhs = semilinear_perm(F, i, j) * semilinear_perm(F, i2, j2)
    rhs = semilinear_perm(F, (i * p**j2 + i2) % q1, (j + j2) % R)
    assert lhs == rhs


def test_semilinear_composition_law_bulk():
    rng = np.random.default_rng(7)
    for p, R in [(3, 2), (2, 4), (5, 2)]:
        F = make_field(p, R)
        q1 = F.q - 1
        perms = {(i, j): semilinear_perm(F, i, j) for i in range(q1) for j in range(R)}
        for _ in range(1000):
            i, i2 = (int(x) for x in rng.integers(0, q1, 2))
            j, j2 = (int(x) for x in rng.integers(0, R, 2))
            assert perms[i, j] * perms[i2, j2] == perms[(i * p**j2 + i2) % q1, (j + j2) % R]


@pytest.mark.parametrize("p,R", [(3, 2), (2, 3), (5, 1)])
def test_translations(p, R):
    F = make_field(p, R)
    T = PermGroup(translation_perms(F))
    assert T.order == F.q and T.is_regular()
    for i in range(F.q - 1):
        for j in range(R):
            g = semilinear_perm(F, i, j)
            assert all(t.conjugate(g) in T for t in T.generators)


def test_gl2_perm_examples():
    F = make_field(5, 1)
    assert gl2_perm(F, ((1, 0), (0, 1))).is_identity()
    lam = 2
    g = gl2_perm(F, ((lam, 0), (0, lam)))
    G = PermGroup([g])
    orbs = G.orbits(range(1, 25))
    assert {len(o) for o in orbs} == {4}
    minus = gl2_perm(F, ((4, 0), (0, 4)))
    assert (minus * minus).is_identity() and minus.fixed_points().tolist() == [0]
    with pytest.raises(InvalidParameters):
        gl2_perm(F, ((1, 2), (2, 4)))


def test_gl2_group_orders():
    assert gl2_group(3).order == 48
    assert gl2_group(3, special=True).order == 24


def test_group_isomorphic_examples():
    C4 = cyclic_group(4)
    V4 = PermGroup([Perm.from_cycles(4, [(0, 1), (2, 3)]), Perm.from_cycles(4, [(0, 2), (1, 3)])])
    assert not group_isomorphic(C4, V4)
    assert not group_isomorphic(quaternion_group(), dihedral_group(4))
    S4 = symmetric_group(4)
    A = PermGroup([Perm.from_cycles(4, [(0, 1, 2, 3)]), Perm.from_cycles(4, [(0, 2)])])
    c = Perm.from_cycles(4, [(1, 2)])
    B = PermGroup([g.conjugate(c) for g in A.generators])
    assert group_isomorphic(A, B)
    assert group_isomorphic(S4, symmetric_group(4))
    assert not group_isomorphic(cyclic_group(6), symmetric_group(3))


def test_find_isomorphic_subgroups_examples():
    C2 = cyclic_group(2)
    subs = find_isomorphic_subgroups(symmetric_group(3), C2)
    assert len(subs) == 3
    GL25 = gl2_group(5)
    q8 = find_isomorphic_subgroups(GL25, quaternion_group(), limit=1)
    assert q8
    orbs = q8[0].orbits(range(1, 25))
    assert len(orbs) == 3 and {len(o) for o in orbs} == {8}


def test_find_sl25_in_gl29():
    from homfac._gl2 import Mat2, find_binary_polyhedral

    F = make_field(3, 2)
    ops = Mat2(F)
    gens, elems = find_binary_polyhedral(ops, "SL25")
    assert len(elems) == 120
    G = PermGroup([ops.to_perm(g) for g in gens])
    assert G.order == 120
    orbs = G.orbits(range(1, 81))
    assert len(orbs) == 2 and {len(o) for o in orbs} == {40}


def test_pattern_cap():
    with pytest.raises(CapExceeded):
        find_isomorphic_subgroups(symmetric_group(6), symmetric_group(6))


@given(st.permutations(list(range(7))), st.permutations(list(range(7))))
def test_perm_group_axioms(a, b):
    g, h = Perm(a), Perm(b)
    assert (g * h).inverse() == h.inverse() * g.inverse()
    assert all(((g * h)(i) == h(g(i))) for i in range(7))


def test_normal_subgroup_orbits_equal_length():
    F = make_field(5, 2)
    T = translation_perms(F)
    G = PermGroup(T + [semilinear_perm(F, 1, 0), semilinear_perm(F, 0, 1)])
    M = PermGroup(T + [semilinear_perm(F, 3, 0)])
    assert G.normalizes(M)
    M0 = PermGroup([semilinear_perm(F, 3, 0)])
    lengths = {len(o) for o in M0.orbits(range(1, F.q))}
    assert lengths == {8}
    # G_0 permutes the M_0-orbits
    orbs = [frozenset(o.tolist()) for o in M0.orbits(range(1, F.q))]
    g = semilinear_perm(F, 1, 0)
    assert {frozenset(g.images[list(o)].tolist()) for o in orbs} == set(orbs)


def test_self_paired_count_matches_orbits():
    for p, R, k in [(3, 2, 2), (5, 2, 3), (7, 2, 4), (13, 1, 3)]:
        F = make_field(p, R)
        M = PermGroup(translation_perms(F) + [semilinear_perm(F, k, 0)])
        orb = M.orbitals()
        assert len(orb) == k and all(o.self_paired for o in orb)
        assert M.order % 2 == 0


def test_two_subsets_sweep_matches_bruteforce():
    F = make_field(3, 2)
    G = PermGroup(translation_perms(F) + [semilinear_perm(F, 1, 0), semilinear_perm(F, 0, 1)])
    pairs = {frozenset(pq) for pq in itertools.combinations(range(9), 2)}
    start = frozenset((0, 1))
    orbit = {start}
    frontier = [start]
    while frontier:
        s = frontier.pop()
        for g in G.generators:
            t = frozenset(g(x) for x in s)
            if t not in orbit:
                orbit.add(t)
                frontier.append(t)
    assert orbit == pairs and len(pairs) == 36
