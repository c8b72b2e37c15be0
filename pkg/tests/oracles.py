"""Brute-force reference computations shared by the test modules.

Everything here works on explicit permutations of field indices, built from
``semilinear_perm``; none of it consults the parameter calculus under test.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from homfac.ffield import make_field
from homfac.perm import PermGroup, semilinear_perm


@dataclass
class GammaL:
    p: int
    R: int
    perms: list
    table: np.ndarray  # table[a, b] = index of perms[a] * perms[b]
    inverse: np.ndarray
    index: dict

    def closure(self, gens) -> frozenset[int]:
        out = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def group(self, elems) -> PermGroup:
        return PermGroup([self.perms[i] for i in sorted(elems)], elements=[self.perms[i] for i in sorted(elems)])

    def indices_of(self, G: PermGroup) -> frozenset[int]:
        return frozenset(self.index[g.key] for g in G.elements)


@lru_cache(maxsize=None)
def gamma_l(p: int, R: int) -> GammaL:
    F = make_field(p, R)
    q1 = F.q - 1
    perms = [semilinear_perm(F, i, j) for j in range(R) for i in range(q1)]
    ident = next(k for k, g in enumerate(perms) if g.is_identity())
    perms[0], perms[ident] = perms[ident], perms[0]
    index = {g.key: k for k, g in enumerate(perms)}
    imgs = np.stack([g.images for g in perms])
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prod = imgs[:, imgs[a]]  # row b: perms[a] then perms[b]
        table[a] = [index[row.tobytes()] for row in prod]
    inverse = np.array([int(np.flatnonzero(table[a] == 0)[0]) for a in range(n)])
    return GammaL(p, R, perms, table, inverse, index)


@lru_cache(maxsize=None)
def all_subgroups(p: int, R: int) -> dict[frozenset[int], list[int]]:
    """Every subgroup of GammaL(1, p^R), keyed by element set, with a generating list."""
    G = gamma_l(p, R)
    cyclic: dict[frozenset[int], list[int]] = {}
    for g in range(len(G.perms)):
        cyclic.setdefault(G.closure([g]), [g])
    subs = dict(cyclic)
    frontier = list(subs.items())
    while frontier:
        nxt = []
        for H, gens in frontier:
            for C, cg in cyclic.items():
                if C <= H:
                    continue
                J = G.closure(gens + cg)
                if J not in subs:
                    subs[J] = gens + cg
                    nxt.append((J, gens + cg))
        frontier = nxt
    return subs


def orbits_on_units(p: int, R: int, elems) -> list[frozenset[int]]:
    G = gamma_l(p, R)
    grp = PermGroup([G.perms[i] for i in elems])
    return [frozenset(o.tolist()) for o in grp.orbits(range(1, p**R))]


def is_normal(p: int, R: int, M: frozenset[int], G_gens, M_gens) -> bool:
    T = gamma_l(p, R)
    return all(int(T.table[T.table[T.inverse[g], h], g]) in M for g in G_gens for h in M_gens)


def oracle_solutions(p: int, R: int) -> set[tuple]:
    """(G0, M0, orbit count, orbit length) for every admissible pair of subgroups.

    G0 is transitive on the nonzero elements, M0 is a normal intransitive
    subgroup of G0, and for odd p both the orbit length and |M0| are even.
    """
    subs = all_subgroups(p, R)
    orbs = {E: orbits_on_units(p, R, E) for E in subs}
    out = set()
    for G, gg in subs.items():
        if len(orbs[G]) != 1:
            continue
        for M, mg in subs.items():
            if not M <= G or len(orbs[M]) < 2 or not is_normal(p, R, M, gg, mg):
                continue
            length = len(next(iter(orbs[M])))
            if p % 2 and (length % 2 or len(M) % 2):
                continue
            out.add((G, M, len(orbs[M]), length))
    return out
