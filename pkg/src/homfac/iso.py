"""Canonical labelling, isomorphism and automorphism groups of small graphs.

The search is the classical individualisation-refinement scheme.  Each node of
the search tree is an equitable ordered partition.  A node is expanded by
individualising each vertex of its target cell (the smallest non-singleton
cell, lowest position first) and refining again.  Every refinement leaves a
label-invariant trace hash.  Leaves are discrete partitions, compared first by
their trace sequence and then by the permuted adjacency matrix.  The best leaf
defines the canonical labelling.

Automorphisms come from leaves that match the first leaf or the current best
leaf exactly.  Found automorphisms prune the tree in two ways.  Children in the
same orbit under the automorphisms fixing the current prefix are skipped.  The
search also jumps back to the common ancestor with the matched leaf.  The group
order is the product of the stabiliser orbit lengths along the first path.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._kernels import Backend, get_backend
from .errors import CapExceeded, InvalidParameters
from .graphs import Graph
from .perm import Perm, PermGroup, closure, orbit_union_find

DEFAULT_ISO_CAP = 150
DEFAULT_NODE_CAP = 2_000_000


@dataclass
class _Leaf:
    lab: np.ndarray
    cert: bytes
    traces: list[int]
    path: list[int]


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical relabelling of a graph.

    ``relabeling`` sends each input vertex to its canonical label, and
    ``edges`` is the resulting sorted edge list.
    """

    relabeling: Perm
    edges: tuple[tuple[int, int], ...]
    certificate: int
    n: int

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonicalForm) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return self.certificate


@dataclass
class SearchResult:
    canonical_lab: np.ndarray
    generators: list[Perm]
    order: int
    nodes: int
    orbit_sizes: list[int] = field(default_factory=list)


class _Search:
    def __init__(
        self,
        g: Graph,
        colors: Sequence[int] | None,
        backend: Backend,
        node_cap: int,
    ) -> None:
        self.g = g
        self.n = g.n
        self.adj = np.ascontiguousarray(g.adj.astype(np.uint8))
        nbrs = [np.flatnonzero(row) for row in g.adj]
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        self.indptr[1:] = np.cumsum([len(x) for x in nbrs])
        self.indices = (
            np.concatenate(nbrs).astype(np.int64) if self.n and self.indptr[-1] else np.zeros(0, dtype=np.int64)
        )
        self.colors = None if colors is None else np.asarray(colors)
        self.backend = backend
        self.node_cap = node_cap
        self.nodes = 0
        self.zeta: _Leaf | None = None
        self.rho: _Leaf | None = None
        self.gens: list[np.ndarray] = []
        self.orbit_sizes: dict[int, int] = {}

    # -- partition helpers -------------------------------------------------------
    def _initial(self) -> tuple[np.ndarray, np.ndarray, int, int]:
        n = self.n
        if self.colors is None:
            lab = np.arange(n, dtype=np.int64)
            cellend = np.full(n, n, dtype=np.int64)
            starts = np.array([0], dtype=np.int64)
            h0 = 0
        else:
            order = np.argsort(self.colors, kind="stable")
            lab = order.astype(np.int64)
            cols = self.colors[order]
            cuts = np.flatnonzero(np.diff(cols)) + 1
            starts = np.concatenate(([0], cuts)).astype(np.int64)
            ends = np.concatenate((cuts, [n])).astype(np.int64)
            cellend = np.zeros(n, dtype=np.int64)
            cellend[starts] = ends
            h0 = len(starts)
        h, ncells = self._refine(lab, cellend, starts, h0)
        return lab, cellend, h, ncells

    def _refine(self, lab, cellend, queue, h0):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise CapExceeded(f"search tree exceeded {self.node_cap} nodes")
        return self.backend.refine(self.adj, self.indptr, self.indices, lab, cellend, queue, h0)

    def _target_cell(self, cellend: np.ndarray) -> tuple[int, int]:
        best = None
        s = 0
        while s < self.n:
            e = int(cellend[s])
            size = e - s
            if size > 1 and (best is None or size < best[1] - best[0]):
                best = (s, e)
                if size == 2:
                    break
            s = e
        assert best is not None
        return best

    def _orbit_labels(self, prefix: list[int]) -> np.ndarray | None:
        fixing = [g for g in self.gens if all(g[x] == x for x in prefix)]
        if not fixing:
            return None
        return orbit_union_find(self.n, fixing)

    # -- search ------------------------------------------------------------------
    def run(self) -> SearchResult:
        if self.n == 0:
            return SearchResult(np.zeros(0, dtype=np.int64), [], 1, 0)
        lab, cellend, h, ncells = self._initial()
        self._dfs(lab, cellend, ncells, [h], [])
        assert self.rho is not None and self.zeta is not None
        order = 1
        sizes = [self.orbit_sizes[level] for level in sorted(self.orbit_sizes)]
        for s in sizes:
            order *= s
        gens = [Perm(g, check=False) for g in self.gens]
        return SearchResult(self.rho.lab, gens, order, self.nodes, sizes)

    def _dfs(self, lab, cellend, ncells, traces, path) -> int | None:
        level = len(path)
        if ncells == self.n:
            return self._leaf(lab, traces, path)
        s, e = self._target_cell(cellend)
        on_first_path = self.zeta is None or path == self.zeta.path[:level]
        explored: list[int] = []
        labels = None
        n_gens_seen = -1
        for v in sorted(int(x) for x in lab[s:e]):
            if explored:
                if n_gens_seen != len(self.gens):
                    labels = self._orbit_labels(path)
                    n_gens_seen = len(self.gens)
                if labels is not None and any(labels[v] == labels[w] for w in explored):
                    continue
            explored.append(v)
            clab = lab.copy()
            ccell = cellend.copy()
            pos = s + int(np.flatnonzero(clab[s:e] == v)[0])
            clab[pos], clab[s] = clab[s], v
            ccell[s + 1] = e
            ccell[s] = s + 1
            h, cn = self._refine(clab, ccell, np.array([s], dtype=np.int64), s + 1)
            ctraces = traces + [h]
            k = len(ctraces)
            if self.zeta is not None:
                eq_zeta = ctraces == self.zeta.traces[:k]
                assert self.rho is not None
                if not eq_zeta and ctraces < self.rho.traces[:k]:
                    continue
            jump = self._dfs(clab, ccell, cn, ctraces, path + [v])
            if jump is not None and jump < level:
                return jump
        if on_first_path and self.zeta is not None and level < len(self.zeta.path):
            lbl = self._orbit_labels(path)
            first_child = self.zeta.path[level]
            if lbl is None:
                self.orbit_sizes[level] = 1
            else:
                cell_vertices = lab[s:e]
                self.orbit_sizes[level] = int(np.count_nonzero(lbl[cell_vertices] == lbl[first_child]))
        return None

    def _leaf(self, lab, traces, path) -> int | None:
        cert = self.backend.certificate(self.adj, lab)
        if self.zeta is None:
            leaf = _Leaf(lab.copy(), cert, traces, list(path))
            self.zeta = self.rho = leaf
            return None
        assert self.rho is not None
        if traces == self.zeta.traces and cert == self.zeta.cert:
            self._add_gen(self.zeta.lab, lab)
            return _common_prefix(path, self.zeta.path)
        if traces == self.rho.traces and cert == self.rho.cert:
            self._add_gen(self.rho.lab, lab)
            return _common_prefix(path, self.rho.path)
        if (traces, cert) > (self.rho.traces, self.rho.cert):
            self.rho = _Leaf(lab.copy(), cert, traces, list(path))
        return None

    def _add_gen(self, src_lab: np.ndarray, dst_lab: np.ndarray) -> None:
        gamma = np.empty(self.n, dtype=np.int64)
        gamma[src_lab] = dst_lab
        self.gens.append(gamma)


def _common_prefix(a: list[int], b: list[int]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def _check_cap(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise CapExceeded(f"{g.n} vertices exceeds the isomorphism cap {cap}")


def search(
    g: Graph,
    colors: Sequence[int] | None = None,
    cap: int = DEFAULT_ISO_CAP,
    backend: str | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> SearchResult:
    """Run the full search and return canonical labelling, generators and |Aut|."""
    _check_cap(g, cap)
    return _Search(g, colors, get_backend(backend), node_cap).run()


def canonical_form(
    g: Graph,
    colors: Sequence[int] | None = None,
    cap: int = DEFAULT_ISO_CAP,
    backend: str | None = None,
) -> CanonicalForm:
    res = search(g, colors, cap, backend)
    lab = res.canonical_lab
    relabel = np.empty(g.n, dtype=np.int64)
    relabel[lab] = np.arange(g.n)
    perm = Perm(relabel, check=False) if g.n else Perm(np.zeros(0, dtype=np.int32), check=False)
    edges = tuple(sorted(tuple(sorted((int(relabel[u]), int(relabel[v])))) for u, v in g.edges().tolist()))
    digest = hashlib.blake2b(repr((g.n, edges)).encode(), digest_size=8).digest()
    return CanonicalForm(perm, edges, int.from_bytes(digest, "big", signed=True), g.n)


def check_isomorphism(g1: Graph, g2: Graph, mapping: Perm | Sequence[int]) -> bool:
    """True iff ``v -> mapping(v)`` sends the edges of g1 exactly onto those of g2."""
    if g1.n != g2.n:
        return False
    images = mapping.images if isinstance(mapping, Perm) else np.asarray(mapping)
    if images.size != g1.n or np.unique(images).size != g1.n:
        return False
    inv = np.empty_like(images)
    inv[images] = np.arange(images.size)
    return bool(np.array_equal(g1.adj[np.ix_(inv, inv)], g2.adj))


def are_isomorphic(
    g1: Graph,
    g2: Graph,
    cap: int = DEFAULT_ISO_CAP,
    backend: str | None = None,
) -> tuple[bool, Perm | None]:
    """Exact isomorphism test; the witness maps g1's vertices to g2's."""
    if g1.n != g2.n or g1.m != g2.m:
        return False, None
    if not np.array_equal(np.sort(g1.degrees()), np.sort(g2.degrees())):
        return False, None
    c1 = canonical_form(g1, cap=cap, backend=backend)
    c2 = canonical_form(g2, cap=cap, backend=backend)
    if c1.edges != c2.edges:
        return False, None
    # g1 vertex v -> canonical c1(v) -> g2 vertex c2^-1(c1(v))
    witness = c1.relabeling * c2.relabeling.inverse()
    if not check_isomorphism(g1, g2, witness):  # pragma: no cover - would indicate a search bug
        raise AssertionError("canonical forms agree but the derived witness is not an isomorphism")
    return True, witness


def automorphism_group(
    g: Graph,
    cap: int = DEFAULT_ISO_CAP,
    backend: str | None = None,
) -> PermGroup:
    """Generators and exact order of Aut(g)."""
    res = search(g, cap=cap, backend=backend)
    for gen in res.generators:
        if not g.is_automorphism(gen):  # pragma: no cover - would indicate a search bug
            raise AssertionError("search produced a non-automorphism")
    gens = res.generators or [Perm.identity(g.n)]
    return PermGroup(gens, degree=g.n, order=res.order)


def _fixed_point_free_powers(g: Perm) -> bool:
    o = g.order()
    x = g
    for _ in range(1, o):
        if x.fixed_points().size:
            return False
        x = x * g
    return True


def has_regular_subgroup(A: PermGroup, n: int | None = None) -> bool:
    """True iff ``A`` has a subgroup of order n acting regularly.

    Candidates are the elements of order dividing n all of whose nontrivial
    powers are fixed-point-free; cyclic subgroups are tried first, then
    closures of candidate pairs capped at n + 1 elements.
    """
    n = A.degree if n is None else n
    if n == 1:
        return True
    if A.order % n:
        return False
    cands = [g for g in A.elements if not g.is_identity() and n % g.order() == 0 and _fixed_point_free_powers(g)]
    for g in cands:
        if g.order() == n:
            return True
    seen: set[frozenset[bytes]] = set()
    cand_keys = {g.key for g in cands}
    for g, h in itertools.combinations(cands, 2):
        try:
            elts = closure([g, h], cap=n)
        except CapExceeded:
            continue
        key = frozenset(x.key for x in elts)
        if key in seen:
            continue
        seen.add(key)
        if len(elts) == n and all(x.is_identity() or x.key in cand_keys for x in elts):
            grp = PermGroup([g, h], elements=elts)
            if grp.is_regular():
                return True
    return False


def brute_force_isomorphic(g1: Graph, g2: Graph) -> bool:
    """All-permutations isomorphism test for tiny graphs (testing oracle)."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if g1.n > 9:
        raise InvalidParameters("brute force limited to 9 vertices")
    for p in itertools.permutations(range(g1.n)):
        if check_isomorphism(g1, g2, p):
            return True
    return False
