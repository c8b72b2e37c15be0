"""Undirected simple graphs on ``{0..n-1}`` and the constructions used here.

Adjacency is a dense boolean matrix.  Every graph in scope has at most a few
thousand vertices, so row intersections are cheap and the refinement kernels
in :mod:`homfac.iso` can read the matrix directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, InvalidParameters, ParseError
from .ffield import FieldSpec, divisors, make_field
from .perm import Perm, PermGroup

DEFAULT_GRAPH_CAP = 4096


class Graph:
    """Immutable undirected loop-free graph."""

    __slots__ = ("adj", "label", "_edges")

    def __init__(self, adj: np.ndarray, label: str = "", check: bool = True) -> None:
        adj = np.asarray(adj, dtype=bool)
        if check:
            if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
                raise InvalidParameters("adjacency must be square")
            if adj.shape[0] > DEFAULT_GRAPH_CAP:
                raise CapExceeded(f"{adj.shape[0]} vertices exceeds graph cap {DEFAULT_GRAPH_CAP}")
            if not np.array_equal(adj, adj.T):
                raise InvalidParameters("adjacency is not symmetric")
            if adj.diagonal().any():
                raise InvalidParameters("graph has loops")
        adj = np.ascontiguousarray(adj)
        adj.setflags(write=False)
        self.adj = adj
        self.label = label
        self._edges: np.ndarray | None = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], label: str = "") -> Graph:
        adj = np.zeros((n, n), dtype=bool)
        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if e.size:
            if (e[:, 0] == e[:, 1]).any():
                raise InvalidParameters("loop edge")
            adj[e[:, 0], e[:, 1]] = True
            adj[e[:, 1], e[:, 0]] = True
        return cls(adj, label, check=False)

    # -- basic queries -------------------------------------------------------
    @property
    def n(self) -> int:
        return int(self.adj.shape[0])

    @property
    def m(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> np.ndarray:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        if self._edges is None:
            u, v = np.nonzero(np.triu(self.adj, 1))
            self._edges = np.stack([u, v], axis=1)
        return self._edges

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges()}

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def valency(self) -> int | None:
        """Common degree of a regular graph, else None."""
        deg = self.degrees()
        if deg.size == 0:
            return 0
        return int(deg[0]) if np.all(deg == deg[0]) else None

    def components(self) -> list[np.ndarray]:
        ncomp, labels = connected_components(self.adj, directed=False)
        blocks = [np.flatnonzero(labels == c) for c in range(ncomp)]
        return sorted(blocks, key=lambda b: int(b[0]))

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced_subgraph(self, vertices: Sequence[int]) -> Graph:
        vs = np.asarray(vertices)
        return Graph(self.adj[np.ix_(vs, vs)], check=False)

    def relabel(self, perm: Perm | Sequence[int]) -> Graph:
        """Image graph under ``v -> perm(v)``."""
        images = perm.images if isinstance(perm, Perm) else np.asarray(perm)
        inv = np.empty_like(images)
        inv[images] = np.arange(images.size)
        return Graph(self.adj[np.ix_(inv, inv)], self.label, check=False)

    def is_automorphism(self, perm: Perm | Sequence[int]) -> bool:
        images = perm.images if isinstance(perm, Perm) else np.asarray(perm)
        return bool(np.array_equal(self.adj[np.ix_(images, images)], self.adj))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash(np.packbits(self.adj).tobytes())

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"

    # -- serialisation ----------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in self.edges().tolist())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Graph:
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        try:
            n, m = (int(x) for x in rows[0])
            edges = [(int(a), int(b)) for a, b in rows[1:]]
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed graph file: {exc}") from exc
        if len(edges) != m:
            raise ParseError(f"header promises {m} edges, found {len(edges)}")
        if any(not (0 <= a < n and 0 <= b < n) or a == b for a, b in edges):
            raise ParseError("edge endpoint out of range or loop")
        return cls.from_edges(n, edges)

    def summary(self) -> dict:
        comps = self.components()
        return {
            "n": self.n,
            "m": self.m,
            "valency": self.valency(),
            "connected": len(comps) <= 1,
            "components": len(comps),
        }


# -- elementary graphs ------------------------------------------------------------
def complete_graph(n: int) -> Graph:
    return Graph(~np.eye(n, dtype=bool), f"K_{n}", check=False)


def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool), check=False)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C_{n}")


def complement(g: Graph) -> Graph:
    adj = ~g.adj
    np.fill_diagonal(adj, False)
    return Graph(adj, check=False)


def union(g1: Graph, g2: Graph, strict: bool = True) -> Graph:
    if g1.n != g2.n:
        raise InvalidParameters("union needs equal vertex counts")
    if strict and (g1.adj & g2.adj).any():
        raise InvalidParameters("edge sets overlap")
    return Graph(g1.adj | g2.adj, check=False)


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Vertex ``(u, v)`` is ``u * g2.n + v``; adjacent iff equal in one coordinate and adjacent in the other."""
    n1, n2 = g1.n, g2.n
    if n1 * n2 > DEFAULT_GRAPH_CAP:
        raise CapExceeded("product too large")
    adj = np.kron(g1.adj, np.eye(n2, dtype=bool)) | np.kron(np.eye(n1, dtype=bool), g2.adj)
    return Graph(adj, check=False)


def hamming(a: int, b: int) -> Graph:
    """H(a, b): b-tuples over {0..a-1}, index sum(t_j * a^j)."""
    if a < 2 or b < 2:
        raise InvalidParameters("Hamming graph needs a >= 2 and b >= 2")
    n = a**b
    if n > DEFAULT_GRAPH_CAP:
        raise CapExceeded(f"H({a},{b}) has {n} vertices")
    idx = np.arange(n)
    digits = np.stack([(idx // a**j) % a for j in range(b)], axis=1)
    diff = (digits[:, None, :] != digits[None, :, :]).sum(axis=2)
    return Graph(diff == 1, f"H({a},{b})", check=False)


# -- Cayley graphs over finite fields ---------------------------------------------
@dataclass(frozen=True)
class ConnectionSet:
    """A negation-closed set of nonzero field elements."""

    field: FieldSpec
    members: frozenset[int]

    def __post_init__(self) -> None:
        F = self.field
        if 0 in self.members:
            raise InvalidParameters("connection set contains 0")
        if any(not 0 < s < F.q for s in self.members):
            raise InvalidParameters("connection set element out of range")
        if {F.neg(s) for s in self.members} != set(self.members):
            raise InvalidParameters("connection set is not closed under negation (S != -S)")

    def as_array(self) -> np.ndarray:
        return np.array(sorted(self.members), dtype=np.int64)


def cayley(field: FieldSpec, S: ConnectionSet | Iterable[int], label: str = "") -> Graph:
    """Cay(F_q, S): ``u ~ v`` iff ``v - u`` lies in ``S``."""
    cs = S if isinstance(S, ConnectionSet) else ConnectionSet(field, frozenset(int(s) for s in S))
    q = field.q
    if q > DEFAULT_GRAPH_CAP:
        raise CapExceeded(f"{q} vertices exceeds graph cap")
    s = cs.as_array()
    adj = np.zeros((q, q), dtype=bool)
    rows = np.repeat(np.arange(q), s.size)
    cols = field.add_vec(np.arange(q)[:, None], s[None, :]).ravel()
    adj[rows, cols] = True
    return Graph(adj, label, check=False)


def check_gpaley_parameters(p: int, R: int, k: int) -> FieldSpec:
    F = make_field(p, R)
    q1 = F.q - 1
    if k < 2:
        raise InvalidParameters(f"k = {k}: need k >= 2 (index of the factorisation)")
    if q1 % k:
        raise InvalidParameters(f"k = {k} does not divide p^R - 1 = {q1}")
    if p % 2 == 1 and (q1 // k) % 2:
        raise InvalidParameters(f"parity: (q-1)/k = {q1 // k} must be even for odd p")
    return F


def gpaley_connection_set(p: int, R: int, k: int) -> np.ndarray:
    """The subgroup <omega^k> of F_q^* as sorted element indices."""
    F = check_gpaley_parameters(p, R, k)
    return np.sort(F.exp_table[0 : F.q - 1 : k])


def gpaley(p: int, R: int, k: int) -> Graph:
    """Generalised Paley graph Cay(F_{p^R}, <omega^k>) of valency (p^R-1)/k."""
    F = check_gpaley_parameters(p, R, k)
    return cayley(F, gpaley_connection_set(p, R, k), f"GPaley({F.q},{(F.q - 1) // k})")


def check_tgpaley_parameters(p: int, R: int, h: int) -> FieldSpec:
    if R % 2:
        raise InvalidParameters(f"R = {R} must be even")
    if p % 4 != 3:
        raise InvalidParameters(f"p = {p} must be congruent to 3 mod 4")
    if h < 1 or h % 2 == 0:
        raise InvalidParameters(f"h = {h} must be a positive odd integer")
    if (p - 1) % (2 * h):
        raise InvalidParameters(f"2h = {2 * h} must divide p - 1 = {p - 1}")
    return make_field(p, R)


def tgpaley_connection_set(p: int, R: int, h: int) -> np.ndarray:
    """<omega^{4h}> together with omega^{3h}<omega^{4h}>."""
    F = check_tgpaley_parameters(p, R, h)
    exps = np.arange(F.q - 1)
    mask = (exps % (4 * h) == 0) | (exps % (4 * h) == 3 * h)
    return np.sort(F.exp_table[exps[mask]])


def tgpaley(p: int, R: int, h: int) -> Graph:
    F = check_tgpaley_parameters(p, R, h)
    return cayley(F, tgpaley_connection_set(p, R, h), f"TGPaley({F.q},{(F.q - 1) // (2 * h)})")


def orbital_graph(G: PermGroup, pair: tuple[int, int]) -> Graph:
    """Undirected graph of a self-paired orbital of ``G``."""
    a, b = pair
    if a == b:
        raise InvalidParameters("the diagonal orbital gives no edges")
    members = G.orbital_members(pair)
    n = G.degree
    adj = np.zeros((n, n), dtype=bool)
    adj[members[:, 0], members[:, 1]] = True
    if not np.array_equal(adj, adj.T):
        raise InvalidParameters(f"orbital of {pair} is not self-paired")
    return Graph(adj, check=False)


# -- structural criteria -------------------------------------------------------------
def _rank_mod_p(rows: np.ndarray, p: int) -> int:
    mat = np.array(rows, dtype=np.int64) % p
    rank = 0
    nrows, ncols = mat.shape if mat.size else (0, 0)
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if mat[r, col]), None)
        if pivot is None:
            continue
        mat[[rank, pivot]] = mat[[pivot, rank]]
        mat[rank] = (mat[rank] * pow(int(mat[rank, col]), -1, p)) % p
        for r in range(nrows):
            if r != rank and mat[r, col]:
                mat[r] = (mat[r] - mat[r, col] * mat[rank]) % p
        rank += 1
    return rank


def fp_span_size(field: FieldSpec, S: Iterable[int]) -> int:
    """Size of the F_p-linear span of ``S`` (p to the rank of the digit vectors)."""
    s = np.fromiter(S, dtype=np.int64)
    if s.size == 0:
        return 1
    return field.p ** _rank_mod_p(field.digits[s], field.p)


def gpaley_connectivity_criterion(p: int, R: int, k: int) -> bool:
    """True iff k is not a multiple of (p^R-1)/(p^a-1) for any proper divisor a of R."""
    F = check_gpaley_parameters(p, R, k)
    q1 = F.q - 1
    return all(k % (q1 // (p**a - 1)) for a in divisors(R) if a < R)


def hamming_parameter_test(p: int, R: int, k: int) -> int | None:
    """The proper divisor a of R with k = a(p^R-1)/(R(p^a-1)), if any."""
    q1 = p**R - 1
    for a in divisors(R):
        if a < R and k * R * (p**a - 1) == a * q1:
            return a
    return None


def hamming_isomorphism_map(p: int, R: int, k: int, a: int) -> np.ndarray:
    """Bijection theta from GPaley vertices to H(p^a, R/a) vertex indices.

    ``u = sum mu_j omega^{jk}`` (mu_j in F_{p^a}) is sent to the tuple of the
    mu_j, each coded as 0 for zero and t+1 for omega^{t(q-1)/(p^a-1)}.  The
    returned array maps field index to Hamming index ``sum t_j (p^a)^j``.
    """
    F = check_gpaley_parameters(p, R, k)
    if R % a or a >= R:
        raise InvalidParameters(f"a = {a} must be a proper divisor of R = {R}")
    b = R // a
    sub = F.subfield_elements(a)
    m = sub.size
    basis = [F.omega_pow(j * k) for j in range(b)]
    theta = np.full(F.q, -1, dtype=np.int64)
    for code in itertools.product(range(m), repeat=b):
        u = 0
        for j, t in enumerate(code):
            u = F.add(u, F.mul(int(sub[t]), basis[j]))
        if theta[u] != -1:
            raise InvalidParameters("basis {1, omega^k, ...} fails to span over the subfield")
        theta[u] = sum(t * m**j for j, t in enumerate(code))
    return theta


def edge_clique_partition(g: Graph) -> list[tuple[int, ...]] | None:
    """Cliques ``{u, v} + common neighbours`` that cover every edge exactly once.

    Returns None when some such set is not a clique or two of them share an edge.
    """
    if g.valency() is None:
        return None
    covered = np.zeros_like(g.adj)
    cliques: list[tuple[int, ...]] = []
    for u, v in g.edges().tolist():
        if covered[u, v]:
            continue
        members = np.flatnonzero(g.adj[u] & g.adj[v]).tolist() + [u, v]
        c = np.array(sorted(members))
        block = g.adj[np.ix_(c, c)]
        if not (block | np.eye(c.size, dtype=bool)).all():
            return None
        if covered[np.ix_(c, c)].any():
            return None
        covered[np.ix_(c, c)] = True
        np.fill_diagonal(covered, False)
        cliques.append(tuple(int(x) for x in c))
    if not np.array_equal(covered, g.adj):
        return None
    return cliques
