"""Homogeneous factorisations of complete graphs.

A :class:`Factorisation` is an ordered partition of the edges of ``K_n`` into
``k >= 2`` parts, optionally with two permutation groups attached: ``M``,
which should fix every part and be transitive on the vertices and on each
part's arcs, and ``G``, which should permute the parts transitively.  The
verifier recomputes every claim from the edges and the group generators.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import iso
from ._gl2 import Elem, Mat2, find_binary_polyhedral
from .errors import CapExceeded, InvalidParameters, ParseError
from .ffield import FieldSpec, make_field
from .graphs import (
    Graph,
    check_gpaley_parameters,
    check_tgpaley_parameters,
    gpaley_connection_set,
    gpaley_connectivity_criterion,
    tgpaley_connection_set,
)
from .perm import Perm, PermGroup, _field_of_order, psl28_degree28, semilinear_perm, translation_perms

SUPPORTED_TABLES = {
    "Q8": (5, 7, 11, 23),
    "SL23": (5, 7, 11, 23),
    "SL25": (9, 19, 29, 59),
}


# -- the factorisation object -----------------------------------------------------
@dataclass
class Factorisation:
    n: int
    parts: list[np.ndarray]
    m_group: PermGroup | None = None
    g_group: PermGroup | None = None
    label: str = ""
    field: FieldSpec | None = None
    connection_sets: list[np.ndarray] | None = None

    def __post_init__(self) -> None:
        self.parts = [_sorted_edges(np.asarray(p, dtype=np.int64).reshape(-1, 2)) for p in self.parts]
        if len(self.parts) < 2:
            raise InvalidParameters("a factorisation needs at least two parts")
        for grp in (self.m_group, self.g_group):
            if grp is not None and grp.degree != self.n:
                raise InvalidParameters("attached group acts on the wrong number of points")

    @property
    def k(self) -> int:
        return len(self.parts)

    def factor(self, i: int) -> Graph:
        adj = np.zeros((self.n, self.n), dtype=bool)
        e = self.parts[i]
        adj[e[:, 0], e[:, 1]] = True
        adj[e[:, 1], e[:, 0]] = True
        return Graph(adj, f"{self.label}[{i + 1}]", check=False)

    def factors(self) -> list[Graph]:
        return [self.factor(i) for i in range(self.k)]

    def part_labels(self) -> np.ndarray:
        """n x n matrix with the part index of each edge (-1 off the partition)."""
        L = np.full((self.n, self.n), -1, dtype=np.int32)
        for i, e in enumerate(self.parts):
            L[e[:, 0], e[:, 1]] = i
            L[e[:, 1], e[:, 0]] = i
        return L

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        for i, e in enumerate(self.parts):
            lines.append(f"part {i + 1} {len(e)}")
            lines.extend(f"{u} {v}" for u, v in e.tolist())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "") -> Factorisation:
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        try:
            n, k = (int(x) for x in rows[0])
            parts = []
            pos = 1
            for i in range(k):
                tag, idx, m = rows[pos]
                if tag != "part" or int(idx) != i + 1:
                    raise ParseError(f"expected 'part {i + 1} m', got {' '.join(rows[pos])!r}")
                m = int(m)
                edges = [(int(a), int(b)) for a, b in rows[pos + 1 : pos + 1 + m]]
                if len(edges) != m:
                    raise ParseError(f"part {i + 1} promises {m} edges, found {len(edges)}")
                parts.append(edges)
                pos += 1 + m
            if pos != len(rows):
                raise ParseError("trailing lines after the last part")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed factorisation file: {exc}") from exc
        for edges in parts:
            if any(not (0 <= a < n and 0 <= b < n) or a == b for a, b in edges):
                raise ParseError("edge endpoint out of range or loop")
        try:
            return cls(n, [np.array(e, dtype=np.int64).reshape(-1, 2) for e in parts], label=label)
        except InvalidParameters as exc:
            raise ParseError(str(exc)) from exc


def _sorted_edges(e: np.ndarray) -> np.ndarray:
    if e.size == 0:
        return e.reshape(0, 2)
    e = np.sort(e, axis=1)
    order = np.lexsort((e[:, 1], e[:, 0]))
    return e[order]


def gens_to_text(group: PermGroup) -> str:
    lines = [f"{group.degree} {len(group.generators)}"]
    lines.extend(" ".join(map(str, g.images.tolist())) for g in group.generators)
    return "\n".join(lines) + "\n"


def gens_from_text(text: str) -> PermGroup:
    """Parse a generator file: header "degree g", then g lines of images."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n, g = (int(x) for x in rows[0])
        gens = [Perm([int(x) for x in row]) for row in rows[1 : 1 + g]]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed generator file: {exc}") from exc
    if len(gens) != g or len(rows) != g + 1 or any(x.degree != n for x in gens):
        raise ParseError("generator file does not match its header")
    return PermGroup(gens, degree=n)


# -- Cayley-form builders -----------------------------------------------------------
@lru_cache(maxsize=16)
def _difference_table(p: int, R: int) -> np.ndarray:
    """D[x, y] = y - x as field indices."""
    F = make_field(p, R)
    xs = np.arange(F.q)
    return np.stack([F.add_vec(xs, F.neg(x)) for x in range(F.q)])


def cayley_parts(
    F: FieldSpec,
    sets: Sequence[Iterable[int]],
    m_group: PermGroup | None,
    g_group: PermGroup | None,
    label: str,
) -> Factorisation:
    """Factorisation whose i-th part is the edge set of Cay(F, sets[i])."""
    part_of = np.full(F.q, -1, dtype=np.int64)
    conn = []
    for i, S in enumerate(sets):
        S = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
        if S.size == 0 or np.any(S == 0) or np.any(part_of[S] >= 0):
            raise InvalidParameters("connection sets must be nonempty, avoid 0 and be disjoint")
        part_of[S] = i
        conn.append(S)
    D = _difference_table(F.p, F.R)
    lab = part_of[D]
    iu, ju = np.triu_indices(F.q, 1)
    lab_u = lab[iu, ju]
    if np.any(lab_u < 0) or np.any(lab[ju, iu] != lab_u):
        raise InvalidParameters("connection sets must cover F* and be closed under negation")
    parts = [np.stack([iu[lab_u == i], ju[lab_u == i]], axis=1) for i in range(len(conn))]
    return Factorisation(F.q, parts, m_group, g_group, label, F, conn)


def affine_group(F: FieldSpec, pairs: Sequence[tuple[int, int]]) -> PermGroup:
    """T semidirect <x -> x^(p^j) w^i : (i, j) in pairs> on the field indices."""
    gens = translation_perms(F) + [semilinear_perm(F, i, j) for i, j in pairs]
    return PermGroup(gens)


def gpaley_partition(p: int, R: int, k: int) -> Factorisation:
    F = check_gpaley_parameters(p, R, k)
    S = gpaley_connection_set(p, R, k)
    sets = [F.mul_vec(S, F.omega_pow(i)) for i in range(k)]
    M = affine_group(F, [(k, 0)])
    G = affine_group(F, [(1, 0)])
    return cayley_parts(F, sets, M, G, f"gpaley-partition({p},{R},{k})")


def tgpaley_partition(p: int, R: int, h: int) -> Factorisation:
    F = check_tgpaley_parameters(p, R, h)
    S = tgpaley_connection_set(p, R, h)
    q1 = F.q - 1
    sets = [F.mul_vec(S, F.omega_pow(2 * i)) for i in range(2 * h)]
    # x -> (x w^h)^p maps the exponent classes {0, 3h} mod 4h onto themselves
    M = affine_group(F, [(4 * h, 0), ((h * p) % q1, 1)])
    G = affine_group(F, [(2, 0), (p % q1, 1)])
    return cayley_parts(F, sets, M, G, f"tgpaley-partition({p},{R},{h})")


def psl28_factorisation() -> Factorisation:
    M = psl28_degree28()
    parts = []
    for orb in M.orbitals():
        pairs = M.orbital_members(orb.representative)
        parts.append(pairs[pairs[:, 0] < pairs[:, 1]])
    return Factorisation(28, parts, M, None, "psl28")


# -- verification ---------------------------------------------------------------------
FLAG_NAMES = (
    "is_partition",
    "factors_isomorphic",
    "m_fixes_parts",
    "m_vertex_transitive",
    "m_edge_transitive_each",
    "m_arc_transitive_each",
    "g_preserves_partition",
    "g_transitive_on_parts",
    "g_two_homogeneous",
)


@dataclass
class VerificationReport:
    """Flags are True, False or None (skipped because a group is missing)."""

    flags: dict[str, bool | None]
    valencies: list[int | None]
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.flags.values())

    @property
    def all_true(self) -> bool:
        return all(v is True for v in self.flags.values())

    def __getattr__(self, name: str):
        flags = self.__dict__.get("flags", {})
        if name in flags:
            return flags[name]
        raise AttributeError(name)

    def to_json(self) -> dict:
        return {
            "flags": {k: ("skipped" if v is None else v) for k, v in self.flags.items()},
            "valencies": self.valencies,
            "witnesses": _jsonable(self.witnesses),
            "ok": self.ok,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _part_action(L: np.ndarray, parts: list[np.ndarray], g: Perm) -> list[int] | None:
    """Image index of each part under ``g``, or None if some part is split."""
    img = []
    for e in parts:
        labs = L[g.images[e[:, 0]], g.images[e[:, 1]]]
        if labs.size == 0 or np.any(labs != labs[0]) or labs[0] < 0:
            return None
        img.append(int(labs[0]))
    return img


def verify_factorisation(f: Factorisation, iso_cap: int = iso.DEFAULT_ISO_CAP) -> VerificationReport:
    n, k = f.n, f.k
    flags: dict[str, bool | None] = dict.fromkeys(FLAG_NAMES)
    wit: dict[str, object] = {}
    L = f.part_labels()
    counts = np.zeros((n, n), dtype=np.int32)
    for e in f.parts:
        np.add.at(counts, (e[:, 0], e[:, 1]), 1)
    iu, ju = np.triu_indices(n, 1)
    cover = counts[iu, ju]
    flags["is_partition"] = bool(np.all(cover == 1)) and sum(len(e) for e in f.parts) == n * (n - 1) // 2
    if not flags["is_partition"]:
        bad = np.flatnonzero(cover != 1)
        if bad.size:
            wit["is_partition"] = {"pair": [int(iu[bad[0]]), int(ju[bad[0]])], "covered": int(cover[bad[0]])}
    factors = f.factors()
    valencies = [g.valency() for g in factors]

    # G: action on parts, and explicit witnesses part 0 -> part i
    carriers: dict[int, Perm] = {}
    if f.g_group is not None:
        actions = [_part_action(L, f.parts, g) for g in f.g_group.generators]
        flags["g_preserves_partition"] = all(a is not None and sorted(a) == list(range(k)) for a in actions)
        if flags["g_preserves_partition"]:
            carriers = {0: Perm.identity(n)}
            queue = [0]
            while queue:
                i = queue.pop(0)
                for g, act in zip(f.g_group.generators, actions):
                    j = act[i]
                    if j not in carriers:
                        carriers[j] = carriers[i] * g
                        queue.append(j)
            flags["g_transitive_on_parts"] = len(carriers) == k
        else:
            flags["g_transitive_on_parts"] = False
            wit["g_preserves_partition"] = {
                "generator": next(i for i, a in enumerate(actions) if a is None or sorted(a) != list(range(k)))
            }
        flags["g_two_homogeneous"] = f.g_group.is_2_homogeneous()

    # pairwise isomorphism of factors
    if len(carriers) == k:
        flags["factors_isomorphic"] = all(
            iso.check_isomorphism(factors[0], factors[i], carriers[i]) for i in range(1, k)
        )
        wit["isomorphism_method"] = "group witnesses"
    if flags["factors_isomorphic"] is not True:
        try:
            flags["factors_isomorphic"] = True
            for i in range(1, k):
                same, _ = iso.are_isomorphic(factors[0], factors[i], cap=iso_cap)
                if not same:
                    flags["factors_isomorphic"] = False
                    wit["factors_isomorphic"] = {"non_isomorphic_to_first": i}
                    break
            wit["isomorphism_method"] = "canonical forms"
        except CapExceeded as exc:
            flags["factors_isomorphic"] = None
            wit["factors_isomorphic"] = f"skipped: {exc}"

    if f.m_group is not None:
        M = f.m_group
        fixes = True
        for gi, g in enumerate(M.generators):
            if not np.array_equal(L[np.ix_(g.images, g.images)], L):
                fixes = False
                wit["m_fixes_parts"] = {"generator": gi}
                break
        flags["m_fixes_parts"] = fixes
        flags["m_vertex_transitive"] = M.is_transitive()
        arcs = M._pair_labels(unordered=False)
        edges = M._pair_labels(unordered=True)
        arc_ok = edge_ok = True
        for i, e in enumerate(f.parts):
            fw, bw = e[:, 0] * n + e[:, 1], e[:, 1] * n + e[:, 0]
            a = np.concatenate([arcs[fw], arcs[bw]])
            if np.any(a != a[0]):
                arc_ok = False
                wit.setdefault("m_arc_transitive_each", {"part": i})
            if np.any(edges[fw] != edges[fw][0]):
                edge_ok = False
                wit.setdefault("m_edge_transitive_each", {"part": i})
        flags["m_arc_transitive_each"] = arc_ok
        flags["m_edge_transitive_each"] = edge_ok
    return VerificationReport(flags, valencies, wit)


# -- transitivity classification and negation -----------------------------------------
def classify_transitivity(F: FieldSpec, S: Iterable[int], M0: PermGroup) -> str:
    """'arc', 'edge_not_arc' or 'neither' for Cay(F, S) with vertex stabiliser M0."""
    S = np.unique(np.asarray(list(S), dtype=np.int64))
    if any(int(g.images[0]) != 0 for g in M0.generators):
        raise InvalidParameters("M0 must fix 0")
    inS = np.zeros(F.q, dtype=bool)
    inS[S] = True
    if any(not np.all(inS[g.images[S]]) for g in M0.generators):
        raise InvalidParameters("M0 does not preserve S")
    orbits = M0.orbits(S)
    if len(orbits) == 1:
        return "arc"
    if len(orbits) == 2:
        D, E = (set(o.tolist()) for o in orbits)
        negD = {F.neg(x) for x in D}
        if negD == E and D != negD:
            assert F.q % 2 == 1, "an edge- but not arc-transitive Cayley graph needs odd order"
            return "edge_not_arc"
    return "neither"


def negation_perm(F: FieldSpec) -> Perm:
    return Perm(F.neg_vec(np.arange(F.q)), check=False)


def extend_by_negation(f: Factorisation) -> Factorisation:
    """Adjoin ``x -> -x`` to both attached groups."""
    F = f.field
    if F is None or f.m_group is None or f.g_group is None:
        raise InvalidParameters("negation extension needs a field vertex set and both groups")
    if F.p == 2:
        raise InvalidParameters("negation is trivial in characteristic 2")
    phi = negation_perm(F)
    for g in f.g_group.generators:
        # phi is central in the linear part and inverts translations
        c = g.conjugate(phi)
        if c != g and c != g.inverse():
            raise InvalidParameters("negation does not normalise G")
    L = f.part_labels()
    if not np.array_equal(L[np.ix_(phi.images, phi.images)], L):
        raise InvalidParameters("negation does not preserve every part")
    M = PermGroup(f.m_group.generators + [phi])
    G = PermGroup(f.g_group.generators + [phi])
    return Factorisation(f.n, f.parts, M, G, f"{f.label}+neg", F, f.connection_sets)


# -- cyclotomic schemes ----------------------------------------------------------------
@dataclass
class SchemeReport:
    p: int
    R: int
    k: int
    classes: list[Graph]
    is_partition: bool
    symmetric: bool
    intersection_numbers: np.ndarray  # [i, j, h] over classes 0..k (0 = diagonal)
    intersection_constant: bool
    pairwise_isomorphic: bool
    primitive: bool
    criterion: bool

    @property
    def ok(self) -> bool:
        return (
            self.is_partition
            and self.symmetric
            and self.intersection_constant
            and self.pairwise_isomorphic
            and self.primitive == self.criterion
        )

    def to_json(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("classes", "intersection_numbers")}
        d["intersection_numbers"] = self.intersection_numbers.tolist()
        return d


def cyclotomic_scheme(p: int, R: int, k: int) -> SchemeReport:
    F = make_field(p, R)
    q1 = F.q - 1
    if k < 1 or q1 % k:
        raise InvalidParameters(f"k = {k} does not divide p^R - 1 = {q1}")
    if p != 2 and (q1 // k) % 2:
        raise InvalidParameters(f"parity: (q-1)/k = {q1 // k} must be even for odd p")
    cls = np.zeros(F.q, dtype=np.int64)
    cls[1:] = F.log_table[1:] % k + 1
    D = _difference_table(p, R)
    C = cls[D]  # class index of (x, y), 0 on the diagonal
    mats = [C == i for i in range(k + 1)]
    classes = [Graph(mats[i], f"cyc({p},{R},{k})[{i}]", check=False) for i in range(1, k + 1)]
    is_partition = bool(np.array_equal(np.sum(mats, axis=0), np.ones_like(C)))
    symmetric = bool(np.array_equal(C, C.T))
    P = np.zeros((k + 1, k + 1, k + 1), dtype=np.int64)
    constant = True
    ints = [m.astype(np.int64) for m in mats]
    for i in range(k + 1):
        for j in range(k + 1):
            prod = ints[i] @ ints[j]
            for h in range(k + 1):
                vals = prod[mats[h]]
                if vals.size and np.any(vals != vals[0]):
                    constant = False
                P[i, j, h] = vals[0] if vals.size else 0
    # x -> w x carries class i to class i + 1
    shift = Perm(F.mul_vec(np.arange(F.q), F.omega), check=False)
    pairwise = all(
        iso.check_isomorphism(classes[i], classes[(i + 1) % k], shift) for i in range(k)
    )
    primitive = all(g.is_connected() for g in classes)
    criterion = gpaley_connectivity_criterion(p, R, k)
    return SchemeReport(p, R, k, classes, is_partition, symmetric, P, constant, pairwise, primitive, criterion)


# -- two-dimensional table rows ---------------------------------------------------------
@dataclass
class TableRow:
    q: int
    base: str
    m0_order: int
    k: int
    s_size: int
    m0_generators: list[Elem]
    connection_set: np.ndarray
    ops: Mat2 = field(repr=False)

    def m0_perm_group(self) -> PermGroup:
        return PermGroup([self.ops.to_perm(g) for g in self.m0_generators])

    def orbital_graph(self) -> Graph:
        """Cay(F_q^2, S) where S is the M0-orbit of the vector (0, 1)."""
        F = self.ops.F
        q = F.q
        D = _difference_table(F.p, F.R)
        idx = np.arange(q * q)
        u, v = idx // q, idx % q
        diff = D[u[:, None], u[None, :]] * q + D[v[:, None], v[None, :]]
        inS = np.zeros(q * q, dtype=bool)
        inS[self.connection_set] = True
        return Graph(inS[diff], f"G({q}^2,{self.k})", check=False)

    def to_json(self) -> dict:
        return {"q": self.q, "base": self.base, "m0_order": self.m0_order, "k": self.k, "s_size": self.s_size}


def _subgroups_of_small_group(mul: np.ndarray) -> list[frozenset[int]]:
    """All subgroups of a group given by its multiplication table (identity 0)."""
    m = mul.shape[0]

    def gen(elems: Iterable[int]) -> frozenset[int]:
        out = {0}
        frontier = [0]
        gens = [g for g in set(elems) if g]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = int(mul[x, g])
                if y not in out:
                    out.add(y)
                    frontier.append(y)
        return frozenset(out)

    subs = {gen([g]) for g in range(m)}
    frontier = list(subs)
    cyclic = list(subs)
    while frontier:
        new = []
        for A in frontier:
            for C in cyclic:
                if C <= A:
                    continue
                J = gen(A | C)
                if J not in subs:
                    subs.add(J)
                    new.append(J)
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def twodim_table_rows(q: int, base: str, closure_cap: int = 1 << 20) -> list[TableRow]:
    """Candidate M0 above ``base`` inside the normaliser of a binary polyhedral group.

    ``base`` is "Q8" or "SL23" (with H = SL(2,3)) or "SL25" (with H = SL(2,5)).
    G0 is the normaliser of H in GL(2,q), or in the semilinear group when q is
    not prime.  A subgroup M0 of G0 containing the base survives when it is
    intransitive and non-cyclic on the nonzero vectors, its normaliser in G0 is
    transitive on them, and that normaliser contains a copy of H.  One M0 is
    kept per G0-conjugacy class; rows are sorted by |M0|.
    """
    base = base.upper().replace("(", "").replace(")", "").replace(",", "")
    if base not in SUPPORTED_TABLES:
        raise InvalidParameters(f"unknown base {base!r}; choose Q8, SL23 or SL25")
    if q not in SUPPORTED_TABLES[base]:
        raise InvalidParameters(f"(q, base) = ({q}, {base}) is not a table case")
    F = _field_of_order(q)
    ops = Mat2(F, semilinear=F.R > 1)
    which = "SL25" if base == "SL25" else "SL23"
    h_gens, h_elems = find_binary_polyhedral(ops, which)
    if base == "Q8":
        b_elems = [g for g in h_elems if ops.order(g) in (1, 2, 4)]
        i = next(g for g in b_elems if ops.order(g) == 4)
        cyc = set(ops.closure([i]))
        b_gens = [i, next(g for g in b_elems if g not in cyc)]
    else:
        b_elems, b_gens = h_elems, h_gens
    G0 = ops.normaliser(h_elems, h_gens)
    if len(G0) > closure_cap:
        raise CapExceeded("normaliser exceeds the closure cap")

    # quotient G0 / B
    bset = set(b_elems)
    coset: dict[Elem, int] = {}
    reps: list[Elem] = []
    for g in [ops.identity] + G0:
        if g in coset:
            continue
        cid = len(reps)
        reps.append(g)
        for b in b_elems:
            coset[ops.mul(g, b)] = cid
    if len(coset) != len(G0):
        raise InvalidParameters("base is not normal in the normaliser")
    m = len(reps)
    qmul = np.array([[coset[ops.mul(a, b)] for b in reps] for a in reps], dtype=np.int64)
    qinv = [int(np.flatnonzero(qmul[a] == 0)[0]) for a in range(m)]

    def lift_gens(K: Iterable[int]) -> list[Elem]:
        return list(b_gens) + [reps[x] for x in sorted(K) if x]

    def normaliser_in_quotient(K: frozenset[int]) -> frozenset[int]:
        return frozenset(
            g for g in range(m) if all(qmul[qmul[qinv[g], x], g] in K for x in K)
        )

    def perm_group(gens: list[Elem]) -> PermGroup:
        return PermGroup([ops.to_perm(g) for g in gens])

    # H as a subgroup of the quotient
    h_image = frozenset(coset[h] for h in h_elems)
    subgroups = _subgroups_of_small_group(qmul)
    nonzero = range(1, q * q)
    seen_classes: set[frozenset[int]] = set()
    rows: list[TableRow] = []
    for K in subgroups:
        if K in seen_classes:
            continue
        conj_class = {frozenset(int(qmul[qmul[qinv[g], x], g]) for x in K) for g in range(m)}
        seen_classes |= conj_class
        gens = lift_gens(K)
        M0 = perm_group(gens)
        orbits = M0.orbits(nonzero)
        if len(orbits) < 2:
            continue
        order = len(K) * len(b_elems)
        if _is_cyclic(ops, gens, order, closure_cap):
            continue
        NK = normaliser_in_quotient(K)
        N = perm_group(lift_gens(NK))
        if not N.is_transitive(nonzero):
            continue
        if not (h_image <= NK or _contains_copy(ops, NK, reps, b_gens, h_elems, which, m, qmul)):
            continue
        S = next(o for o in orbits if 1 in o.tolist())
        rows.append(TableRow(q, base, order, len(orbits), len(S), gens, S, ops))
    rows.sort(key=lambda r: (r.m0_order, r.k))
    return rows


def _is_cyclic(ops: Mat2, gens: list[Elem], order: int, cap: int) -> bool:
    for g in ops.closure(gens, cap=cap):
        if ops.order(g) == order:
            return True
    return False


def _contains_copy(ops, NK, reps, b_gens, h_elems, which, m, qmul) -> bool:
    """Search N for a copy of H among subgroups <B, x> with x a coset representative."""
    target = len(h_elems)
    want = sorted(ops.order(h) for h in h_elems)
    for x in sorted(NK):
        if not x:
            continue
        try:
            elems = ops.closure(list(b_gens) + [reps[x]], cap=target)
        except CapExceeded:
            continue
        if len(elems) == target and sorted(ops.order(g) for g in elems) == want:
            return True
    return False
