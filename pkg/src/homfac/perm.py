"""Permutations, small materialised permutation groups and their actions.

Permutations act on the right: ``i^(gh) = (i^g)^h``, so the product ``g * h``
applies ``g`` first.  Groups are stored as generator lists and are closed
into explicit element lists on demand (insertion order of a breadth-first
sweep, which keeps every search reproducible).  Orbit computations never need
the elements: they run as connected-component sweeps over generator images.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, InvalidParameters
from .ffield import FieldSpec, make_field

DEFAULT_CLOSURE_CAP = 10**6
DEFAULT_ISO_GROUP_CAP = 512


class Perm:
    """An immutable permutation of ``{0, ..., n-1}`` given by its image array."""

    __slots__ = ("images", "_key")

    def __init__(self, images: Sequence[int] | np.ndarray, check: bool = True) -> None:
        arr = np.asarray(images, dtype=np.int32)
        if check:
            if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
                raise InvalidParameters("images do not form a permutation")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.images = arr
        self._key = arr.tobytes()

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(np.arange(n, dtype=np.int32), check=False)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Perm:
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return int(self.images.size)

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def __mul__(self, other: Perm) -> Perm:
        return Perm(other.images[self.images], check=False)

    def __invert__(self) -> Perm:
        return self.inverse()

    def inverse(self) -> Perm:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.images.size, dtype=np.int32)
        return Perm(inv, check=False)

    def __pow__(self, e: int) -> Perm:
        if e < 0:
            return self.inverse() ** (-e)
        result = Perm.identity(self.degree)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @property
    def key(self) -> bytes:
        return self._key

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = int(self.images[start])
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = int(self.images[j])
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self) -> int:
        return math.lcm(*self.cycle_type()) if self.degree else 1

    def fixed_points(self) -> np.ndarray:
        return np.flatnonzero(self.images == np.arange(self.degree))

    def conjugate(self, by: Perm) -> Perm:
        """Return ``by^-1 * self * by``."""
        return by.inverse() * self * by

    def __repr__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        return "Perm(" + ("".join(str(c) for c in cyc) or "()") + f", n={self.degree})"


def closure(generators: Sequence[Perm], cap: int = DEFAULT_CLOSURE_CAP) -> list[Perm]:
    """Breadth-first closure of ``generators`` under right multiplication.

    The identity is listed first; the remaining elements appear in the order
    they are discovered.  Raises CapExceeded once more than ``cap`` elements
    have been produced.
    """
    if not generators:
        raise InvalidParameters("closure needs at least one generator")
    n = generators[0].degree
    if any(g.degree != n for g in generators):
        raise InvalidParameters("generators have different degrees")
    ident = Perm.identity(n)
    seen = {ident.key}
    elements = [ident]
    queue = deque([ident])
    gens = [g.images for g in generators]
    while queue:
        x = queue.popleft()
        for g in gens:
            y_images = g[x.images]
            key = y_images.tobytes()
            if key not in seen:
                if len(elements) >= cap:
                    raise CapExceeded(f"group order exceeds closure cap {cap}")
                seen.add(key)
                y = Perm(y_images, check=False)
                elements.append(y)
                queue.append(y)
    return elements


def _components(n: int, sources: np.ndarray, targets: np.ndarray) -> tuple[int, np.ndarray]:
    graph = coo_matrix((np.ones(len(sources), dtype=np.int8), (sources, targets)), shape=(n, n))
    return connected_components(graph, directed=True, connection="weak")


def _label_partition(labels: np.ndarray, domain: np.ndarray | None = None) -> list[np.ndarray]:
    """Group positions by label; blocks sorted internally and by first member."""
    idx = np.arange(labels.size) if domain is None else np.asarray(domain)
    labs = labels[idx]
    order = np.lexsort((idx, labs))
    idx, labs = idx[order], labs[order]
    cuts = np.flatnonzero(np.diff(labs)) + 1
    blocks = np.split(idx, cuts)
    return sorted(blocks, key=lambda b: int(b[0]))


@dataclass(frozen=True)
class Orbital:
    """One orbit of a group on ordered pairs."""

    representative: tuple[int, int]
    size: int
    self_paired: bool
    paired_with: int


class PermGroup:
    """A permutation group given by generators, materialised lazily."""

    def __init__(
        self,
        generators: Sequence[Perm],
        degree: int | None = None,
        elements: Sequence[Perm] | None = None,
        order: int | None = None,
        cap: int = DEFAULT_CLOSURE_CAP,
    ) -> None:
        gens = list(generators)
        if degree is None:
            if not gens:
                raise InvalidParameters("degree needed for a group without generators")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise InvalidParameters("all generators must have the group's degree")
        self.degree = degree
        self.generators = gens
        self.cap = cap
        self._elements = list(elements) if elements is not None else None
        self._order = order if order is not None else (len(elements) if elements is not None else None)

    # -- materialisation ---------------------------------------------------
    @property
    def elements(self) -> list[Perm]:
        if self._elements is None:
            gens = self.generators or [Perm.identity(self.degree)]
            self._elements = closure(gens, self.cap)
            self._order = len(self._elements)
        return self._elements

    @property
    def is_materialised(self) -> bool:
        return self._elements is not None

    @cached_property
    def _element_keys(self) -> frozenset[bytes]:
        return frozenset(g.key for g in self.elements)

    @property
    def order(self) -> int:
        if self._order is None:
            _ = self.elements
        assert self._order is not None
        return self._order

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g: Perm) -> bool:
        return g.key in self._element_keys

    def element_set(self) -> frozenset[bytes]:
        return self._element_keys

    # -- orbits ------------------------------------------------------------
    @cached_property
    def _orbit_labels(self) -> np.ndarray:
        n = self.degree
        if not self.generators:
            return np.arange(n)
        src = np.tile(np.arange(n), len(self.generators))
        dst = np.concatenate([g.images for g in self.generators])
        return _components(n, src, dst)[1]

    def orbits(self, domain: Iterable[int] | None = None) -> list[np.ndarray]:
        """Orbits meeting ``domain`` (default: all points), each sorted.

        ``domain`` must be a union of orbits for the result to be a partition of it.
        """
        dom = None if domain is None else np.fromiter(domain, dtype=np.int64)
        return _label_partition(self._orbit_labels, dom)

    def orbit(self, point: int) -> np.ndarray:
        lab = self._orbit_labels
        return np.flatnonzero(lab == lab[point])

    def is_transitive(self, domain: Iterable[int] | None = None) -> bool:
        return len(self.orbits(domain)) == 1

    def _pair_labels(self, unordered: bool) -> np.ndarray:
        n = self.degree
        idx = np.arange(n * n)
        a, b = idx // n, idx % n
        src_parts, dst_parts = [], []
        for g in self.generators:
            ga, gb = g.images[a], g.images[b]
            src_parts.append(idx)
            dst_parts.append(ga * n + gb)
        if unordered:
            src_parts.append(idx)
            dst_parts.append(b * n + a)
        if not src_parts:
            return idx
        return _components(n * n, np.concatenate(src_parts), np.concatenate(dst_parts))[1]

    def orbitals(self, include_diagonal: bool = False) -> list[Orbital]:
        """Orbits on ordered pairs, ordered by representative pair.

        The diagonal orbitals are omitted unless ``include_diagonal`` is set.
        """
        n = self.degree
        labels = self._pair_labels(unordered=False)
        reps: dict[int, int] = {}
        sizes: dict[int, int] = {}
        for pos, lab in enumerate(labels.tolist()):
            if lab not in reps:
                reps[lab] = pos
                sizes[lab] = 0
            sizes[lab] += 1
        ordered = sorted(reps, key=lambda lab: reps[lab])
        index_of = {lab: i for i, lab in enumerate(ordered)}
        out = []
        for lab in ordered:
            a, b = divmod(reps[lab], n)
            rev = labels[b * n + a]
            if a == b and not include_diagonal:
                continue
            out.append(Orbital((a, b), sizes[lab], bool(rev == lab), index_of[int(rev)]))
        if not include_diagonal:
            # re-index pairing pointers after dropping diagonal orbitals
            kept = [i for i, lab in enumerate(ordered) if reps[lab] // n != reps[lab] % n]
            remap = {old: new for new, old in enumerate(kept)}
            out = [Orbital(o.representative, o.size, o.self_paired, remap[o.paired_with]) for o in out]
        return out

    def orbital_members(self, pair: tuple[int, int]) -> np.ndarray:
        """All ordered pairs (as an (m, 2) array) in the orbital of ``pair``."""
        n = self.degree
        labels = self._pair_labels(unordered=False)
        pos = np.flatnonzero(labels == labels[pair[0] * n + pair[1]])
        return np.stack([pos // n, pos % n], axis=1)

    def is_2_homogeneous(self) -> bool:
        n = self.degree
        if n < 2:
            return True
        labels = self._pair_labels(unordered=True)
        idx = np.arange(n * n)
        off = labels[(idx // n) != (idx % n)]
        return bool(np.all(off == off[0]))

    def is_2_transitive(self) -> bool:
        return len(self.orbitals()) == 1

    def is_semiregular(self, domain: Iterable[int] | None = None) -> bool:
        """Every orbit meeting ``domain`` has length |G| (trivial point stabilisers)."""
        return all(len(o) == self.order for o in self.orbits(domain))

    def is_regular(self) -> bool:
        return self.is_transitive() and self.order == self.degree

    # -- subgroups -----------------------------------------------------------
    def stabilizer(self, point: int) -> PermGroup:
        elems = [g for g in self.elements if g.images[point] == point]
        return PermGroup(small_generating_set(elems), degree=self.degree, elements=elems)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and all(g in other for g in self.generators)

    def normalizes(self, sub: PermGroup) -> bool:
        """True when every generator of self conjugates ``sub`` into itself."""
        return all(h.conjugate(g) in sub for g in self.generators for h in sub.generators)

    def element_orders(self) -> list[int]:
        return [g.order() for g in self.elements]

    def __repr__(self) -> str:
        order = self._order if self._order is not None else "?"
        return f"PermGroup(degree={self.degree}, gens={len(self.generators)}, order={order})"


def small_generating_set(elements: Sequence[Perm]) -> list[Perm]:
    """Greedy generating set for the group formed by ``elements``."""
    if not elements:
        return []
    gens: list[Perm] = []
    covered = {elements[0].key} if elements[0].is_identity() else set()
    target = len(elements)
    for g in elements:
        if len(covered) == target:
            break
        if g.key in covered or g.is_identity():
            continue
        gens.append(g)
        covered = {h.key for h in closure(gens, cap=target + 1)}
    return gens


def coset_action(G: PermGroup, H: PermGroup) -> PermGroup:
    """Action of ``G`` on the right cosets of ``H`` (coset 0 is ``H`` itself)."""
    if not all(h in G for h in H.generators):
        raise InvalidParameters("H is not a subgroup of G")
    coset_of: dict[bytes, int] = {}
    reps: list[Perm] = []
    for g in G.elements:
        if g.key in coset_of:
            continue
        cid = len(reps)
        reps.append(g)
        for h in H.elements:
            coset_of[(h * g).key] = cid
    m = len(reps)
    gens = []
    for x in G.generators:
        gens.append(Perm([coset_of[(r * x).key] for r in reps]))
    return PermGroup(gens, degree=m)


def orbit_union_find(n: int, generators: Sequence[np.ndarray]) -> np.ndarray:
    """Component labels of {0..n-1} under arbitrary image arrays."""
    if not generators:
        return np.arange(n)
    src = np.tile(np.arange(n), len(generators))
    dst = np.concatenate([np.asarray(g) for g in generators])
    return _components(n, src, dst)[1]


# -- field-derived permutations ---------------------------------------------
def semilinear_perm(field: FieldSpec, i: int, j: int) -> Perm:
    """Permutation ``x -> x^(p^j) * omega^i`` of the field indices."""
    xs = np.arange(field.q)
    imgs = field.mul_vec(field.frobenius_vec(xs, j), field.omega_pow(i))
    return Perm(imgs, check=False)


def translation_perms(field: FieldSpec) -> list[Perm]:
    """Translations by the basis elements ``p^i`` (i < R)."""
    xs = np.arange(field.q)
    return [Perm(field.add_vec(xs, field.p**i), check=False) for i in range(field.R)]


def vector_translation_perms(field: FieldSpec, dim: int = 2) -> list[Perm]:
    """Translations of F_q^dim (row-major vertex indices) by an F_p-basis."""
    q = field.q
    n = q**dim
    idx = np.arange(n)
    coords = [(idx // q ** (dim - 1 - c)) % q for c in range(dim)]
    gens = []
    for c in range(dim):
        for i in range(field.R):
            new = [field.add_vec(coords[c2], field.p**i) if c2 == c else coords[c2] for c2 in range(dim)]
            img = sum(new[c2] * q ** (dim - 1 - c2) for c2 in range(dim))
            gens.append(Perm(img, check=False))
    return gens


def gl2_perm(field: FieldSpec, matrix: Sequence[Sequence[int]], frob: int = 0) -> Perm:
    """Semilinear action ``(u, v) -> (u^s, v^s) M`` on row vectors of F_q^2.

    ``s`` is the Frobenius power ``p^frob``.  Vertex ``(u, v)`` has index
    ``u * q + v``.
    """
    (a, b), (c, d) = matrix
    F = field
    det = F.sub(F.mul(a, d), F.mul(b, c))
    if det == 0:
        raise InvalidParameters("singular matrix")
    q = F.q
    idx = np.arange(q * q)
    u, v = F.frobenius_vec(idx // q, frob), F.frobenius_vec(idx % q, frob)
    nu = F.add_vec(F.mul_vec(u, a), F.mul_vec(v, c))
    nv = F.add_vec(F.mul_vec(u, b), F.mul_vec(v, d))
    return Perm(nu * q + nv, check=False)


# -- abstract isomorphism by generator images ---------------------------------
def _two_generators(G: PermGroup) -> list[Perm] | None:
    elems = sorted(G.elements, key=lambda g: -g.order())
    n = G.order
    for i, a in enumerate(elems):
        for b in elems[i + 1 :]:
            if len(closure([a, b], cap=n + 1)) == n:
                return [a, b]
    return None


def _generating_tuple(G: PermGroup) -> list[Perm]:
    if G.order == 1:
        return [Perm.identity(G.degree)]
    cyc = next((g for g in G.elements if g.order() == G.order), None)
    if cyc is not None:
        return [cyc]
    return _two_generators(G) or small_generating_set(G.elements)


def _extends_to_isomorphism(G: PermGroup, gens: list[Perm], images: list[Perm]) -> bool:
    ident = Perm.identity(G.degree)
    target_id = Perm.identity(images[0].degree)
    phi = {ident.key: target_id}
    used = {target_id.key}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        fx = phi[x.key]
        for g, img in zip(gens, images):
            y = x * g
            fy = fx * img
            prev = phi.get(y.key)
            if prev is None:
                if fy.key in used:
                    return False
                phi[y.key] = fy
                used.add(fy.key)
                queue.append(y)
            elif prev != fy:
                return False
    return len(phi) == G.order


def group_isomorphic(A: PermGroup, B: PermGroup, cap: int = DEFAULT_ISO_GROUP_CAP) -> bool:
    """Exact abstract isomorphism test for small groups."""
    if A.order != B.order:
        return False
    if A.order > cap:
        raise CapExceeded(f"group order {A.order} exceeds isomorphism cap {cap}")
    if sorted(A.element_orders()) != sorted(B.element_orders()):
        return False
    gens = _generating_tuple(A)
    orders = [g.order() for g in gens]
    candidates = [[h for h in B.elements if h.order() == o] for o in orders]
    prod_order = (gens[0] * gens[1]).order() if len(gens) == 2 else None

    def search(prefix: list[Perm]) -> bool:
        depth = len(prefix)
        if depth == len(gens):
            return _extends_to_isomorphism(A, gens, prefix)
        for h in candidates[depth]:
            if depth == 1 and prod_order is not None and (prefix[0] * h).order() != prod_order:
                continue
            if search(prefix + [h]):
                return True
        return False

    return search([])


def find_isomorphic_subgroups(
    ambient: PermGroup,
    pattern: PermGroup,
    limit: int | None = None,
    max_pairs: int | None = None,
) -> list[PermGroup]:
    """Subgroups of ``ambient`` isomorphic to the (at most 2-generated) ``pattern``.

    Element pairs ``(g, h)`` of ``ambient`` whose orders match those of a fixed
    generating pair of ``pattern`` (and whose product order matches too) are
    closed with cap ``|pattern| + 1``; closures of the right order are tested
    for isomorphism and deduplicated by element set.
    """
    if pattern.order > 120:
        raise CapExceeded("pattern groups are limited to order 120")
    gens = _generating_tuple(pattern)
    m = pattern.order
    found: list[PermGroup] = []
    seen: set[frozenset[bytes]] = set()
    elems = ambient.elements
    orders = [g.order() for g in elems]
    want = [g.order() for g in gens]

    def consider(group_gens: list[Perm]) -> bool:
        try:
            elts = closure(group_gens, cap=m)
        except CapExceeded:
            return False
        if len(elts) != m:
            return False
        key = frozenset(g.key for g in elts)
        if key in seen:
            return False
        seen.add(key)
        cand = PermGroup(group_gens, elements=elts)
        if group_isomorphic(cand, pattern):
            found.append(cand)
        return limit is not None and len(found) >= limit

    if len(gens) == 1:
        for g, o in zip(elems, orders):
            if o == want[0] and consider([g]):
                break
        return found
    prod = (gens[0] * gens[1]).order()
    first = [g for g, o in zip(elems, orders) if o == want[0]]
    second = [g for g, o in zip(elems, orders) if o == want[1]]
    pairs = 0
    for g in first:
        for h in second:
            if (g * h).order() != prod:
                continue
            pairs += 1
            if max_pairs is not None and pairs > max_pairs:
                raise CapExceeded("subgroup search exceeded its pair budget")
            if consider([g, h]):
                return found
    return found


# -- concrete groups ------------------------------------------------------------
def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([Perm.identity(1)])
    gens = [Perm.from_cycles(n, [tuple(range(n))]), Perm.from_cycles(n, [(0, 1)])]
    return PermGroup(gens)


def cyclic_group(n: int) -> PermGroup:
    return PermGroup([Perm.from_cycles(n, [tuple(range(n))])] if n > 1 else [Perm.identity(1)])


def quaternion_group() -> PermGroup:
    """Q8 in its right regular representation."""
    # elements: 0=1, 1=-1, 2=i, 3=-i, 4=j, 5=-j, 6=k, 7=-k
    table = {"i": [2, 3, 1, 0, 7, 6, 4, 5], "j": [4, 5, 6, 7, 1, 0, 3, 2]}
    # right multiplication x -> x*i and x -> x*j
    return PermGroup([Perm(table["i"]), Perm(table["j"])])


def dihedral_group(m: int) -> PermGroup:
    """Dihedral group of order 2m on m points."""
    rot = Perm.from_cycles(m, [tuple(range(m))])
    ref = Perm([(-i) % m for i in range(m)])
    return PermGroup([rot, ref])


def gl2_group(q_or_field: int | FieldSpec, special: bool = False) -> PermGroup:
    """GL(2,q) (or SL(2,q)) acting on the q^2 vectors of F_q^2."""
    F = q_or_field if isinstance(q_or_field, FieldSpec) else _field_of_order(q_or_field)
    w = F.omega
    if special:
        gens = [((1, 1), (0, 1)), ((0, 1), (F.neg(1), 0)), ((w, 0), (0, F.inv(w)))]
    else:
        gens = [((w, 0), (0, 1)), ((1, 1), (0, 1)), ((0, 1), (1, 0))]
    return PermGroup([gl2_perm(F, m) for m in gens])


def _field_of_order(q: int) -> FieldSpec:
    from sympy.ntheory import factorint

    fac = factorint(q)
    if len(fac) != 1:
        raise InvalidParameters(f"{q} is not a prime power")
    (p, R), = fac.items()
    return make_field(int(p), int(R))


def psl2_8_projective() -> PermGroup:
    """PSL(2,8) as all 504 Moebius maps of the projective line over F_8.

    Points 0..7 are the field indices and point 8 is infinity.
    """
    F = make_field(2, 3)
    inf = 8
    seen: dict[bytes, Perm] = {}
    for a in range(8):
        for b in range(8):
            for c in range(8):
                for d in range(8):
                    if F.sub(F.mul(a, d), F.mul(b, c)) == 0:
                        continue
                    images = []
                    for x in range(8):
                        den = F.add(F.mul(c, x), d)
                        num = F.add(F.mul(a, x), b)
                        images.append(inf if den == 0 else F.mul(num, F.inv(den)))
                    images.append(inf if c == 0 else F.mul(a, F.inv(c)))
                    g = Perm(images, check=False)
                    seen.setdefault(g.key, g)
    elems = list(seen.values())
    ident = Perm.identity(9)
    elems.sort(key=lambda g: g != ident)
    return PermGroup(small_generating_set(elems), degree=9, elements=elems)


def sylow3_normalizer(G: PermGroup) -> PermGroup:
    """Normaliser of the Sylow 3-subgroup generated by the first element of order 9."""
    g = next(x for x in G.elements if x.order() == 9)
    P = PermGroup([g])
    elems = [x for x in G.elements if g.conjugate(x) in P]
    return PermGroup(small_generating_set(elems), degree=G.degree, elements=elems)


def psl28_degree28() -> PermGroup:
    """PSL(2,8) acting on the 28 cosets of a Sylow 3-normaliser (order 18)."""
    G = psl2_8_projective()
    H = sylow3_normalizer(G)
    return coset_action(G, H)
