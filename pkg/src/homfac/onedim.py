"""Parameter calculus for subgroups of the one-dimensional semilinear group.

A subgroup of ``GammaL(1, p^R)`` in standard form is ``<w^d, w^e a^s>`` where
``w`` is multiplication by omega, ``a`` is the Frobenius map, ``d | p^R-1``,
``s | R``, ``0 <= e < d`` and ``d | e(p^R-1)/(p^s-1)``.

Internally a group element is a pair ``(i, j)`` meaning ``x -> x^(p^j) w^i``,
with ``(i, j)(i', j') = (i p^j' + i', j + j')`` (left factor applied first).
Words compose as mappings, right to left, so ``w^e a^s`` is ``x -> x^(p^s) w^e``,
the pair ``(e, s)``.  With this reading ``(w^e a^s)^m = w^J a^(sm)`` where
``J = e(p^(sm)-1)/(p^s-1)``, which is the identity every criterion below rests on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import CapExceeded, InvalidParameters
from .ffield import DEFAULT_FIELD_CAP, divisors, make_field
from .perm import PermGroup, semilinear_perm, translation_perms

if TYPE_CHECKING:
    from .homfac import Factorisation

Pair = tuple[int, int]

ENUMERATION_CAP = 1 << 16


@dataclass(frozen=True, order=True)
class SLParams:
    d: int
    e: int
    s: int


@dataclass(frozen=True)
class SolutionRow:
    p: int
    R: int
    g0: SLParams
    m0: SLParams
    c: int
    k: int
    orbit_length: int

    @property
    def m0_order(self) -> int:
        return (self.p**self.R - 1) // self.m0.d * (self.R // self.m0.s)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "R": self.R,
            "d": self.g0.d,
            "e": self.g0.e,
            "s": self.g0.s,
            "d1": self.m0.d,
            "e1": self.m0.e,
            "s1": self.m0.s,
            "c": self.c,
            "k": self.k,
            "orbit_length": self.orbit_length,
        }

    @classmethod
    def from_json(cls, data: dict) -> SolutionRow:
        return cls(
            data["p"],
            data["R"],
            SLParams(data["d"], data["e"], data["s"]),
            SLParams(data["d1"], data["e1"], data["s1"]),
            data["c"],
            data["k"],
            data["orbit_length"],
        )


def _as_params(x: SLParams | tuple[int, int, int]) -> SLParams:
    return x if isinstance(x, SLParams) else SLParams(*x)


def _geom(p: int, a: int, s: int) -> int:
    """(p^a - 1)/(p^s - 1) for s | a."""
    return (p**a - 1) // (p**s - 1)


# -- pair arithmetic ----------------------------------------------------------------
def compose(p: int, R: int, x: Pair, y: Pair) -> Pair:
    q1 = p**R - 1
    return ((x[0] * pow(p, y[1], q1) + y[0]) % q1 if q1 > 1 else 0, (x[1] + y[1]) % R)


def pair_closure(p: int, R: int, gens: Iterable[Pair]) -> list[Pair]:
    """Elements of the subgroup generated by ``gens`` (identity first, BFS order)."""
    gens = [(g[0] % max(p**R - 1, 1), g[1] % R) for g in gens]
    ident = (0, 0)
    seen = {ident}
    out = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(p, R, x, g)
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


def word_to_pair(p: int, R: int, e: int, s: int) -> Pair:
    """The pair for the mapping ``w^e a^s``, that is ``x -> x^(p^s) w^e``."""
    q1 = p**R - 1
    return (e % q1 if q1 > 1 else 0, s % R)


def params_generators(p: int, R: int, params: SLParams | tuple[int, int, int]) -> list[Pair]:
    P = _as_params(params)
    q1 = p**R - 1
    return [(P.d % q1 if q1 > 1 else 0, 0), word_to_pair(p, R, P.e, P.s)]


def params_group(p: int, R: int, params: SLParams | tuple[int, int, int]) -> frozenset[Pair]:
    return frozenset(pair_closure(p, R, params_generators(p, R, params)))


def params_order(p: int, R: int, params: SLParams | tuple[int, int, int]) -> int:
    P = _as_params(params)
    return (p**R - 1) // P.d * (R // P.s)


def realize(p: int, R: int, params: SLParams | tuple[int, int, int]) -> PermGroup:
    """The subgroup as permutations of the field indices (fixing 0)."""
    F = make_field(p, R)
    gens = [semilinear_perm(F, i, j) for i, j in params_generators(p, R, params)]
    return PermGroup(gens)


# -- standard forms -------------------------------------------------------------------
def is_standard_form(p: int, R: int, params: SLParams | tuple[int, int, int]) -> bool:
    d, e, s = _as_params(params).__dict__.values()
    q1 = p**R - 1
    if d < 1 or s < 1 or q1 % d or R % s or not 0 <= e < d:
        return False
    return (e * (q1 // (p**s - 1))) % d == 0


def _require_standard(p: int, R: int, *params: SLParams) -> None:
    for P in params:
        if not is_standard_form(p, R, P):
            raise InvalidParameters(f"{P} is not in standard form for p={p}, R={R}")


def standard_triples(p: int, R: int) -> list[SLParams]:
    """All standard-form triples, ordered by (d, e, s)."""
    q1 = p**R - 1
    out = []
    for d in divisors(q1):
        for e in range(d):
            for s in divisors(R):
                if (e * (q1 // (p**s - 1))) % d == 0:
                    out.append(SLParams(d, e, s))
    out.sort()
    return out


def to_standard_form(p: int, R: int, elements: Iterable[Pair]) -> SLParams:
    """Standard-form parameters of a subgroup given by all of its elements."""
    q1 = p**R - 1
    H = {(i % max(q1, 1), j % R) for i, j in elements}
    if (0, 0) not in H:
        raise InvalidParameters("element set lacks the identity")
    for x in H:
        for y in H:
            if compose(p, R, x, y) not in H:
                raise InvalidParameters("element set is not closed under composition")
    scalars = [i for i, j in H if j == 0 and i != 0]
    d = min(scalars) if scalars else max(q1, 1)
    frob = [j for i, j in H if j != 0]
    s = min(frob) if frob else R
    i0 = next(i for i, j in H if j == s % R)
    e = i0 % d
    params = SLParams(d, e, s)
    if params_group(p, R, params) != frozenset(H):  # pragma: no cover - contradicts uniqueness
        raise InvalidParameters("recovered parameters do not regenerate the subgroup")
    return params


# -- criteria ----------------------------------------------------------------------------
def is_transitive_params(p: int, R: int, g0: SLParams | tuple[int, int, int]) -> bool:
    G = _as_params(g0)
    _require_standard(p, R, G)
    d, e, s = G.d, G.e, G.s
    if d == 1:
        return True
    if e == 0:
        return False
    if (e * _geom(p, d * s, s)) % d:
        return False
    return all((e * _geom(p, dp * s, s)) % d for dp in range(2, d))


def is_subgroup_params(
    p: int, R: int, m0: SLParams | tuple[int, int, int], g0: SLParams | tuple[int, int, int]
) -> bool:
    M, G = _as_params(m0), _as_params(g0)
    _require_standard(p, R, M, G)
    if M.d % G.d or M.s % G.s:
        return False
    return (G.e * _geom(p, M.s, G.s) - M.e) % G.d == 0


def is_normal_params(
    p: int, R: int, m0: SLParams | tuple[int, int, int], g0: SLParams | tuple[int, int, int]
) -> bool:
    M, G = _as_params(m0), _as_params(g0)
    if not is_subgroup_params(p, R, M, G):
        raise InvalidParameters(f"{M} is not contained in {G}")
    # Conjugating w^e1 a^s1 by w^d and by w^e a^s leaves it times a scalar; both
    # scalars must lie in <w^d1>.
    if (G.d * (p**M.s - 1)) % M.d:
        return False
    return (M.e * (p**G.s - 1) - G.e * (p**M.s - 1)) % M.d == 0


def orbit_count_params(p: int, R: int, m0: SLParams | tuple[int, int, int]) -> tuple[int, int, int]:
    """Return ``(c, t0, orbit_length)`` with ``t0 = d1/c`` orbits on the nonzero elements."""
    M = _as_params(m0)
    _require_standard(p, R, M)
    d1, e1, s1 = M.d, M.e, M.s
    if e1 == 0:
        c = 1
    else:
        c = next(c for c in range(1, d1 + 1) if (e1 * _geom(p, c * s1, s1)) % d1 == 0)
    t0 = d1 // c
    return c, t0, (p**R - 1) // t0


def enumerate_solutions(p: int, R: int, cap: int = ENUMERATION_CAP) -> list[SolutionRow]:
    """All (G_0, M_0) pairs satisfying the calculus and the intransitivity/parity filters."""
    F = make_field(p, R, cap=min(cap, DEFAULT_FIELD_CAP))
    q1 = F.q - 1
    triples = standard_triples(p, R)
    transitive = [G for G in triples if is_transitive_params(p, R, G)]
    rows = []
    for G in transitive:
        for M in triples:
            if not is_subgroup_params(p, R, M, G) or not is_normal_params(p, R, M, G):
                continue
            c, t0, length = orbit_count_params(p, R, M)
            if t0 < 2:
                continue
            if p % 2 == 1 and (length % 2 or params_order(p, R, M) % 2):
                continue
            rows.append(SolutionRow(p, R, G, M, c, t0, length))
    rows.sort(key=lambda r: (r.g0.d, r.g0.e, r.g0.s, r.m0.d, r.m0.e, r.m0.s))
    if q1 and len(rows) > cap:
        raise CapExceeded("too many solution rows")
    return rows


def generic_construction(p: int, R: int, row: SolutionRow) -> Factorisation:
    """Factorisation of K_{p^R} into the Cayley graphs on the M_0-orbits."""
    from .homfac import Factorisation, cayley_parts

    if (row.p, row.R) != (p, R):
        raise InvalidParameters("row belongs to a different field")
    c, t0, length = orbit_count_params(p, R, row.m0)
    if (c, t0, length) != (row.c, row.k, row.orbit_length):
        raise InvalidParameters("row is inconsistent with its own parameters")
    if not (
        is_transitive_params(p, R, row.g0)
        and is_subgroup_params(p, R, row.m0, row.g0)
        and is_normal_params(p, R, row.m0, row.g0)
    ):
        raise InvalidParameters("row does not satisfy the calculus")
    F = make_field(p, R)
    M0 = realize(p, R, row.m0)
    orbits = M0.orbits(range(1, F.q))
    # order parts by the smallest discrete logarithm they contain
    orbits.sort(key=lambda o: int(F.log_table[o].min()))
    T = translation_perms(F)
    G0 = realize(p, R, row.g0)
    M = PermGroup(T + M0.generators)
    G = PermGroup(T + G0.generators)
    label = f"generic(p={p},R={R},G0={tuple(asdict(row.g0).values())},M0={tuple(asdict(row.m0).values())})"
    return cayley_parts(F, [np.asarray(o) for o in orbits], M, G, label)
