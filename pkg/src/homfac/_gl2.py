"""Matrix-level arithmetic in the semilinear group of F_q^2.

An element is a tuple ``(a, b, c, d, f)``: the matrix ``[[a, b], [c, d]]``
(field indices) and a Frobenius exponent ``f``.  It acts on row vectors by
``v -> v^(p^f) M`` and products read left to right:
``(M1, f1)(M2, f2) = (M1^(p^f2) M2, f1 + f2)``.

Groups here stay far too large to materialise as permutations of ``q^2``
points (``GL(2,23)`` already has 267168 elements), so closures, normalisers
and quotients are computed on matrices and only the small subgroups that
survive are converted to permutations.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InvalidParameters
from .ffield import FieldSpec
from .perm import Perm, gl2_perm

Elem = tuple[int, int, int, int, int]


class Mat2:
    """Arithmetic for 2x2 semilinear matrices over one field."""

    def __init__(self, field: FieldSpec, semilinear: bool = False) -> None:
        self.F = field
        self.frob_mod = field.R if semilinear else 1
        q = field.q
        xs = np.arange(q)
        self._mul = np.array([field.mul_vec(xs, y) for y in range(q)], dtype=np.int64)
        self._add = np.array([field.add_vec(xs, y) for y in range(q)], dtype=np.int64)
        self._neg = field.neg_vec(xs).astype(np.int64)
        self._inv = np.array([0] + [field.inv(x) for x in range(1, q)], dtype=np.int64)
        self._frob = [field.frobenius_vec(xs, j).astype(np.int64) for j in range(field.R)]
        self.identity: Elem = (1, 0, 0, 1, 0)

    # -- scalar helpers (python ints) ---------------------------------------------------
    def _m(self, x: int, y: int) -> int:
        return int(self._mul[x, y])

    def _a(self, x: int, y: int) -> int:
        return int(self._add[x, y])

    def frob_matrix(self, g: Elem, j: int) -> Elem:
        if j % self.F.R == 0:
            return g
        t = self._frob[j % self.F.R]
        return (int(t[g[0]]), int(t[g[1]]), int(t[g[2]]), int(t[g[3]]), g[4])

    def mul(self, g: Elem, h: Elem) -> Elem:
        a, b, c, d, _ = self.frob_matrix(g, h[4])
        e, f, gg, hh, _ = h
        m, s = self._m, self._a
        return (
            s(m(a, e), m(b, gg)),
            s(m(a, f), m(b, hh)),
            s(m(c, e), m(d, gg)),
            s(m(c, f), m(d, hh)),
            (g[4] + h[4]) % self.frob_mod,
        )

    def det(self, g: Elem) -> int:
        return self._a(self._m(g[0], g[3]), int(self._neg[self._m(g[1], g[2])]))

    def inv(self, g: Elem) -> Elem:
        di = int(self._inv[self.det(g)])
        if di == 0:
            raise InvalidParameters("singular matrix")
        n = self._neg
        adj = (self._m(g[3], di), self._m(int(n[g[1]]), di), self._m(int(n[g[2]]), di), self._m(g[0], di))
        f = (-g[4]) % self.frob_mod
        # (M, f)^-1 = ((M^-1)^(p^-f), -f)
        return self.frob_matrix((*adj, f), f)

    def power(self, g: Elem, e: int) -> Elem:
        out = self.identity
        base = g
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def order(self, g: Elem, bound: int = 1 << 16) -> int:
        x = g
        for k in range(1, bound + 1):
            if x == self.identity:
                return k
            x = self.mul(x, g)
        raise CapExceeded("element order exceeds bound")

    def trace(self, g: Elem) -> int:
        return self._a(g[0], g[3])

    def scalar(self, lam: int) -> Elem:
        return (lam, 0, 0, lam, 0)

    def closure(self, gens: Sequence[Elem], cap: int = 1 << 20) -> list[Elem]:
        seen = {self.identity}
        out = [self.identity]
        queue = deque(out)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded(f"matrix group closure exceeded {cap} elements")
                    seen.add(y)
                    out.append(y)
                    queue.append(y)
        return out

    def to_perm(self, g: Elem) -> Perm:
        return gl2_perm(self.F, ((g[0], g[1]), (g[2], g[3])), g[4])

    # -- vectorised normaliser search ---------------------------------------------------
    def projective_representatives(self) -> np.ndarray:
        """One invertible matrix per scalar class, as an (m, 4) array.

        The first nonzero entry of the first row is 1.
        """
        q = self.F.q
        r = np.arange(q)
        b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, indexing="ij"))
        first = np.stack([np.ones_like(b), b, c, d], axis=1)
        c2, d2 = (x.ravel() for x in np.meshgrid(r, r, indexing="ij"))
        second = np.stack([np.zeros_like(c2), np.ones_like(c2), c2, d2], axis=1)
        cand = np.concatenate([first, second])
        det = self._add[self._mul[cand[:, 0], cand[:, 3]], self._neg[self._mul[cand[:, 1], cand[:, 2]]]]
        return cand[det != 0]

    def _vec_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Row-wise product of (m, 4) matrix arrays (B may be a single row)."""
        m, s = self._mul, self._add
        a, b, c, d = A.T
        e, f, g, h = np.broadcast_to(B, A.shape).T
        return np.stack(
            [s[m[a, e], m[b, g]], s[m[a, f], m[b, h]], s[m[c, e], m[d, g]], s[m[c, f], m[d, h]]], axis=1
        )

    def _vec_inv(self, A: np.ndarray) -> np.ndarray:
        a, b, c, d = A.T
        det = self._add[self._mul[a, d], self._neg[self._mul[b, c]]]
        di = self._inv[det]
        return np.stack(
            [self._mul[d, di], self._mul[self._neg[b], di], self._mul[self._neg[c], di], self._mul[a, di]], axis=1
        )

    def encode(self, g: Elem) -> int:
        q = self.F.q
        return (((g[4] * q + g[0]) * q + g[1]) * q + g[2]) * q + g[3]

    def normaliser(self, H: Iterable[Elem], gens: Sequence[Elem]) -> list[Elem]:
        """All elements of the ambient (semi)linear group normalising ``H``.

        ``H`` is the full element list and ``gens`` generates it.  Conjugation
        by ``(M, f)`` sends ``(X, 0)`` to ``(M^-1 X^(p^f) M, 0)``, so linear
        ``H`` suffices for the vectorised test.
        """
        H = list(H)
        if any(h[4] for h in H):
            raise InvalidParameters("normaliser search expects a linear subgroup")
        q = self.F.q
        codes = np.array(sorted(self.encode(h) for h in H), dtype=np.int64)
        reps = self.projective_representatives()
        inv = self._vec_inv(reps)
        out: list[Elem] = []
        for f in range(self.frob_mod):
            ok = np.ones(len(reps), dtype=bool)
            for x in gens:
                xf = np.array(self.frob_matrix(x, f)[:4], dtype=np.int64)
                conj = self._vec_mul(self._vec_mul(inv, xf), reps)
                enc = ((conj[:, 0] * q + conj[:, 1]) * q + conj[:, 2]) * q + conj[:, 3]
                ok &= np.isin(enc, codes)
            for row in reps[ok].tolist():
                for lam in range(1, q):
                    out.append((self._m(row[0], lam), self._m(row[1], lam), self._m(row[2], lam), self._m(row[3], lam), f))
        return out


def element_order_profile(ops: Mat2, elems: Iterable[Elem]) -> dict[int, int]:
    prof: dict[int, int] = {}
    for g in elems:
        o = ops.order(g)
        prof[o] = prof.get(o, 0) + 1
    return dict(sorted(prof.items()))


def _order_in(ops: Mat2, g: Elem, orders: tuple[int, ...]) -> bool:
    x = g
    for k in range(1, max(orders) + 1):
        if x == ops.identity:
            return k in orders
        x = ops.mul(x, g)
    return False


SL23_PROFILE = {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
SL25_PROFILE = {1: 1, 2: 1, 3: 20, 4: 30, 5: 24, 6: 20, 10: 24}


def find_binary_polyhedral(ops: Mat2, which: str) -> tuple[list[Elem], list[Elem]]:
    """Generators and elements of a copy of SL(2,3) or SL(2,5) inside SL(2,q).

    ``x = [[0,1],[-1,0]]`` (order 4) is fixed and ``y`` runs over trace -1
    elements of SL(2,q) (order 3) in index order; the first pair generating a
    group with the right element-order profile wins.
    """
    F = ops.F
    if F.p == 2:
        raise InvalidParameters("binary polyhedral groups need odd characteristic")
    target, profile = {"SL23": (24, SL23_PROFILE), "SL25": (120, SL25_PROFILE)}[which]
    x: Elem = (0, 1, int(ops._neg[1]), 0, 0)
    minus_one = int(ops._neg[1])
    for a in range(F.q):
        d = ops._a(minus_one, int(ops._neg[a]))  # trace a + d = -1
        ad = ops._m(a, d)
        for b in range(F.q):
            for c in range(F.q):
                if ops._a(ad, int(ops._neg[ops._m(b, c)])) != 1:
                    continue
                y: Elem = (a, b, c, d, 0)
                if which == "SL25" and not _order_in(ops, ops.mul(x, y), (5, 10)):
                    continue
                try:
                    elems = ops.closure([x, y], cap=target)
                except CapExceeded:
                    continue
                if len(elems) == target and element_order_profile(ops, elems) == profile:
                    return [x, y], elems
    raise InvalidParameters(f"no {which} found in SL(2,{F.q})")
