"""2-(v, kappa, 1) designs read off factorisations whose factors split into cliques.

If every factor of a factorisation of ``K_v`` is an edge-disjoint union of
copies of ``K_kappa``, the vertex sets of all those cliques form a design in
which each pair of points lies in exactly one block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameters, ParseError, VerificationFailed
from .graphs import edge_clique_partition
from .homfac import Factorisation


@dataclass(frozen=True)
class Design:
    v: int
    kappa: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        """Replication number, assuming it is constant (checked by verify_design)."""
        return self.b * self.kappa // self.v

    def to_text(self) -> str:
        lines = [f"{self.v} {self.kappa} {self.b}"]
        lines.extend(" ".join(map(str, blk)) for blk in self.blocks)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Design:
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        try:
            v, kappa, b = (int(x) for x in rows[0])
            blocks = tuple(tuple(int(x) for x in row) for row in rows[1:])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed design file: {exc}") from exc
        if len(blocks) != b or any(len(blk) != kappa for blk in blocks):
            raise ParseError("design file does not match its header")
        return cls(v, kappa, _normalise(blocks))

    def summary(self) -> dict:
        return {"v": self.v, "kappa": self.kappa, "b": self.b, "r": self.r, "order": self.r - 1}


def _normalise(blocks) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(int(x) for x in blk)) for blk in blocks))


@dataclass
class DesignCheck:
    ok: bool
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def verify_design(d: Design) -> DesignCheck:
    """Exhaustive check that every pair of points lies in exactly one block."""
    v, kappa = d.v, d.kappa
    if not 2 < kappa < v:
        return DesignCheck(False, f"need 2 < kappa < v, got kappa={kappa}, v={v}")
    cover = np.zeros((v, v), dtype=np.int32)
    for i, blk in enumerate(d.blocks):
        if len(blk) != kappa or len(set(blk)) != kappa or not all(0 <= x < v for x in blk):
            return DesignCheck(False, "malformed block", {"block": i})
        a = np.asarray(blk)
        cover[np.ix_(a, a)] += 1
    iu, ju = np.triu_indices(v, 1)
    counts = cover[iu, ju]
    bad = np.flatnonzero(counts != 1)
    if bad.size:
        j = bad[0]
        return DesignCheck(
            False,
            "pair not covered exactly once",
            {"pair": [int(iu[j]), int(ju[j])], "count": int(counts[j])},
        )
    reps = np.diag(cover)
    if np.any(reps != reps[0]):
        return DesignCheck(False, "replication number varies", {"point": int(np.argmax(reps != reps[0]))})
    if int(reps[0]) * v != d.b * kappa:
        return DesignCheck(False, "rv != b kappa")
    return DesignCheck(True)


def extract_design(f: Factorisation) -> Design:
    """Blocks are the cliques of every factor's edge-clique partition."""
    blocks: list[tuple[int, ...]] = []
    kappa = None
    for i, g in enumerate(f.factors()):
        cliques = edge_clique_partition(g)
        if cliques is None:
            raise InvalidParameters(f"factor {i + 1} is not an edge-disjoint union of maximal cliques")
        sizes = {len(c) for c in cliques}
        if len(sizes) != 1 or (kappa is not None and sizes != {kappa}):
            raise InvalidParameters(f"factor {i + 1} has cliques of sizes {sorted(sizes)}")
        kappa = sizes.pop()
        blocks.extend(cliques)
    assert kappa is not None
    d = Design(f.n, kappa, _normalise(blocks))
    check = verify_design(d)
    if not check:
        raise VerificationFailed(f"extracted blocks do not form a design: {check.reason} {check.witness}")
    return d

