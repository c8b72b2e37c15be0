"""Hot loops of the canonical-labelling search: partition refinement and leaf certificates.

Two interchangeable backends are provided.  The numba backend compiles the
kernels with ``@njit``; the numpy backend vectorises what it can and loops in
Python over the cells that actually split.  Both produce bit-identical traces
and certificates.  Set ``HOMFAC_NUMBA=0`` to force the numpy backend.

Partition layout: ``lab`` lists vertices by position and ``cellend[s]`` is the
exclusive end of the cell starting at position ``s`` (entries at non-start
positions are stale and never read).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

MASK = (1 << 64) - 1
_MUL = 1099511628211
_ADD = 0x9E3779B97F4A7C15


def _mix_py(h: int, x: int) -> int:
    return (((h ^ (x & MASK)) * _MUL) + _ADD) & MASK


# -- numpy backend ---------------------------------------------------------------
def refine_numpy(
    adj: np.ndarray,
    indptr: np.ndarray,
    indices: np.ndarray,
    lab: np.ndarray,
    cellend: np.ndarray,
    queue_init: np.ndarray,
    h0: int,
) -> tuple[int, int]:
    n = lab.size
    h = int(h0)
    inq = np.zeros(n, dtype=bool)
    queue: list[int] = []
    for s in queue_init.tolist():
        queue.append(s)
        inq[s] = True
    head = 0
    starts = _cell_starts(cellend, n)
    while head < len(queue):
        w = queue[head]
        head += 1
        inq[w] = False
        we = int(cellend[w])
        cnt = adj[lab[w:we]].sum(axis=0, dtype=np.int64)
        h = _mix_py(h, w)
        h = _mix_py(h, we - w)
        vals = cnt[lab]
        st = np.asarray(starts, dtype=np.int64)
        lo = np.minimum.reduceat(vals, st)
        hi = np.maximum.reduceat(vals, st)
        split_cells = st[lo != hi].tolist()
        if not split_cells:
            continue
        new_starts: list[int] = []
        for s in split_cells:
            e = int(cellend[s])
            seg = lab[s:e]
            keys = vals[s:e]
            order = np.argsort(keys, kind="stable")
            lab[s:e] = seg[order]
            keys = keys[order]
            cuts = (np.flatnonzero(np.diff(keys)) + 1 + s).tolist()
            frag_starts = [s] + cuts
            frag_ends = cuts + [e]
            sizes = [fe - fs for fs, fe in zip(frag_starts, frag_ends)]
            largest = frag_starts[int(np.argmax(sizes))]
            was_in = bool(inq[s])
            for fs, fe in zip(frag_starts, frag_ends):
                cellend[fs] = fe
                h = _mix_py(h, fs)
                h = _mix_py(h, int(keys[fs - s]))
                h = _mix_py(h, fe - fs)
                if was_in:
                    if fs != s:
                        queue.append(fs)
                        inq[fs] = True
                elif fs != largest:
                    queue.append(fs)
                    inq[fs] = True
            new_starts.extend(cuts)
        starts = sorted(set(starts).union(new_starts))
    ncells = len(starts)
    h = _mix_py(h, ncells)
    return h, ncells


def _cell_starts(cellend: np.ndarray, n: int) -> list[int]:
    out = []
    s = 0
    while s < n:
        out.append(s)
        s = int(cellend[s])
    return out


def certificate_numpy(adj: np.ndarray, lab: np.ndarray) -> bytes:
    return np.packbits(adj[np.ix_(lab, lab)]).tobytes()


# -- numba backend -----------------------------------------------------------------
def _build_numba() -> tuple[Callable, Callable] | None:
    try:
        from . import _kernels_numba as knb
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return None

    def refine(adj, indptr, indices, lab, cellend, queue_init, h0):
        h, ncells = knb.refine_nb(indptr, indices, lab, cellend, queue_init, np.uint64(h0))
        return int(h), int(ncells)

    def certificate(adj, lab):
        return knb.certificate_nb(adj, lab).tobytes()

    return refine, certificate


@dataclass(frozen=True)
class Backend:
    name: str
    refine: Callable[..., tuple[int, int]]
    certificate: Callable[[np.ndarray, np.ndarray], bytes]


_BACKENDS: dict[str, Backend] = {}


def get_backend(name: str | None = None) -> Backend:
    """Return the named backend (``"numba"`` or ``"numpy"``).

    With no name, ``HOMFAC_NUMBA`` decides: ``0``/``false``/``off`` selects
    numpy, anything else numba (falling back to numpy if numba is missing).
    """
    if name is None:
        flag = os.environ.get("HOMFAC_NUMBA", "1").strip().lower()
        name = "numpy" if flag in {"0", "false", "off", "no"} else "numba"
    if name in _BACKENDS:
        return _BACKENDS[name]
    if name == "numba":
        built = _build_numba()
        if built is None:  # pragma: no cover
            return get_backend("numpy")
        backend = Backend("numba", *built)
    elif name == "numpy":
        backend = Backend("numpy", refine_numpy, certificate_numpy)
    else:
        raise ValueError(f"unknown backend {name!r}")
    _BACKENDS[name] = backend
    return backend
