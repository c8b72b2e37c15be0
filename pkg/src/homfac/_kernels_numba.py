"""Numba-compiled refinement and certificate kernels (see :mod:`homfac._kernels`)."""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

from ._kernels import _ADD, _MUL

MUL = uint64(_MUL)
ADD = uint64(_ADD)


@njit(cache=True)
def mix(h, x):
    return ((h ^ uint64(x)) * MUL) + ADD


@njit(cache=True)
def refine_nb(indptr, indices, lab, cellend, queue_init, h0):
    n = lab.size
    h = uint64(h0)
    inq = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    qhead = 0
    qlen = 0
    for i in range(queue_init.size):
        s = queue_init[i]
        queue[(qhead + qlen) % n] = s
        qlen += 1
        inq[s] = True
    cnt = np.zeros(n, dtype=np.int64)
    keys = np.empty(n, dtype=np.int64)
    seg = np.empty(n, dtype=lab.dtype)
    while qlen > 0:
        w = queue[qhead]
        qhead = (qhead + 1) % n
        qlen -= 1
        inq[w] = False
        we = cellend[w]
        cnt[:] = 0
        for pos in range(w, we):
            u = lab[pos]
            for t in range(indptr[u], indptr[u + 1]):
                cnt[indices[t]] += 1
        h = mix(h, w)
        h = mix(h, we - w)
        s = 0
        while s < n:
            e = cellend[s]
            if e - s > 1:
                c0 = cnt[lab[s]]
                uniform = True
                for pos in range(s + 1, e):
                    if cnt[lab[pos]] != c0:
                        uniform = False
                        break
                if not uniform:
                    m = e - s
                    for i in range(m):
                        keys[i] = cnt[lab[s + i]]
                        seg[i] = lab[s + i]
                    order = np.argsort(keys[:m], kind="mergesort")
                    for i in range(m):
                        lab[s + i] = seg[order[i]]
                    # locate first largest fragment
                    largest = s
                    best = -1
                    fs = s
                    while fs < e:
                        fe = fs + 1
                        kv = cnt[lab[fs]]
                        while fe < e and cnt[lab[fe]] == kv:
                            fe += 1
                        if fe - fs > best:
                            best = fe - fs
                            largest = fs
                        fs = fe
                    was_in = inq[s]
                    fs = s
                    while fs < e:
                        fe = fs + 1
                        kv = cnt[lab[fs]]
                        while fe < e and cnt[lab[fe]] == kv:
                            fe += 1
                        cellend[fs] = fe
                        h = mix(h, fs)
                        h = mix(h, kv)
                        h = mix(h, fe - fs)
                        if was_in:
                            if fs != s:
                                queue[(qhead + qlen) % n] = fs
                                qlen += 1
                                inq[fs] = True
                        elif fs != largest:
                            queue[(qhead + qlen) % n] = fs
                            qlen += 1
                            inq[fs] = True
                        fs = fe
            s = e
    ncells = 0
    s = 0
    while s < n:
        ncells += 1
        s = cellend[s]
    h = mix(h, ncells)
    return h, ncells


@njit(cache=True)
def certificate_nb(adj, lab):
    n = lab.size
    nbytes = (n * n + 7) // 8
    out = np.zeros(nbytes, dtype=np.uint8)
    bit = 0
    for i in range(n):
        row = lab[i]
        for j in range(n):
            if adj[row, lab[j]]:
                out[bit >> 3] |= np.uint8(128 >> (bit & 7))
            bit += 1
    return out
