"""Numba-compiled inner kernels for the individualization-refinement
search.  Optional: isocanon falls back to the pure-Python implementation
when numba is unavailable.  Both paths emit byte-identical traces and
canonical rows; tests cross-validate them.

Data layout: adjacency as uint64 words, rowsw[v, w] holding bits
64*w..64*w+63 of vertex v's neighbourhood.  An ordered partition is kept
in nauty style: `lab` lists the vertices cell by cell, `cs` flags
cell-start positions, `csof` maps a position to its cell's start and
`posv` inverts lab.  Splits subdivide in place, so cell start positions
are stable and isomorphism-invariant.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


SENTINEL = np.uint32(0xFFFFFFFF)


def pack_rows(rows: tuple[int, ...], n: int) -> np.ndarray:
    words = (n + 63) // 64 or 1
    out = np.zeros((n, words), dtype=np.uint64)
    mask = (1 << 64) - 1
    for v in range(n):
        r = rows[v]
        w = 0
        while r:
            out[v, w] = r & mask
            r >>= 64
            w += 1
    return out


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _tz(x):
    # index of lowest set bit (x != 0)
    low = x & (np.uint64(0) - x)
    return _popcount(low - np.uint64(1))


@njit(cache=True)
def refine_kernel(
    rowsw,
    lab,
    posv,
    csof,
    cs,
    ind_v,
    ref1,
    ref1len,
    ref2,
    ref2len,
    eqf0,
    cmpb0,
    trace,
    queue,
    scratch,
    out,
):
    """Refine to equitability, streaming the trace and comparing it
    against two reference traces.

    out: [aborted, eqf, cmpb, trace_len, ncells]
    scratch: int64[4n + 4] work area.
    """
    n = lab.shape[0]
    W = rowsw.shape[1]
    eqf = eqf0
    cmpb = cmpb0
    ti = np.int64(0)
    qh = np.int64(0)
    qt = np.int64(0)

    # scratch layout
    cnts = scratch[:n]
    tbuf = scratch[n : 2 * n]
    visited = scratch[2 * n : 3 * n]
    order = scratch[3 * n : 4 * n]
    for i in range(n):
        visited[i] = 0

    if ind_v >= 0:
        p = posv[ind_v]
        st = csof[p]
        u = lab[st]
        lab[st] = ind_v
        lab[p] = u
        posv[ind_v] = st
        posv[u] = p
        en = st + 1
        while en < n and cs[en] == 0:
            en += 1
        if en > st + 1:
            cs[st + 1] = 1
            for i in range(st + 1, en):
                csof[i] = st + 1
            for w in range(W):
                queue[qt, w] = np.uint64(0)
            queue[qt, np.int64(ind_v) >> 6] = np.uint64(1) << np.uint64(np.int64(ind_v) & 63)
            qt += 1
            for w in range(W):
                queue[qt, w] = np.uint64(0)
            for i in range(st + 1, en):
                v = lab[i]
                queue[qt, np.int64(v) >> 6] |= np.uint64(1) << np.uint64(np.int64(v) & 63)
            qt += 1
        else:
            for w in range(W):
                queue[qt, w] = np.uint64(0)
            queue[qt, np.int64(ind_v) >> 6] = np.uint64(1) << np.uint64(np.int64(ind_v) & 63)
            qt += 1
    else:
        # root: every initial cell is a splitter
        st = np.int64(0)
        while st < n:
            en = st + 1
            while en < n and cs[en] == 0:
                en += 1
            for w in range(W):
                queue[qt, w] = np.uint64(0)
            for i in range(st, en):
                v = lab[i]
                queue[qt, np.int64(v) >> 6] |= np.uint64(1) << np.uint64(np.int64(v) & 63)
            qt += 1
            st = en

    while qh < qt:
        # neighbour union of the splitter
        tcount = np.int64(0)
        for w in range(W):
            m = queue[qh, w]
            while m != np.uint64(0):
                v = (np.int64(w) << 6) + _tz(m)
                m &= m - np.uint64(1)
                for w2 in range(W):
                    mm = rowsw[v, w2]
                    while mm != np.uint64(0):
                        u = (np.int64(w2) << 6) + _tz(mm)
                        mm &= mm - np.uint64(1)
                        stc = csof[posv[u]]
                        if visited[stc] == 0:
                            visited[stc] = 1
                            tbuf[tcount] = stc
                            tcount += 1
        # ascending cell-start order; insertion sort (tcount is small)
        for i in range(1, tcount):
            key = tbuf[i]
            j = i - 1
            while j >= 0 and tbuf[j] > key:
                tbuf[j + 1] = tbuf[j]
                j -= 1
            tbuf[j + 1] = key
        for idx in range(tcount):
            # cell starts are stable: splits subdivide in place and the
            # first bucket keeps the original start position
            st = tbuf[idx]
            visited[st] = 0
            en = st + 1
            while en < n and csof[en] == st:
                en += 1
            size = en - st
            if size == 1:
                continue
            # counts against the splitter
            allsame = True
            first = np.int64(-1)
            for i in range(st, en):
                v = lab[i]
                c = np.int64(0)
                for w in range(W):
                    x = rowsw[v, w] & queue[qh, w]
                    if x != np.uint64(0):
                        c += _popcount(x)
                cnts[i] = c
                if first < 0:
                    first = c
                elif c != first:
                    allsame = False
            if allsame:
                continue
            # stable insertion sort of the slice by count
            for i in range(st, en):
                order[i] = lab[i]
            for i in range(st + 1, en):
                cv = cnts[i]
                vv = order[i]
                j = i - 1
                while j >= st and cnts[j] > cv:
                    cnts[j + 1] = cnts[j]
                    order[j + 1] = order[j]
                    j -= 1
                cnts[j + 1] = cv
                order[j + 1] = vv
            # bucket boundaries; emit event [st, k, (count, size)...]
            k = np.int64(1)
            for i in range(st + 1, en):
                if cnts[i] != cnts[i - 1]:
                    k += 1
            ev0 = np.uint32(st)
            ev1 = np.uint32(k)
            if eqf == 1:
                if ti + 1 >= ref1len or ref1[ti] != ev0 or ref1[ti + 1] != ev1:
                    eqf = 0
            if cmpb == 0:
                if ti >= ref2len:
                    cmpb = 1
                elif ref2[ti] != ev0:
                    cmpb = 1 if ev0 > ref2[ti] else -1
                elif ti + 1 >= ref2len:
                    cmpb = 1
                elif ref2[ti + 1] != ev1:
                    cmpb = 1 if ev1 > ref2[ti + 1] else -1
            trace[ti] = ev0
            trace[ti + 1] = ev1
            ti += 2
            if eqf == 0 and cmpb == -1:
                out[0] = 1
                return
            # write back, set boundaries, emit pairs, queue buckets
            bstart = st
            largest_start = st
            largest_size = np.int64(0)
            i = st
            while i < en:
                j = i + 1
                while j < en and cnts[j] == cnts[i]:
                    j += 1
                bs = j - i
                if bs > largest_size:
                    largest_size = bs
                    largest_start = i
                cval = np.uint32(cnts[i])
                sval = np.uint32(bs)
                if eqf == 1:
                    if ti + 1 >= ref1len or ref1[ti] != cval or ref1[ti + 1] != sval:
                        eqf = 0
                if cmpb == 0:
                    if ti >= ref2len:
                        cmpb = 1
                    elif ref2[ti] != cval:
                        cmpb = 1 if cval > ref2[ti] else -1
                    elif ti + 1 >= ref2len:
                        cmpb = 1
                    elif ref2[ti + 1] != sval:
                        cmpb = 1 if sval > ref2[ti + 1] else -1
                trace[ti] = cval
                trace[ti + 1] = sval
                ti += 2
                i = j
            if eqf == 0 and cmpb == -1:
                out[0] = 1
                return
            for i in range(st, en):
                v = order[i]
                lab[i] = v
                posv[v] = i
            i = st
            while i < en:
                j = i + 1
                while j < en and cnts[j] == cnts[i]:
                    j += 1
                if i > st:
                    cs[i] = 1
                for p2 in range(i, j):
                    csof[p2] = i
                if i != largest_start:
                    for w in range(W):
                        queue[qt, w] = np.uint64(0)
                    for p2 in range(i, j):
                        v = np.int64(order[p2])
                        queue[qt, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
                    qt += 1
                i = j
        qh += 1

    # final event: sentinel, number of cells, cell sizes
    ncells = np.int64(0)
    st = np.int64(0)
    if eqf == 1 and (ti >= ref1len or ref1[ti] != SENTINEL):
        eqf = 0
    if cmpb == 0:
        if ti >= ref2len:
            cmpb = 1
        elif ref2[ti] != SENTINEL:
            cmpb = 1 if SENTINEL > ref2[ti] else -1
    trace[ti] = SENTINEL
    ti += 1
    pos = ti
    ti += 1  # reserve slot for ncells
    while st < n:
        en = st + 1
        while en < n and cs[en] == 0:
            en += 1
        sval = np.uint32(en - st)
        trace[ti] = sval
        ti += 1
        ncells += 1
        st = en
    trace[pos] = np.uint32(ncells)
    if eqf == 1:
        for i in range(pos, ti):
            if i >= ref1len or ref1[i] != trace[i]:
                eqf = 0
                break
        if eqf == 1 and ref1len != ti:
            eqf = 0
    if cmpb == 0:
        i = pos
        while i < ti:
            if i >= ref2len:
                cmpb = 1
                break
            if ref2[i] != trace[i]:
                cmpb = 1 if trace[i] > ref2[i] else -1
                break
            i += 1
        if cmpb == 0 and ref2len != ti:
            cmpb = -1
    if eqf == 0 and cmpb == -1:
        out[0] = 1
        return
    out[0] = 0
    out[1] = eqf
    out[2] = cmpb
    out[3] = ti
    out[4] = ncells


@njit(cache=True)
def leaf_rows_kernel(rowsw, lab, posv, outw):
    """Adjacency words of the relabeled graph (position i = lab[i])."""
    n = lab.shape[0]
    W = rowsw.shape[1]
    for i in range(n):
        for w in range(W):
            outw[i, w] = np.uint64(0)
    for i in range(n):
        v = lab[i]
        for w in range(W):
            m = rowsw[v, w]
            while m != np.uint64(0):
                u = (np.int64(w) << 6) + _tz(m)
                m &= m - np.uint64(1)
                p = np.int64(posv[u])
                outw[i, p >> 6] |= np.uint64(1) << np.uint64(p & 63)


@njit(cache=True)
def target_cell_kernel(cs):
    """(start, end) of the first smallest non-singleton cell; (-1,-1) if
    the partition is discrete."""
    n = cs.shape[0]
    best_st = np.int64(-1)
    best_size = np.int64(n + 1)
    st = np.int64(0)
    while st < n:
        en = st + 1
        while en < n and cs[en] == 0:
            en += 1
        if en - st > 1 and en - st < best_size:
            best_size = en - st
            best_st = st
        st = en
    if best_st < 0:
        return np.int64(-1), np.int64(-1)
    en = best_st + 1
    while en < n and cs[en] == 0:
        en += 1
    return best_st, en
