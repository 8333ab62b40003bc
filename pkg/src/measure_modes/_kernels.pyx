# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_py``; same contracts, int64 only."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef struct ScanState:
    i64 best_abs
    int best_ncomp
    i64 best_len
    i64 best_value
    int best_depth
    long long n_total
    long long n_nonzero


cdef inline i64 _abs(i64 v) nogil:
    return -v if v < 0 else v


cdef void _walk(int start, int depth, i64 acc, i64 length, int n, int max_comp, bint closed,
                i64* cpre, i64* ppre, i64* pts, int* seq, int* best_seq,
                ScanState* st) nogil:
    cdef int a, b, j
    cdef i64 v, total, ln, av
    cdef bint touching, better
    for a in range(start, n + 1):
        touching = depth > 0 and a == start
        for b in range(a + 1, n + 1):
            if closed:
                v = cpre[b] - cpre[a] + ppre[b + 1] - ppre[a]
                if touching:
                    v -= pts[a]
            else:
                v = cpre[b] - cpre[a] + ppre[b] - ppre[a + 1]
            total = acc + v
            ln = length + b - a
            seq[2 * depth] = a
            seq[2 * depth + 1] = b
            st.n_total += 1
            if total != 0:
                st.n_nonzero += 1
            av = _abs(total)
            better = False
            if av > st.best_abs:
                better = True
            elif av == st.best_abs:
                if depth + 1 < st.best_ncomp:
                    better = True
                elif depth + 1 == st.best_ncomp and ln > st.best_len:
                    better = True
            if better:
                st.best_abs = av
                st.best_ncomp = depth + 1
                st.best_len = ln
                st.best_value = total
                st.best_depth = depth + 1
                for j in range(2 * depth + 2):
                    best_seq[j] = seq[j]
            if depth + 1 < max_comp:
                _walk(b, depth + 1, total, ln, n, max_comp, closed, cpre, ppre, pts, seq, best_seq, st)


def scan_unions(pts, cells, int max_comp, bint closed):
    cdef int n = len(cells)
    cdef int i
    cdef i64* cpre = <i64*> malloc((n + 1) * sizeof(i64))
    cdef i64* ppre = <i64*> malloc((n + 2) * sizeof(i64))
    cdef i64* cpts = <i64*> malloc((n + 1) * sizeof(i64))
    cdef int* seq = <int*> malloc((2 * max_comp + 2) * sizeof(int))
    cdef int* best_seq = <int*> malloc((2 * max_comp + 2) * sizeof(int))
    cdef ScanState st
    if not cpre or not ppre or not cpts or not seq or not best_seq:
        raise MemoryError()
    try:
        cpre[0] = 0
        for i in range(n):
            cpre[i + 1] = cpre[i] + <i64> cells[i]
        ppre[0] = 0
        for i in range(n + 1):
            cpts[i] = <i64> pts[i]
            ppre[i + 1] = ppre[i] + cpts[i]
        st.best_abs = -1
        st.best_ncomp = 1 << 30
        st.best_len = 0
        st.best_value = 0
        st.best_depth = 0
        st.n_total = 0
        st.n_nonzero = 0
        with nogil:
            _walk(0, 0, 0, 0, n, max_comp, closed, cpre, ppre, cpts, seq, best_seq, &st)
        best = tuple(best_seq[i] for i in range(2 * st.best_depth))
        return st.best_abs, st.best_value, best, st.n_total, st.n_nonzero
    finally:
        free(cpre)
        free(ppre)
        free(cpts)
        free(seq)
        free(best_seq)


def prohorov_one_sided(xs, amass, ys, bmass):
    cdef int k = len(xs)
    cdef int m = len(ys)
    if k == 0:
        return 0
    cdef int full = 1 << k
    cdef i64* cx = <i64*> malloc(k * sizeof(i64))
    cdef i64* ca = <i64*> malloc(k * sizeof(i64))
    cdef i64* cy = <i64*> malloc((m + 1) * sizeof(i64))
    cdef i64* cb = <i64*> malloc((m + 1) * sizeof(i64))
    cdef i64* dist = <i64*> malloc(<size_t> full * (m + 1) * sizeof(i64))
    cdef i64* mass = <i64*> malloc(<size_t> full * sizeof(i64))
    cdef i64* sd = <i64*> malloc((m + 1) * sizeof(i64))
    cdef i64* sb = <i64*> malloc((m + 1) * sizeof(i64))
    cdef int mask, low, prev, j, i, p
    cdef i64 x, dd, r, t, c, e, cand, worst = 0, tmpd, tmpb
    if not cx or not ca or not cy or not cb or not dist or not mass or not sd or not sb:
        raise MemoryError()
    try:
        for j in range(k):
            cx[j] = <i64> xs[j]
            ca[j] = <i64> amass[j]
        for j in range(m):
            cy[j] = <i64> ys[j]
            cb[j] = <i64> bmass[j]
        mass[0] = 0
        with nogil:
            for mask in range(1, full):
                low = 0
                while not (mask >> low) & 1:
                    low += 1
                prev = mask & (mask - 1)
                x = cx[low]
                for j in range(m):
                    dd = x - cy[j]
                    if dd < 0:
                        dd = -dd
                    if prev and dist[<size_t> prev * m + j] < dd:
                        dd = dist[<size_t> prev * m + j]
                    dist[<size_t> mask * m + j] = dd
                r = mass[prev] + ca[low]
                mass[mask] = r
                if r <= worst:
                    continue
                # insertion sort of (distance, b-mass), stable like sorted()
                for j in range(m):
                    tmpd = dist[<size_t> mask * m + j]
                    tmpb = cb[j]
                    p = j
                    while p > 0 and sd[p - 1] > tmpd:
                        sd[p] = sd[p - 1]
                        sb[p] = sb[p - 1]
                        p -= 1
                    sd[p] = tmpd
                    sb[p] = tmpb
                t = r
                c = 0
                i = 0
                e = 0
                while True:
                    while i < m and sd[i] <= e:
                        c += sb[i]
                        i += 1
                    cand = e if e >= r - c else r - c
                    if cand < t:
                        t = cand
                    if i >= m or t <= sd[i]:
                        break
                    e = sd[i]
                if t > worst:
                    worst = t
        return worst
    finally:
        free(cx)
        free(ca)
        free(cy)
        free(cb)
        free(dist)
        free(mass)
        free(sd)
        free(sb)
