"""Pure-Python reference implementations of the integer kernels.

Both kernels work on integers: callers scale exact rationals to a common
denominator first. The compiled twin in ``_kernels.pyx`` must agree with
these bit for bit, including tie-breaking.
"""

from __future__ import annotations


def scan_unions(pts, cells, max_comp, closed):
    """Scan every union of at most ``max_comp`` grid intervals.

    ``pts[i]`` is the weight of the grid point ``i`` (``0..N``) and
    ``cells[i]`` the weight of the open cell ``(i, i+1)``. Intervals are
    open, or closed when ``closed`` is set (in which case touching
    components merge and the shared point counts once). Enumeration order
    is the depth-first order of ``intervals.base_endpoint_sequences``.

    Returns ``(best_abs, best_value, best_seq, n_total, n_nonzero)`` where
    the best union maximizes ``|value|``, then prefers fewer components,
    then greater total length, then earlier enumeration order.
    """
    n = len(cells)
    cpre = [0] * (n + 1)
    for i in range(n):
        cpre[i + 1] = cpre[i] + cells[i]
    ppre = [0] * (n + 2)
    for i in range(n + 1):
        ppre[i + 1] = ppre[i] + pts[i]

    best = [-1, 0, 0, 0, ()]  # abs, -ncomp, length, value, seq
    counts = [0, 0]

    def walk(start, depth, acc, length, seq):
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
                s = seq + (a, b)
                counts[0] += 1
                if total:
                    counts[1] += 1
                key = (abs(total), -(depth + 1), ln)
                if key > (best[0], best[1], best[2]):
                    best[0], best[1], best[2], best[3], best[4] = key[0], key[1], key[2], total, s
                if depth + 1 < max_comp:
                    walk(b, depth + 1, total, ln, s)

    walk(0, 0, 0, 0, ())
    return best[0], best[3], best[4], counts[0], counts[1]


def prohorov_one_sided(xs, amass, ys, bmass):
    """``max_A t_A`` over nonempty index subsets ``A`` of ``xs``.

    ``t_A`` is the least ``e >= 0`` with ``a(A) <= b({y : d(y, A) < e'}) + e'``
    for every ``e' > e``; it equals ``min_e max(e, a(A) - C(e))`` over
    ``e`` in ``{0} ∪ {d(y, A)}`` where ``C(e)`` is the ``b``-mass within
    distance ``e`` (inclusive).
    """
    k, m = len(xs), len(ys)
    if k == 0:
        return 0
    full = 1 << k
    dist = [None] * full
    mass = [0] * full
    dist[0] = [None] * m
    worst = 0
    for mask in range(1, full):
        low = (mask & -mask).bit_length() - 1
        prev = mask & (mask - 1)
        x = xs[low]
        pd = dist[prev]
        if prev:
            d = [min(pd[j], abs(x - ys[j])) for j in range(m)]
        else:
            d = [abs(x - ys[j]) for j in range(m)]
        dist[mask] = d
        r = mass[prev] + amass[low]
        mass[mask] = r
        if r <= worst:
            continue
        order = sorted(range(m), key=d.__getitem__)
        t = r  # e = 0 with nothing captured yet; refined below
        c = 0
        i = 0
        e = 0
        while True:
            while i < m and d[order[i]] <= e:
                c += bmass[order[i]]
                i += 1
            cand = e if e >= r - c else r - c
            if cand < t:
                t = cand
            if i >= m or t <= d[order[i]]:
                break
            e = d[order[i]]
        if t > worst:
            worst = t
    return worst
