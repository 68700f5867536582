"""Pure-Python counting kernels, interface-compatible with _countcore.

Tables are lists: ``add``/``mul`` are Q x Q operation tables for the ring
F_q[pi]/(pi^level) with elements encoded as integers, and ``pows[j][t]``
holds the table v -> v^e for variable j and term t, with each term's
coefficient folded into the variable-0 table.
"""

from __future__ import annotations

from itertools import product


def count_range(add, mul, pows, start: int, stop: int) -> int:
    n = len(pows)
    if n == 1:
        return _count1(add, pows[0], start, stop)
    if n == 2:
        return _count2(add, mul, pows[0], pows[1], start, stop)
    if n == 3:
        return _count3(add, mul, pows[0], pows[1], pows[2], start, stop)
    return _count_general(add, mul, pows, start, stop)


def _count1(add, p0, start, stop):
    nt = len(p0)
    count = 0
    for v0 in range(start, stop):
        acc = p0[0][v0]
        for t in range(1, nt):
            acc = add[acc][p0[t][v0]]
        count += acc == 0
    return count


def _count2(add, mul, p0, p1, start, stop):
    nt = len(p0)
    Q = len(p1[0])
    count = 0
    for v0 in range(start, stop):
        row0 = [p0[t][v0] for t in range(nt)]
        for v1 in range(Q):
            acc = mul[row0[0]][p1[0][v1]]
            for t in range(1, nt):
                acc = add[acc][mul[row0[t]][p1[t][v1]]]
            count += acc == 0
    return count


def _count3(add, mul, p0, p1, p2, start, stop):
    nt = len(p0)
    Q = len(p1[0])
    rng = range(Q)
    count = 0
    for v0 in range(start, stop):
        row0 = [p0[t][v0] for t in range(nt)]
        for v1 in rng:
            row01 = [mul[row0[t]][p1[t][v1]] for t in range(nt)]
            if nt == 1:
                mrow = mul[row01[0]]
                tab = p2[0]
                for v2 in rng:
                    count += mrow[tab[v2]] == 0
                continue
            for v2 in rng:
                acc = mul[row01[0]][p2[0][v2]]
                for t in range(1, nt):
                    acc = add[acc][mul[row01[t]][p2[t][v2]]]
                count += acc == 0
    return count


def _count_general(add, mul, pows, start, stop):
    n = len(pows)
    nt = len(pows[0])
    Q = len(pows[0][0])
    count = 0
    for v0 in range(start, stop):
        base = [pows[0][t][v0] for t in range(nt)]
        for rest in product(range(Q), repeat=n - 1):
            acc = None
            for t in range(nt):
                val = base[t]
                for j, vj in enumerate(rest, start=1):
                    val = mul[val][pows[j][t][vj]]
                acc = val if acc is None else add[acc][val]
            count += acc == 0
    return count
