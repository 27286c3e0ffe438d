"""Bit-parallel tournament kernels.

A tournament on ``n`` alternatives is a ``(n, W)`` uint64 array with
``W = ceil(n / 64)``; bit ``j % 64`` of word ``j // 64`` in row ``i`` is set iff
``a_i`` dominates ``a_j``. Vertex sets use the same one-row word layout.
"""
import numba
import numpy as np

from .rng import trial_key, uniform

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_K1 = np.uint64(0x5555555555555555)
_K2 = np.uint64(0x3333333333333333)
_K4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_KF = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)
_S6 = np.uint64(6)
_M63 = np.uint64(63)

# Flag order shared with the Python layer.
COND, CNL, TC, UC, UCINF = 0, 1, 2, 3, 4


def n_words(n):
    return (n + 63) // 64


@numba.njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> _S1) & _K1)
    x = (x & _K2) + ((x >> _S2) & _K2)
    x = (x + (x >> _S4)) & _K4
    return int((x * _KF) >> _S56)


@numba.njit(cache=True, inline="always")
def lowest_bit(x):
    """Index of the lowest set bit of a nonzero word."""
    return popcount((x & (~x + _U1)) - _U1)


@numba.njit(cache=True, inline="always")
def _bit(j):
    return _U1 << (np.uint64(j) & _M63)


@numba.njit(cache=True)
def full_mask(n):
    w = (n + 63) // 64
    out = np.zeros(w, dtype=np.uint64)
    for j in range(n):
        out[j >> 6] |= _bit(j)
    return out


@numba.njit(cache=True)
def fill_tournament(bits, n, probs, key):
    """Sample into ``bits`` from per-voter upper-triangle probabilities.

    ``probs`` has shape ``(k, n*(n-1)/2)``; ``a_i -> a_j`` (i < j) iff more than
    ``k // 2`` of the ``k`` coins ``uniform < probs[v, rank]`` come up true.
    """
    k = probs.shape[0]
    half = k // 2
    bits[:, :] = _U0
    r = 0
    for i in range(n):
        for j in range(i + 1, n):
            votes = 0
            base = r * k
            for v in range(k):
                if uniform(key, np.uint64(base + v)) < probs[v, r]:
                    votes += 1
            if votes > half:
                bits[i, j >> 6] |= _bit(j)
            else:
                bits[j, i >> 6] |= _bit(i)
            r += 1


@numba.njit(cache=True)
def out_degrees(bits, n):
    deg = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for w in range(bits.shape[1]):
            s += popcount(bits[i, w])
        deg[i] = s
    return deg


@numba.njit(cache=True)
def scc_labels(bits, n):
    """Kosaraju on bitsets; returns (labels, count).

    Components are numbered in topological order of the condensation, so
    label 0 is the dominant (top) component. The transpose of a tournament
    row is its complement minus the vertex itself, so no second matrix is
    materialized.
    """
    w_count = bits.shape[1]
    unvisited = full_mask(n)
    order = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    oc = 0
    for s in range(n):
        if unvisited[s >> 6] & _bit(s) == _U0:
            continue
        unvisited[s >> 6] &= ~_bit(s)
        sp = 1
        stack[0] = s
        while sp > 0:
            v = stack[sp - 1]
            nxt = -1
            for w in range(w_count):
                x = bits[v, w] & unvisited[w]
                if x != _U0:
                    nxt = (w << 6) + lowest_bit(x)
                    break
            if nxt >= 0:
                unvisited[nxt >> 6] &= ~_bit(nxt)
                stack[sp] = nxt
                sp += 1
            else:
                sp -= 1
                order[oc] = v
                oc += 1

    unvisited = full_mask(n)
    labels = np.full(n, -1, dtype=np.int64)
    c = 0
    for idx in range(n - 1, -1, -1):
        s = order[idx]
        if labels[s] >= 0:
            continue
        unvisited[s >> 6] &= ~_bit(s)
        labels[s] = c
        sp = 1
        stack[0] = s
        while sp > 0:
            v = stack[sp - 1]
            nxt = -1
            for w in range(w_count):
                x = ~bits[v, w] & unvisited[w]
                if x != _U0:
                    nxt = (w << 6) + lowest_bit(x)
                    break
            if nxt >= 0:
                unvisited[nxt >> 6] &= ~_bit(nxt)
                labels[nxt] = c
                stack[sp] = nxt
                sp += 1
            else:
                sp -= 1
        c += 1
    return labels, c


@numba.njit(cache=True)
def _is_king(bits, i, members, acc):
    """Whether ``i`` reaches every vertex of ``members`` in at most two steps
    inside the sub-tournament induced by ``members``."""
    w_count = bits.shape[1]
    full = True
    for w in range(w_count):
        acc[w] = bits[i, w] & members[w]
        if w == i >> 6:
            acc[w] |= _bit(i)
        if acc[w] != members[w]:
            full = False
    if full:
        return True
    for w in range(w_count):
        x = bits[i, w] & members[w]
        while x != _U0:
            low = x & (~x + _U1)
            x ^= low
            l = (w << 6) + popcount(low - _U1)
            full = True
            for u in range(w_count):
                acc[u] |= bits[l, u] & members[u]
                if acc[u] != members[u]:
                    full = False
            if full:
                return True
    return False


@numba.njit(cache=True)
def kings(bits, n, members):
    """Kings of the sub-tournament induced by ``members`` (its uncovered set)."""
    out = np.zeros(n, dtype=np.bool_)
    acc = np.empty(bits.shape[1], dtype=np.uint64)
    for i in range(n):
        if members[i >> 6] & _bit(i) != _U0:
            out[i] = _is_king(bits, i, members, acc)
    return out


@numba.njit(cache=True)
def all_kings(bits, n, deg):
    """True iff every alternative is a king; stops at the first non-king.

    Low out-degree vertices are tried first since they are the likeliest
    non-kings; the answer does not depend on the order.
    """
    members = full_mask(n)
    acc = np.empty(bits.shape[1], dtype=np.uint64)
    for i in np.argsort(deg):
        if not _is_king(bits, i, members, acc):
            return False
    return True


@numba.njit(cache=True)
def iterated_kings_masked(bits, n):
    """Fixed point of the uncovered set, iterated on masked rows of ``bits``."""
    members = full_mask(n)
    while True:
        k = kings(bits, n, members)
        nxt = np.zeros_like(members)
        for i in range(n):
            if k[i]:
                nxt[i >> 6] |= _bit(i)
        same = True
        for w in range(members.shape[0]):
            if nxt[w] != members[w]:
                same = False
        if same:
            return k
        members = nxt


@numba.njit(cache=True)
def selects_all_flags(bits, n, need_tc, need_uc, out):
    """Write the five selects-all flags (COND, CNL, TC, UC, UC-inf) to ``out``."""
    if n == 1:
        out[:] = True
        return
    deg = out_degrees(bits, n)
    has_winner = False
    has_loser = False
    for i in range(n):
        if deg[i] == n - 1:
            has_winner = True
        elif deg[i] == 0:
            has_loser = True
    out[COND] = not has_winner
    out[CNL] = not has_loser
    tc_all = False
    if need_tc or need_uc:
        labels, c = scc_labels(bits, n)
        tc_all = c == 1
    out[TC] = tc_all
    # UC is contained in TC, so a reducible tournament can skip the king test.
    uc_all = False
    if need_uc and tc_all:
        uc_all = all_kings(bits, n, deg)
    out[UC] = uc_all
    # UC-inf iteration stops at A immediately when UC = A, and otherwise is
    # confined to the proper subset UC.
    out[UCINF] = uc_all


@numba.njit(cache=True)
def count_cell(probs, n, root, t0, t1, need_tc, need_uc):
    """Selects-all counts over trials ``t0 .. t1-1`` of one experiment cell."""
    counts = np.zeros(5, dtype=np.int64)
    bits = np.empty((n, (n + 63) // 64), dtype=np.uint64)
    flags = np.zeros(5, dtype=np.bool_)
    for t in range(t0, t1):
        key = trial_key(root, np.uint64(t))
        fill_tournament(bits, n, probs, key)
        selects_all_flags(bits, n, need_tc, need_uc, flags)
        for s in range(5):
            if flags[s]:
                counts[s] += 1
    return counts
