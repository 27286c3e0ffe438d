"""Majorization of nonnegative integer vectors.

``x`` majorizes ``y`` (``x > y``) when the prefix sums of ``x`` sorted in
descending order dominate those of ``y`` and the totals agree. The module also
provides k-subset-sum expansions, equalizing-move decompositions and
brute-force checkers for the three facts the tournament bounds lean on:

* the transitive tournament's score vector majorizes every score vector
  (``check_transitive_degrees``),
* ``x > y`` iff ``y`` is reachable from ``x`` by equalizing moves
  (``check_equalizing_moves``),
* ``x > y`` implies ``x^(k) > y^(k)`` for every ``k`` (``check_subset_sums``).
"""
from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core import enumerate_all_tournaments, out_degree_vector
from .errors import CapExceededError, LengthMismatchError, PreconditionError, RangeError

SUBSET_SUM_CAP = 10**6
BFS_STATE_CAP = 10**6


class EqualizingMove(NamedTuple):
    """Decrement ``entries[from_index]`` and increment ``entries[to_index]``."""

    from_index: int
    to_index: int


def _vector(x: Sequence[int]) -> tuple[int, ...]:
    v = tuple(int(e) for e in x)
    if not v:
        raise RangeError("vectors must have at least one component")
    if any(e < 0 for e in v):
        raise RangeError(f"entries must be nonnegative: {v}")
    return v


def _same_length(x, y) -> None:
    if len(x) != len(y):
        raise LengthMismatchError(f"length {len(x)} vs {len(y)}")


def majorizes(x: Sequence[int], y: Sequence[int]) -> bool:
    x, y = _vector(x), _vector(y)
    _same_length(x, y)
    if sum(x) != sum(y):
        return False
    sx = itertools.accumulate(sorted(x, reverse=True))
    sy = itertools.accumulate(sorted(y, reverse=True))
    return all(a >= b for a, b in zip(sx, sy))


def subset_sum_vector(x: Sequence[int], k: int) -> tuple[int, ...]:
    """All sums of ``k`` distinct components of ``x``, nonincreasing."""
    x = _vector(x)
    if not 1 <= k <= len(x):
        raise RangeError(f"k must lie in [1, {len(x)}], got {k}")
    if math.comb(len(x), k) > SUBSET_SUM_CAP:
        raise CapExceededError(f"C({len(x)}, {k}) exceeds {SUBSET_SUM_CAP}")
    return tuple(sorted((sum(c) for c in itertools.combinations(x, k)), reverse=True))


def apply_moves(x: Sequence[int], moves: Sequence[EqualizingMove]) -> tuple[int, ...]:
    """Apply moves in order, checking each one's precondition."""
    cur = list(_vector(x))
    for mv in moves:
        if cur[mv.from_index] <= cur[mv.to_index]:
            raise PreconditionError(
                f"move {mv} needs entry {cur[mv.from_index]} > {cur[mv.to_index]}"
            )
        cur[mv.from_index] -= 1
        cur[mv.to_index] += 1
    return tuple(cur)


def equalizing_sequence(x: Sequence[int], y: Sequence[int]) -> list[EqualizingMove] | None:
    """Moves turning the multiset of ``x`` into that of ``y``; None unless ``x > y``.

    Each step ranks the current entries in descending order against ``y``
    sorted descending, takes the first rank ``r`` where they differ (there the
    current entry is too large) and the first later rank ``s`` whose entry is
    too small, and moves one unit from ``r`` to ``s``. Majorization is
    preserved and the sorted L1 distance to ``y`` drops by 2 each time.
    """
    x, y = _vector(x), _vector(y)
    _same_length(x, y)
    if not majorizes(x, y):
        return None
    target = sorted(y, reverse=True)
    cur = list(x)
    moves = []
    while True:
        order = sorted(range(len(cur)), key=lambda i: (-cur[i], i))
        ranked = [cur[i] for i in order]
        if ranked == target:
            return moves
        r = next(i for i in range(len(cur)) if ranked[i] != target[i])
        s = next(i for i in range(r + 1, len(cur)) if ranked[i] < target[i])
        mv = EqualizingMove(order[r], order[s])
        cur[mv.from_index] -= 1
        cur[mv.to_index] += 1
        moves.append(mv)


def reachable_by_moves(x: Sequence[int]) -> set[tuple[int, ...]]:
    """Sorted forms of every vector reachable from ``x`` by equalizing moves (BFS)."""
    start = tuple(sorted(_vector(x), reverse=True))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for i, j in itertools.permutations(range(len(v)), 2):
            if v[i] > v[j]:
                w = list(v)
                w[i] -= 1
                w[j] += 1
                w = tuple(sorted(w, reverse=True))
                if w not in seen:
                    if len(seen) >= BFS_STATE_CAP:
                        raise CapExceededError("equalizing-move BFS exceeded its state cap")
                    seen.add(w)
                    queue.append(w)
    return seen


def verify_subset_sum_majorization(x: Sequence[int], y: Sequence[int], k: int) -> bool:
    if not majorizes(x, y):
        raise PreconditionError(f"{tuple(x)} does not majorize {tuple(y)}")
    return majorizes(subset_sum_vector(x, k), subset_sum_vector(y, k))


def transitive_degree_vector(n: int) -> tuple[int, ...]:
    if n < 1:
        raise RangeError("n must be at least 1")
    return tuple(range(n - 1, -1, -1))


# --- lemma checkers ---------------------------------------------------------

@dataclass(frozen=True)
class LemmaReport:
    name: str
    passed: bool
    cases: int
    scope: str
    failure: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{self.name}: {status} ({self.scope}; {self.cases} cases)"
        return text if self.failure is None else f"{text}: {self.failure}"


def check_transitive_degrees(max_n: int = 5) -> LemmaReport:
    """Transitive score vector majorizes every tournament's, exhaustively."""
    cases = 0
    for n in range(1, max_n + 1):
        top = transitive_degree_vector(n)
        for T in enumerate_all_tournaments(n):
            cases += 1
            deg = out_degree_vector(T)
            if not majorizes(top, deg):
                return LemmaReport("Lemma7", False, cases, f"all tournaments n<={max_n}", f"n={n}, degrees={deg}")
    return LemmaReport("Lemma7", True, cases, f"all tournaments n<={max_n}")


def _vectors(n: int, max_sum: int):
    for total in range(max_sum + 1):
        for cut in itertools.combinations(range(total + n - 1), n - 1):
            bounds = (-1,) + cut + (total + n - 1,)
            yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(n))


def check_equalizing_moves(max_n: int = 4, max_sum: int = 8) -> LemmaReport:
    """``equalizing_sequence`` succeeds iff ``majorizes``, cross-checked by BFS."""
    scope = f"all pairs n<={max_n}, sum<={max_sum}"
    cases = 0
    for n in range(1, max_n + 1):
        vecs = list(_vectors(n, max_sum))
        reach = {}
        for x in vecs:
            key = tuple(sorted(x, reverse=True))
            if key not in reach:
                reach[key] = reachable_by_moves(key)
            for y in vecs:
                cases += 1
                by_bfs = tuple(sorted(y, reverse=True)) in reach[key]
                maj = majorizes(x, y)
                moves = equalizing_sequence(x, y)
                ok = maj == by_bfs == (moves is not None)
                if ok and moves is not None:
                    try:
                        ok = sorted(apply_moves(x, moves)) == sorted(y)
                    except PreconditionError:
                        ok = False
                if not ok:
                    return LemmaReport("Lemma9", False, cases, scope, f"x={x}, y={y}")
    return LemmaReport("Lemma9", True, cases, scope)


def random_majorizing_pair(rng: random.Random, max_n: int = 7, max_entry: int = 10):
    """Random ``(x, y)`` with ``x > y``: ``y`` is ``x`` after random equalizing moves."""
    n = rng.randint(1, max_n)
    x = [rng.randint(0, max_entry) for _ in range(n)]
    y = list(x)
    for _ in range(rng.randint(0, 3 * max_entry)):
        i, j = rng.randrange(n), rng.randrange(n)
        if y[i] > y[j]:
            y[i] -= 1
            y[j] += 1
    rng.shuffle(y)
    return tuple(x), tuple(y)


def check_subset_sums(trials: int = 1000, seed: int = 0, max_n: int = 7, max_entry: int = 10) -> LemmaReport:
    """``x^(k) > y^(k)`` for random majorizing pairs and every ``k``."""
    rng = random.Random(seed)
    scope = f"{trials} random majorizing pairs n<={max_n}, all k"
    cases = 0
    for _ in range(trials):
        x, y = random_majorizing_pair(rng, max_n, max_entry)
        for k in range(1, len(x) + 1):
            cases += 1
            if not verify_subset_sum_majorization(x, y, k):
                return LemmaReport("Lemma6", False, cases, scope, f"x={x}, y={y}, k={k}")
    return LemmaReport("Lemma6", True, cases, scope)
