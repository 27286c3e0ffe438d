"""The five tournament solutions: COND, CNL, TC, UC and UC-inf.

Each returns a nonempty :class:`AlternativeSet`. The inclusions

    UC-inf(T) <= UC(T) <= TC(T) <= CNL(T)   and   TC(T) <= COND(T)

hold for every tournament.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _kernels as K
from .core import Tournament
from .errors import EmptySetError, UnknownSolutionError


class Solution(enum.Enum):
    COND = "COND"
    CNL = "CNL"
    TC = "TC"
    UC = "UC"
    UCINF = "UCinf"

    @property
    def flag(self) -> int:
        return _FLAG[self]

    @classmethod
    def parse(cls, name) -> "Solution":
        if isinstance(name, Solution):
            return name
        key = str(name).strip().upper().replace("∞", "INF").replace("_", "").replace("-", "")
        try:
            return _ALIASES[key]
        except KeyError:
            raise UnknownSolutionError(f"unknown tournament solution {name!r}") from None

    def __str__(self):
        return self.value


_FLAG = {
    Solution.COND: K.COND,
    Solution.CNL: K.CNL,
    Solution.TC: K.TC,
    Solution.UC: K.UC,
    Solution.UCINF: K.UCINF,
}
_ALIASES = {s.value.upper(): s for s in Solution} | {"UCINFTY": Solution.UCINF}

ALL_SOLUTIONS = tuple(Solution)


@dataclass(frozen=True)
class AlternativeSet:
    """Subset of ``{0, .., n-1}`` stored as an int bitmask."""

    n: int
    mask: int

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "AlternativeSet":
        mask = 0
        for i in members:
            if not 0 <= i < n:
                raise IndexError(f"alternative {i} out of range for n={n}")
            mask |= 1 << i
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "AlternativeSet":
        return cls(n, (1 << n) - 1)

    @classmethod
    def from_bool(cls, flags) -> "AlternativeSet":
        return cls.of(len(flags), np.flatnonzero(flags).tolist())

    def members(self) -> list[int]:
        return [i for i in range(self.n) if self.mask >> i & 1]

    def labels(self) -> list[int]:
        """1-based labels, ascending."""
        return [i + 1 for i in self.members()]

    def is_full(self) -> bool:
        return self.mask == (1 << self.n) - 1

    def issubset(self, other: "AlternativeSet") -> bool:
        return self.mask & ~other.mask == 0

    def __le__(self, other):
        return self.issubset(other)

    def __contains__(self, i):
        return 0 <= i < self.n and bool(self.mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self):
        return bin(self.mask).count("1")

    def __str__(self):
        return "{" + ",".join(str(i) for i in self.labels()) + "}"


def condorcet_winner(T: Tournament) -> int | None:
    deg = K.out_degrees(T.bits, T.n)
    winners = np.flatnonzero(deg == T.n - 1)
    return int(winners[0]) if winners.size else None


def condorcet_loser(T: Tournament) -> int | None:
    if T.n == 1:
        return None
    losers = np.flatnonzero(K.out_degrees(T.bits, T.n) == 0)
    return int(losers[0]) if losers.size else None


def cond(T: Tournament) -> AlternativeSet:
    w = condorcet_winner(T)
    return AlternativeSet.full(T.n) if w is None else AlternativeSet.of(T.n, [w])


def cnl(T: Tournament) -> AlternativeSet:
    # For n = 1 the single alternative is vacuously dominated by all others;
    # it is kept so the choice set stays nonempty.
    loser = condorcet_loser(T)
    full = AlternativeSet.full(T.n)
    return full if loser is None else AlternativeSet(T.n, full.mask & ~(1 << loser))


def condensation(T: Tournament) -> list[AlternativeSet]:
    """Strongly connected components, dominant one first.

    In a tournament the condensation is a linear order: every component
    dominates all components after it.
    """
    labels, count = K.scc_labels(T.bits, T.n)
    return [AlternativeSet.from_bool(labels == c) for c in range(count)]


def top_cycle(T: Tournament) -> AlternativeSet:
    labels, _ = K.scc_labels(T.bits, T.n)
    return AlternativeSet.from_bool(labels == 0)


def is_strongly_connected(T: Tournament) -> bool:
    return K.scc_labels(T.bits, T.n)[1] == 1


def uncovered_set(T: Tournament) -> AlternativeSet:
    """Alternatives reaching every other one by a path of length at most two."""
    return AlternativeSet.from_bool(K.kings(T.bits, T.n, K.full_mask(T.n)))


def covers(T: Tournament, i: int, j: int) -> bool:
    """``a_i`` dominates ``a_j`` and every dominator of ``a_i`` dominates ``a_j``."""
    if i == j or not T.dominates(i, j):
        return False
    return all(T.dominates(l, j) for l in range(T.n) if l not in (i, j) and T.dominates(l, i))


def restrict(T: Tournament, S: AlternativeSet) -> Tournament:
    """Sub-tournament induced on ``S``; members keep their relative order."""
    idx = S.members()
    if not idx:
        raise EmptySetError("cannot restrict a tournament to the empty set")
    adj = T.to_bool()
    return Tournament.from_bool(adj[np.ix_(idx, idx)])


def iterated_uncovered_set(T: Tournament) -> AlternativeSet:
    labels = list(range(T.n))
    current = T
    while True:
        uc = uncovered_set(current)
        if uc.is_full():
            return AlternativeSet.of(T.n, labels)
        labels = [labels[i] for i in uc.members()]
        current = restrict(current, uc)


def iterated_uncovered_set_masked(T: Tournament) -> AlternativeSet:
    """Same fixed point as :func:`iterated_uncovered_set`, computed on masked
    rows of the original matrix instead of induced sub-tournaments."""
    return AlternativeSet.from_bool(K.iterated_kings_masked(T.bits, T.n))


_SOLVERS = {
    Solution.COND: cond,
    Solution.CNL: cnl,
    Solution.TC: top_cycle,
    Solution.UC: uncovered_set,
    Solution.UCINF: iterated_uncovered_set,
}


def solve(solution, T: Tournament) -> AlternativeSet:
    return _SOLVERS[Solution.parse(solution)](T)


def selects_all(solution, T: Tournament) -> bool:
    return solve(solution, T).is_full()


def selects_all_flags(T: Tournament) -> dict[Solution, bool]:
    """All five selects-all predicates via the Monte Carlo kernel."""
    out = np.zeros(5, dtype=np.bool_)
    K.selects_all_flags(T.bits, T.n, True, True, out)
    return {s: bool(out[s.flag]) for s in Solution}
