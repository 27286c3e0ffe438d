"""Tournaments as packed bit matrices.

Alternatives are 0-based in the API and 1-based (``a_1 .. a_n``) in every
piece of user-facing text: files, CLI output and ``repr``.

Text format::

    # comment lines are ignored
    3
    0 1 0
    0 0 1
    1 0 0
"""
from __future__ import annotations

import itertools
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .errors import (
    CapExceededError,
    DimensionError,
    ParseError,
    SelfComparisonError,
    StructureError,
)

ENUMERATION_CAP = 6


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def upper_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column indices of pairs ``i < j`` in lexicographic order (pair rank)."""
    return np.triu_indices(n, 1)


class Tournament:
    """Complete asymmetric dominance relation on ``n >= 1`` alternatives.

    Immutable. Build with :func:`tournament_from_matrix` or the classmethods;
    the constructor trusts its input and is for internal use.
    """

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: np.ndarray):
        bits = np.ascontiguousarray(bits, dtype=np.uint64)
        bits.setflags(write=False)
        self.n = n
        self.bits = bits

    @classmethod
    def from_bool(cls, adj: np.ndarray) -> "Tournament":
        n = adj.shape[0]
        padded = np.zeros((n, K.n_words(n) * 64), dtype=bool)
        padded[:, :n] = adj
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(n, packed.view("<u8").reshape(n, -1))

    @classmethod
    def from_upper_bits(cls, n: int, upper: Sequence[bool]) -> "Tournament":
        """Build from one orientation bit per pair in rank order (1 = ``i -> j``)."""
        upper = np.asarray(upper, dtype=bool)
        adj = np.zeros((n, n), dtype=bool)
        rows, cols = upper_pairs(n)
        adj[rows, cols] = upper
        adj[cols, rows] = ~upper
        return cls.from_bool(adj)

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        """``a_i`` dominates ``a_j`` for all ``i < j``."""
        return cls.from_bool(np.triu(np.ones((n, n), dtype=bool), 1))

    def to_bool(self) -> np.ndarray:
        raw = np.unpackbits(self.bits.view(np.uint8), axis=1, bitorder="little")
        return raw[:, : self.n].astype(bool)

    def upper_bits(self) -> np.ndarray:
        rows, cols = upper_pairs(self.n)
        return self.to_bool()[rows, cols]

    def dominates(self, i: int, j: int) -> bool:
        return dominates(self, i, j)

    def out_degrees(self) -> tuple[int, ...]:
        return out_degree_vector(self)

    def permuted(self, perm: Sequence[int]) -> "Tournament":
        """Relabel so that alternative ``i`` becomes ``perm[i]``."""
        perm = np.asarray(perm)
        adj = self.to_bool()
        out = np.zeros_like(adj)
        out[np.ix_(perm, perm)] = adj
        return Tournament.from_bool(out)

    def __eq__(self, other):
        if not isinstance(other, Tournament):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self):
        edges = " ".join(
            f"{i + 1}>{j + 1}" for i, j in zip(*np.nonzero(self.to_bool()))
        )
        return f"Tournament(n={self.n}: {edges})"


def tournament_from_matrix(rows) -> Tournament:
    """Validate a square 0/1 grid and return its tournament."""
    try:
        adj = np.array(rows, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"not a rectangular integer grid: {exc}") from None
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square grid, got shape {adj.shape}")
    if not np.isin(adj, (0, 1)).all():
        raise StructureError("entries must be 0 or 1")
    diag = np.nonzero(np.diagonal(adj))[0]
    if diag.size:
        raise StructureError(f"diagonal entry for a_{diag[0] + 1} is nonzero")
    bad = np.argwhere(np.triu(adj + adj.T != 1, 1))
    if bad.size:
        i, j = bad[0]
        raise StructureError(
            f"pair (a_{i + 1}, a_{j + 1}) must have exactly one edge, "
            f"got {adj[i, j]}/{adj[j, i]}"
        )
    return Tournament.from_bool(adj.astype(bool))


def _check_index(T: Tournament, i: int) -> None:
    if not 0 <= i < T.n:
        raise IndexError(f"alternative index {i} out of range for n={T.n}")


def dominates(T: Tournament, i: int, j: int) -> bool:
    _check_index(T, i)
    _check_index(T, j)
    if i == j:
        raise SelfComparisonError(f"alternative {i} compared with itself")
    return bool((int(T.bits[i, j >> 6]) >> (j & 63)) & 1)


def out_degree_vector(T: Tournament) -> tuple[int, ...]:
    return tuple(int(d) for d in K.out_degrees(T.bits, T.n))


def enumerate_all_tournaments(n: int) -> Iterator[Tournament]:
    """Yield all ``2**(n(n-1)/2)`` labeled tournaments on ``n`` alternatives.

    Order: binary counting where the orientation bits of the pairs, listed in
    lexicographic ``(i, j)`` order, form the counter's numeral with pair
    ``(a_1, a_2)`` as the most significant digit. Bit 1 means ``a_i -> a_j``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > ENUMERATION_CAP:
        raise CapExceededError(f"enumeration is capped at n={ENUMERATION_CAP}, got {n}")
    m = pair_count(n)
    for upper in itertools.product((False, True), repeat=m):
        yield Tournament.from_upper_bits(n, upper)


def enumeration_bits(n: int) -> np.ndarray:
    """All orientation rows of :func:`enumerate_all_tournaments`, shape ``(2**m, m)``."""
    if n > ENUMERATION_CAP:
        raise CapExceededError(f"enumeration is capped at n={ENUMERATION_CAP}, got {n}")
    m = pair_count(n)
    codes = np.arange(1 << m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(bool)


def render_tournament(T: Tournament) -> str:
    adj = T.to_bool().astype(int)
    lines = [str(T.n)] + [" ".join(str(v) for v in row) for row in adj]
    return "\n".join(lines) + "\n"


def parse_tournament(text: str) -> Tournament:
    """Parse the text format; errors carry the 1-based line number."""
    content = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not content:
        raise ParseError("empty tournament file")
    no, head = content[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(f"expected alternative count, got {head!r}", no) from None
    if n < 1:
        raise ParseError(f"alternative count must be positive, got {n}", no)
    body = content[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] if body else no)
        raise ParseError(f"expected {n} matrix rows, got {len(body)}", where)
    rows = []
    for no, line in body:
        parts = line.split()
        if len(parts) != n or any(p not in ("0", "1") for p in parts):
            raise ParseError(f"expected {n} entries of 0/1, got {line!r}", no)
        rows.append([int(p) for p in parts])
    adj = np.array(rows, dtype=np.int64)
    bad = np.argwhere(np.triu(adj + adj.T != 1, 1) | np.diag(np.diagonal(adj) != 0))
    if bad.size:
        i, j = bad[0]
        what = (
            f"diagonal entry for a_{i + 1} is nonzero"
            if i == j
            else f"pair (a_{i + 1}, a_{j + 1}) must have exactly one edge"
        )
        raise ParseError(what, body[i][0])
    return tournament_from_matrix(rows)


def read_tournament(path) -> Tournament:
    return parse_tournament(Path(path).read_text(encoding="utf-8"))


def write_tournament(T: Tournament, path) -> None:
    Path(path).write_text(render_tournament(T), encoding="utf-8", newline="\n")
