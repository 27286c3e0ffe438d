"""Counter-based random streams for reproducible, order-independent sampling.

Every uniform draw is a pure function of ``(root, trial_index, draw_index)``,
so trials can be generated by any worker in any order and still produce the
same tournaments. The mixing function is the SplitMix64 finalizer; a stream
keyed by ``key`` yields ``mix64(key + (d + 1) * GOLDEN)`` at position ``d``,
which is exactly SplitMix64 seeded with ``key``.

Key derivation::

    trial_key(root, t) = mix64(mix64(root) + (t + 1) * GOLDEN)   (mod 2**64)
    draw index          = pair_rank * k + voter_index

``pair_rank`` enumerates the pairs ``(i, j), i < j`` in lexicographic order and
``k`` is the number of voters (1 for edge-probability models). Per-cell roots
for experiments come from :func:`cell_root`, a BLAKE2b digest of the plan seed,
the rendered model and ``n``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numba
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_INT = 0x9E3779B97F4A7C15

GOLDEN = np.uint64(GOLDEN_INT)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@dataclass(frozen=True)
class Seed:
    """Identifies one random stream: a 64-bit root plus a trial counter."""

    root: int
    trial_index: int = 0

    def __post_init__(self):
        if not 0 <= self.root <= MASK64:
            raise ValueError(f"seed root must fit in 64 bits, got {self.root}")
        if self.trial_index < 0:
            raise ValueError("trial_index must be nonnegative")

    @property
    def key(self) -> int:
        return int(trial_key(np.uint64(self.root), np.uint64(self.trial_index)))


@numba.njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@numba.njit(cache=True)
def trial_key(root, trial):
    return mix64(mix64(root) + (trial + _ONE) * GOLDEN)


@numba.njit(cache=True, inline="always")
def uniform(key, index):
    """Uniform double in [0, 1) with 53 random bits at stream position ``index``."""
    return float(mix64(key + (index + _ONE) * GOLDEN) >> _S11) * _INV53


@numba.njit(cache=True)
def _uniforms(key, start, count):
    out = np.empty(count, dtype=np.float64)
    for d in range(count):
        out[d] = uniform(key, np.uint64(start + d))
    return out


def uniforms(seed: Seed, count: int, start: int = 0) -> np.ndarray:
    """Draws ``start .. start+count-1`` of the stream for ``seed``."""
    return _uniforms(np.uint64(seed.key), start, count)


def cell_root(root_seed: int, model: str, n: int) -> int:
    """64-bit root for one experiment cell.

    BLAKE2b (8-byte digest, little-endian) of ``f"{root_seed}|{model}|{n}"``.
    Adding or removing cells never perturbs the streams of other cells.
    """
    text = f"{root_seed}|{model}|{n}".encode("utf-8")
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")
