"""Random tournament models.

* Model 1: each pair ``{a_i, a_j}`` is oriented independently, ``a_i -> a_j``
  with probability ``p[i][j]`` (``p[j][i] = 1 - p[i][j]``).
* Condorcet random model: Model 1 with ``p[j][i] = p`` for every ``i < j``,
  i.e. the earlier alternative wins each comparison with probability ``1 - p``.
* Gap model: ``p[i][j] = 0.5 + (0.5 - p)(j - i)/(n - 1)`` for ``i < j``.
* Model 2: ``k`` (odd) voters with independent pairwise coins; the tournament
  is their majority relation.

Textual model forms (``parse_model``)::

    condorcet:p=0.3        gap:p=1/n^2        voters:k=3,p=0.3
    condorcet:p=sqrt(2*log(n)/n)              explicit:file=PATH

Supported ``p`` expressions: rational literals (``0.3``, ``1/2``), ``1/n``,
``c/n``, ``1/n^2``, ``c/n^2``, ``c*sqrt(log(n)/n)``, ``sqrt(c*log(n)/n)`` and
``c*(log(n)/n)^(a/b)``; ``log`` is natural. Values of n-dependent expressions
above 0.5 are clamped to 0.5 with a logged warning.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import _kernels as K
from .core import Tournament, pair_count, upper_pairs
from .errors import (
    DegenerateError,
    DimensionError,
    EvenVotersError,
    ParseError,
    RangeError,
    StructureError,
)
from .rng import Seed

log = logging.getLogger(__name__)

COMPLEMENT_TOL = 1e-12


class EdgeProbabilityMatrix:
    """``p[i][j]`` = probability that ``a_i`` dominates ``a_j``; diagonal is 0."""

    __slots__ = ("n", "p")

    def __init__(self, p):
        p = np.array(p, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] == 0:
            raise DimensionError(f"expected a nonempty square matrix, got shape {p.shape}")
        np.fill_diagonal(p, 0.0)
        if not np.all((p >= 0.0) & (p <= 1.0)):
            raise RangeError("edge probabilities must lie in [0, 1]")
        off = ~np.eye(p.shape[0], dtype=bool)
        gap = np.abs(p + p.T - 1.0)[off]
        if gap.size and gap.max() > COMPLEMENT_TOL:
            i, j = np.argwhere((np.abs(p + p.T - 1.0) > COMPLEMENT_TOL) & off)[0]
            raise StructureError(
                f"p[{i + 1}][{j + 1}] + p[{j + 1}][{i + 1}] must equal 1, "
                f"got {p[i, j] + p[j, i]!r}"
            )
        p.setflags(write=False)
        self.n = p.shape[0]
        self.p = p

    @classmethod
    def from_upper(cls, n: int, upper) -> "EdgeProbabilityMatrix":
        p = np.zeros((n, n))
        rows, cols = upper_pairs(n)
        p[rows, cols] = upper
        p[cols, rows] = 1.0 - np.asarray(upper, dtype=np.float64)
        return cls(p)

    def upper(self) -> np.ndarray:
        """``p[i][j]`` for ``i < j`` in pair-rank order."""
        return self.p[upper_pairs(self.n)]

    def __eq__(self, other):
        if not isinstance(other, EdgeProbabilityMatrix):
            return NotImplemented
        return np.array_equal(self.p, other.p)

    def __repr__(self):
        return f"EdgeProbabilityMatrix(n={self.n})"


def _check_upset_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise RangeError(f"p must lie in [0, 0.5], got {p}")
    return p


def uniform_matrix(n: int) -> EdgeProbabilityMatrix:
    return condorcet_matrix(n, 0.5)


def condorcet_matrix(n: int, p: float) -> EdgeProbabilityMatrix:
    """Earlier alternatives win with probability ``1 - p``."""
    if n < 1:
        raise RangeError("n must be at least 1")
    p = _check_upset_probability(p)
    return EdgeProbabilityMatrix.from_upper(n, np.full(pair_count(n), 1.0 - p))


def gap_matrix(n: int, p: float) -> EdgeProbabilityMatrix:
    p = _check_upset_probability(p)
    if n < 2:
        raise DegenerateError("the gap model needs n >= 2")
    rows, cols = upper_pairs(n)
    return EdgeProbabilityMatrix.from_upper(n, 0.5 + (0.5 - p) * (cols - rows) / (n - 1))


def parse_matrix(text: str) -> EdgeProbabilityMatrix:
    """Probability matrix file: line 1 ``n``, then ``n`` rows of ``n`` floats."""
    content = [
        (no, line.split())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not content:
        raise ParseError("empty matrix file")
    no, head = content[0]
    try:
        (n,) = head
        n = int(n)
    except ValueError:
        raise ParseError(f"expected the alternative count, got {' '.join(head)!r}", no) from None
    if len(content) - 1 != n:
        raise ParseError(f"expected {n} rows, got {len(content) - 1}", content[-1][0])
    rows = []
    for no, parts in content[1:]:
        if len(parts) != n:
            raise ParseError(f"expected {n} entries, got {len(parts)}", no)
        try:
            rows.append([float(v) for v in parts])
        except ValueError as exc:
            raise ParseError(str(exc), no) from None
    try:
        return EdgeProbabilityMatrix(rows)
    except (RangeError, StructureError) as exc:
        raise ParseError(str(exc)) from None


def read_matrix(path) -> EdgeProbabilityMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


# --- p expressions ---------------------------------------------------------

_NUM = r"(\d+(?:\.\d*)?|\.\d+)"
_RATIONAL = re.compile(rf"^{_NUM}(?:/{_NUM})?$")
_PATTERNS: list[tuple[re.Pattern, Callable]] = [
    (re.compile(rf"^{_NUM}/n$"), lambda c: lambda n: c / n),
    (re.compile(rf"^{_NUM}/n\^2$"), lambda c: lambda n: c / n**2),
    (
        re.compile(rf"^(?:{_NUM}\*)?sqrt\(log\(n\)/n\)$"),
        lambda c: lambda n: c * math.sqrt(math.log(n) / n),
    ),
    (
        re.compile(rf"^sqrt\((?:{_NUM}\*)?log\(n\)/n\)$"),
        lambda c: lambda n: math.sqrt(c * math.log(n) / n),
    ),
]
_POWER = re.compile(rf"^(?:{_NUM}\*)?\(log\(n\)/n\)\^\((\d+)/(\d+)\)$")


@dataclass(frozen=True)
class PExpr:
    """A model parameter, constant or a function of ``n``."""

    text: str
    constant: Fraction | None = field(default=None, compare=False)
    fn: Callable[[int], float] | None = field(default=None, compare=False, repr=False)

    def raw(self, n: int) -> float:
        return float(self.constant) if self.constant is not None else self.fn(n)

    def __call__(self, n: int) -> float:
        value = self.raw(n)
        if value > 0.5:
            log.warning("p=%s evaluates to %.6g > 0.5 at n=%d; clamped to 0.5", self.text, value, n)
            return 0.5
        return value

    def __str__(self):
        return self.text


def parse_p(text: str) -> PExpr:
    src = "".join(str(text).split())
    m = _RATIONAL.match(src)
    if m:
        value = Fraction(m.group(1)) / Fraction(m.group(2) or 1)
        if value > Fraction(1, 2):
            raise RangeError(f"p must lie in [0, 0.5], got {src}")
        return PExpr(src, constant=value)
    for pattern, make in _PATTERNS:
        m = pattern.match(src)
        if m:
            c = float(m.group(1)) if m.group(1) else 1.0
            return PExpr(src, fn=make(c))
    m = _POWER.match(src)
    if m:
        c = float(m.group(1)) if m.group(1) else 1.0
        a, b = int(m.group(2)), int(m.group(3))
        if b == 0:
            raise ParseError(f"zero denominator in exponent of {src!r}")
        return PExpr(src, fn=lambda n: c * (math.log(n) / n) ** (a / b))
    raise ParseError(f"unsupported p expression {text!r}")


# --- model specifications ---------------------------------------------------

MODEL_KINDS = ("condorcet", "gap", "voters", "explicit")


@dataclass(frozen=True)
class ModelSpec:
    """Template for a random tournament model, instantiated per ``n``.

    ``voters`` models use ``condorcet_matrix(n, p)`` for every voter unless
    ``matrices`` gives one matrix per voter.
    """

    kind: str
    p: PExpr | None = None
    k: int = 1
    matrix: EdgeProbabilityMatrix | None = field(default=None, compare=False)
    matrices: tuple[EdgeProbabilityMatrix, ...] | None = field(default=None, compare=False)
    source: str | None = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ParseError(f"unknown model kind {self.kind!r}")
        if self.kind in ("condorcet", "gap", "voters") and self.p is None and self.matrices is None:
            raise ParseError(f"model {self.kind!r} needs a p parameter")
        if self.kind == "explicit" and self.matrix is None:
            raise ParseError("explicit model needs a matrix")
        if self.kind == "voters":
            _check_voters(self.k)
            if self.matrices is not None and len(self.matrices) != self.k:
                raise DimensionError(f"expected {self.k} voter matrices, got {len(self.matrices)}")

    @classmethod
    def condorcet(cls, p) -> "ModelSpec":
        return cls("condorcet", p=parse_p(p))

    @classmethod
    def gap(cls, p) -> "ModelSpec":
        return cls("gap", p=parse_p(p))

    @classmethod
    def voters(cls, k: int, p) -> "ModelSpec":
        return cls("voters", p=parse_p(p), k=k)

    @classmethod
    def explicit(cls, matrix: EdgeProbabilityMatrix, source: str | None = None) -> "ModelSpec":
        return cls("explicit", matrix=matrix, source=source)

    def p_value(self, n: int) -> float | None:
        return None if self.p is None else self.p(n)

    def voter_probs(self, n: int) -> np.ndarray:
        """Upper-triangle probabilities, shape ``(k, n(n-1)/2)``, for the kernels."""
        if self.kind == "explicit":
            if n != self.matrix.n:
                raise DimensionError(f"explicit matrix has n={self.matrix.n}, requested n={n}")
            return self.matrix.upper()[None, :]
        if self.kind == "condorcet":
            return condorcet_matrix(n, self.p(n)).upper()[None, :]
        if self.kind == "gap":
            return gap_matrix(n, self.p(n)).upper()[None, :]
        if self.matrices is not None:
            if any(m.n != n for m in self.matrices):
                raise DimensionError(f"voter matrices do not match n={n}")
            return np.stack([m.upper() for m in self.matrices])
        return np.tile(condorcet_matrix(n, self.p(n)).upper(), (self.k, 1))

    def edge_matrix(self, n: int) -> EdgeProbabilityMatrix:
        """Equivalent Model 1 matrix (for voters: per-pair majority probabilities)."""
        probs = self.voter_probs(n)
        if probs.shape[0] == 1:
            return EdgeProbabilityMatrix.from_upper(n, probs[0])
        return EdgeProbabilityMatrix.from_upper(n, majority_probability(probs))

    def __str__(self):
        if self.kind == "explicit":
            return f"explicit:file={self.source or '<memory>'}"
        if self.kind == "voters":
            return f"voters:k={self.k},p={self.p}"
        return f"{self.kind}:p={self.p}"


def parse_model(text: str, base_dir=None) -> ModelSpec:
    src = "".join(str(text).split())
    kind, sep, rest = src.partition(":")
    if not sep or kind not in MODEL_KINDS:
        raise ParseError(f"model must look like 'condorcet:p=0.3', got {text!r}")
    params = {}
    for item in _split_params(rest):
        key, eq, value = item.partition("=")
        if not eq or not value or key in params:
            raise ParseError(f"bad model parameter {item!r} in {text!r}")
        params[key] = value
    allowed = {"condorcet": {"p"}, "gap": {"p"}, "voters": {"k", "p"}, "explicit": {"file"}}[kind]
    if set(params) != allowed:
        raise ParseError(f"model {kind!r} takes parameters {sorted(allowed)}, got {sorted(params)}")
    if kind == "explicit":
        path = Path(params["file"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return ModelSpec.explicit(read_matrix(path), source=params["file"])
    if kind == "voters":
        try:
            k = int(params["k"])
        except ValueError:
            raise ParseError(f"voter count must be an integer, got {params['k']!r}") from None
        return ModelSpec.voters(k, params["p"])
    return ModelSpec(kind, p=parse_p(params["p"]))


def _split_params(rest: str) -> list[str]:
    # Commas separate parameters except inside parentheses.
    items, depth, cur = [], 0, ""
    for ch in rest:
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    items.append(cur)
    return [i for i in items if i]


# --- sampling ---------------------------------------------------------------

def _check_voters(k: int) -> None:
    if k < 1 or k % 2 == 0:
        raise EvenVotersError(f"the number of voters must be odd and positive, got {k}")


def _sample(n: int, probs: np.ndarray, seed: Seed) -> Tournament:
    bits = np.empty((n, K.n_words(n)), dtype=np.uint64)
    K.fill_tournament(bits, n, np.ascontiguousarray(probs, dtype=np.float64), np.uint64(seed.key))
    return Tournament(n, bits)


def sample_model1(m: EdgeProbabilityMatrix, seed: Seed) -> Tournament:
    """One tournament; pair ``(i, j)`` uses draw ``rank(i, j)`` of the seed's stream."""
    return _sample(m.n, m.upper()[None, :], seed)


def sample_model2(n: int, k: int, q, seed: Seed) -> Tournament:
    """Majority relation of ``k`` random voters.

    ``q`` is a Condorcet-style upset probability shared by all voters, one
    :class:`EdgeProbabilityMatrix` shared by all voters, or a sequence of
    ``k`` matrices. Voter ``v``'s coin for pair rank ``r`` is draw ``r*k + v``.
    """
    _check_voters(k)
    if isinstance(q, EdgeProbabilityMatrix):
        q = [q] * k
    elif not isinstance(q, (list, tuple)):
        q = [condorcet_matrix(n, q)] * k
    if len(q) != k:
        raise DimensionError(f"expected {k} voter matrices, got {len(q)}")
    if any(m.n != n for m in q):
        raise DimensionError(f"voter matrices do not match n={n}")
    return _sample(n, np.stack([m.upper() for m in q]), seed)


def sample(spec: ModelSpec, n: int, seed: Seed) -> Tournament:
    return _sample(n, spec.voter_probs(n), seed)


def majority_probability(probs: np.ndarray) -> np.ndarray:
    """Per-pair probability that more than half of the voters say ``i -> j``.

    ``probs`` has shape ``(k, m)``; computed with the Poisson-binomial recurrence.
    """
    k, m = probs.shape
    dist = np.zeros((m, k + 1))
    dist[:, 0] = 1.0
    for v in range(k):
        q = probs[v][:, None]
        dist[:, 1:] = dist[:, 1:] * (1 - q) + dist[:, :-1] * q
        dist[:, 0] *= 1 - q[:, 0]
    return dist[:, k // 2 + 1 :].sum(axis=1)
