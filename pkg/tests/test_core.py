import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_tournament, tournaments
from tournsim.core import (
    Tournament,
    dominates,
    enumerate_all_tournaments,
    enumeration_bits,
    out_degree_vector,
    parse_tournament,
    read_tournament,
    render_tournament,
    tournament_from_matrix,
    write_tournament,
)
from tournsim.errors import (
    CapExceededError,
    DimensionError,
    ParseError,
    SelfComparisonError,
    StructureError,
)


def test_smallest_tournament():
    T = tournament_from_matrix([[0, 1], [0, 0]])
    assert T.n == 2
    assert dominates(T, 0, 1) and not dominates(T, 1, 0)


def test_three_cycle(cycle3):
    assert dominates(cycle3, 0, 1)
    assert not dominates(cycle3, 1, 0)
    assert dominates(cycle3, 2, 0)
    assert out_degree_vector(cycle3) == (1, 1, 1)


@pytest.mark.parametrize(
    "rows, error",
    [
        ([[0, 0], [0, 0]], StructureError),
        ([[0, 1], [1, 0]], StructureError),
        ([[1, 1], [0, 0]], StructureError),
        ([[0, 1, 0], [0, 0, 1]], DimensionError),
        ([[0, 2], [0, 0]], StructureError),
        ([], DimensionError),
    ],
)
def test_invalid_matrices(rows, error):
    with pytest.raises(error):
        tournament_from_matrix(rows)


def test_dominates_errors(transitive4):
    assert not dominates(transitive4, 3, 0)
    with pytest.raises(SelfComparisonError):
        dominates(transitive4, 2, 2)
    with pytest.raises(IndexError):
        dominates(transitive4, 0, 4)
    with pytest.raises(IndexError):
        dominates(transitive4, -1, 0)


@pytest.mark.parametrize("n, expected", [(1, (0,)), (4, (3, 2, 1, 0)), (70, tuple(range(69, -1, -1)))])
def test_transitive_degrees(n, expected):
    assert out_degree_vector(Tournament.transitive(n)) == expected


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_all_tournaments(2)) == 2
    assert sum(1 for _ in enumerate_all_tournaments(4)) == 64
    threes = list(enumerate_all_tournaments(3))
    assert len(threes) == 8
    assert sum(out_degree_vector(T) == (1, 1, 1) for T in threes) == 2


def test_enumeration_order():
    # a_1 vs a_2 is the most significant digit; all-zero bits put a_n on top.
    first, second, *_, last = enumerate_all_tournaments(3)
    assert out_degree_vector(first) == (0, 1, 2)
    assert not dominates(second, 0, 1) and not dominates(second, 0, 2) and dominates(second, 1, 2)
    assert out_degree_vector(last) == (2, 1, 0)
    rows = enumeration_bits(3)
    assert rows[1].tolist() == [False, False, True]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_distinct_and_valid(n):
    seen = set()
    for T in enumerate_all_tournaments(n):
        adj = T.to_bool()
        assert not adj.diagonal().any()
        off = ~np.eye(n, dtype=bool)
        assert np.all((adj ^ adj.T)[off])
        assert sum(out_degree_vector(T)) == n * (n - 1) // 2
        seen.add(T)
    assert len(seen) == 2 ** (n * (n - 1) // 2)


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        next(enumerate_all_tournaments(7))


@given(tournaments(max_n=40))
@settings(max_examples=150)
def test_antisymmetry_and_degree_sum(T):
    adj = T.to_bool()
    for i in range(T.n):
        for j in range(T.n):
            if i != j:
                assert T.dominates(i, j) != T.dominates(j, i)
                assert T.dominates(i, j) == adj[i, j]
    assert sum(out_degree_vector(T)) == T.n * (T.n - 1) // 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_render_parse_roundtrip_exhaustive(n):
    for T in enumerate_all_tournaments(n):
        assert parse_tournament(render_tournament(T)) == T


def test_roundtrip_all_n6():
    count = 0
    for T in enumerate_all_tournaments(6):
        assert parse_tournament(render_tournament(T)) == T
        count += 1
    assert count == 32768


@pytest.mark.parametrize("n", [50, 200])
def test_render_parse_roundtrip_large(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        T = random_tournament(rng, n)
        assert parse_tournament(render_tournament(T)) == T


def test_file_roundtrip(tmp_path, cycle3):
    path = tmp_path / "t.txt"
    write_tournament(cycle3, path)
    assert path.read_bytes() == b"3\n0 1 0\n0 0 1\n1 0 0\n"
    assert read_tournament(path) == cycle3


def test_parse_comments_and_errors():
    assert parse_tournament("# header\n2\n# row 1\n0 1\n0 0\n").n == 2
    with pytest.raises(ParseError, match="line 3"):
        parse_tournament("2\n0 1\n0 x\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_tournament("2\n0 1\n1 0\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_tournament("two\n")
    with pytest.raises(ParseError):
        parse_tournament("3\n0 1 1\n0 0 1\n")
    with pytest.raises(ParseError):
        parse_tournament("")


def test_immutable(cycle3):
    with pytest.raises(ValueError):
        cycle3.bits[0, 0] = 0


def test_permuted_relabels():
    T = Tournament.transitive(4)
    P = T.permuted([3, 2, 1, 0])
    assert out_degree_vector(P) == (0, 1, 2, 3)
    assert P.dominates(3, 0)


def test_words_beyond_64_bits():
    rng = np.random.default_rng(7)
    T = random_tournament(rng, 130)
    assert T.bits.shape == (130, 3)
    adj = T.to_bool()
    assert list(out_degree_vector(T)) == adj.sum(axis=1).tolist()
    assert T.dominates(1, 129) == adj[1, 129]
