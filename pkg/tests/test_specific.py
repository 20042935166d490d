from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import int_matrix
from oracles import rank_fraction
from tensorid.errors import NotApplicable, TooLarge
from tensorid.field import QQ
from tensorid.specific import (Decomposition, DecompositionFormatError, SpecificConfig,
                               SpecificStatus, Stage, check_specific, compress, k_rank,
                               kruskal_specific, load_fixture_555r7, multilinear_multiply)


def obj(M):
    return QQ.array(M)


def low_span_decomposition(rng, n, k, r):
    """Rank-r decomposition in n x n x n whose factor columns span k-dimensional spaces."""
    return Decomposition([obj(int_matrix(rng, n, k).dot(int_matrix(rng, k, r))) for _ in range(3)])


def test_fixture_loads_as_printed():
    dec = load_fixture_555r7()
    assert dec.dims == (5, 5, 5) and dec.r == 7
    assert list(dec.factors[0][:, 0]) == [1, 1, 1, 1, 1]
    assert list(dec.factors[1][:, 1]) == [11, 13, 12, 15, 14]
    assert list(dec.factors[2][:, 1]) == [-2, 6, 5, -3, 6]
    for k in range(3):
        assert [list(dec.factors[k][:, 2 + j]) for j in range(5)] == np.eye(5, dtype=int).tolist()


def test_json_round_trip(tmp_path):
    dec = Decomposition([obj([[1, "1/2"], [0, 3]]), obj([[2, 1], [1, 1]]), obj([[1, 0], ["-2/3", 1]])])
    doc = dec.to_dict()
    assert doc["factors"][0][0] == [1, "1/2"]
    path = tmp_path / "d.json"
    path.write_text(json.dumps(doc))
    back = Decomposition.load(path)
    assert all(np.array_equal(a, b) for a, b in zip(dec.factors, back.factors))
    assert back.factors[2][1, 0] == Fraction(-2, 3)


@pytest.mark.parametrize("doc", [
    {"shape": [2, 2, 2], "rank": 1},
    {"shape": [2, 2, 2], "rank": 1, "factors": [[[1], [1]], [[1], [1]]]},
    {"shape": [2, 2, 2], "rank": 2, "factors": [[[1], [1]]] * 3},
    {"shape": [2, 2, 2], "rank": 1, "factors": [[[1], ["x"]]] * 3},
    {"shape": [2, 2, 2], "rank": 1, "factors": [[[1], ["1/0"]]] * 3},
    {"shape": [2, 2, 2], "rank": 1, "factors": [[[0], [0]], [[1], [1]], [[1], [1]]]},
    {"shape": "abc", "rank": 1, "factors": []},
])
def test_malformed_documents(doc):
    with pytest.raises(DecompositionFormatError):
        Decomposition.from_dict(doc)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(DecompositionFormatError):
        Decomposition.load(p)


@settings(max_examples=120)
@given(st.integers(0, 10**6), st.lists(st.integers(2, 5), min_size=3, max_size=3),
       st.integers(1, 5), st.data())
def test_compress_reconstruction_identity(seed, dims, r, data):
    rng = np.random.default_rng(seed)
    factors = []
    for n in dims:
        k = data.draw(st.integers(1, min(n, r)))
        A = int_matrix(rng, n, r, rank=k)
        for i in range(r):
            if not any(A[:, i]):
                A[0, i] = 1
        factors.append(obj(A))
    dec = Decomposition(factors)
    core, bases = compress(dec)
    assert core.dims == tuple(rank_fraction(A.tolist()) for A in dec.factors)
    for Q, X, A in zip(bases, core.factors, dec.factors):
        assert np.array_equal(Q.dot(X), A)
    assert np.array_equal(multilinear_multiply(core.tensor(), bases), dec.tensor())


def test_compress_full_rank_is_identity():
    dec = load_fixture_555r7()
    core, bases = compress(dec)
    assert core.dims == (5, 5, 5)
    assert all(np.array_equal(Q, QQ.identity(5)) for Q in bases)
    assert all(np.array_equal(a, b) for a, b in zip(core.factors, dec.factors))


def test_compress_low_span_fixture():
    core, _ = compress(low_span_decomposition(np.random.default_rng(0), 6, 4, 6))
    assert core.dims == (4, 4, 4)


def k_rank_oracle(A):
    A = A.tolist()
    n, r = len(A), len(A[0])
    best = 0
    for k in range(1, min(n, r) + 1):
        if all(rank_fraction([[row[c] for c in cols] for row in A]) == k
               for cols in combinations(range(r), k)):
            best = k
        else:
            break
    return best


def test_k_rank_against_oracle(rng):
    for _ in range(20):
        n, r = (int(x) for x in rng.integers(2, 6, size=2))
        A = int_matrix(rng, n, r, lo=-2, hi=2)
        assert k_rank(A) == k_rank_oracle(A)
    A = obj([[1, 2, 0], [1, 2, 1]])  # proportional first two columns
    assert k_rank(A) == 1


def test_kruskal_fixture_not_certified():
    rep = kruskal_specific(load_fixture_555r7())
    assert rep.k_ranks == (5, 5, 5) and rep.bound == Fraction(13, 2) and not rep.certified


def test_kruskal_rank_one_formula():
    dec = Decomposition([obj([[1], [2]]), obj([[1], [1]]), obj([[3], [1]])])
    rep = kruskal_specific(dec)
    assert rep.k_ranks == (1, 1, 1) and rep.bound == Fraction(1, 2) and not rep.certified


def test_kruskal_generic_333():
    rng = np.random.default_rng(9)
    dec = Decomposition([obj(int_matrix(rng, 3, 3)) for _ in range(3)])
    rep = kruskal_specific(dec)
    assert rep.k_ranks == (3, 3, 3) and rep.bound == Fraction(7, 2) and rep.certified


def test_kruskal_guards():
    rng = np.random.default_rng(1)
    with pytest.raises(TooLarge):
        kruskal_specific(Decomposition([obj(int_matrix(rng, 3, 15, 1, 5)) for _ in range(3)]))
    with pytest.raises(NotApplicable):
        kruskal_specific(Decomposition([obj([[1], [1]])] * 4))


def test_fixture_unique_with_all_numerics():
    v = check_specific(load_fixture_555r7())
    assert v.status is SpecificStatus.UNIQUE and v.unique
    rep = v.report
    assert rep["T_shape"] == [125, 105] and rep["kernel_rows"] == rep["ell"] == 34
    assert rep["hessian_shape"] == [12, 408] and rep["hessian_block_shape"] == [12, 12]
    assert rep["hessian_ranks"] == [12] * 7
    s = rep["smoothness"]
    assert (s["flattening_rank"], s["kernel_dim"], s["cokernel_dim"], s["image_dim"]) == (42, 8, 8, 34)
    json.dumps(v.to_dict())


def test_skip_smoothness_downgrades():
    v = check_specific(load_fixture_555r7(), SpecificConfig(skip_smoothness=True))
    assert v.status is SpecificStatus.UNIQUE_ASSUMING_NONSINGULARITY
    assert "assuming nonsingularity" in v.describe()


def test_modular_prescreen_is_never_unique():
    v = check_specific(load_fixture_555r7(), SpecificConfig(field=8191))
    assert v.status is SpecificStatus.MODULAR_EVIDENCE and not v.unique


def test_singular_point_control():
    v = check_specific(low_span_decomposition(np.random.default_rng(3), 6, 4, 6))
    assert v.status is SpecificStatus.INCONCLUSIVE and v.stage is Stage.SMOOTHNESS
    assert v.report["core_shape"] == [4, 4, 4]


def test_repeated_point_is_never_unique():
    d = load_fixture_555r7()
    dup = Decomposition([np.concatenate([A[:, :6], A[:, :1]], axis=1) for A in d.factors])
    assert check_specific(dup).status is SpecificStatus.INCONCLUSIVE
    v = check_specific(dup, SpecificConfig(skip_smoothness=True))
    assert v.status is SpecificStatus.INCONCLUSIVE and v.stage is Stage.KERNEL_COUNT


def test_degenerate_compression():
    dec = Decomposition([obj([[1, 2], [1, 2]]), obj([[1, 0], [0, 1]]), obj([[1, 1], [0, 1]])])
    v = check_specific(dec)
    assert v.stage is Stage.COMPRESSION


def test_order_four_requires_skip():
    rng = np.random.default_rng(0)
    dec = Decomposition([obj(int_matrix(rng, 3, 2)) for _ in range(4)])
    assert check_specific(dec).stage is Stage.SMOOTHNESS
    assert check_specific(dec, SpecificConfig(skip_smoothness=True)).status is \
        SpecificStatus.UNIQUE_ASSUMING_NONSINGULARITY


def test_permutation_and_rescaling_keep_uniqueness():
    d = load_fixture_555r7()
    perm = [3, 0, 6, 2, 5, 1, 4]
    lam = [Fraction(k + 2, 3) for k in range(7)]
    A1 = d.factors[0][:, perm] * np.array(lam, dtype=object)
    A2 = d.factors[1][:, perm] * np.array([Fraction(-1, k + 1) for k in range(7)], dtype=object)
    A3 = d.factors[2][:, perm] * np.array([-(k + 1) / l for k, l in enumerate(lam)], dtype=object)
    dec = Decomposition([QQ.array(A1), QQ.array(A2), QQ.array(A3)])
    assert np.array_equal(dec.tensor(), d.tensor())
    assert check_specific(dec).unique


def test_embedding_agrees_with_core():
    rng = np.random.default_rng(11)
    d = load_fixture_555r7()
    Qs = [obj(int_matrix(rng, n, 5, -3, 3)) for n in (7, 6, 5)]
    big = Decomposition([Q.dot(A) for Q, A in zip(Qs, d.factors)])
    v = check_specific(big)
    assert v.report["core_shape"] == [5, 5, 5]
    assert v.unique == check_specific(compress(big)[0]).unique == True  # noqa: E712
