from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from tensorid.errors import IndexOutOfRange, NotApplicable
from tensorid.segre import (ExceptionType, Shape, derive, exception_lookup, kruskal_generic_bound,
                            linear_index, multi_index, unbalanced_threshold)

shapes = st.lists(st.integers(2, 9), min_size=3, max_size=6).map(
    lambda d: Shape.normalized(d)).filter(lambda s: math.prod(s.dims) <= 10_000)


@pytest.mark.parametrize("dims,Pi,Sigma,rbar,perfect", [
    ((5, 5, 5), 125, 12, 9, False),
    ((6, 3, 2), 36, 8, 3, True),
    ((2, 2, 2), 8, 3, 1, True),
    ((8, 3, 3, 2), 144, 12, 11, False),
])
def test_derive_examples(dims, Pi, Sigma, rbar, perfect):
    dq = derive(Shape(dims))
    assert (dq.Pi, dq.Sigma, dq.rbar, dq.perfect) == (Pi, Sigma, rbar, perfect)


@given(shapes)
def test_rbar_is_largest_rank_with_room_left(shape):
    dq = derive(shape)
    # oracle: direct scan of Pi - r(Sigma+1) > 0
    scan = max(r for r in range(0, dq.Pi + 1) if dq.Pi - r * (dq.Sigma + 1) > 0)
    assert dq.rbar == scan
    assert dq.ell(dq.rbar) >= 1
    assert dq.perfect == (dq.Pi % (dq.Sigma + 1) == 0)


@pytest.mark.parametrize("dims", [(5, 5), (1, 2, 2), (2, 3, 2), (5, 1, 1)])
def test_shape_validation(dims):
    with pytest.raises(ValueError):
        Shape(dims)


def test_shape_parse_normalizes():
    assert Shape.parse("2,3,4").dims == (4, 3, 2)
    assert Shape.parse("5x5x5").dims == (5, 5, 5)
    with pytest.raises(ValueError):
        Shape.parse("5,a,5")


def test_linear_index_examples():
    assert linear_index((2, 3), (2, 1)) == 4
    assert linear_index((4, 3, 2), (1, 1, 1)) == 1
    assert linear_index((4, 3, 2), (4, 3, 2)) == 24


def test_linear_index_matches_itertools_order():
    dims = (3, 2, 4)
    for m, multi in enumerate(itertools.product(*(range(1, n + 1) for n in dims)), start=1):
        assert linear_index(dims, multi) == m


@settings(max_examples=200)
@given(shapes, st.data())
def test_multi_index_round_trip(shape, data):
    Pi = math.prod(shape.dims)
    m = data.draw(st.integers(1, Pi))
    multi = multi_index(shape.dims, m)
    assert linear_index(shape.dims, multi) == m
    assert all(1 <= i <= n for i, n in zip(multi, shape.dims))


def test_index_errors():
    with pytest.raises(IndexOutOfRange):
        linear_index((2, 2, 2), (3, 1, 1))
    with pytest.raises(IndexOutOfRange):
        multi_index((2, 2, 2), 9)
    with pytest.raises(IndexOutOfRange):
        multi_index((2, 2, 2), 0)


@pytest.mark.parametrize("dims,r,kind", [
    ((4, 4, 3), 5, ExceptionType.DEFECTIVE),
    ((4, 4, 4), 6, ExceptionType.SPORADIC),
    ((6, 6, 3), 8, ExceptionType.SPORADIC),
    ((2, 2, 2, 2, 2), 5, ExceptionType.SPORADIC),
    ((3, 3, 2, 2), 5, ExceptionType.DEFECTIVE),
    ((7, 7, 2, 2), 13, ExceptionType.DEFECTIVE),
    ((9, 3, 3), 5, ExceptionType.UNBALANCED),
])
def test_exception_lookup_examples(dims, r, kind):
    exc = exception_lookup(Shape(dims), r)
    assert exc is not None and exc.kind is kind


@pytest.mark.parametrize("dims,r", [((5, 5, 5), 9), ((4, 4, 4), 5), ((4, 4, 3), 4),
                                    ((9, 3, 3), 4), ((3, 3, 2, 2), 4)])
def test_exception_lookup_negative(dims, r):
    assert exception_lookup(Shape(dims), r) is None


def test_unbalanced_threshold():
    assert unbalanced_threshold(Shape((9, 3, 3))) == 5


@given(shapes)
def test_unbalanced_inequality(shape):
    dq = derive(shape)
    t = math.prod(shape.dims[1:]) - sum(n - 1 for n in shape.dims[1:])
    for r in range(1, dq.rbar + 1):
        exc = exception_lookup(shape, r)
        if shape.dims[0] > t and r >= t:
            assert exc is not None


@pytest.mark.parametrize("dims,bound", [((6, 6, 6), 8), ((2, 2, 2), 2), ((3, 3, 3), 3),
                                        ((5, 5, 5), 6)])
def test_kruskal_generic_bound(dims, bound):
    assert kruskal_generic_bound(Shape(dims)) == bound


def test_kruskal_generic_bound_needs_order_three():
    with pytest.raises(NotApplicable):
        kruskal_generic_bound(Shape((2, 2, 2, 2)))
