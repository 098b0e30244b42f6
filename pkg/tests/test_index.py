import itertools

import numpy as np
import pytest
from hypothesis import given

from fiedlersys import PreconditionError, ValidationError
from fiedlersys import index as ix
from fiedlersys.fiedler import factor_product
from fiedlersys.polymat import MatrixPoly

from strategies import orders


def test_from_factor_order_companions():
    for m in range(1, 6):
        first = ix.from_factor_order(ix.first_companion(m))
        assert all(first(i) == m - i for i in range(m))
        second = ix.from_factor_order(ix.second_companion(m))
        assert all(second(i) == i + 1 for i in range(m))
    assert ix.from_factor_order((0,)).sigma == (1,)


def test_bijection_order_round_trip():
    for order in itertools.permutations(range(4)):
        assert ix.from_factor_order(order).order == order


def test_parse_order():
    assert ix.parse_order("5,3,1,4,2,0") == (5, 3, 1, 4, 2, 0)
    with pytest.raises(ValidationError):
        ix.parse_order("1,x")
    with pytest.raises(ValidationError):
        ix.from_factor_order((0, 0))


def test_ciss_examples():
    for m in range(2, 7):
        assert ix.ciss(ix.from_factor_order(ix.first_companion(m))) == ((0, m - 1),)
        assert ix.ciss(ix.from_factor_order(ix.second_companion(m))) == ((m - 1, 0),)
    assert ix.ciss(ix.from_factor_order((0,))) == ()


def test_cip_examples():
    assert ix.cip((0,)) == (0, 0)
    assert ix.cip((0, 1)) == (1, 0)
    assert ix.cip((1, 0)) == (0, 1)
    assert ix.cip((0, 1, 2)) == (2, 0)
    assert ix.cip((2, 0, 1)) == (1, 0)
    with pytest.raises(PreconditionError):
        ix.cip((1, 2))
    with pytest.raises(PreconditionError):
        ix.cip((0, 1, 0))


def test_rev_examples():
    for m in range(1, 6):
        first = ix.from_factor_order(ix.first_companion(m))
        assert ix.rev(first) == ix.from_factor_order(ix.second_companion(m))
    assert ix.rev(ix.from_factor_order((0,))).sigma == (1,)


def test_csf_examples():
    assert ix.csf((1, 3, 5, 0, 2, 4)) == (5, 3, 4, 1, 2, 0)
    assert ix.strings((1, 3, 5, 0, 2, 4)) == [(5,), (3, 4), (1, 2), (0,)]
    assert ix.csf((0, 1, 2)) == (0, 1, 2)
    assert ix.strings((0, 1, 2)) == [(0, 1, 2)]
    assert ix.strings((2, 1, 0)) == [(2,), (1,), (0,)]


@given(orders())
def test_ciss_sums(order):
    sig = ix.from_factor_order(order)
    seq = ix.ciss(sig)
    m = len(order)
    assert sum(c + i for c, i in seq) == m - 1
    assert sum(ix.consecutions_inversions(sig)) == m - 1
    for k, (c, i) in enumerate(seq):
        if k > 0:
            assert c > 0
        if k < len(seq) - 1:
            assert i > 0


def _flags(seq):
    return [f for c, i in seq for f in [True] * c + [False] * i]


@given(orders())
def test_rev_swaps_consecutions_and_inversions(order):
    sig = ix.from_factor_order(order)
    assert _flags(ix.ciss(ix.rev(sig))) == [not f for f in _flags(ix.ciss(sig))]
    assert ix.rev(ix.rev(sig)) == sig


@given(orders())
def test_csf_fixed_point_and_strings_agree(order):
    form = ix.csf(order)
    assert ix.csf(form) == form
    assert ix.strings(order) == ix.string_decomposition(order)


def test_csf_product_equals_original_product():
    rng = np.random.default_rng(7)
    for m in range(1, 6):
        P = MatrixPoly([rng.standard_normal((1, 1)) for _ in range(m + 1)])
        for order in itertools.permutations(range(m)):
            assert np.array_equal(factor_product(P, order), factor_product(P, ix.csf(order)))


def test_string_index_marks_string_ends():
    where = ix.string_index((1, 3, 5, 0, 2, 4))
    assert where[0] == (1, 0)
    assert where[1] == (2, 2) and where[2] == (2, 2)
    assert where[5] == (4, 5)
