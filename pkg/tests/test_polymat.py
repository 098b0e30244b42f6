import numpy as np
import pytest
from hypothesis import given, strategies as st

from fiedlersys import MatrixPoly, ValidationError
from fiedlersys.polymat import HornerShift

from conftest import EPS, cnormal
from strategies import points, seeds


def scalar(*cs):
    return MatrixPoly([[[c]] for c in cs])


def test_eval_examples():
    assert scalar(-1, 0, 1).eval(1)[0, 0] == 0
    assert scalar(1, 0, 1).eval(1j)[0, 0] == 0
    P = MatrixPoly([np.arange(4).reshape(2, 2), np.eye(2)])
    assert np.array_equal(P.eval(0), P[0])


def test_constructor_rejects_bad_input():
    with pytest.raises(ValidationError):
        MatrixPoly([[[1]]])
    with pytest.raises(ValidationError):
        MatrixPoly([np.eye(2), np.zeros((2, 2))])
    with pytest.raises(ValidationError):
        MatrixPoly([np.eye(2), np.eye(3)])
    with pytest.raises(ValidationError):
        MatrixPoly([[[np.nan]], [[1]]])
    with pytest.raises(ValidationError):
        MatrixPoly([np.ones((2, 3)), np.ones((2, 3))])


def test_coefficients_are_read_only():
    P = scalar(1, 2)
    with pytest.raises(ValueError):
        P.coeffs[0][0, 0] = 5


def test_horner_shift_endpoints():
    P = MatrixPoly([cnormal(np.random.default_rng(0), 2, 2) for _ in range(3)])
    h0 = P.horner_shift(0)
    assert isinstance(h0, HornerShift) and h0.degree == 0
    assert np.array_equal(h0.coeffs[0], P[2])
    assert P.horner_shift(2) == P
    h1 = P.horner_shift(1)
    z = 0.3 - 1.1j
    assert np.allclose(h1.eval(z), P[1] + z * P[2], rtol=0, atol=1e-14)
    with pytest.raises(IndexError):
        P.horner_shift(3)


def test_is_regular_examples():
    assert MatrixPoly([np.zeros((2, 2)), np.eye(2)]).is_regular()
    assert MatrixPoly([[[0, 0], [0, 1]], [[1, 0], [0, 0]]]).is_regular()
    # det = 0 identically
    assert not MatrixPoly([[[1, 1], [1, 1]], [[1, 1], [1, 1]]]).is_regular()


def test_transpose_example():
    P = MatrixPoly([np.eye(2), [[0, 1], [0, 0]]])
    assert np.array_equal(P.transpose()[1], [[0, 0], [1, 0]])


@given(seeds, st.integers(1, 3), st.integers(1, 5), points)
def test_horner_matches_naive(seed, n, m, z):
    P = MatrixPoly([cnormal(np.random.default_rng(seed), n, n) for _ in range(m + 1)])
    diff = np.linalg.norm(P.eval(z) - P.eval_naive(z))
    scale = sum(abs(z) ** j * np.linalg.norm(a) for j, a in enumerate(P.coeffs))
    assert diff <= 10 * m * n * EPS * scale


@given(seeds, st.integers(1, 3), st.integers(1, 5), points)
def test_horner_recursion_exact(seed, n, m, z):
    P = MatrixPoly([cnormal(np.random.default_rng(seed), n, n) for _ in range(m + 1)])
    for k in range(m):
        lhs = P.horner_shift_at(k + 1, z)
        rhs = complex(z) * P.horner_shift_at(k, z) + P[m - k - 1]
        assert np.array_equal(lhs, rhs)


@given(seeds, st.integers(1, 3), st.integers(1, 4))
def test_adjoint_and_transpose_involutions(seed, n, m):
    P = MatrixPoly([cnormal(np.random.default_rng(seed), n, n) for _ in range(m + 1)])
    assert P.adjoint().adjoint() == P
    assert P.transpose().transpose() == P
    H = MatrixPoly([(a + a.conj().T) / 2 for a in P.coeffs])
    assert H.is_hermitian() and H.adjoint() == H


def test_reversal():
    P = scalar(1, 2, 3)
    assert [c[0, 0] for c in P.reversal().coeffs] == [3, 2, 1]
