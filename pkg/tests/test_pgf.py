import numpy as np
import pytest
from hypothesis import given

from fiedlersys import (ImproperPermutationError, PreconditionError, ProperPermutation,
                        UnsupportedDegreeError, ValidationError)
from fiedlersys import index as ix
from fiedlersys.fiedler import fiedler_pencil, is_operation_free
from fiedlersys.pgf import (NPGF_MESSAGE, hermitian_pgf, is_block_tridiagonal, is_hermitian_pencil,
                            parse_pgf, pgf_from_poly, pgf_pencil, proper_permutations,
                            tridiagonal_pgf, tridiagonal_pgf_even)
from fiedlersys.spectral import match_multisets, solve_pencil
from fiedlersys.system import random_system

from strategies import systems


def test_properness():
    ProperPermutation((0, 2), (1, 3))
    with pytest.raises(ImproperPermutationError, match="MM_m is always singular"):
        ProperPermutation((1,), (0,))
    with pytest.raises(ImproperPermutationError):
        ProperPermutation((0, 2), (1,))
    with pytest.raises(ValidationError):
        ProperPermutation((0, 0), (2,))
    assert "higher order systems" in NPGF_MESSAGE


def test_parse_pgf():
    assert parse_pgf("0,2;1,3") == ProperPermutation((0, 2), (1, 3))
    with pytest.raises(ValidationError):
        parse_pgf("0,1,2")


def test_fiedler_case():
    rng = np.random.default_rng(0)
    for m in range(1, 5):
        sys = random_system(2, m, 1, rng)
        for order in [ix.first_companion(m), ix.second_companion(m), ix.random_order(m, rng)]:
            assert pgf_pencil(sys, ProperPermutation(order, (m,))) == fiedler_pencil(sys, order)


def test_m1_trivial():
    sys = random_system(2, 1, 1, np.random.default_rng(1))
    pencil = pgf_pencil(sys, parse_pgf("0;1"))
    assert np.array_equal(pencil.T[:2, :2], sys.P[1]) and not pencil.T[2:].any()
    assert np.array_equal(pencil.N, np.block([[-sys.P[0], sys.B], [sys.C, sys.D]]))


def test_enumeration_m4():
    rng = np.random.default_rng(2)
    for m in range(1, 5):
        sys = random_system(2, m, 1, rng)
        zs = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        dets = [np.linalg.det(sys.eval_S(z)) for z in zs]
        for w in proper_permutations(m):
            pencil = pgf_pencil(sys, w)
            assert is_operation_free(pencil, sys)
            ratios = np.array([np.linalg.det(pencil(z)) / d for z, d in zip(zs, dets)])
            assert np.max(np.abs(ratios - ratios[0])) <= 1e-8 * abs(ratios[0])
            poly = pgf_pencil(sys.P, w)
            rebuilt = pgf_from_poly(poly, ix.cip(w.w0), sys.B, sys.C, sys.D)
            assert rebuilt == pencil


def test_pgf_from_poly_border_at_last_block():
    sys = random_system(2, 3, 1, np.random.default_rng(3))
    poly = pgf_pencil(sys.P, ProperPermutation((0, 2), (1, 3)))
    assert ix.cip((0, 2)) == (0, 0)
    pencil = pgf_from_poly(poly, ix.CipPair(0, 0), sys.B, sys.C, sys.D)
    assert np.array_equal(pencil.N[4:6, 6:], sys.B)
    assert np.array_equal(pencil.N[6:, 4:6], sys.C)


def test_tridiagonal_pgf():
    rng = np.random.default_rng(4)
    for m in (3, 4, 5):
        sys = random_system(1, m, 1, rng)
        assert is_block_tridiagonal(tridiagonal_pgf(sys))
        assert not is_block_tridiagonal(tridiagonal_pgf_even(sys))
    sys2 = random_system(2, 2, 1, rng)
    pencil = tridiagonal_pgf(sys2)
    assert pencil.meta["w"] == ((0,), (1, 2))
    assert is_block_tridiagonal(pencil)
    assert "warning" in tridiagonal_pgf(random_system(2, 1, 1, rng)).meta


def test_first_companion_not_tridiagonal():
    sys = random_system(1, 3, 1, np.random.default_rng(5))
    assert not is_block_tridiagonal(fiedler_pencil(sys, ix.first_companion(3)))


def test_hermitian_pgf():
    rng = np.random.default_rng(6)
    for m in (1, 3, 5):
        sys = random_system(2, m, 1, rng, hermitian=True)
        pencil = hermitian_pgf(sys)
        assert is_hermitian_pencil(pencil) and is_operation_free(pencil, sys)
    with pytest.raises(UnsupportedDegreeError):
        hermitian_pgf(random_system(2, 2, 1, rng, hermitian=True))
    with pytest.raises(PreconditionError):
        hermitian_pgf(random_system(2, 3, 1, rng))


@given(systems(m=(1, 3), r=(1, 1), hermitian=True))
def test_hermitian_spectrum_conjugate_closed(sys):
    if sys.m % 2 == 0:
        return
    eig = solve_pencil(hermitian_pgf(sys)).eigenvalues
    gap, _ = match_multisets(eig, eig.conj())
    assert gap <= 1e-8 * max(1.0, np.max(np.abs(eig), initial=1.0))


def test_tridiagonal_iff_enumeration():
    """Bordered PGF is block tridiagonal iff its polynomial part is and CIP(w0) = (0, 0)."""
    rng = np.random.default_rng(7)
    for m in range(1, 5):
        sys = random_system(1, m, 1, rng)
        for w in proper_permutations(m):
            full = is_block_tridiagonal(pgf_pencil(sys, w))
            cond = is_block_tridiagonal(pgf_pencil(sys.P, w)) and ix.cip(w.w0) == (0, 0)
            assert full == cond
