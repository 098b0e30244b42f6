"""Proper generalized Fiedler (PGF) pencils of a system.

A proper permutation ``w = (w0, w1)`` of ``{0..m}`` has ``0`` in ``w0`` and
``m`` in ``w1``.  The pencil is ``z MM^_{w1} - MM_{w0}`` where every factor of
``w1`` other than ``MM_m`` enters through its closed-form inverse.
Non-proper variants would need ``MM_m`` inverted, which is always singular
for a system, so they are rejected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import index as ix
from .errors import (ImproperPermutationError, PreconditionError, UnsupportedDegreeError,
                     ValidationError)
from .fiedler import BlockPencil, _unpack, factor_product
from .system import StateSpaceSystem

__all__ = [
    "ProperPermutation", "parse_pgf", "pgf_pencil", "pgf_from_poly", "tridiagonal_pgf",
    "tridiagonal_pgf_even", "hermitian_pgf", "is_block_tridiagonal", "is_hermitian_pencil",
    "proper_permutations",
]

NPGF_MESSAGE = ("non-proper generalized Fiedler pencils do not exist for higher order "
                "systems: MM_m is always singular")


@dataclass(frozen=True)
class ProperPermutation:
    w0: tuple
    w1: tuple

    def __post_init__(self):
        w0 = tuple(int(i) for i in self.w0)
        w1 = tuple(int(i) for i in self.w1)
        object.__setattr__(self, "w0", w0)
        object.__setattr__(self, "w1", w1)
        m = len(w0) + len(w1) - 1
        if sorted(w0 + w1) != list(range(m + 1)):
            raise ValidationError(f"({w0}; {w1}) is not a permutation of 0..{m}")
        if 0 not in w0:
            raise ImproperPermutationError(f"0 must lie in w0 ({NPGF_MESSAGE})")
        if m not in w1:
            raise ImproperPermutationError(f"{m} must lie in w1 ({NPGF_MESSAGE})")

    @property
    def m(self) -> int:
        return len(self.w0) + len(self.w1) - 1

    def __str__(self):
        return f"{','.join(map(str, self.w0))};{','.join(map(str, self.w1))}"


def parse_pgf(text: str) -> ProperPermutation:
    """Parse ``"w0;w1"``, e.g. ``"0,2;1,3"``."""
    if text.count(";") != 1:
        raise ValidationError(f"expected 'w0;w1', got {text!r}")
    a, b = text.split(";")
    return ProperPermutation(ix.parse_order(a), ix.parse_order(b))


def proper_permutations(m: int) -> Iterator[ProperPermutation]:
    """Every proper permutation of ``{0..m}`` (all splits of all orderings)."""
    for perm in itertools.permutations(range(m + 1)):
        for cut in range(1, m + 1):
            w0, w1 = perm[:cut], perm[cut:]
            if 0 in w0 and m in w1:
                yield ProperPermutation(w0, w1)


def _pgf(sys, w0: Sequence[int], w1: Sequence[int], label: str, meta: dict) -> BlockPencil:
    P, B, _, _ = _unpack(sys)
    m = P.m
    r = 0 if B is None else B.shape[1]
    T = factor_product(sys, w1, [i != m for i in w1])
    N = factor_product(sys, w0)
    return BlockPencil(T, N, P.n, m, r, label=label, meta=meta)


def pgf_pencil(sys, w: ProperPermutation) -> BlockPencil:
    """PGF pencil ``z MM^_{w1} - MM_{w0}`` of a system (or of ``P`` when ``r = 0``)."""
    m = _unpack(sys)[0].m
    if w.m != m:
        raise ValidationError(f"permutation is for degree {w.m}, system has degree {m}")
    return _pgf(sys, w.w0, w.w1, f"pgf[{w}]", {"kind": "pgf", "w": (w.w0, w.w1)})


def pgf_from_poly(kw_poly: BlockPencil, cip: ix.CipPair, B, C, D) -> BlockPencil:
    """Border a polynomial PGF pencil: ``B`` at block ``m - i0``, ``C`` at block ``m - c0``.

    The border is written in the sign convention of
    :func:`fiedlersys.fiedler.fiedler_pencil`.
    """
    if kw_poly.r != 0:
        raise ValidationError("expected a polynomial (border-free) pencil")
    n, m = kw_poly.n, kw_poly.m
    B = np.asarray(B, dtype=complex)
    C = np.asarray(C, dtype=complex)
    D = np.asarray(D, dtype=complex)
    r = B.shape[1]
    if B.shape != (n, r) or C.shape != (r, n) or D.shape != (r, r):
        raise ValidationError("border dimensions do not match the pencil")
    c0, i0 = cip
    k = n * m
    T = np.zeros((k + r, k + r), dtype=complex)
    N = np.zeros((k + r, k + r), dtype=complex)
    T[:k, :k] = kw_poly.T
    N[:k, :k] = kw_poly.N
    N[(m - i0 - 1) * n:(m - i0) * n, k:] = B
    N[k:, (m - c0 - 1) * n:(m - c0) * n] = C
    N[k:, k:] = D
    return BlockPencil(T, N, n, m, r, label=kw_poly.label + "+border",
                       meta=dict(kw_poly.meta, border=(m - i0, m - c0)))


def _odd(m):
    return tuple(range(1, m, 2))


def _even(m):
    return tuple(range(2, m, 2))


def tridiagonal_pgf(sys) -> BlockPencil:
    """``K_o(z) = z MM_{odd}^{-1} MM_m - MM_0 MM_{even}``; block tridiagonal.

    ``odd = (1, 3, 5, ...)`` and ``even = (2, 4, ...)`` below ``m``.  For
    ``m = 1`` this degenerates to ``z MM_1 - MM_0`` and is tagged so.
    """
    m = _unpack(sys)[0].m
    odd, even = _odd(m), _even(m)
    meta = {"kind": "pgf", "w": ((0,) + even, odd + (m,))}
    if m < 2:
        meta["warning"] = "degenerate: m < 2"
    return _pgf(sys, (0,) + even, odd + (m,), "K_o", meta)


def tridiagonal_pgf_even(sys) -> BlockPencil:
    """``K_e(z) = z MM_m MM_{even}^{-1} - MM_{odd} MM_0``; not block tridiagonal for ``m >= 3``."""
    m = _unpack(sys)[0].m
    odd, even = _odd(m), _even(m)
    return _pgf(sys, odd + (0,), (m,) + even, "K_e", {"kind": "pgf", "w": (odd + (0,), (m,) + even)})


def hermitian_pgf(sys: StateSpaceSystem) -> BlockPencil:
    """``z MM_m MM_{m-2}^{-1} ... MM_1^{-1} - MM_0 MM_2 ... MM_{m-1}`` for odd ``m``.

    Requires exactly Hermitian data (``A_j``, ``D`` Hermitian and ``C = B^*``);
    the output is then exactly Hermitian.
    """
    m = sys.m
    if m % 2 == 0:
        raise UnsupportedDegreeError(
            f"no Hermitian PGF construction is available for even degree m={m}")
    if not sys.is_hermitian():
        raise PreconditionError("system data are not Hermitian (need A_j = A_j^*, D = D^*, C = B^*)")
    w1 = (m,) + tuple(range(m - 2, 0, -2))
    w0 = (0,) + tuple(range(2, m, 2))
    return _pgf(sys, w0, w1, "hermitian", {"kind": "pgf", "w": (w0, w1)})


def is_block_tridiagonal(pencil: BlockPencil) -> bool:
    return pencil.bandwidth <= 1


def is_hermitian_pencil(pencil: BlockPencil) -> bool:
    """Exact check ``T = T^*`` and ``N = N^*``."""
    return bool(np.array_equal(pencil.T, pencil.T.conj().T)
                and np.array_equal(pencil.N, pencil.N.conj().T))
