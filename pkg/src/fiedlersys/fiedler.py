"""Fiedler factors, Fiedler pencils and block-structure predicates.

Sign convention
---------------
The system factor ``MM_0`` used here is::

    [[M_0,        e_m (x) B],
     [e_m^T (x) C,        D]]

so that ``z MM_m - MM_sigma`` equals ``-[[-L_sigma(z), X], [Y, D]]`` with the
borders ``X``/``Y`` placed by the consecution-inversion structure of sigma.
That bordered matrix is strictly system equivalent to
``S(z) = [[-P(z), B], [C, D]]``; with all three border blocks negated the
product would instead linearize ``[[P, B], [C, D]]``.  Every factor is still
operation-free and Hermitian data gives Hermitian factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import index as ix
from .errors import PreconditionError, ValidationError
from .polymat import MatrixPoly
from .system import StateSpaceSystem

__all__ = [
    "BlockPencil", "fiedler_matrix", "fiedler_matrix_inv", "fiedler_matrix_sys",
    "factor_product", "m_sigma", "fiedler_pencil", "poly_pencil", "structured_form",
    "border_positions", "is_operation_free", "is_pentadiagonal", "block_bandwidth",
    "companion_pencil",
]


def _unpack(obj):
    """Return ``(P, B, C, D)`` for a system, or ``(P, None, None, None)`` for a polynomial."""
    if isinstance(obj, StateSpaceSystem):
        if obj.r == 0:
            return obj.P, None, None, None
        return obj.P, obj.B, obj.C, obj.D
    if isinstance(obj, MatrixPoly):
        return obj, None, None, None
    raise TypeError(f"expected StateSpaceSystem or MatrixPoly, got {type(obj).__name__}")


@dataclass(frozen=True, eq=False)
class BlockPencil:
    """The pencil ``z T - N`` on a grid of ``m`` blocks of size ``n`` plus one of size ``r``.

    ``r = 0`` is the polynomial-only case (no border block).
    """

    T: np.ndarray
    N: np.ndarray
    n: int
    m: int
    r: int = 0
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        dim = self.n * self.m + self.r
        for name in ("T", "N"):
            mat = np.array(getattr(self, name), dtype=complex)
            if mat.shape != (dim, dim):
                raise ValidationError(f"{name} has shape {mat.shape}, expected {(dim, dim)}")
            mat.flags.writeable = False
            object.__setattr__(self, name, mat)

    @property
    def dim(self) -> int:
        return self.n * self.m + self.r

    @property
    def block_sizes(self) -> list:
        return [self.n] * self.m + ([self.r] if self.r else [])

    @cached_property
    def block_offsets(self) -> list:
        return list(np.concatenate([[0], np.cumsum(self.block_sizes)]).astype(int))

    def block(self, mat: np.ndarray, i: int, j: int) -> np.ndarray:
        o = self.block_offsets
        return mat[o[i]:o[i + 1], o[j]:o[j + 1]]

    def __call__(self, z) -> np.ndarray:
        return complex(z) * self.T - self.N

    def eval(self, z) -> np.ndarray:
        return self(z)

    def top_left(self) -> "BlockPencil":
        """The ``nm x nm`` polynomial part, dropping the border."""
        k = self.n * self.m
        return BlockPencil(self.T[:k, :k], self.N[:k, :k], self.n, self.m, 0,
                           label=self.label + ":poly")

    def split(self, z):
        """Blocks ``(K11, K12, K21, K22)`` of ``z T - N`` split at the border."""
        k = self.n * self.m
        mat = self(z)
        return mat[:k, :k], mat[:k, k:], mat[k:, :k], mat[k:, k:]

    def adjoint(self) -> "BlockPencil":
        return BlockPencil(self.T.conj().T, self.N.conj().T, self.n, self.m, self.r,
                           label=self.label + "*")

    def transpose(self) -> "BlockPencil":
        return BlockPencil(self.T.T, self.N.T, self.n, self.m, self.r, label=self.label + "^T")

    def __eq__(self, other):
        if not isinstance(other, BlockPencil):
            return NotImplemented
        return (self.n, self.m, self.r) == (other.n, other.m, other.r) and \
            np.array_equal(self.T, other.T) and np.array_equal(self.N, other.N)

    __hash__ = None

    @cached_property
    def bandwidth(self) -> int:
        return block_bandwidth(self)

    @cached_property
    def tags(self) -> dict:
        return {
            "pentadiagonal": self.bandwidth <= 2,
            "tridiagonal": self.bandwidth <= 1,
            "hermitian": bool(np.array_equal(self.T, self.T.conj().T)
                              and np.array_equal(self.N, self.N.conj().T)),
            "companion1": self.meta.get("order") == ix.first_companion(self.m),
            "companion2": self.meta.get("order") == ix.second_companion(self.m),
        }


# -- dense factors ----------------------------------------------------------

def _check_index(i: int, m: int):
    if not 0 <= i <= m:
        raise IndexError(f"factor index {i} outside 0..{m}")


def fiedler_matrix(P: MatrixPoly, i: int) -> np.ndarray:
    """Dense ``nm x nm`` Fiedler factor ``M_i`` of ``P``."""
    n, m = P.n, P.m
    _check_index(i, m)
    M = np.eye(n * m, dtype=complex)
    if i == 0:
        M[(m - 1) * n:, (m - 1) * n:] = -P[0]
    elif i == m:
        M[:n, :n] = P[m]
    else:
        a = (m - i - 1) * n
        M[a:a + 2 * n, a:a + 2 * n] = np.block([
            [-P[i], np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    return M


def fiedler_matrix_inv(P: MatrixPoly, i: int) -> np.ndarray:
    """Closed-form inverse of ``M_i`` for ``1 <= i <= m-1``."""
    n, m = P.n, P.m
    if not 1 <= i <= m - 1:
        raise PreconditionError(
            f"M_{i} has no closed-form inverse (only M_1..M_{m - 1}; M_0 and M_m "
            "are invertible only with A_0 / A_m)")
    M = np.eye(n * m, dtype=complex)
    a = (m - i - 1) * n
    M[a:a + 2 * n, a:a + 2 * n] = np.block([
        [np.zeros((n, n)), np.eye(n)], [np.eye(n), P[i]]])
    return M


def fiedler_matrix_sys(sys: StateSpaceSystem, i: int, inverse: bool = False) -> np.ndarray:
    """Dense ``(nm+r) x (nm+r)`` system factor (see module docstring for ``MM_0``)."""
    P, B, C, D = _unpack(sys)
    n, m = P.n, P.m
    r = 0 if B is None else B.shape[1]
    k = n * m
    _check_index(i, m)
    M = np.zeros((k + r, k + r), dtype=complex)
    M[:k, :k] = fiedler_matrix_inv(P, i) if inverse else fiedler_matrix(P, i)
    if inverse and i in (0, m):
        raise PreconditionError(f"MM_{i} is not invertible in closed form")
    if r:
        if i == 0:
            M[k - n:k, k:] = B
            M[k:, k - n:k] = C
            M[k:, k:] = D
        elif i < m:
            M[k:, k:] = np.eye(r)
    return M


# -- structured products ----------------------------------------------------

def _apply_left(X: np.ndarray, P: MatrixPoly, B, C, D, i: int, inverse: bool):
    """In-place ``X <- F X`` for the factor ``F = MM_i`` (or its inverse).

    Only the two block rows touched by the factor are rewritten.
    """
    n, m = P.n, P.m
    k = n * m
    if i == 0:
        last = slice(k - n, k)
        row_last = X[last].copy()
        if B is None:
            X[last] = -P[0] @ row_last
        else:
            row_b = X[k:].copy()
            X[last] = -P[0] @ row_last + B @ row_b
            X[k:] = C @ row_last + D @ row_b
    elif i == m:
        X[:n] = P[m] @ X[:n]
        X[k:] = 0
    else:
        a = (m - i - 1) * n
        ra = X[a:a + n].copy()
        rb = X[a + n:a + 2 * n].copy()
        if inverse:
            X[a:a + n] = rb
            X[a + n:a + 2 * n] = ra + P[i] @ rb
        else:
            X[a:a + n] = -P[i] @ ra + rb
            X[a + n:a + 2 * n] = ra


def factor_product(sys, indices: Sequence[int], inverse: Sequence[bool] | None = None) -> np.ndarray:
    """Left-to-right product of factors ``MM_{indices[0]} MM_{indices[1]} ...``.

    ``inverse[j]`` selects the closed-form inverse of the ``j``-th factor.
    Built by block-row operations on the identity, so an operation-free
    product is reproduced exactly.
    """
    P, B, C, D = _unpack(sys)
    r = 0 if B is None else B.shape[1]
    dim = P.n * P.m + r
    inverse = [False] * len(indices) if inverse is None else list(inverse)
    X = np.eye(dim, dtype=complex)
    for i, inv in zip(reversed(list(indices)), reversed(inverse)):
        _check_index(i, P.m)
        if inv and not 1 <= i <= P.m - 1:
            raise PreconditionError(f"factor {i} has no closed-form inverse")
        _apply_left(X, P, B, C, D, i, inv)
    return X


def m_sigma(sys, order: Sequence[int]) -> np.ndarray:
    """``MM_sigma``, the product of factors in the given factor order."""
    P = _unpack(sys)[0]
    order = ix._check_permutation(order, P.m)
    return factor_product(sys, order)


def fiedler_pencil(sys, order: Sequence[int]) -> BlockPencil:
    """Fiedler pencil ``z MM_m - MM_sigma`` of a system (or of ``P`` when ``r = 0``)."""
    P, B, _, _ = _unpack(sys)
    r = 0 if B is None else B.shape[1]
    order = ix._check_permutation(order, P.m)
    T = factor_product(sys, [P.m])
    N = m_sigma(sys, order)
    return BlockPencil(T, N, P.n, P.m, r, label=f"fiedler[{','.join(map(str, order))}]",
                       meta={"kind": "fiedler", "order": order})


def poly_pencil(P: MatrixPoly, order: Sequence[int]) -> BlockPencil:
    """``L_sigma(z) = z M_m - M_sigma`` of the polynomial alone."""
    return fiedler_pencil(P, order)


def companion_pencil(sys, which: int) -> BlockPencil:
    m = _unpack(sys)[0].m
    if which not in (1, 2):
        raise ValidationError("companion form must be 1 or 2")
    order = ix.first_companion(m) if which == 1 else ix.second_companion(m)
    return fiedler_pencil(sys, order)


def border_positions(order: Sequence[int]) -> tuple:
    """1-based block positions ``(b_pos, c_pos)`` of the ``B`` column and ``C`` row.

    ``c_1 > 0``: ``B`` at block ``m``, ``C`` at block ``m - c_1``;
    ``c_1 = 0``: ``B`` at block ``m - i_1``, ``C`` at block ``m``.
    """
    m = len(order)
    c1, i1 = ix.leading_runs(ix.from_factor_order(order))
    if c1 > 0:
        return m, m - c1
    return m - i1, m


def structured_form(sys: StateSpaceSystem, order: Sequence[int]) -> BlockPencil:
    """Fiedler pencil assembled from ``L_sigma`` and the border rule, no system factors.

    Builds ``[[-L_sigma, X], [Y, D]]`` and stores its negative so it shares
    the sign convention of :func:`fiedler_pencil`.
    """
    P, B, C, D = _unpack(sys)
    n, m = P.n, P.m
    order = ix._check_permutation(order, m)
    lin = poly_pencil(P, order)
    if B is None:
        return BlockPencil(lin.T, lin.N, n, m, 0, label=lin.label)
    r = B.shape[1]
    k = n * m
    b_pos, c_pos = border_positions(order)
    T = np.zeros((k + r, k + r), dtype=complex)
    N = np.zeros((k + r, k + r), dtype=complex)
    T[:k, :k] = lin.T
    N[:k, :k] = lin.N
    # z T - N = [[L, -X], [-Y, -D]]  <=>  N border = [X; Y; D]
    N[(b_pos - 1) * n:b_pos * n, k:] = B
    N[k:, (c_pos - 1) * n:c_pos * n] = C
    N[k:, k:] = D
    return BlockPencil(T, N, n, m, r, label=f"structured[{','.join(map(str, order))}]",
                       meta={"kind": "fiedler", "order": order, "border": (b_pos, c_pos)})


# -- predicates -------------------------------------------------------------

def block_bandwidth(pencil: BlockPencil) -> int:
    """Largest block distance ``|i - j|`` carrying a nonzero block in ``T`` or ``N``."""
    nb = len(pencil.block_sizes)
    band = 0
    for i in range(nb):
        for j in range(nb):
            if abs(i - j) <= band:
                continue
            if np.any(pencil.block(pencil.T, i, j)) or np.any(pencil.block(pencil.N, i, j)):
                band = abs(i - j)
    return band


def is_pentadiagonal(pencil: BlockPencil) -> bool:
    return block_bandwidth(pencil) <= 2


def is_block_tridiagonal(pencil: BlockPencil) -> bool:
    return block_bandwidth(pencil) <= 1


def _allowed_blocks(sys, rows: int, cols: int, row_is_border: bool, col_is_border: bool):
    P, B, C, D = _unpack(sys)
    out = [np.zeros((rows, cols))]
    if row_is_border and col_is_border:
        out += [np.eye(rows), D]
    elif row_is_border:
        out.append(C)
    elif col_is_border:
        out.append(B)
    else:
        out += [np.eye(rows)] + list(P.coeffs)
    return out


def is_operation_free(pencil: BlockPencil, sys) -> bool:
    """True iff every block of ``T`` and ``N`` is, up to sign, ``0``, ``I`` or a data block.

    Comparison is exact.
    """
    nb = len(pencil.block_sizes)
    border = nb - 1 if pencil.r else -1
    for mat in (pencil.T, pencil.N):
        for i in range(nb):
            for j in range(nb):
                blk = pencil.block(mat, i, j)
                allowed = _allowed_blocks(sys, blk.shape[0], blk.shape[1], i == border, j == border)
                if not any(a is not None and a.shape == blk.shape and
                           (np.array_equal(blk, a) or np.array_equal(blk, -a)) for a in allowed):
                    return False
    return True
