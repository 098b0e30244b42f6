"""Maps between null spaces of ``S(z)``, ``G(z)`` and Fiedler pencils.

Right null vectors of ``L_sigma(z)`` are ``E_sigma(z) x`` with ``P(z) x = 0``,
where ``E_sigma`` stacks Horner shifts and powers of ``z`` according to the
strings of ``csf(sigma)``; the selector ``F_sigma`` reads ``x`` back from a
single block.  Left null vectors use ``H_sigma(P) = E_{rev sigma}(P^T)`` and
``K_sigma(P) = F_{rev sigma}(P^T)``.  Left null vectors are meant in the
transpose sense, ``w^T M = 0``.

The unimodular transformations behind these maps are never formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import index as ix
from .errors import SpuriousVectorError
from .polymat import MatrixPoly
from .system import StateSpaceSystem, ZeroDirection

__all__ = [
    "RecoveryMap", "E_sigma", "F_sigma", "H_sigma", "K_sigma", "E_sys", "F_sys", "H_sys",
    "K_sys", "lift_right_system", "lift_left_system", "lift_right_G", "lift_left_G",
    "project_right", "project_left", "relative_residual", "normalize_direction",
]

_EPS = np.finfo(float).eps


def _bij(sigma) -> ix.Bijection:
    return sigma if isinstance(sigma, ix.Bijection) else ix.from_factor_order(sigma)


@dataclass(frozen=True, eq=False)
class RecoveryMap:
    """A realized recovery matrix; ``lam`` is set only for the z-dependent maps."""

    kind: str
    sigma: ix.Bijection
    matrix: np.ndarray
    lam: Optional[complex] = None

    def __matmul__(self, other):
        other = other.matrix if isinstance(other, RecoveryMap) else other
        return self.matrix @ other


def E_sigma(P: MatrixPoly, sigma, lam) -> np.ndarray:
    """``nm x n`` block column ``[B_0; ...; B_{m-1}]``.

    Block ``i`` belongs to factor index ``j = m - 1 - i``.  If ``j`` lies in
    the ``k``-th string ``(t_{k-1}+1 : t_k)`` of ``csf(sigma)`` (lowest string
    is ``k = 1``) then ``B_i = z^{k-1} I`` when ``j = t_k`` and
    ``B_i = z^{k-1} P_i(z)`` (degree ``i`` Horner shift) otherwise.
    """
    sig = _bij(sigma)
    n, m = P.n, P.m
    lam = complex(lam)
    where = ix.string_index(sig.order)
    blocks = []
    for i in range(m):
        k, t_k = where[m - 1 - i]
        scale = lam ** (k - 1)
        if m - 1 - i == t_k:
            blocks.append(scale * np.eye(n, dtype=complex))
        else:
            blocks.append(scale * P.horner_shift_at(i, lam))
    return np.vstack(blocks)


def _selector(n: int, m: int, pos: int) -> np.ndarray:
    sel = np.zeros((n, n * m), dtype=complex)
    sel[:, (pos - 1) * n:pos * n] = np.eye(n)
    return sel


def F_sigma(P: MatrixPoly, sigma) -> np.ndarray:
    """``e_{m - c_1}^T (x) I_n``."""
    c1, _ = ix.leading_runs(_bij(sigma))
    return _selector(P.n, P.m, P.m - c1)


def K_sigma(P: MatrixPoly, sigma) -> np.ndarray:
    """``e_m^T (x) I_n`` if ``c_1 > 0``, else ``e_{m - i_1}^T (x) I_n``."""
    c1, i1 = ix.leading_runs(_bij(sigma))
    return _selector(P.n, P.m, P.m if c1 > 0 else P.m - i1)


def H_sigma(P: MatrixPoly, sigma, lam) -> np.ndarray:
    return E_sigma(P.transpose(), ix.rev(_bij(sigma)), lam)


def _border(mat: np.ndarray, r: int) -> np.ndarray:
    rows, cols = mat.shape
    out = np.zeros((rows + r, cols + r), dtype=complex)
    out[:rows, :cols] = mat
    out[rows:, cols:] = np.eye(r)
    return out


def E_sys(sys: StateSpaceSystem, sigma, lam) -> RecoveryMap:
    return RecoveryMap("E_sys", _bij(sigma), _border(E_sigma(sys.P, sigma, lam), sys.r), complex(lam))


def F_sys(sys: StateSpaceSystem, sigma) -> RecoveryMap:
    return RecoveryMap("F_sys", _bij(sigma), _border(F_sigma(sys.P, sigma), sys.r))


def H_sys(sys: StateSpaceSystem, sigma, lam) -> RecoveryMap:
    return RecoveryMap("H_sys", _bij(sigma), _border(H_sigma(sys.P, sigma, lam), sys.r), complex(lam))


def K_sys(sys: StateSpaceSystem, sigma) -> RecoveryMap:
    return RecoveryMap("K_sys", _bij(sigma), _border(K_sigma(sys.P, sigma), sys.r))


def relative_residual(mat: np.ndarray, vec: np.ndarray, left: bool = False) -> float:
    """``||M v|| / (||M|| ||v||)`` (or with ``v^T M`` when ``left``)."""
    vec = np.asarray(vec, dtype=complex)
    res = vec @ mat if left else mat @ vec
    denom = np.linalg.norm(mat, 2) * np.linalg.norm(vec)
    return float(np.linalg.norm(res) / denom) if denom else float(np.linalg.norm(res))


def lift_right_system(sys: StateSpaceSystem, sigma, lam, x, u) -> np.ndarray:
    """``[E_sigma(z) x; u]``, a null vector of the Fiedler pencil when ``S(z) [x; u] = 0``."""
    x = np.asarray(x, dtype=complex).reshape(sys.n)
    u = np.asarray(u, dtype=complex).reshape(sys.r)
    return np.concatenate([E_sigma(sys.P, sigma, lam) @ x, u])


def lift_left_system(sys: StateSpaceSystem, sigma, lam, y_x, y_u) -> np.ndarray:
    """``[H_sigma(z) y_x; y_u]`` for a left null vector ``[y_x; y_u]`` of ``S(z)``."""
    y_x = np.asarray(y_x, dtype=complex).reshape(sys.n)
    y_u = np.asarray(y_u, dtype=complex).reshape(sys.r)
    return np.concatenate([H_sigma(sys.P, sigma, lam) @ y_x, y_u])


def lift_right_G(sys: StateSpaceSystem, sigma, lam, x) -> np.ndarray:
    """``[E_sigma(z) P(z)^{-1} B x; x]`` for ``G(z) x = 0``.

    Raises :class:`SingularityError` when ``z`` is a pole.
    """
    x = np.asarray(x, dtype=complex).reshape(sys.r)
    state = sys.solve_P(lam, sys.B @ x)
    return lift_right_system(sys, sigma, lam, state, x)


def lift_left_G(sys: StateSpaceSystem, sigma, lam, y) -> np.ndarray:
    """``[H_sigma(z) (C P(z)^{-1})^T y; y]`` for ``y^T G(z) = 0``.

    The transpose on ``C P(z)^{-1}`` is what makes the first block a left
    null vector of ``-P(z)``; without it the product is not even conformable.
    """
    y = np.asarray(y, dtype=complex).reshape(sys.r)
    state = sys.solve_PT(lam, sys.C.T @ y)
    return lift_left_system(sys, sigma, lam, state, y)


def normalize_direction(x: np.ndarray, u: np.ndarray):
    """Scale so the largest-magnitude entry of ``u`` (or of ``x`` if ``u = 0``) is 1."""
    ref = u if u.size and np.max(np.abs(u)) > 0 else x
    if not ref.size or np.max(np.abs(ref)) == 0:
        return x, u
    pivot = ref[np.argmax(np.abs(ref))]
    return x / pivot, u / pivot


def _project(sys, selector, v, lam, side, tiny):
    v = np.asarray(v, dtype=complex)
    k = sys.n * sys.m
    x = selector @ v[:k]
    u = v[k:]
    if np.linalg.norm(np.concatenate([x, u])) <= tiny * max(np.linalg.norm(v), 1.0):
        raise SpuriousVectorError("projected direction vanished; v is not a pencil null vector")
    x, u = normalize_direction(x, u)
    residual = float("nan")
    if lam is not None:
        residual = relative_residual(sys.eval_S(lam), np.concatenate([x, u]), left=(side == "left"))
    return ZeroDirection(complex(lam) if lam is not None else complex("nan"), u, x, residual, side)


def project_right(sys: StateSpaceSystem, sigma, v, lam=None, tiny: float = 1e3 * _EPS) -> ZeroDirection:
    """``x = F_sigma v_top``, ``u = v_bottom``; only block selection is involved."""
    return _project(sys, F_sigma(sys.P, sigma), v, lam, "right", tiny)


def project_left(sys: StateSpaceSystem, sigma, w, lam=None, tiny: float = 1e3 * _EPS) -> ZeroDirection:
    """``x = K_sigma w_top``, ``u = w_bottom`` for ``w^T S_sigma(z) = 0``."""
    return _project(sys, K_sigma(sys.P, sigma), w, lam, "left", tiny)
