"""Eigenvalues and null vectors of pencils ``z T - N`` with ``T`` possibly singular.

Finite eigenvalues come from a shift-and-invert reduction to a standard
dense eigenproblem: with ``Y = (N - tau T)^{-1} T``, an eigenpair
``Y v = mu v`` gives ``z = tau + 1/mu``; ``mu ~ 0`` is an eigenvalue at
infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import SingularityError, SingularSystemError
from .system import interpolate_det

__all__ = ["PencilSpectrum", "solve_pencil", "det_poly", "rank_at", "match_multisets",
           "pencil_residual"]

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class PencilSpectrum:
    """Finite eigenvalues with right/left vectors (as columns) and their residuals."""

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    residual_right: np.ndarray
    residual_left: np.ndarray
    num_infinite: int
    shift: complex
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        for k in range(len(self.eigenvalues)):
            yield (self.eigenvalues[k], self.right[:, k], self.left[:, k],
                   self.residual_right[k], self.residual_left[k])


def rank_at(M, tol_scale: float = 1.0) -> int:
    """Number of singular values above ``tol_scale * sigma_max * max(shape) * eps``."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > tol_scale * sv[0] * max(M.shape) * _EPS))


def pencil_residual(T, N, lam, vec, left: bool = False) -> float:
    """``||(z T - N) v|| / ((|z| ||T|| + ||N||) ||v||)``; ``v^T (z T - N)`` when ``left``."""
    mat = lam * T - N
    res = vec @ mat if left else mat @ vec
    scale = (abs(lam) * np.linalg.norm(T, 2) + np.linalg.norm(N, 2)) * np.linalg.norm(vec)
    return float(np.linalg.norm(res) / scale) if scale else float(np.linalg.norm(res))


def _is_singular_pencil(T, N, rng, probes: int = 3) -> bool:
    dim = T.shape[0]
    for _ in range(probes):
        z = complex(rng.normal(), rng.normal())
        mat = z * T - N
        scale = np.prod(np.maximum(np.max(np.abs(mat), axis=1), np.finfo(float).tiny))
        if abs(np.linalg.det(mat)) > dim * _EPS * scale:
            return False
    return True


def _pencil_mats(pencil):
    if isinstance(pencil, tuple):
        T, N = pencil
    else:
        T, N = pencil.T, pencil.N
    return np.asarray(T, dtype=complex), np.asarray(N, dtype=complex)


def solve_pencil(pencil, seed: int = 0, shift=None, inf_tol: float = 1e-10,
                 max_reshift: int = 5, cond_limit: float = 1e10) -> PencilSpectrum:
    """Finite spectrum of a regular pencil by shift-and-invert.

    ``pencil`` is a :class:`~fiedlersys.fiedler.BlockPencil` or a ``(T, N)``
    pair.  The shift is drawn on a circle of radius
    ``1 + ||N|| / max(||T||, 1)`` unless given; it is redrawn (at most
    ``max_reshift`` times) when ``N - tau T`` has condition number above
    ``cond_limit``.  ``|mu| < inf_tol ||Y||`` counts as infinite, and the
    number of finite eigenvalues is capped at ``rank(T)``.
    """
    T, N = _pencil_mats(pencil)
    dim = T.shape[0]
    rng = np.random.default_rng(seed)
    if _is_singular_pencil(T, N, rng):
        raise SingularSystemError("pencil is singular (det vanishes at every probe)")
    nt = np.linalg.norm(T, 2)
    radius = 1.0 + np.linalg.norm(N, 2) / max(nt, 1.0)
    lu = None
    for attempt in range(max_reshift):
        tau = complex(shift) if (shift is not None and attempt == 0) else \
            radius * np.exp(2j * np.pi * rng.uniform())
        shifted = N - tau * T
        if np.linalg.cond(shifted) < cond_limit:
            lu = scipy.linalg.lu_factor(shifted, check_finite=False)
            break
    if lu is None:
        raise SingularityError("could not find a shift away from the spectrum", point=tau)

    Y = scipy.linalg.lu_solve(lu, T, check_finite=False)
    Yl = scipy.linalg.lu_solve(lu, T.T, trans=1, check_finite=False)
    mu, vr = scipy.linalg.eig(Y, check_finite=False)
    mu_l, vl = scipy.linalg.eig(Yl, check_finite=False)

    ynorm = max(np.linalg.norm(Y, 2), np.finfo(float).tiny)
    finite = np.abs(mu) >= inf_tol * ynorm
    cap = rank_at(T, 10.0)
    if finite.sum() > cap:
        order = np.argsort(-np.abs(mu))
        finite = np.zeros(dim, dtype=bool)
        finite[order[:cap]] = True
    idx = np.flatnonzero(finite)
    lam = tau + 1.0 / mu[idx]

    ylnorm = max(np.linalg.norm(Yl, 2), np.finfo(float).tiny)
    idx_l = np.argsort(-np.abs(mu_l))[:len(idx)]
    lam_l = tau + 1.0 / np.where(np.abs(mu_l[idx_l]) > 0, mu_l[idx_l], ylnorm * _EPS)
    if len(idx):
        rows, cols = linear_sum_assignment(np.abs(lam[:, None] - lam_l[None, :]))
        perm = np.empty(len(idx), dtype=int)
        perm[rows] = cols
    else:
        perm = np.zeros(0, dtype=int)

    right = vr[:, idx]
    left = vl[:, idx_l[perm]] if len(idx) else np.zeros((dim, 0), dtype=complex)
    res_r = np.array([pencil_residual(T, N, lam[k], right[:, k]) for k in range(len(idx))])
    res_l = np.array([pencil_residual(T, N, lam[k], left[:, k], left=True) for k in range(len(idx))])
    sort = np.lexsort((lam.imag, lam.real))
    return PencilSpectrum(lam[sort], right[:, sort], left[:, sort], res_r[sort], res_l[sort],
                          dim - len(idx), tau)


def det_poly(pencil, radius: float | None = None) -> np.ndarray:
    """Ascending coefficients of ``det(z T - N)`` by roots-of-unity interpolation."""
    T, N = _pencil_mats(pencil)
    if radius is None:
        radius = 1.0 + max(np.linalg.norm(T, 2), np.linalg.norm(N, 2))
    return interpolate_det(lambda z: z * T - N, T.shape[0], radius)


def match_multisets(a, b):
    """Optimal pairing of two equal-length complex multisets.

    Returns ``(max_gap, pairs)``; ``max_gap`` is ``inf`` on a size mismatch.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if len(a) != len(b):
        return np.inf, []
    if not len(a):
        return 0.0, []
    rows, cols = linear_sum_assignment(np.abs(a[:, None] - b[None, :]))
    gaps = np.abs(a[rows] - b[cols])
    return float(gaps.max()), list(zip(a[rows], b[cols]))
