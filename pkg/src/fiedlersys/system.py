"""Higher-order LTI systems ``P(d/dt) x = B u``, ``y = C x + D u``."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import SingularityError, SingularSystemError, ValidationError
from .polymat import MatrixPoly, as_matrix

__all__ = [
    "StateSpaceSystem", "ZeroDirection", "normal_rank", "interpolate_det",
    "roots_of", "cluster_roots", "invariant_zeros_oracle", "root_condition",
    "random_system",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class StateSpaceSystem:
    """The data ``(P, B, C, D)``; ``P`` is ``n x n`` of degree ``m``, ``D`` is ``r x r``.

    ``r = 0`` is allowed and gives the bare polynomial.
    """

    P: MatrixPoly
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    name: str = ""
    check_regular: bool = field(default=True, repr=False)

    def __post_init__(self):
        if not isinstance(self.P, MatrixPoly):
            object.__setattr__(self, "P", MatrixPoly(self.P))
        n = self.P.n
        B = np.array(self.B, dtype=complex)
        if B.ndim != 2 or B.shape[0] != n:
            if B.size == 0:
                B = np.zeros((n, 0), dtype=complex)
            else:
                raise ValidationError(f"B has shape {B.shape}, expected ({n}, r)")
        r = B.shape[1]
        object.__setattr__(self, "B", as_matrix(B, (n, r), "B"))
        for name, shape in (("C", (r, n)), ("D", (r, r))):
            mat = np.array(getattr(self, name), dtype=complex)
            if r == 0:
                mat = np.zeros(shape, dtype=complex)
            elif mat.shape != shape:
                raise ValidationError(f"{name} has shape {mat.shape}, expected {shape}")
            object.__setattr__(self, name, as_matrix(mat, shape, name))
        if self.check_regular and not self.P.is_regular():
            raise ValidationError("P(z) is not regular")

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def m(self) -> int:
        return self.P.m

    @property
    def r(self) -> int:
        return self.B.shape[1]

    @property
    def coeffs(self):
        return self.P.coeffs

    def scale(self) -> float:
        """Largest 2-norm among all data blocks."""
        mats = list(self.P.coeffs) + [self.B, self.C, self.D]
        return max(np.linalg.norm(a, 2) if a.size else 0.0 for a in mats)

    def eval_S(self, z) -> np.ndarray:
        """Rosenbrock system matrix ``[[-P(z), B], [C, D]]``."""
        return np.block([[-self.P.eval(z), self.B], [self.C, self.D]])

    def _lu(self, z):
        pz = self.P.eval(z)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(pz, check_finite=False)
        min_pivot = np.min(np.abs(np.diag(lu)))
        if min_pivot < self.n * _EPS * max(np.linalg.norm(pz, 2), np.finfo(float).tiny):
            raise SingularityError(f"P(z) is singular at z={complex(z)}", point=complex(z))
        return lu, piv

    def solve_P(self, z, rhs) -> np.ndarray:
        """``P(z)^{-1} rhs``; raises :class:`SingularityError` at a pole."""
        return scipy.linalg.lu_solve(self._lu(z), np.asarray(rhs, dtype=complex), check_finite=False)

    def solve_PT(self, z, rhs) -> np.ndarray:
        """``P(z)^{-T} rhs``."""
        return scipy.linalg.lu_solve(self._lu(z), np.asarray(rhs, dtype=complex), trans=1,
                                     check_finite=False)

    def eval_G(self, z) -> np.ndarray:
        """Transfer function ``C P(z)^{-1} B + D`` from one LU factorization."""
        return self.C @ self.solve_P(z, self.B) + self.D

    def transpose(self) -> "StateSpaceSystem":
        """System whose Rosenbrock matrix is ``S(z)^T``."""
        return StateSpaceSystem(self.P.transpose(), self.C.T, self.B.T, self.D.T,
                                check_regular=False)

    def adjoint(self) -> "StateSpaceSystem":
        return StateSpaceSystem(self.P.adjoint(), self.C.conj().T, self.B.conj().T,
                                self.D.conj().T, check_regular=False)

    def is_hermitian(self) -> bool:
        return (self.P.is_hermitian() and np.array_equal(self.C, self.B.conj().T)
                and np.array_equal(self.D, self.D.conj().T))

    def __repr__(self):
        return f"StateSpaceSystem(n={self.n}, m={self.m}, r={self.r})"


@dataclass(frozen=True)
class ZeroDirection:
    """An invariant direction ``[x; u]`` at ``lam`` with its measured residual.

    ``side`` is ``"right"`` (``S(lam) [x; u] = 0``) or ``"left"``
    (``[x; u]^T S(lam) = 0``).
    """

    lam: complex
    u: np.ndarray
    x: np.ndarray
    residual: float
    side: str = "right"


def normal_rank(f: Callable, dim: tuple, trials: int = 5, seed: int = 0,
                tol_scale: float = 1.0) -> int:
    """Maximum numeric rank of ``f(z)`` over random sample points."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        z = complex(rng.normal(), rng.normal())
        mat = np.asarray(f(z), dtype=complex).reshape(dim)
        if mat.size == 0:
            continue
        sv = np.linalg.svd(mat, compute_uv=False)
        thresh = tol_scale * sv[0] * max(dim) * _EPS
        best = max(best, int(np.sum(sv > thresh)) if sv[0] > 0 else 0)
    return best


def interpolate_det(f: Callable, degree: int, radius: float) -> np.ndarray:
    """Coefficients (ascending) of the scalar polynomial ``det f(z)``.

    Samples at ``degree + 1`` scaled roots of unity and inverts the
    Vandermonde system directly: for nodes ``radius * w^k`` the inverse is
    ``conj(V)^T / N`` up to the radius scaling.
    """
    npts = degree + 1
    k = np.arange(npts)
    w = np.exp(2j * np.pi * k / npts)
    vals = np.array([np.linalg.det(f(radius * wk)) for wk in w])
    vander = w[:, None] ** k[None, :]
    scaled = (vander.conj().T @ vals) / npts
    return scaled / radius ** k


def _trim(coeffs: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=complex)
    big = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if big == 0.0:
        return coeffs[:1] * 0
    last = len(coeffs) - 1
    while last > 0 and abs(coeffs[last]) <= rel_tol * big:
        last -= 1
    return coeffs[:last + 1]


def roots_of(coeffs: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """All roots (with multiplicity) of an ascending coefficient list."""
    c = _trim(coeffs, rel_tol)
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1]).astype(complex)


def root_condition(coeffs: np.ndarray, root: complex) -> float:
    """Relative condition number of a simple root under coefficientwise perturbation."""
    c = np.asarray(coeffs, dtype=complex)
    powers = np.abs(root) ** np.arange(len(c))
    dp = np.polyval(np.polyder(c[::-1]), root)
    num = float(np.sum(np.abs(c) * powers))
    den = abs(root) * abs(dp) if root != 0 else abs(dp)
    return np.inf if den == 0 else num / den


def cluster_roots(roots, radius: float) -> list:
    """Group roots lying within ``radius`` of a cluster centre.

    Returns ``(centre, multiplicity)`` pairs; centres are cluster means.
    """
    clusters: list[list[complex]] = []
    for z in sorted(np.asarray(roots, dtype=complex), key=lambda v: (v.real, v.imag)):
        for cl in clusters:
            if abs(z - np.mean(cl)) <= radius:
                cl.append(z)
                break
        else:
            clusters.append([z])
    return [(complex(np.mean(cl)), len(cl)) for cl in clusters]


def det_radius(sys: StateSpaceSystem) -> float:
    """Interpolation radius ``(||A_0|| / ||A_m||)^(1/m)``, the typical root modulus.

    Falls back to 1 when ``A_0 = 0`` and is clipped to ``[1e-3, 1e3]``.
    Sampling on a circle much larger than the roots loses the low-order
    coefficients (relative error grows like ``radius^(nm)``).
    """
    a0 = np.linalg.norm(sys.P[0], 2)
    am = np.linalg.norm(sys.P[sys.m], 2)
    if a0 == 0.0:
        return 1.0
    return float(np.clip((a0 / am) ** (1.0 / sys.m), 1e-3, 1e3))


def det_S_coeffs(sys: StateSpaceSystem, radius: float | None = None) -> np.ndarray:
    """Ascending coefficients of ``det S(z)``, degree at most ``n m``."""
    radius = det_radius(sys) if radius is None else radius
    return interpolate_det(sys.eval_S, sys.n * sys.m, radius)


def invariant_zeros_oracle(sys: StateSpaceSystem, radius: float | None = None,
                           with_multiplicity: bool = False):
    """Invariant zeros from the roots of the interpolated ``det S(z)``.

    Roots closer than ``1e-7 * radius`` are merged.  With
    ``with_multiplicity`` the result is a list of ``(zero, multiplicity)``;
    otherwise a plain list of zeros.
    """
    dim = sys.n + sys.r
    if normal_rank(sys.eval_S, (dim, dim)) < dim:
        raise SingularSystemError("system matrix S(z) is singular (normal rank deficient)")
    radius = det_radius(sys) if radius is None else radius
    coeffs = det_S_coeffs(sys, radius)
    clusters = cluster_roots(roots_of(coeffs), 1e-7 * radius)
    if with_multiplicity:
        return clusters
    return [z for z, _ in clusters]


def random_system(n: int, m: int, r: int, rng: np.random.Generator,
                  hermitian: bool = False) -> StateSpaceSystem:
    """Standard complex normal data; Hermitian data if requested (``C = B^*``)."""
    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    coeffs = [cn(n, n) for _ in range(m + 1)]
    B, C, D = cn(n, r), cn(r, n), cn(r, r)
    if hermitian:
        coeffs = [(a + a.conj().T) / 2 for a in coeffs]
        C = B.conj().T
        D = (D + D.conj().T) / 2
    return StateSpaceSystem(MatrixPoly(coeffs), B, C, D)
