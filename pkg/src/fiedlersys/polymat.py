"""Square matrix polynomials ``P(z) = A_0 + z A_1 + ... + z^m A_m``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError

__all__ = ["MatrixPoly", "as_matrix"]

_EPS = np.finfo(float).eps


def as_matrix(a, shape=None, name="matrix") -> np.ndarray:
    """Return a read-only complex copy of ``a``, checking shape and finiteness."""
    arr = np.array(a, dtype=complex, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if shape is not None and arr.shape != tuple(shape):
        raise ValidationError(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class MatrixPoly:
    """An ``n x n`` matrix polynomial of declared degree ``m``.

    ``coeffs[j]`` holds the coefficient of ``z**j``.  The leading coefficient
    must be nonzero: the linearization size ``n*m`` depends on the declared
    degree, so trailing zeros are rejected rather than trimmed.
    """

    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        coeffs = list(coeffs)
        if len(coeffs) < 2:
            raise ValidationError("a matrix polynomial needs degree >= 1 (at least two coefficients)")
        first = as_matrix(coeffs[0], name="A_0")
        n = first.shape[0]
        if first.shape != (n, n):
            raise ValidationError(f"A_0 must be square, got {first.shape}")
        mats = tuple(as_matrix(c, (n, n), name=f"A_{j}") for j, c in enumerate(coeffs))
        if not np.any(mats[-1]):
            raise ValidationError("leading coefficient A_m is the zero matrix")
        object.__setattr__(self, "coeffs", mats)

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return self.m

    def __getitem__(self, j: int) -> np.ndarray:
        return self.coeffs[j]

    def __eq__(self, other):
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        return self.m == other.m and self.n == other.n and all(
            np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.n, self.m, tuple(a.tobytes() for a in self.coeffs)))

    def __repr__(self):
        return f"MatrixPoly(n={self.n}, m={self.m})"

    def coeff_norm(self) -> float:
        """Largest spectral norm among the coefficients."""
        return max(np.linalg.norm(a, 2) for a in self.coeffs)

    def __call__(self, z) -> np.ndarray:
        return self.eval(z)

    def eval(self, z) -> np.ndarray:
        """Evaluate by the Horner recursion ``P_{k+1} = z P_k + A_{m-k-1}``."""
        z = complex(z)
        out = np.array(self.coeffs[-1])
        for a in reversed(self.coeffs[:-1]):
            out = z * out + a
        return out

    def eval_naive(self, z) -> np.ndarray:
        """Power-sum evaluation; used only to cross-check :meth:`eval`."""
        z = complex(z)
        return sum(z ** j * a for j, a in enumerate(self.coeffs))

    def horner_shift(self, k: int) -> "MatrixPoly":
        """Degree ``k`` Horner shift ``A_{m-k} + z A_{m-k+1} + ... + z^k A_m``.

        For ``k == 0`` the shift is the constant ``A_m``; it is returned as a
        degree-0 :class:`HornerShift` so that it still evaluates like a
        polynomial.
        """
        if not 0 <= k <= self.m:
            raise IndexError(f"Horner shift degree {k} outside 0..{self.m}")
        return HornerShift(self.coeffs[self.m - k:])

    def horner_shift_at(self, k: int, z) -> np.ndarray:
        """``P_k(z)`` evaluated directly."""
        if not 0 <= k <= self.m:
            raise IndexError(f"Horner shift degree {k} outside 0..{self.m}")
        z = complex(z)
        out = np.array(self.coeffs[-1])
        for a in reversed(self.coeffs[self.m - k:-1]):
            out = z * out + a
        return out

    def transpose(self) -> "MatrixPoly":
        return type(self)([a.T for a in self.coeffs])

    def adjoint(self) -> "MatrixPoly":
        return type(self)([a.conj().T for a in self.coeffs])

    def is_hermitian(self) -> bool:
        return all(np.array_equal(a, a.conj().T) for a in self.coeffs)

    def is_regular(self, trials: int = 5, rng_seed: int = 0) -> bool:
        """Probabilistic regularity test.

        Draws ``trials`` points uniformly from the disk of radius 2 and
        reports True as soon as one determinant clears the threshold
        ``n * eps * prod(row max-norms)``.  True is certain; False means all
        draws were numerically singular.
        """
        if trials < 1:
            raise ValueError("trials must be >= 1")
        rng = np.random.default_rng(rng_seed)
        n = self.n
        for _ in range(trials):
            rad = 2.0 * np.sqrt(rng.uniform())
            z = rad * np.exp(2j * np.pi * rng.uniform())
            pz = self.eval(z)
            row_norms = np.max(np.abs(pz), axis=1)
            scale = float(np.prod(row_norms))
            if scale == 0.0:
                continue
            if abs(np.linalg.det(pz)) > n * _EPS * scale:
                return True
        return False

    def reversal(self) -> "MatrixPoly":
        """Coefficients in reverse order (``z^m P(1/z)``)."""
        return MatrixPoly(self.coeffs[::-1])


class HornerShift(MatrixPoly):
    """A Horner shift; degree 0 is allowed and the leading term may vanish."""

    def __init__(self, coeffs: Sequence):
        mats = tuple(as_matrix(c, name="coefficient") for c in coeffs)
        if not mats:
            raise ValidationError("empty Horner shift")
        object.__setattr__(self, "coeffs", mats)
