"""Dense complex/Hermitian primitives.

Everything downstream funnels through this module: validated square
matrices, Hermitian symmetrization, eigendecompositions, Rayleigh
quotients, Cartesian splits and positive definite inverse square roots.
All functions are pure and all returned arrays are fresh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import fro
from .errors import InvalidInput, NotPositiveDefinite

#: Base relative tolerance; callers may override per operation.
DEFAULT_TOL = 1e-9

#: Relative anti-Hermitian residual accepted by :func:`as_hermitian`.
HERMITIAN_REJECT = 1e-8


def as_square(M, name: str = "matrix") -> np.ndarray:
    """Validate and return a square complex matrix with finite entries."""
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidInput(f"{name} must be square and nonempty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput(f"{name} has non-finite entries")
    return A


def as_hermitian(M, name: str = "matrix", reject: float = HERMITIAN_REJECT) -> np.ndarray:
    """Symmetrize to (M + M*)/2, rejecting if the anti-Hermitian residual
    exceeds ``reject`` relative to the matrix norm."""
    A = as_square(M, name)
    H = 0.5 * (A + A.conj().T)
    resid = fro(A - H)
    if resid > reject * max(fro(A), 1.0):
        raise InvalidInput(
            f"{name} is not Hermitian: anti-Hermitian residual {resid:.3e}")
    np.fill_diagonal(H, H.diagonal().real)
    return H


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a Hermitian matrix, eigenvalues ascending, columns of
    ``eigenvectors`` orthonormal."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(H) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix (ascending order)."""
    A = as_hermitian(H)
    w, V = np.linalg.eigh(A)
    return EigenDecomposition(eigenvalues=w, eigenvectors=V)


def cartesian_split(M) -> tuple[np.ndarray, np.ndarray]:
    """Split M = H + iK into Hermitian H = (M+M*)/2 and K = (M-M*)/(2i)."""
    A = as_square(M)
    H = 0.5 * (A + A.conj().T)
    K = (A - A.conj().T) / 2j
    np.fill_diagonal(H, H.diagonal().real)
    np.fill_diagonal(K, K.diagonal().real)
    return H, K


def rayleigh(M, x) -> complex:
    """Normalized Rayleigh quotient x*Mx / x*x."""
    A = as_square(M)
    v = np.asarray(x, dtype=complex).ravel()
    if v.shape[0] != A.shape[0]:
        raise InvalidInput("vector dimension does not match matrix")
    nv2 = float(np.real(np.vdot(v, v)))
    if nv2 <= 0.0 or not np.isfinite(nv2):
        raise InvalidInput("Rayleigh quotient of a zero (or non-finite) vector")
    return complex(np.vdot(v, A @ v) / nv2)


def lambda_extremes(H) -> tuple[float, float]:
    """(smallest, largest) eigenvalue of a Hermitian matrix; the endpoints
    of its numerical range."""
    w = np.linalg.eigvalsh(as_hermitian(H))
    return float(w[0]), float(w[-1])


def lambda_min(H) -> float:
    return lambda_extremes(H)[0]


def lambda_max(H) -> float:
    return lambda_extremes(H)[1]


def inv_sqrt_pd(H, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Inverse square root S of a positive definite Hermitian H: S ≻ 0 and
    S·H·S = I.

    Raises NotPositiveDefinite when the smallest eigenvalue does not clear
    ``tol`` relative to the matrix norm.
    """
    A = as_hermitian(H)
    w, V = np.linalg.eigh(A)
    if w[0] <= tol * max(fro(A), 1.0):
        raise NotPositiveDefinite(
            f"matrix is not positive definite: lambda_min = {w[0]:.3e}")
    S = (V * (1.0 / np.sqrt(w))) @ V.conj().T
    S = 0.5 * (S + S.conj().T)
    np.fill_diagonal(S, S.diagonal().real)
    return S


def psd_clip(H) -> np.ndarray:
    """Projection onto the positive semidefinite cone (eigenvalue clipping)."""
    A = as_hermitian(H)
    w, V = np.linalg.eigh(A)
    S = (V * np.maximum(w, 0.0)) @ V.conj().T
    S = 0.5 * (S + S.conj().T)
    np.fill_diagonal(S, S.diagonal().real)
    return S
