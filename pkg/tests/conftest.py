"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np


def random_hermitian(rng, n, scale=1.0):
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = 0.5 * (G + G.conj().T) * scale
    np.fill_diagonal(H, H.diagonal().real)
    return H


def random_complex_matrix(rng, n, scale=1.0):
    return (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) * scale


def random_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def haar_unitary(rng, n):
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(G)
    return Q * (np.diagonal(R) / np.abs(np.diagonal(R)))


def conditioned_invertible(rng, n, log10_spread=1.0):
    """Random invertible X with condition number about 10^log10_spread."""
    U = haar_unitary(rng, n)
    V = haar_unitary(rng, n)
    s = 10.0 ** rng.uniform(-log10_spread / 2, log10_spread / 2, size=n)
    return (U * s) @ V.conj().T


def forms_at(mats, v):
    return np.array([complex(np.vdot(v, M @ v)) for M in mats])


def psd_with_null(rng, n, w, scale=1.0):
    """Random PSD matrix annihilating the unit vector w."""
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    P = np.eye(n) - np.outer(w, w.conj())
    R = P @ (G @ G.conj().T) @ P * scale
    R = 0.5 * (R + R.conj().T)
    np.fill_diagonal(R, R.diagonal().real)
    return R


def hermitian_with_isotropic(rng, n, w, scale=1.0):
    """Random Hermitian H with w*Hw = 0 for the given unit vector."""
    H = random_hermitian(rng, n, scale)
    val = float(np.real(np.vdot(w, H @ w)))
    H = H - val * np.outer(w, w.conj())
    np.fill_diagonal(H, H.diagonal().real)
    return H
