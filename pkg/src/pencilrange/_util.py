"""Shared numeric helpers: scales, deterministic sequences, parallel maps."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_PRIMES = (2, 3, 5, 7, 11, 13)


def fro(M) -> float:
    """Frobenius norm used as the problem scale throughout."""
    return float(np.linalg.norm(np.asarray(M)))


def scale_of(*mats) -> float:
    """Common scale of a matrix family: the largest Frobenius norm, or 1 for
    an all-zero family so tolerances stay meaningful."""
    s = max((fro(M) for M in mats), default=0.0)
    return s if s > 0.0 else 1.0


def _radical_inverse(i: int, base: int) -> float:
    f, r = 1.0, 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def halton_unit_directions(dim: int, count: int) -> np.ndarray:
    """Deterministic low-discrepancy directions on the unit sphere in R^dim.

    Halton points are pushed through Box-Muller pairs so the directions are
    approximately uniform; the sequence is fixed for fixed (dim, count).
    """
    ncols = 2 * ((dim + 1) // 2)
    out = np.empty((count, dim))
    for j in range(count):
        u = np.array([_radical_inverse(j + 1, _PRIMES[t % len(_PRIMES)])
                      for t in range(ncols)])
        u = np.clip(u, 1e-12, 1 - 1e-12)
        g = np.empty(ncols)
        g[0::2] = np.sqrt(-2.0 * np.log(u[0::2])) * np.cos(2 * np.pi * u[1::2])
        g[1::2] = np.sqrt(-2.0 * np.log(u[0::2])) * np.sin(2 * np.pi * u[1::2])
        v = g[:dim]
        nv = np.linalg.norm(v)
        out[j] = v / nv if nv > 1e-12 else np.eye(dim)[0]
    return out


def random_unit_vectors(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """count x n complex unit vectors from normalized complex Gaussians."""
    X = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return X


def normalize_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector's global phase so its first significant component is
    real and positive; fixes the eigenvector gauge deterministically."""
    idx = np.flatnonzero(np.abs(v) > tol * max(1.0, float(np.abs(v).max(initial=0.0))))
    if idx.size == 0:
        return v
    a = v[idx[0]]
    return v * (abs(a) / a)


def pick_min_eigvec(w: np.ndarray, V: np.ndarray, tie_tol: float) -> np.ndarray:
    """Deterministic representative of the minimal eigenspace.

    Among eigenvectors whose eigenvalue ties with the minimum, the
    phase-normalized column with the lexicographically largest component
    tuple (re, im interleaved) wins.
    """
    ties = np.flatnonzero(w <= w[0] + tie_tol)
    if ties.size == 1:
        return normalize_phase(V[:, ties[0]])
    best = None
    best_key = None
    for j in ties:
        v = normalize_phase(V[:, j])
        key = tuple(np.round(np.column_stack([v.real, v.imag]).ravel(), 12))
        if best_key is None or key > best_key:
            best_key = key
            best = v
    return best


def golden_max(f, lo: float, hi: float, iters: int = 40):
    """Golden-section maximization of a scalar function on [lo, hi].

    Returns (argmax, max). Assumes local unimodality; used to polish grid
    optima.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def max_workers() -> int:
    """Internal parallelism cap: min(cpu count, PENCILRANGE_THREADS)."""
    ncpu = os.cpu_count() or 1
    env = os.environ.get("PENCILRANGE_THREADS", "")
    if env:
        try:
            ncpu = min(ncpu, max(1, int(env)))
        except ValueError:
            pass
    return ncpu


def ordered_parallel_map(fn, items, workers: int | None = None):
    """Map preserving input order; threads only when they can actually help.

    The reduction is by index, so results do not depend on the schedule.
    """
    items = list(items)
    if workers is None:
        workers = max_workers()
    if workers <= 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
