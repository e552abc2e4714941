"""Zero search for systems of Hermitian quadratic forms.

Several operations reduce to: given Hermitian F_1..F_J, find a unit vector x
with every x*F_j x ~ 0 (isotropic vectors, joint-range zero points, witness
recovery). This module owns that engine: deterministic closed-form starts,
Gauss-Newton polishing on the sphere, and seeded random restarts. A returned
vector always satisfies the requested residual; failure is reported as None
and never as a near-miss.
"""

from __future__ import annotations

import numpy as np

from ._util import random_unit_vectors


def form_values(forms, x) -> np.ndarray:
    """Real values (x*F_1 x, ..., x*F_J x) for a unit vector x."""
    return np.array([float(np.real(np.vdot(x, F @ x))) for F in forms])


def residual(forms, x) -> float:
    return float(np.linalg.norm(form_values(forms, x)))


def single_form_zero(F: np.ndarray) -> np.ndarray | None:
    """Closed-form unit zero of one Hermitian form, if 0 is in its range.

    With u, v the extreme eigenvectors and eigenvalues a <= 0 <= b, the
    combination cos(t) u + sin(t) v with tan^2 t = -a/b has a vanishing form.
    """
    w, V = np.linalg.eigh(F)
    a, b = w[0], w[-1]
    if a > 0 or b < 0:
        return None
    if b <= 0.0:  # a <= b <= 0 with b >= 0 forced: both ~ 0
        return V[:, -1]
    t = np.arctan2(np.sqrt(max(-a, 0.0)), np.sqrt(b))
    x = np.cos(t) * V[:, 0] + np.sin(t) * V[:, -1]
    return x / np.linalg.norm(x)


def _gauss_newton(forms, x0, target: float, iters: int = 60):
    """Minimize sum of squared form values from x0 on the unit sphere.

    Jacobian rows in the real parametrization are 2*(Re F x, Im F x); steps
    are solved in the tangent space and damped by backtracking.
    """
    x = np.asarray(x0, dtype=complex)
    x = x / np.linalg.norm(x)
    r = form_values(forms, x)
    best_x, best = x, float(np.linalg.norm(r))
    for _ in range(iters):
        if best <= 0.01 * target:
            break
        grads = [2.0 * (F @ x) for F in forms]
        J = np.array([np.concatenate([g.real, g.imag]) for g in grads])
        xi = np.concatenate([x.real, x.imag])
        J = J - np.outer(J @ xi, xi)  # tangent projection (|x| = 1)
        delta, *_ = np.linalg.lstsq(J, -r, rcond=None)
        n = x.shape[0]
        step = delta[:n] + 1j * delta[n:]
        t, improved = 1.0, False
        for _ in range(25):
            xn = x + t * step
            nn = np.linalg.norm(xn)
            if nn > 1e-12:
                xn = xn / nn
                rn = form_values(forms, xn)
                fn = float(np.linalg.norm(rn))
                if fn < best * (1.0 - 1e-4 * t):
                    x, r, best, improved = xn, rn, fn, True
                    break
            t *= 0.5
        if not improved:
            break
        best_x = x
    return best_x, float(np.linalg.norm(form_values(forms, best_x)))


def _pairwise_path_starts(a, b, t_count: int = 7, psi_count: int = 12):
    """Grid of normalized two-vector mixtures cos(t) a + sin(t) e^{i psi} b."""
    out = []
    for t in np.linspace(0.12, np.pi / 2 - 0.12, t_count):
        for psi in np.linspace(0.0, 2 * np.pi, psi_count, endpoint=False):
            x = np.cos(t) * a + np.sin(t) * np.exp(1j * psi) * b
            n = np.linalg.norm(x)
            if n > 1e-10:
                out.append(x / n)
    return out


def deterministic_starts(forms, extra=None) -> list[np.ndarray]:
    """Cheap structured candidates: per-form closed-form zeros, the common
    near-kernel direction, the uniform vector, and caller-provided seeds."""
    n = forms[0].shape[0]
    starts: list[np.ndarray] = []
    ones = np.ones(n, dtype=complex) / np.sqrt(n)
    starts.append(ones)
    kernel_acc = np.zeros((n, n), dtype=complex)
    for F in forms:
        nrm = np.linalg.norm(F)
        if nrm <= 0:
            continue
        z = single_form_zero(F)
        if z is not None:
            starts.append(z)
        Fn = F / nrm
        kernel_acc += Fn @ Fn
    if np.linalg.norm(kernel_acc) > 0:
        w, V = np.linalg.eigh(kernel_acc)
        starts.append(V[:, 0])
    if extra:
        starts.extend(np.asarray(e, dtype=complex) for e in extra)
    seeds = [s for s in starts if np.linalg.norm(s) > 1e-10]
    # mixtures of the best few structured seeds catch sign-balanced zeros
    ranked = sorted(seeds, key=lambda s: residual(forms, s / np.linalg.norm(s)))
    for i in range(min(3, len(ranked))):
        for j in range(i + 1, min(4, len(ranked))):
            seeds.extend(_pairwise_path_starts(ranked[i], ranked[j],
                                               t_count=5, psi_count=8))
    return seeds


def find_zero(forms, *, target: float, restarts: int = 64, seed: int = 0,
              extra_starts=None, pair_reduction: bool = False):
    """Search for a unit x with ||(x*F_j x)_j|| <= target.

    Returns (x, residual) on success, None when the target was not reached.
    """
    forms = [np.asarray(F) for F in forms]
    live = [F for F in forms if np.linalg.norm(F) > 0]
    n = forms[0].shape[0]
    if not live:
        x = np.zeros(n, dtype=complex)
        x[0] = 1.0
        return x, 0.0
    starts = deterministic_starts(live, extra=extra_starts)
    if pair_reduction and extra_starts is not None and len(extra_starts) >= 2:
        ex = [np.asarray(e, dtype=complex) for e in extra_starts]
        for i in range(len(ex)):
            for j in range(i + 1, len(ex)):
                starts.extend(_pairwise_path_starts(ex[i], ex[j]))
    best_x, best = None, np.inf
    for s in starts:
        x, res = _gauss_newton(live, s, target)
        if res < best:
            best_x, best = x, res
        if best <= target:
            return best_x, best
    rng = np.random.default_rng(seed)
    for _ in range(max(0, restarts)):
        s = random_unit_vectors(n, 1, rng)[0]
        x, res = _gauss_newton(live, s, target)
        if res < best:
            best_x, best = x, res
        if best <= target:
            return best_x, best
    return None
