"""Numerical range of a single complex matrix.

The range W(M) = {x*Mx : |x| = 1} is convex and compact, so one scalar
function decides everything this module offers: the zero-exclusion margin

    g(theta) = lambda_min(Re(e^{i theta} M)),

the signed distance of W(M) from the origin in direction theta. Every point
p of W(M) satisfies Re(e^{i theta} p) >= g(theta); hence 0 lies outside
W(M) exactly when g is positive somewhere. Support points in the opposite
orientation trace the boundary polygon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _forms
from ._util import fro, golden_max, normalize_phase, pick_min_eigvec
from .errors import BoundaryAmbiguous, FailedRecovery
from .linalg import DEFAULT_TOL, as_square, cartesian_split, rayleigh

#: Default number of support angles; CLI flag --angles overrides.
DEFAULT_ANGLES = 720

_CHUNK_ENTRIES = 4_000_000


def _rotated_hermitian_parts(M: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Stack of Re(e^{i theta} M) over the angle array (batched)."""
    ph = np.exp(1j * angles)[:, None, None]
    return 0.5 * (ph * M + np.conj(ph) * M.conj().T)


def support_margins(M: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """g(theta) = lambda_min(Re(e^{i theta} M)) for every angle, chunked so
    large matrices do not blow up memory."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    chunk = max(1, _CHUNK_ENTRIES // (n * n))
    out = np.empty(angles.shape[0])
    for s in range(0, angles.shape[0], chunk):
        block = _rotated_hermitian_parts(M, angles[s:s + chunk])
        out[s:s + chunk] = np.linalg.eigvalsh(block)[:, 0]
    return out


def _margin_at(M: np.ndarray, theta: float) -> float:
    H = _rotated_hermitian_parts(M, np.array([theta]))[0]
    return float(np.linalg.eigvalsh(H)[0])


def support_point(M, theta: float):
    """Extreme point of W(M) in direction e^{i theta}.

    Takes the top eigenvector x of Re(e^{-i theta} M); the returned point is
    rayleigh(M, x) and maximizes Re(e^{-i theta} p) over W(M).
    """
    A = as_square(M)
    H = _rotated_hermitian_parts(A, np.array([-theta]))[0]
    w, V = np.linalg.eigh(H)
    x = pick_min_eigvec(-w[::-1], V[:, ::-1], 1e-12 * max(1.0, abs(w[-1])))
    x = normalize_phase(x)
    return complex(rayleigh(A, x)), x


@dataclass(frozen=True)
class BoundaryPolygon:
    """Support points of W(M) at equally spaced angles.

    The convex hull of ``vertices`` is an inner approximation of W(M); the
    intersection of the supporting half-planes at the same angles is an
    outer one.
    """

    vertices: np.ndarray
    angles: np.ndarray
    vectors: np.ndarray


def boundary_polygon(M, k: int = DEFAULT_ANGLES) -> BoundaryPolygon:
    """k support points at angles 2*pi*j/k, j = 0..k-1."""
    A = as_square(M)
    if k < 3:
        from .errors import InvalidInput
        raise InvalidInput("boundary polygon needs at least 3 angles")
    angles = np.linspace(0.0, 2 * np.pi, k, endpoint=False)
    n = A.shape[0]
    chunk = max(1, _CHUNK_ENTRIES // (n * n))
    verts = np.empty(k, dtype=complex)
    vecs = np.empty((k, n), dtype=complex)
    for s in range(0, k, chunk):
        block = _rotated_hermitian_parts(A, -angles[s:s + chunk])
        w, V = np.linalg.eigh(block)
        for j in range(w.shape[0]):
            x = normalize_phase(V[j, :, -1])
            vecs[s + j] = x
            verts[s + j] = rayleigh(A, x)
    return BoundaryPolygon(vertices=verts, angles=angles, vectors=vecs)


@dataclass(frozen=True)
class ZeroInclusion:
    """Outcome of the zero-inclusion test.

    Exactly one of ``witness`` (unit x with |x*Mx| <= tol, status inside) and
    ``separator`` (angle theta with lambda_min(Re(e^{i theta} M)) > 0, status
    outside) is present. ``margin`` is that eigenvalue for outside results
    and the witness residual for inside ones.
    """

    status: str  # "inside" | "outside"
    witness: np.ndarray | None
    separator: float | None
    margin: float

    @property
    def inside(self) -> bool:
        return self.status == "inside"


def _best_margin(M: np.ndarray, angles_count: int) -> tuple[float, float]:
    """Maximize g over angles: coarse grid for early exits, full grid plus
    golden-section polish otherwise. Returns (theta, g(theta))."""
    coarse = np.linspace(0.0, 2 * np.pi, max(24, angles_count // 16),
                         endpoint=False)
    g = support_margins(M, coarse)
    j = int(np.argmax(g))
    scale = max(fro(M), 1.0)
    if g[j] > 1e-6 * scale:  # clearly separated; polish locally
        step = coarse[1] - coarse[0]
        th, val = golden_max(lambda t: _margin_at(M, t),
                             coarse[j] - step, coarse[j] + step)
        if val >= g[j]:
            return th % (2 * np.pi), val
        return coarse[j], float(g[j])
    full = np.linspace(0.0, 2 * np.pi, angles_count, endpoint=False)
    g = support_margins(M, full)
    j = int(np.argmax(g))
    step = full[1] - full[0]
    th, val = golden_max(lambda t: _margin_at(M, t),
                         full[j] - step, full[j] + step)
    if val < g[j]:
        th, val = full[j], float(g[j])
    return th % (2 * np.pi), val


def zero_inside(M, tol: float = DEFAULT_TOL,
                angles: int = DEFAULT_ANGLES) -> tuple[bool, float, float]:
    """Witness-free inclusion decision: (inside, best margin, best angle).

    Boundary cases (|margin| within tolerance) count as inside, matching the
    closedness of W(M).
    """
    A = as_square(M)
    scale = fro(A)
    if scale == 0.0:
        return True, 0.0, 0.0
    theta, gmax = _best_margin(A, angles)
    return gmax <= tol * scale, gmax, theta


def zero_inside_many(mats, tol: float = DEFAULT_TOL,
                     angles: int = DEFAULT_ANGLES) -> np.ndarray:
    """Vectorized zero-inclusion for a family of same-sized matrices.

    All matrices share one batched eigenvalue sweep per angle block; only
    the few whose grid maximum cannot be separated from zero by the
    support function's Lipschitz bound get golden-section polishing.
    """
    stack = np.asarray(mats, dtype=complex)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        from .errors import InvalidInput
        raise InvalidInput("expected a stack of square matrices")
    L, n, _ = stack.shape
    scales = np.linalg.norm(stack, axis=(1, 2))
    inside = np.zeros(L, dtype=bool)
    inside[scales == 0.0] = True
    todo = np.flatnonzero(scales > 0.0)
    coarse = np.linspace(0.0, 2 * np.pi, max(24, angles // 16), endpoint=False)
    gmax_coarse = _grid_margins_max(stack[todo], coarse)
    out_mask = gmax_coarse > tol * scales[todo]
    undecided = todo[~out_mask]
    if undecided.size:
        full = np.linspace(0.0, 2 * np.pi, angles, endpoint=False)
        gmax, argt = _grid_margins_max(stack[undecided], full,
                                       return_arg=True)
        # sup over theta exceeds the grid max by at most ||M|| * step / 2
        band = scales[undecided] * (np.pi / angles)
        sure_in = gmax + band <= tol * scales[undecided]
        inside[undecided[sure_in]] = True
        for j in np.flatnonzero(~sure_in):
            i = undecided[j]
            step = full[1] - full[0]
            th0 = full[argt[j]]
            _, val = golden_max(lambda t, M=stack[i]: _margin_at(M, t),
                                th0 - step, th0 + step)
            val = max(val, float(gmax[j]))
            inside[i] = val <= tol * scales[i]
    return inside


def _grid_margins_max(stack: np.ndarray, angles: np.ndarray,
                      return_arg: bool = False):
    """Max over the angle grid of g(theta) for each matrix in the stack."""
    L, n, _ = stack.shape
    k = angles.shape[0]
    out = np.full(L, -np.inf)
    arg = np.zeros(L, dtype=int)
    rows = max(1, _CHUNK_ENTRIES // (k * n * n))
    ph = np.exp(1j * angles)[None, :, None, None]
    for s in range(0, L, rows):
        block = stack[s:s + rows][:, None, :, :]
        rot = 0.5 * (ph * block + np.conj(ph) * np.conj(np.swapaxes(block, 2, 3)))
        g = np.linalg.eigvalsh(rot)[..., 0]
        out[s:s + rows] = g.max(axis=1)
        arg[s:s + rows] = g.argmax(axis=1)
    if return_arg:
        return out, arg
    return out


def contains_zero(M, tol: float = DEFAULT_TOL, angles: int = DEFAULT_ANGLES,
                  restarts: int = 64, seed: int = 0) -> ZeroInclusion:
    """Decide 0 in W(M) with a certificate either way.

    Outside: a separator angle with positive margin. Inside: a unit witness
    from :func:`recover_zero_vector`. If the margin is inside the tolerance
    band and recovery fails, raises BoundaryAmbiguous.
    """
    A = as_square(M)
    scale = fro(A)
    if scale == 0.0:
        e1 = np.zeros(A.shape[0], dtype=complex)
        e1[0] = 1.0
        return ZeroInclusion("inside", e1, None, 0.0)
    inside, gmax, theta = zero_inside(A, tol, angles)
    if not inside:
        return ZeroInclusion("outside", None, float(theta), float(gmax))
    try:
        x = recover_zero_vector(A, tol=tol, restarts=restarts, seed=seed)
    except FailedRecovery:
        if abs(gmax) <= tol * scale:
            raise BoundaryAmbiguous(
                f"margin {gmax:.3e} within tolerance band and no witness found")
        raise
    res = abs(complex(np.vdot(x, A @ x)))
    return ZeroInclusion("inside", x, None, res)


def _rotation_candidates(M: np.ndarray) -> list[np.ndarray]:
    """Closed-form witness attempts from rotated Cartesian splits.

    For each rotation angle phi, combine the extreme eigenvectors of
    H = Re(e^{i phi} M) so the H-form vanishes exactly, then solve the phase
    psi that kills the K-form along the one-parameter family. Any exact zero
    of e^{i phi} M is an exact zero of M.
    """
    cands: list[np.ndarray] = []
    for phi in np.linspace(0.0, np.pi, 16, endpoint=False):
        Mr = np.exp(1j * phi) * M
        H, K = cartesian_split(Mr)
        w, V = np.linalg.eigh(H)
        a, b = w[0], w[-1]
        if a > 0 or b < 0:
            continue
        u, v = V[:, 0], V[:, -1]
        if max(abs(a), abs(b)) <= 1e-14 * max(fro(H), 1.0):
            z = _forms.single_form_zero(K)
            if z is not None:
                cands.append(z)
            continue
        if b <= 0:
            cands.append(v)
            continue
        t = np.arctan2(np.sqrt(max(-a, 0.0)), np.sqrt(b))
        c, s = np.cos(t), np.sin(t)
        kuu = float(np.real(np.vdot(u, K @ u)))
        kvv = float(np.real(np.vdot(v, K @ v)))
        kap = complex(np.vdot(u, K @ v))
        c0 = c * c * kuu + s * s * kvv
        amp = 2.0 * c * s * abs(kap)
        if amp <= 1e-300:
            if abs(c0) <= 1e-12 * max(fro(K), 1.0):
                cands.append(c * u + s * v)
            continue
        ratio = -c0 / amp
        if abs(ratio) > 1.0:
            # K-form cannot vanish on this family; keep the closest point
            psi0 = (0.0 if ratio > 0 else np.pi) - np.angle(kap)
            cands.append(c * u + s * np.exp(1j * psi0) * v)
            continue
        base = np.arccos(ratio)
        for sign in (1.0, -1.0):
            psi = sign * base - np.angle(kap)
            cands.append(c * u + s * np.exp(1j * psi) * v)
    return cands


def recover_zero_vector(M, tol: float = DEFAULT_TOL, restarts: int = 64,
                        seed: int = 0) -> np.ndarray:
    """Unit x with |x*Mx| <= tol * ||M||, given that 0 lies in W(M).

    Deterministic closed-form candidates from rotated splits come first;
    Gauss-Newton with seeded restarts covers the rest. Raises FailedRecovery
    if the residual target is never met.
    """
    A = as_square(M)
    scale = fro(A)
    target = tol * max(scale, 1e-300)
    n = A.shape[0]
    if scale == 0.0:
        x = np.zeros(n, dtype=complex)
        x[0] = 1.0
        return x
    if n == 1:
        if abs(A[0, 0]) <= target:
            return np.array([1.0 + 0j])
        raise FailedRecovery("1x1 matrix with nonzero entry has no zero vector")
    H, K = cartesian_split(A)
    cands = _rotation_candidates(A)
    best_x, best = None, np.inf
    for x in cands:
        x = x / np.linalg.norm(x)
        r = abs(complex(np.vdot(x, A @ x)))
        if r < best:
            best_x, best = x, r
    if best_x is not None and best > target:
        got = _forms.find_zero([H, K], target=target, restarts=0,
                               extra_starts=[best_x])
        if got is not None:
            best_x, best = got
    if best <= target:
        return normalize_phase(best_x)
    got = _forms.find_zero([H, K], target=target, restarts=restarts, seed=seed,
                           extra_starts=cands[:8])
    if got is not None:
        return normalize_phase(got[0])
    raise FailedRecovery(
        f"no unit vector reached |x*Mx| <= {target:.3e} after the "
        f"deterministic stage and {restarts} restarts")
