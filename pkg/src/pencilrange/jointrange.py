"""Joint numerical ranges of Hermitian tuples.

The central question is whether the origin belongs to the convex hull of

    W(H_1, ..., H_m) = {(x*H_1 x, ..., x*H_m x) : |x| = 1},

decided through the concave support problem max_{|c|=1} lambda_min(sum c_i
H_i): a positive value is a separating-hyperplane certificate, while a
convex combination of range points with norm below tolerance certifies
membership. The search couples Wolfe's min-norm-point method (whose linear
minimization oracle is one Hermitian eigendecomposition) with supergradient
ascent restarts; both sides produce self-checking certificates and the
tolerance band in between is reported as Indeterminate, never guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _forms
from ._util import (fro, halton_unit_directions, pick_min_eigvec,
                    random_unit_vectors, scale_of)
from .errors import FailedRecovery, Indeterminate, InvalidInput
from .linalg import DEFAULT_TOL, as_hermitian

#: The hull test follows the paper's scope of at most four matrices.
MAX_TUPLE = 4


def _validated(mats) -> list[np.ndarray]:
    Hs = [as_hermitian(M, name=f"matrix {i}") for i, M in enumerate(mats)]
    if not 1 <= len(Hs) <= MAX_TUPLE:
        raise InvalidInput(f"expected between 1 and {MAX_TUPLE} matrices, got {len(Hs)}")
    n = Hs[0].shape[0]
    if any(H.shape[0] != n for H in Hs):
        raise InvalidInput("matrices must share one dimension")
    return Hs


@dataclass(frozen=True)
class JointSample:
    """Sampled joint-range points and the unit vectors generating them."""

    points: np.ndarray  # (count, m) real
    vectors: np.ndarray  # (count, n) complex


def jnr_sample(mats, count: int, seed: int = 0) -> JointSample:
    """count joint-range points from seeded complex Gaussian unit vectors."""
    Hs = _validated(mats)
    if count < 1:
        raise InvalidInput("count must be at least 1")
    rng = np.random.default_rng(seed)
    X = random_unit_vectors(Hs[0].shape[0], count, rng)
    pts = np.column_stack([np.real(np.einsum("ij,jk,ik->i", X.conj(), H, X))
                           for H in Hs])
    return JointSample(points=pts, vectors=X)


@dataclass(frozen=True)
class HullCertificate:
    """Certified answer to: does 0 belong to conv W(H_1..H_m)?

    not_in_hull carries a unit separator c with margin lambda_min(sum c_i
    H_i) > tol; in_hull carries at most m+1 unit witnesses whose convex
    combination of range points has norm <= tol.
    """

    status: str  # "in_hull" | "not_in_hull"
    separator: np.ndarray | None = None
    margin: float | None = None
    witness_vectors: list = field(default_factory=list)
    witness_weights: np.ndarray | None = None
    combo_norm: float | None = None

    @property
    def in_hull(self) -> bool:
        return self.status == "in_hull"


def _lmo(Hs, c):
    """Extreme point of W in direction -c: the minimal-eigenvector Rayleigh
    point of sum c_i H_i, with deterministic tie-breaking."""
    S = sum(ci * H for ci, H in zip(c, Hs))
    S = 0.5 * (S + S.conj().T)
    w, V = np.linalg.eigh(S)
    x = pick_min_eigvec(w, V, 1e-12 * max(1.0, abs(w[-1]), abs(w[0])))
    p = _forms.form_values(Hs, x)
    return p, x, float(w[0])


def _affine_minimizer(P: np.ndarray) -> np.ndarray:
    """Coefficients mu (sum = 1, free sign) minimizing ||sum mu_j P_j||."""
    p0 = P[0]
    if P.shape[0] == 1:
        return np.array([1.0])
    Q = (P[1:] - p0).T
    beta, *_ = np.linalg.lstsq(Q, -p0, rcond=None)
    return np.concatenate([[1.0 - beta.sum()], beta])


def _min_norm_over_corral(P, w):
    """Wolfe's inner loop: min-norm point of conv(P) starting from feasible
    weights w. Returns (P, w, kept_indices) with indices into the input P."""
    idx = np.arange(P.shape[0])
    P = P.copy()
    w = w.copy()
    for _ in range(3 * P.shape[0] + 12):
        mu = _affine_minimizer(P)
        if np.all(mu >= -1e-13):
            w = np.clip(mu, 0.0, None)
            s = w.sum()
            w = w / s if s > 0 else w
            break
        neg = mu < -1e-13
        theta = np.min(w[neg] / (w[neg] - mu[neg]))
        theta = min(max(theta, 0.0), 1.0)
        w = (1.0 - theta) * w + theta * mu
        w[w < 1e-14] = 0.0
        keep = w > 0.0
        if keep.sum() == 0:
            keep[int(np.argmax(mu))] = True
            w[keep] = 1.0
        P, w, idx = P[keep], w[keep], idx[keep]
        w = w / w.sum()
    return P, w, idx


def _caratheodory(P, X, w, m):
    """Prune a convex combination to at most m+1 affinely independent atoms
    without moving the combined point."""
    P, w = P.copy(), w.copy()
    X = list(X)
    while len(X) > m + 1:
        A = np.vstack([P.T, np.ones(len(X))])
        _, _, Vt = np.linalg.svd(A)
        null = Vt[-1]
        if np.linalg.norm(A @ null) > 1e-8 * max(1.0, np.abs(A).max()):
            break
        pos = null > 1e-15
        if not np.any(pos):
            null = -null
            pos = null > 1e-15
        t = np.min(w[pos] / null[pos])
        w = w - t * null
        w[w < 1e-14] = 0.0
        keep = w > 0.0
        P, w = P[keep], w[keep]
        X = [x for x, k in zip(X, keep) if k]
        w = w / w.sum()
    return P, X, w


def _ascent(Hs, c0, iters: int = 90):
    """Supergradient ascent of f(c) = lambda_min(sum c_i H_i) on the sphere:
    c <- normalize(c + eta p(c)) with backtracking on eta."""
    c = np.asarray(c0, float)
    c = c / np.linalg.norm(c)
    p, _, f = _lmo(Hs, c)
    eta = 1.0
    for _ in range(iters):
        cn = c + eta * p
        nn = np.linalg.norm(cn)
        if nn < 1e-14:
            eta *= 0.5
            continue
        cn = cn / nn
        pn, _, fn = _lmo(Hs, cn)
        if fn > f + 1e-15:
            c, p, f = cn, pn, fn
            eta = min(eta * 1.4, 1e3)
        else:
            eta *= 0.5
            if eta < 1e-13:
                break
    return c, f


def zero_in_hull(mats, tol: float = DEFAULT_TOL, restarts: int = 64,
                 seed: int = 0, max_outer: int = 400) -> HullCertificate:
    """Decide 0 in conv W(H_1..H_m) with a certificate.

    Wolfe's method drives the current hull point z toward the min-norm point;
    along the way each direction z/|z| is tested as a separator, so the first
    side to clear the tolerance wins. Supergradient ascent from Halton
    restarts backs up the separator search before anything is declared
    Indeterminate.
    """
    Hs = _validated(mats)
    m = len(Hs)
    scale = scale_of(*Hs)
    target = tol * scale
    if all(fro(H) == 0.0 for H in Hs):
        x0 = np.zeros(Hs[0].shape[0], dtype=complex)
        x0[0] = 1.0
        return HullCertificate("in_hull", witness_vectors=[x0],
                               witness_weights=np.array([1.0]), combo_norm=0.0)

    best_c, best_f = None, -np.inf

    def consider(c, f):
        nonlocal best_c, best_f
        if f > best_f:
            best_c, best_f = np.asarray(c, float).copy(), f

    c0 = np.ones(m) / np.sqrt(m)
    p0, x0, f0 = _lmo(Hs, c0)
    consider(c0, f0)
    P = np.array([p0])
    X = [x0]
    w = np.array([1.0])
    z = p0.copy()
    stalled = False
    for _ in range(max_outer):
        nz = float(np.linalg.norm(z))
        if nz <= target:
            break
        c = z / nz
        p, x, f = _lmo(Hs, c)
        consider(c, f)
        if f > target:
            return HullCertificate("not_in_hull", separator=c, margin=f)
        gap = nz * nz - float(z @ p)
        if gap <= max(1e-14 * scale * scale, 1e-6 * target * nz):
            stalled = True
            break
        if min(np.linalg.norm(P - p, axis=1)) <= 1e-15 * max(scale, 1.0):
            stalled = True
            break
        P = np.vstack([P, p])
        X.append(x)
        w = np.concatenate([w, [0.0]])
        P, w, kept = _min_norm_over_corral(P, w)
        X = [X[j] for j in kept]
        z = w @ P

    nz = float(np.linalg.norm(z))
    if nz <= target:
        P, X, w = _caratheodory(P, X, w, m)
        combo = float(np.linalg.norm(w @ P))
        if combo <= target:
            return HullCertificate("in_hull", witness_vectors=X,
                                   witness_weights=w, combo_norm=combo)

    if nz <= max(1e-2 * scale, 16.0 * target):
        # the min-norm point is near 0 but Wolfe zigzags (0 on a hull face,
        # common when some coordinates are sign-constrained): look for an
        # actual range zero, which is a one-witness membership certificate
        got = _forms.find_zero(Hs, target=target, restarts=16, seed=seed,
                               extra_starts=X, pair_reduction=True)
        if got is not None:
            x, res = got
            return HullCertificate("in_hull", witness_vectors=[x],
                                   witness_weights=np.array([1.0]),
                                   combo_norm=res)

    # separator side did not clear the bar inside Wolfe's loop: ascent restarts
    directions = [np.eye(m)[i] * s for i in range(m) for s in (1.0, -1.0)]
    directions.extend(halton_unit_directions(m, restarts))
    if best_c is not None:
        directions.insert(0, best_c)
    for c_init in directions:
        c, f = _ascent(Hs, c_init)
        consider(c, f)
        if best_f > target:
            return HullCertificate("not_in_hull", separator=best_c, margin=best_f)

    if nz <= target:
        # combination was within tolerance but Caratheodory verification failed
        raise Indeterminate("hull combination lost accuracy during pruning",
                            best_margin=best_f, best_norm=nz)
    raise Indeterminate(
        f"margin {best_f:.3e} and hull-point norm {nz:.3e} both sit inside "
        f"the tolerance band (target {target:.3e})",
        best_margin=best_f, best_norm=nz)


@dataclass(frozen=True)
class IsotropicWitness:
    """Unit vector with all |v* M_i v| jointly below tolerance."""

    vector: np.ndarray
    residuals: np.ndarray  # |v* M_i v| per input matrix
    residual: float  # joint two-norm of the scalarized forms


def zero_point_recovery_convex(mats, tol: float = DEFAULT_TOL,
                               restarts: int = 128, seed: int = 0) -> np.ndarray:
    """Unit v with (v*H_1 v, v*H_2 v, v*H_3 v) ~ 0 for a Hermitian triple
    whose joint range is convex (dimension >= 3) and contains the origin.

    Witness vectors from the hull certificate seed a pairwise-path reduction;
    Gauss-Newton restarts finish the job. Raises FailedRecovery when the
    residual target is never reached.
    """
    Hs = _validated(mats)
    if len(Hs) != 3:
        raise InvalidInput("recovery expects exactly three Hermitian matrices")
    if Hs[0].shape[0] < 3:
        raise InvalidInput("convex recovery requires dimension at least 3")
    scale = scale_of(*Hs)
    target = tol * scale
    extra = []
    try:
        cert = zero_in_hull(Hs, tol=tol, restarts=16, seed=seed)
        if not cert.in_hull:
            raise FailedRecovery(
                "joint range is separated from the origin "
                f"(margin {cert.margin:.3e}); no zero point exists")
        extra = list(cert.witness_vectors)
    except Indeterminate:
        pass
    got = _forms.find_zero(Hs, target=target, restarts=restarts, seed=seed,
                           extra_starts=extra, pair_reduction=True)
    if got is None:
        raise FailedRecovery(
            f"no unit vector reached joint residual {target:.3e} after "
            f"pairwise reduction and {restarts} restarts")
    return got[0]


def isotropic_minimize(mats, restarts: int = 64, seed: int = 0,
                       tol: float = DEFAULT_TOL) -> IsotropicWitness | None:
    """Search a common isotropic vector of arbitrary complex matrices by
    minimizing sum |x* M_i x|^2 over the unit sphere.

    Returns a witness when the joint residual clears tol * scale, else None.
    None is not a proof of nonexistence.
    """
    if not mats:
        raise InvalidInput("need at least one matrix")
    from .linalg import as_square, cartesian_split
    Ms = [as_square(M, name=f"matrix {i}") for i, M in enumerate(mats)]
    n = Ms[0].shape[0]
    if any(M.shape[0] != n for M in Ms):
        raise InvalidInput("matrices must share one dimension")
    forms = []
    for M in Ms:
        H, K = cartesian_split(M)
        for F in (H, K):
            if fro(F) > 0.0:
                forms.append(F)
    scale = scale_of(*Ms)
    target = tol * scale
    if not forms:
        x = np.zeros(n, dtype=complex)
        x[0] = 1.0
        return IsotropicWitness(x, np.zeros(len(Ms)), 0.0)
    got = _forms.find_zero(forms, target=target, restarts=restarts, seed=seed)
    if got is None:
        return None
    x, _ = got
    res = np.array([abs(complex(np.vdot(x, M @ x))) for M in Ms])
    joint = float(np.linalg.norm(res))
    if joint > target:
        return None
    return IsotropicWitness(vector=x, residuals=res, residual=joint)
