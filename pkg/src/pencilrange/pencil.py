"""Linear pencils P(lambda) = lambda A + B.

A complex number lambda belongs to W(P) exactly when 0 belongs to the
numerical range of the single matrix lambda A + B, and W(P) covers the
whole plane exactly when 0 belongs to the convex hull of the joint range
of the four Hermitian parts of A and B. Both directions are made
constructive: hull membership yields witnesses, separation yields an
explicitly verified excluded point, and for dissipative pencils a
full-plane certificate is converted into a common isotropic vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jointrange, numrange
from ._util import fro, random_unit_vectors, scale_of
from .errors import (FailedRecovery, InvalidInput, NotDissipative,
                     NotFullPlane, VerificationFailed)
from .linalg import (DEFAULT_TOL, as_square, cartesian_split, lambda_min,
                     psd_clip)


@dataclass(frozen=True)
class Pencil:
    """Coefficients of P(lambda) = lambda A + B."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", as_square(self.A, "A"))
        object.__setattr__(self, "B", as_square(self.B, "B"))
        if self.A.shape != self.B.shape:
            raise InvalidInput("pencil coefficients must have equal dimensions")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __call__(self, lam: complex) -> np.ndarray:
        return lam * self.A + self.B

    def hermitian_parts(self) -> list[np.ndarray]:
        """[Re A, Im A, Re B, Im B]: the joint-range coordinates of (A, B)."""
        A1, A2 = cartesian_split(self.A)
        B1, B2 = cartesian_split(self.B)
        return [A1, A2, B1, B2]


@dataclass(frozen=True)
class DissipativeSplit:
    """A = R1 + J1, B = R2 + J2 with R_i Hermitian PSD and J_i skew;
    the skew parts are stored through the Hermitian matrices K_i = -i J_i."""

    R1: np.ndarray
    K1: np.ndarray
    R2: np.ndarray
    K2: np.ndarray


@dataclass(frozen=True)
class FullPlaneResult:
    """Outcome of the full-plane test: the hull certificate plus, when the
    range is not the whole plane, a directly verified excluded point."""

    full_plane: bool
    certificate: jointrange.HullCertificate
    excluded: complex | None = None


def membership(P: Pencil, lam: complex, tol: float = DEFAULT_TOL,
               angles: int = numrange.DEFAULT_ANGLES) -> bool:
    """lambda in W(P), via the zero-inclusion of P(lambda)."""
    inside, _, _ = numrange.zero_inside(P(lam), tol=tol, angles=angles)
    return inside


def membership_many(P: Pencil, lams, tol: float = DEFAULT_TOL,
                    angles: int = numrange.DEFAULT_ANGLES) -> np.ndarray:
    """Vectorized membership over many lambda values."""
    lams = np.asarray(lams, dtype=complex).ravel()
    stack = lams[:, None, None] * P.A[None] + P.B[None]
    return numrange.zero_inside_many(stack, tol=tol, angles=angles)


def membership_witness(P: Pencil, lam: complex, tol: float = DEFAULT_TOL,
                       restarts: int = 64, seed: int = 0) -> np.ndarray:
    """Unit x with |x* P(lambda) x| below tolerance, for a member lambda."""
    return numrange.recover_zero_vector(P(lam), tol=tol, restarts=restarts,
                                        seed=seed)


def full_plane_test(P: Pencil, tol: float = DEFAULT_TOL, restarts: int = 64,
                    seed: int = 0) -> FullPlaneResult:
    """W(P) = C exactly when 0 is in the convex hull of the joint range of
    the Hermitian parts; on separation an excluded point is produced and
    verified. Indeterminate propagates from the hull test."""
    cert = jointrange.zero_in_hull(P.hermitian_parts(), tol=tol,
                                   restarts=restarts, seed=seed)
    if cert.in_hull:
        return FullPlaneResult(True, cert)
    lam = excluded_point(P, cert.separator, tol=tol)
    return FullPlaneResult(False, cert, excluded=lam)


def excluded_point(P: Pencil, separator, tol: float = DEFAULT_TOL) -> complex:
    """A concrete lambda outside W(P), built from a separating functional.

    The separator's coefficients feed the 2x2 linear system

        a1 + a3 l1 + a4 l2 = 1/k,      a2 - a3 l2 + a4 l1 = 1/k,

    solved for growing k; each candidate (both signs) is accepted only after
    membership verifies false. When the separator does not involve the B
    coordinates, 0 lies outside W(A) and any large enough modulus works.
    """
    a = np.asarray(separator, float)
    if a.shape != (4,):
        raise InvalidInput("separator must be a length-4 real vector")
    margin = lambda_min(sum(c * H for c, H in
                            zip(a, P.hermitian_parts())))
    if margin <= 0:
        raise InvalidInput("separator has nonpositive margin; not a certificate")
    candidates: list[complex] = []
    if np.hypot(a[2], a[3]) > 1e-12:
        Mat = np.array([[a[2], a[3]], [a[3], -a[2]]])
        k = 1.0
        for _ in range(17):  # k up to 2^16
            rhs = np.array([1.0 / k - a[0], 1.0 / k - a[1]])
            l1, l2 = np.linalg.solve(Mat, rhs)
            lam = complex(l1, l2)
            candidates.extend([-lam, lam])
            k *= 2.0
    else:
        # 0 is outside W(A): |x*Ax| >= margin, so |lambda| > ||B|| / margin
        # cannot be cancelled.
        r = 2.0 * (1.0 + fro(P.B)) / margin
        for _ in range(17):
            candidates.extend(r * np.exp(1j * np.linspace(0, 2 * np.pi, 8,
                                                          endpoint=False)))
            r *= 2.0
    for lam in candidates:
        if not membership(P, lam, tol=tol):
            return complex(lam)
    raise VerificationFailed(
        "no candidate excluded point verified as a non-member")


def range_sample(P: Pencil, count: int, seed: int = 0,
                 tol: float = DEFAULT_TOL) -> np.ndarray:
    """Members of W(P) from random unit vectors: lambda = -x*Bx / x*Ax,
    skipping vectors whose A-form is below tolerance."""
    if count < 1:
        raise InvalidInput("count must be at least 1")
    rng = np.random.default_rng(seed)
    X = random_unit_vectors(P.n, count, rng)
    a = np.einsum("ij,jk,ik->i", X.conj(), P.A, X)
    b = np.einsum("ij,jk,ik->i", X.conj(), P.B, X)
    keep = np.abs(a) >= tol * max(fro(P.A), 1e-300)
    return -b[keep] / a[keep]


def dissipative_split(P: Pencil, tol: float = DEFAULT_TOL) -> DissipativeSplit:
    """Cartesian split with the PSD precondition checked and the Hermitian
    parts clipped onto the PSD cone. Raises NotDissipative otherwise."""
    R1, K1 = cartesian_split(P.A)
    R2, K2 = cartesian_split(P.B)
    for name, R in (("A", R1), ("B", R2)):
        low = lambda_min(R)
        if low < -1e-8 * max(fro(R), 1.0):
            raise NotDissipative(
                f"Hermitian part of {name} has lambda_min = {low:.3e}")
    return DissipativeSplit(R1=psd_clip(R1), K1=K1, R2=psd_clip(R2), K2=K2)


def dissipative_isotropic(P: Pencil, tol: float = DEFAULT_TOL,
                          restarts: int = 128,
                          seed: int = 0) -> jointrange.IsotropicWitness:
    """Common isotropic vector of a full-plane dissipative pencil (n > 2).

    The full-plane certificate places 0 in the convex joint range of
    ((R1+R2)/sqrt 2, -iJ1, -iJ2); a zero point v of that triple kills both
    PSD forms at once (they are nonnegative and sum to zero), hence is a
    common isotropic vector of A and B. The returned witness is verified
    against the original coefficients.

    For n = 2 the convexity argument is unavailable; the plain optimizer is
    tried and failure reported as FailedRecovery (existence stays unproven).
    """
    split = dissipative_split(P, tol=tol)
    scale = scale_of(P.A, P.B)
    target = tol * scale

    def verified(v) -> jointrange.IsotropicWitness | None:
        res = np.array([abs(complex(np.vdot(v, P.A @ v))),
                        abs(complex(np.vdot(v, P.B @ v)))])
        joint = float(np.linalg.norm(res))
        if joint <= target:
            return jointrange.IsotropicWitness(vector=v, residuals=res,
                                               residual=joint)
        return None

    if P.n <= 2:
        w = jointrange.isotropic_minimize([P.A, P.B], restarts=restarts,
                                          seed=seed, tol=tol)
        if w is not None:
            return w
        raise FailedRecovery(
            "dimension 2 is outside the dissipative theorem's scope and the "
            "optimizer found no witness; existence is unproven")

    result = full_plane_test(P, tol=tol, restarts=max(restarts, 64), seed=seed)
    if not result.full_plane:
        raise NotFullPlane("pencil range is not the full plane; no common "
                           "isotropic vector exists",
                           certificate=result.certificate,
                           excluded=result.excluded)
    triple = [(split.R1 + split.R2) / np.sqrt(2.0), split.K1, split.K2]
    v = jointrange.zero_point_recovery_convex(triple, tol=tol,
                                              restarts=restarts, seed=seed)
    got = verified(v)
    if got is not None:
        return got
    # polish on the original four Hermitian forms before giving up
    from . import _forms
    polished = _forms.find_zero(P.hermitian_parts(), target=target,
                                restarts=0, extra_starts=[v])
    if polished is not None:
        got = verified(polished[0])
        if got is not None:
            return got
    raise FailedRecovery(
        "recovered triple zero did not verify against the original "
        "coefficients within tolerance")
