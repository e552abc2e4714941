"""Matrix polynomials P(lambda) = sum_i A_i lambda^i of any degree.

Pointwise membership reuses the single-matrix zero-inclusion test on
P(lambda); rasterization sweeps it over a grid. Degree-two polynomials with
semidefinite Hermitian coefficients admit an exact dichotomy: either the
coefficients share an isotropic vector (full plane) or the range misses an
explicit ray or the whole non-real plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jointrange, numrange
from ._util import fro, ordered_parallel_map, scale_of
from .errors import (AllFormsZero, FailedRecovery, InvalidInput,
                     NotSemidefinite, Unresolved)
from .linalg import DEFAULT_TOL, as_hermitian, as_square, lambda_extremes

_LEADING_DROP = 1e-12  # relative leading-form tolerance for degree drop


@dataclass(frozen=True)
class MatrixPolynomial:
    """Coefficients in ascending degree: P(lambda) = sum coeffs[i] lambda^i."""

    coeffs: tuple

    def __init__(self, coeffs):
        mats = tuple(as_square(C, f"coefficient {i}")
                     for i, C in enumerate(coeffs))
        if not mats:
            raise InvalidInput("polynomial needs at least one coefficient")
        n = mats[0].shape[0]
        if any(M.shape[0] != n for M in mats):
            raise InvalidInput("coefficients must share one dimension")
        object.__setattr__(self, "coeffs", mats)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    def __call__(self, lam: complex) -> np.ndarray:
        return poly_eval(self, lam)


def poly_eval(P: MatrixPolynomial, lam: complex) -> np.ndarray:
    """Horner evaluation from the leading coefficient down."""
    acc = np.array(P.coeffs[-1], dtype=complex)
    for C in P.coeffs[-2::-1]:
        acc = acc * lam + C
    return acc


def membership(P: MatrixPolynomial, lam: complex, tol: float = DEFAULT_TOL,
               angles: int = numrange.DEFAULT_ANGLES) -> bool:
    """lambda in W(P): zero inclusion of the evaluated matrix."""
    inside, _, _ = numrange.zero_inside(poly_eval(P, lam), tol=tol,
                                        angles=angles)
    return inside


def witness_for_point(P: MatrixPolynomial, lam: complex,
                      tol: float = DEFAULT_TOL, restarts: int = 64,
                      seed: int = 0) -> np.ndarray:
    """Unit x with |x* P(lambda) x| below tolerance, for a member lambda."""
    return numrange.recover_zero_vector(poly_eval(P, lam), tol=tol,
                                        restarts=restarts, seed=seed)


@dataclass(frozen=True)
class RegionGrid:
    """Rasterized membership over a rectangle; cells[i, j] answers the grid
    point re_axis[i] + 1j * im_axis[j]."""

    re_axis: np.ndarray
    im_axis: np.ndarray
    cells: np.ndarray
    tol: float


def membership_many(P: MatrixPolynomial, lams, tol: float = DEFAULT_TOL,
                    angles: int = numrange.DEFAULT_ANGLES) -> np.ndarray:
    """Vectorized membership over many lambda values."""
    lams = np.asarray(lams, dtype=complex).ravel()
    stack = np.zeros((lams.shape[0], P.n, P.n), dtype=complex)
    stack[:] = P.coeffs[-1]
    for C in P.coeffs[-2::-1]:
        stack = stack * lams[:, None, None] + C
    return numrange.zero_inside_many(stack, tol=tol, angles=angles)


def region_raster(P: MatrixPolynomial, window, resolution,
                  tol: float = DEFAULT_TOL,
                  angles: int = numrange.DEFAULT_ANGLES) -> RegionGrid:
    """Cellwise membership over window = (re0, re1, im0, im1)."""
    re0, re1, im0, im1 = map(float, window)
    nx, ny = int(resolution[0]), int(resolution[1])
    if nx < 2 or ny < 2:
        raise InvalidInput("resolution must be at least 2x2")
    re_axis = np.linspace(re0, re1, nx)
    im_axis = np.linspace(im0, im1, ny)

    def row(i):
        lams = re_axis[i] + 1j * im_axis
        return membership_many(P, lams, tol=tol, angles=angles)

    rows = ordered_parallel_map(row, range(nx))
    return RegionGrid(re_axis=re_axis, im_axis=im_axis,
                      cells=np.vstack(rows), tol=tol)


def default_window(P: MatrixPolynomial, tol: float = DEFAULT_TOL):
    """Heuristic square window meant to cover the bounded features of W(P):
    twice the coefficient mass over a proxy for the leading form's distance
    from zero, clamped to [1, 100]."""
    lead = P.coeffs[-1]
    mass = sum(fro(C) for C in P.coeffs[:-1])
    inside, margin, _ = numrange.zero_inside(lead, tol=tol)
    denom = max(margin, 1e-2 * max(fro(lead), 1e-300)) if not inside else \
        1e-2 * max(fro(lead), 1e-300)
    r = 2.0 * min(100.0, max(1.0, mass / denom))
    return (-r, r, -r, r)


def scalar_roots(P: MatrixPolynomial, x, tol: float = DEFAULT_TOL):
    """Roots of the scalarized quadratic (x*A2x) t^2 + (x*A1x) t + (x*A0x).

    Returns a tuple of finite roots (two, one on degree drop, or none when
    only the constant form survives). Raises AllFormsZero when all three
    forms vanish: x is then a common isotropic vector and every lambda is a
    root.
    """
    if P.degree != 2:
        raise InvalidInput("scalar roots are defined for degree-2 polynomials")
    v = np.asarray(x, dtype=complex).ravel()
    if v.shape[0] != P.n or np.linalg.norm(v) == 0.0:
        raise InvalidInput("vector must be nonzero and of matching dimension")
    nv2 = float(np.real(np.vdot(v, v)))
    c0, c1, c2 = (complex(np.vdot(v, C @ v)) for C in P.coeffs)
    drop2 = abs(c2) <= _LEADING_DROP * max(fro(P.coeffs[2]), 1e-300) * nv2
    drop1 = abs(c1) <= _LEADING_DROP * max(fro(P.coeffs[1]), 1e-300) * nv2
    drop0 = abs(c0) <= _LEADING_DROP * max(fro(P.coeffs[0]), 1e-300) * nv2
    if drop2 and drop1 and drop0:
        raise AllFormsZero("all scalarized forms vanish: common isotropic "
                           "vector; every complex number is a root",
                           vector=v / np.linalg.norm(v))
    if drop2 and drop1:
        return ()
    if drop2:
        return (-c0 / c1,)
    disc = np.sqrt(c1 * c1 - 4.0 * c2 * c0)
    if (np.conj(c1) * disc).real > 0:
        disc = -disc
    q = -0.5 * (c1 - disc)
    r1 = q / c2
    r2 = c0 / q if abs(q) > 0 else r1
    return (r1, r2)


@dataclass(frozen=True)
class QuadraticSemidefiniteResult:
    """Outcome of the semidefinite-coefficient analysis of
    A t^2 + B t + C.

    full-plane results carry the common isotropic witness; the rest carry
    the sign pattern (1..4, after the global negation normalizing A to PSD)
    and the excluded set: a real ray for patterns 1-2, the whole non-real
    plane for patterns 3-4.
    """

    full_plane: bool
    witness: np.ndarray | None
    pattern: int | None
    reason: str


def _semidefinite_sign(H, tol, scale) -> set:
    lo, hi = lambda_extremes(H)
    signs = set()
    if lo >= -tol * scale:
        signs.add(1)
    if hi <= tol * scale:
        signs.add(-1)
    return signs


def quadratic_semidefinite_analyze(A, B, C, tol: float = DEFAULT_TOL,
                                   restarts: int = 64,
                                   seed: int = 0) -> QuadraticSemidefiniteResult:
    """Full-plane dichotomy for A t^2 + B t + C with semidefinite Hermitian
    coefficients.

    After normalizing the global sign so A is PSD, a common isotropic vector
    (searched with the joint optimizer) settles the full-plane case; in its
    absence the sign pattern pins an excluded set, which is spot-checked
    numerically and reported, never assumed.
    """
    A = as_hermitian(A, "A")
    B = as_hermitian(B, "B")
    C = as_hermitian(C, "C")
    if not (A.shape == B.shape == C.shape):
        raise InvalidInput("coefficients must share one dimension")
    scale = scale_of(A, B, C)
    sA = _semidefinite_sign(A, tol, scale)
    sB = _semidefinite_sign(B, tol, scale)
    sC = _semidefinite_sign(C, tol, scale)
    for name, s in (("A", sA), ("B", sB), ("C", sC)):
        if not s:
            raise NotSemidefinite(f"coefficient {name} is indefinite")
    if 1 not in sA:  # global negation keeps the range, makes A PSD
        A, B, C = -A, -B, -C
        sB = {-s for s in sB}
        sC = {-s for s in sC}
    b_plus = 1 in sB
    c_plus = 1 in sC
    pattern = {(True, True): 1, (False, True): 2,
               (True, False): 3, (False, False): 4}[(b_plus, c_plus)]

    witness = jointrange.isotropic_minimize([A, B, C], restarts=restarts,
                                            seed=seed, tol=tol)
    if witness is not None:
        return QuadraticSemidefiniteResult(True, witness.vector, None,
                                           "common isotropic vector found; "
                                           "the range is the whole plane")
    poly = MatrixPolynomial([C, B, A])
    if pattern in (1, 2):
        sign = 1.0 if pattern == 1 else -1.0
        probes = [0.7, 1.3, 3.1]
        if any(membership(poly, sign * t, tol=tol) for t in probes):
            raise Unresolved(
                "no isotropic witness found, yet the excluded ray contains "
                "members; the instance cannot be certified either way")
        ray = "(0, oo)" if pattern == 1 else "(-oo, 0)"
        return QuadraticSemidefiniteResult(
            False, None, pattern,
            f"sign pattern ({pattern}): the real ray {ray} is outside the "
            "range, so it is not the whole plane")
    rng = np.random.default_rng(seed)
    from ._util import random_unit_vectors
    X = random_unit_vectors(A.shape[0], 200, rng)
    for v in X:
        try:
            roots = scalar_roots(poly, v, tol=tol)
        except AllFormsZero:
            raise Unresolved(
                "sampling found a common isotropic vector the optimizer "
                "missed; rerun with more restarts")
        if any(abs(r.imag) > 1e-7 * (1.0 + abs(r)) for r in roots):
            raise Unresolved(
                "no isotropic witness found, yet a scalarization has "
                "non-real roots; the instance cannot be certified either way")
    return QuadraticSemidefiniteResult(
        False, None, pattern,
        f"sign pattern ({pattern}): (x*Bx)^2 >= 0 >= (x*Ax)(x*Cx) forces "
        "real scalar roots, so the range lies inside the real line")
