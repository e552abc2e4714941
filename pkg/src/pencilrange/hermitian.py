"""Hermitian pencils lambda*A - B: exact isotropic decision, simultaneous
congruence diagonalization, and the symbolic range classification.

For Hermitian A, B the joint range W(A, B) equals W(A + iB), a convex
planar set, so "is there a common isotropic vector" reduces to a complete
zero-inclusion test on one matrix. Pairs without such a vector admit a
positive definite combination alpha*A + beta*B; whitening by its inverse
square root makes the pair commute and simultaneously diagonalizable, which
yields the canonical data (block sizes and real diagonals) driving the
five-case description of W(lambda*A - B).

Convention: every function in this module reads the pencil as
lambda*A - B. The CLI bridges the lambda*A + B convention by negating B.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numrange
from ._util import fro, golden_max, normalize_phase, scale_of
from .errors import (HasIsotropicVector, InvalidInput, NotSeparable,
                     NumericallySingular, Unresolved)
from .linalg import DEFAULT_TOL, as_hermitian, inv_sqrt_pd

_ZERO_BAND = 1e-6      # |diagonal| below this (relative) joins the 0 block
_AMBIGUOUS_BAND = 1e-4  # below this but above _ZERO_BAND: refuse to decide


def _pair(A, B) -> tuple[np.ndarray, np.ndarray]:
    A = as_hermitian(A, "A")
    B = as_hermitian(B, "B")
    if A.shape != B.shape:
        raise InvalidInput("pencil coefficients must have equal dimensions")
    return A, B


def common_isotropic_hermitian(A, B, tol: float = DEFAULT_TOL,
                               angles: int = numrange.DEFAULT_ANGLES,
                               restarts: int = 64,
                               seed: int = 0) -> np.ndarray | None:
    """Unit v with v*Av = v*Bv = 0, or None certifying none exists.

    x*(A+iB)x has real part x*Ax and imaginary part x*Bx, and W(A+iB) is
    convex, so zero inclusion there is a complete decision procedure.
    """
    A, B = _pair(A, B)
    M = A + 1j * B
    inc = numrange.contains_zero(M, tol=tol, angles=angles,
                                 restarts=restarts, seed=seed)
    if not inc.inside:
        return None
    v = inc.witness
    scale = scale_of(A, B)
    ra = abs(float(np.real(np.vdot(v, A @ v))))
    rb = abs(float(np.real(np.vdot(v, B @ v))))
    if max(ra, rb) > tol * scale:
        from . import _forms
        got = _forms.find_zero([A, B], target=tol * scale, restarts=0,
                               extra_starts=[v])
        if got is None:
            from .errors import FailedRecovery
            raise FailedRecovery("zero-inclusion witness did not polish to "
                                 "the per-form residual target")
        v = got[0]
    return normalize_phase(v)


def definite_combination(A, B, tol: float = DEFAULT_TOL,
                         grid: int = 720) -> tuple[float, float]:
    """Unit-circle (alpha, beta) with alpha*A + beta*B positive definite.

    Exists exactly when the pair has no common isotropic vector; found by
    maximizing lambda_min(cos t A + sin t B) on a grid plus golden-section.
    Raises NotSeparable when the best margin does not clear tolerance.
    """
    A, B = _pair(A, B)
    scale = scale_of(A, B)

    def h(t: float) -> float:
        return float(np.linalg.eigvalsh(np.cos(t) * A + np.sin(t) * B)[0])

    ts = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.array([h(t) for t in ts])
    j = int(np.argmax(vals))
    step = ts[1] - ts[0]
    t, val = golden_max(h, ts[j] - step, ts[j] + step)
    if vals[j] > val:
        t, val = ts[j], float(vals[j])
    if val <= tol * scale:
        raise NotSeparable(
            f"no definite combination found: best margin {val:.3e}")
    return float(np.cos(t)), float(np.sin(t))


@dataclass(frozen=True)
class ThompsonForm:
    """Simultaneous congruence diagonalization of a Hermitian pair.

    With (A0, B0) = (-A, -B) when ``negated`` else (A, B):
    X*A0X = I_n ⊕ -I_m ⊕ 0_k and X*B0X = diag(a, b, c), n >= m.
    """

    X: np.ndarray
    n_plus: int
    n_minus: int
    n_zero: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    negated: bool = False

    @property
    def signs(self) -> tuple[int, int, int]:
        return self.n_plus, self.n_minus, self.n_zero

    def canonical_a_matrix(self) -> np.ndarray:
        d = np.concatenate([np.ones(self.n_plus), -np.ones(self.n_minus),
                            np.zeros(self.n_zero)])
        return np.diag(d)

    def canonical_b_matrix(self) -> np.ndarray:
        return np.diag(np.concatenate([self.a, self.b, self.c]))


def _simultaneous_diagonals(A, B, tol):
    """Whiten by the definite combination and diagonalize; returns
    (X unscaled, A-diagonal, B-diagonal)."""
    alpha, beta = definite_combination(A, B, tol=tol)
    C = alpha * A + beta * B
    S = inv_sqrt_pd(C, tol=tol)
    Ap = S @ A @ S
    Bp = S @ B @ S
    Ap = 0.5 * (Ap + Ap.conj().T)
    Bp = 0.5 * (Bp + Bp.conj().T)
    # alpha Ap + beta Bp = I, so an eigenbasis of one diagonalizes the other;
    # diagonalize the one whose partner coefficient is safely nonzero.
    if abs(beta) >= abs(alpha):
        w, U = np.linalg.eigh(Ap)
        dA = w
        T = U.conj().T @ Bp @ U
        dB = np.real(np.diag(T))
        off = fro(T - np.diag(dB))
        ref = max(fro(Bp), 1.0)
    else:
        w, U = np.linalg.eigh(Bp)
        dB = w
        T = U.conj().T @ Ap @ U
        dA = np.real(np.diag(T))
        off = fro(T - np.diag(dA))
        ref = max(fro(Ap), 1.0)
    if off > 1e-7 * ref:
        raise NumericallySingular(
            f"simultaneous diagonalization residual {off:.3e} too large")
    return S @ U, np.asarray(dA, float), np.asarray(dB, float)


def _thompson_of(A, B, tol, negated):
    X, dA, dB = _simultaneous_diagonals(A, B, tol)
    n = dA.shape[0]
    scaleA = float(np.max(np.abs(dA)))
    if scaleA <= 1e-12 * max(fro(B), 1.0):
        kinds = np.zeros(n, dtype=int)
    else:
        mags = np.abs(dA) / scaleA
        inband = (mags >= _ZERO_BAND) & (mags < _AMBIGUOUS_BAND)
        if np.any(inband):
            raise NumericallySingular(
                "balanced A-diagonal entries fall inside the sign-ambiguity "
                f"band ({_ZERO_BAND:g}, {_AMBIGUOUS_BAND:g}): "
                f"{dA[inband].tolist()}")
        kinds = np.where(mags < _ZERO_BAND, 0, np.sign(dA)).astype(int)
    scaleB = max(float(np.max(np.abs(dB), initial=0.0)), 1e-300)
    cols = []
    avals, bvals, cvals = [], [], []
    for kind in (1, -1, 0):
        idx = np.flatnonzero(kinds == kind)
        if kind == 0:
            # only the signs of the kernel-block values are congruence
            # invariants; normalize their magnitudes to 1 where possible
            vals = np.where(np.abs(dB[idx]) > 1e-10 * scaleB,
                            np.sign(dB[idx]), dB[idx])
        else:
            vals = dB[idx] / np.abs(dA[idx])
        order = idx[np.argsort(vals, kind="stable")]
        for j in order:
            col = X[:, j]
            if kind != 0:
                col = col / np.sqrt(abs(dA[j]))
            elif abs(dB[j]) > 1e-10 * scaleB:
                col = col / np.sqrt(abs(dB[j]))
            cols.append(col)
        svals = np.sort(vals, kind="stable")
        if kind == 1:
            avals = svals
        elif kind == -1:
            bvals = svals
        else:
            cvals = svals
    Xc = np.column_stack(cols) if cols else X[:, :0]
    return ThompsonForm(X=Xc, n_plus=int(np.sum(kinds == 1)),
                        n_minus=int(np.sum(kinds == -1)),
                        n_zero=int(np.sum(kinds == 0)),
                        a=np.asarray(avals, float),
                        b=np.asarray(bvals, float),
                        c=np.asarray(cvals, float), negated=negated)


def thompson_canonical(A, B, tol: float = DEFAULT_TOL,
                       check_isotropic: bool = True) -> ThompsonForm:
    """Canonical congruence data of a pair without common isotropic vector.

    Normalized so the positive block is at least as large as the negative
    one, by negating the pencil when needed (the range is unchanged).
    """
    A, B = _pair(A, B)
    if check_isotropic and common_isotropic_hermitian(A, B, tol=tol) is not None:
        raise HasIsotropicVector(
            "pair has a common isotropic vector; no canonical form")
    form = _thompson_of(A, B, tol, negated=False)
    if form.n_plus < form.n_minus:
        form = _thompson_of(-A, -B, tol, negated=True)
    return form


@dataclass(frozen=True)
class RangeDescriptor:
    """Symbolic description of W(lambda*A - B) for Hermitian A, B.

    Kinds: full_plane, segment [alpha, beta], point {alpha}, half_line_up
    [alpha, inf), half_line_down (-inf, beta], complement_of_interval
    R minus (alpha, beta) with closed endpoints, inverse_image (case (d),
    materialized to a complement-of-interval with the swapped descriptor
    attached), empty.
    """

    kind: str
    alpha: float | None = None
    beta: float | None = None
    case: str = ""
    inner: "RangeDescriptor | None" = None
    witness: np.ndarray | None = field(default=None, compare=False)

    def contains(self, lam: complex, slack: float = 1e-9) -> bool:
        if self.kind == "full_plane":
            return True
        if self.kind == "empty":
            return False
        if abs(complex(lam).imag) > slack:
            return False
        x = complex(lam).real
        if self.kind == "segment":
            return self.alpha - slack <= x <= self.beta + slack
        if self.kind == "point":
            return abs(x - self.alpha) <= slack
        if self.kind == "half_line_up":
            return x >= self.alpha - slack
        if self.kind == "half_line_down":
            return x <= self.beta + slack
        if self.kind in ("complement_of_interval", "inverse_image"):
            return not (self.alpha + slack < x < self.beta - slack)
        raise InvalidInput(f"unknown descriptor kind {self.kind!r}")

    def excluded_real_point(self) -> float | None:
        """A concrete real number outside the range; None for full_plane."""
        if self.kind == "full_plane":
            return None
        if self.kind == "empty":
            return 0.0
        if self.kind == "segment":
            return self.beta + 1.0
        if self.kind == "point":
            return self.alpha + 1.0
        if self.kind == "half_line_up":
            return self.alpha - 1.0
        if self.kind == "half_line_down":
            return self.beta + 1.0
        return 0.5 * (self.alpha + self.beta)

    def endpoints(self) -> tuple[float, ...]:
        return tuple(v for v in (self.alpha, self.beta) if v is not None)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "case": self.case}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.beta is not None:
            out["beta"] = self.beta
        if self.inner is not None:
            out["inner"] = self.inner.to_json()
        return out

    def describe(self) -> str:
        if self.kind == "full_plane":
            return "C"
        if self.kind == "empty":
            return "{}"
        if self.kind == "segment":
            return f"[{self.alpha:g}, {self.beta:g}]"
        if self.kind == "point":
            return f"{{{self.alpha:g}}}"
        if self.kind == "half_line_up":
            return f"[{self.alpha:g}, oo)"
        if self.kind == "half_line_down":
            return f"(-oo, {self.beta:g}]"
        return f"R \\ ({self.alpha:g}, {self.beta:g})"


def classify(A, B, tol: float = DEFAULT_TOL, restarts: int = 64,
             seed: int = 0) -> RangeDescriptor:
    """Exact interval description of W(lambda*A - B).

    Dispatch: a common isotropic vector means the full plane; otherwise the
    canonical diagonals decide among (a) segment, (b) half line, (c)/(e)
    complement of a bounded open interval, (d) the inverse image of the
    swapped pencil's half line. A zero A with (necessarily definite) B has
    empty range.
    """
    A, B = _pair(A, B)
    v = common_isotropic_hermitian(A, B, tol=tol, restarts=restarts, seed=seed)
    if v is not None:
        return RangeDescriptor(kind="full_plane", case="isotropic", witness=v)
    if fro(A) <= 1e-12 * max(fro(B), 1.0):
        return RangeDescriptor(kind="empty", case="degenerate-zero-a")
    form = thompson_canonical(A, B, tol=tol, check_isotropic=False)
    return _classify_canonical(form, A, B, tol)


def _classify_canonical(form: ThompsonForm, A, B, tol) -> RangeDescriptor:
    npos, nneg, nzero = form.signs
    a, b, c = form.a, form.b, form.c
    scale_b = max(float(np.max(np.abs(np.concatenate([a, b, c])), initial=0.0)),
                  1.0)
    tiny = 1e-12 * scale_b

    if nneg == 0 and nzero == 0:  # (a): A definite
        alpha, beta = float(a[0]), float(a[-1])
        if beta - alpha <= tiny:
            return RangeDescriptor(kind="point", alpha=alpha, case="a")
        return RangeDescriptor(kind="segment", alpha=alpha, beta=beta, case="a")

    if nneg == 0:  # (b): A semidefinite singular; c is one-signed
        if np.any(np.abs(c) <= tiny) or (np.any(c > 0) and np.any(c < 0)):
            raise NumericallySingular(
                "zero-block B-values must share one sign for a pair without "
                f"common isotropic vector; got {c.tolist()}")
        if c[0] > 0:
            return RangeDescriptor(kind="half_line_up", alpha=float(a[0]),
                                   case="b")
        return RangeDescriptor(kind="half_line_down", beta=float(a[-1]),
                               case="b")

    # A indefinite from here on; inspect B's inertia via the diagonals.
    # Zero detection mirrors the A-side policy: a zero band, an explicit
    # refusal band, and clean values above it.
    all_vals = np.concatenate([a, b, c])
    scale_vals = max(float(np.max(np.abs(all_vals), initial=0.0)), 1e-300)
    mags = np.abs(all_vals) / scale_vals
    band = (mags > 1e-7) & (mags < 1e-5)
    if np.any(band):
        raise NumericallySingular(
            "canonical B-values fall inside the definiteness ambiguity band "
            f"(1e-7, 1e-5) relative to {scale_vals:g}: "
            f"{all_vals[band].tolist()}")
    zero_mask = mags <= 1e-7
    pos = bool(np.any(~zero_mask & (all_vals > 0)))
    neg = bool(np.any(~zero_mask & (all_vals < 0)))
    singular = bool(np.any(zero_mask))

    if not singular and not (pos and neg):  # (c): B definite
        sgn = 1.0 if pos else -1.0
        Bp = sgn * B if not form.negated else -sgn * B
        Ap = sgn * A if not form.negated else -sgn * A
        # W is negation-invariant, so work with whichever sign makes B PD.
        S = inv_sqrt_pd(Bp, tol=tol)
        C = S @ Ap @ S
        w = np.linalg.eigvalsh(0.5 * (C + C.conj().T))
        tmin, tmax = float(w[0]), float(w[-1])
        if tmin >= 0 or tmax <= 0:
            raise Unresolved(
                "indefinite A produced a one-signed whitened spectrum "
                f"[{tmin:.3e}, {tmax:.3e}]")
        return RangeDescriptor(kind="complement_of_interval",
                               alpha=1.0 / tmin, beta=1.0 / tmax, case="c")

    if singular and not (pos and neg):  # (d): B semidefinite singular
        sgn = 1.0 if pos else -1.0
        A0 = A if not form.negated else -A
        B0 = B if not form.negated else -B
        inner = classify(sgn * B0, sgn * A0, tol=tol)
        if inner.kind == "half_line_up":
            ap = inner.alpha
            if ap >= -tiny:
                raise Unresolved(
                    f"case (d) expected a negative half-line endpoint, got {ap:g}")
            return RangeDescriptor(kind="inverse_image", alpha=1.0 / ap,
                                   beta=0.0, case="d", inner=inner)
        if inner.kind == "half_line_down":
            bp = inner.beta
            if bp <= tiny:
                raise Unresolved(
                    f"case (d) expected a positive half-line endpoint, got {bp:g}")
            return RangeDescriptor(kind="inverse_image", alpha=0.0,
                                   beta=1.0 / bp, case="d", inner=inner)
        raise Unresolved(
            f"case (d) swapped pencil classified as {inner.kind}, "
            "expected a half line")

    # (e): both indefinite
    if np.min(np.abs(a[:, None] + b[None, :])) <= tiny:
        raise NumericallySingular(
            "canonical diagonals reach the a_i + b_j = 0 manifold although "
            "the isotropic test certified none exists")
    alpha1, beta1 = float(a[0]), float(a[-1])
    alpha2, beta2 = float(b[0]), float(b[-1])
    if alpha1 + alpha2 > 0:
        return RangeDescriptor(kind="complement_of_interval", alpha=-alpha2,
                               beta=alpha1, case="e")
    if beta1 + beta2 >= 0:
        raise Unresolved(
            "case (e) found neither a positive minimal sum nor a negative "
            "maximal sum; the pair should have had an isotropic vector")
    return RangeDescriptor(kind="complement_of_interval", alpha=beta1,
                           beta=-beta2, case="e")
