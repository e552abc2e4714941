"""Exception hierarchy for pencilrange.

All library errors derive from :class:`PencilRangeError` so callers can
distinguish them from built-in exceptions.
"""


class PencilRangeError(Exception):
    """Base class for all pencilrange errors."""


class InvalidInput(PencilRangeError):
    """Raised when an argument fails basic validation (shape, finiteness, ...)."""


class NotPositiveDefinite(PencilRangeError):
    """Raised when a positive definite matrix was required but not supplied."""


class BoundaryAmbiguous(PencilRangeError):
    """Zero sits on the numerical-range boundary within tolerance and no
    witness could be recovered; the inclusion status cannot be certified."""


class FailedRecovery(PencilRangeError):
    """A vector-recovery procedure exhausted its deterministic steps and
    optimizer restarts without reaching the residual target."""


class Indeterminate(PencilRangeError):
    """The hull-membership margin lies inside the tolerance band and neither
    a separator nor a witness combination could be certified."""

    def __init__(self, msg, best_margin=None, best_norm=None):
        super().__init__(msg)
        self.best_margin = best_margin
        self.best_norm = best_norm


class NotSeparable(PencilRangeError):
    """No positive definite combination was found although the precondition
    (no common isotropic vector) promised one exists."""


class HasIsotropicVector(PencilRangeError):
    """Canonical-form construction requires a pair without common isotropic
    vector; the supplied pair has one."""


class NumericallySingular(PencilRangeError):
    """A canonical scaling or sign decision falls inside the configured
    ambiguity band and cannot be made reliably."""


class NotDissipative(PencilRangeError):
    """The pencil's Hermitian parts are not positive semidefinite within
    tolerance."""


class NotFullPlane(PencilRangeError):
    """The dissipative isotropic-vector route requires a full-plane pencil;
    the hull test certified otherwise."""

    def __init__(self, msg, certificate=None, excluded=None):
        super().__init__(msg)
        self.certificate = certificate
        self.excluded = excluded


class VerificationFailed(PencilRangeError):
    """An internally constructed certificate did not pass its own
    verification step."""


class NotSemidefinite(PencilRangeError):
    """The quadratic-coefficient analysis requires every coefficient to be
    positive or negative semidefinite."""


class Unresolved(PencilRangeError):
    """No isotropic witness was found and the complementary excluded-set
    check also failed numerically; the instance is reported, not guessed."""


class AllFormsZero(PencilRangeError):
    """All scalarized coefficients vanish for the supplied vector: the vector
    is a common isotropic vector and every complex number is a root."""

    def __init__(self, msg, vector=None):
        super().__init__(msg)
        self.vector = vector
