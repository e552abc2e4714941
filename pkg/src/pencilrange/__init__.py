"""Numerical ranges of linear matrix pencils and matrix polynomials.

The library decides whether W(lambda*A + B) covers the whole complex plane
(via convex-hull membership of the origin in the joint numerical range of
the Hermitian parts, with certificates both ways), recovers common
isotropic vectors, classifies Hermitian pencils lambda*A - B into their
exact interval descriptions, and rasterizes membership regions of general
matrix polynomials.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
from .errors import (AllFormsZero, BoundaryAmbiguous, FailedRecovery,  # noqa: F401
                     HasIsotropicVector, Indeterminate, InvalidInput,
                     NotDissipative, NotFullPlane, NotPositiveDefinite,
                     NotSemidefinite, NotSeparable, NumericallySingular,
                     PencilRangeError, Unresolved, VerificationFailed)
from .linalg import (EigenDecomposition, as_hermitian, as_square,  # noqa: F401
                     cartesian_split, hermitian_eig, inv_sqrt_pd,
                     lambda_extremes, lambda_max, lambda_min, rayleigh)
from .numrange import (BoundaryPolygon, ZeroInclusion, boundary_polygon,  # noqa: F401
                       contains_zero, recover_zero_vector, support_point,
                       zero_inside)
from .jointrange import (HullCertificate, IsotropicWitness, JointSample,  # noqa: F401
                         isotropic_minimize, jnr_sample, zero_in_hull,
                         zero_point_recovery_convex)
from .pencil import (DissipativeSplit, FullPlaneResult, Pencil,  # noqa: F401
                     dissipative_isotropic, dissipative_split, excluded_point,
                     full_plane_test, membership, membership_witness,
                     range_sample)
from .hermitian import (RangeDescriptor, ThompsonForm,  # noqa: F401
                        classify, common_isotropic_hermitian,
                        definite_combination, thompson_canonical)
from .matpoly import (MatrixPolynomial, QuadraticSemidefiniteResult,  # noqa: F401
                      RegionGrid, default_window, membership as poly_membership,
                      poly_eval, quadratic_semidefinite_analyze, region_raster,
                      scalar_roots, witness_for_point)
