"""Numerical slice hyperholomorphic function theory on quaternions.

Quaternions are numpy arrays with a trailing axis of length four.  The
submodules cover quaternion arithmetic (:mod:`~slicecauchy.quaternion`),
slice functions (:mod:`~slicecauchy.slicefunc`), Cauchy kernels
(:mod:`~slicecauchy.kernel`), slice contours (:mod:`~slicecauchy.contour`),
Cauchy transforms and splitting (:mod:`~slicecauchy.transform`), series
(:mod:`~slicecauchy.series`) and the global operator
(:mod:`~slicecauchy.globalop`).
"""

from .contour import Contour, circle, integrate_ds_j
from .errors import DomainError, NonConvergence, ParamError, PoleError, SliceCauchyError, Undecidable
from .globalop import SliceTestFunction, apply_GL, apply_GR, fundamental_pairing, solve_global
from .kernel import cauchy_kernel_left, cauchy_kernel_right, phi, star_inverse
from .quaternion import Quaternion
from .series import SphericalLaurentSeries, cassini_distance, laurent_coefficients
from .slicefunc import SliceFunction, ball, polynomial, slice_derivative, star_left, star_right
from .transform import cauchy_transform, cauchy_transform_right, split, transform_derivative

__version__ = "0.1.0"

__all__ = [
    "Contour", "DomainError", "NonConvergence", "ParamError", "PoleError", "Quaternion",
    "SliceCauchyError", "SliceFunction", "SliceTestFunction", "SphericalLaurentSeries", "Undecidable",
    "apply_GL", "apply_GR", "ball", "cassini_distance", "cauchy_kernel_left", "cauchy_kernel_right",
    "cauchy_transform", "cauchy_transform_right", "circle", "fundamental_pairing", "integrate_ds_j",
    "laurent_coefficients", "phi", "polynomial", "slice_derivative", "solve_global", "split",
    "star_inverse", "star_left", "star_right", "transform_derivative",
]
