"""Exception hierarchy shared by every module."""


class SliceCauchyError(Exception):
    """Base class for library errors."""


class DomainError(SliceCauchyError, ValueError):
    """A point lies outside the domain on which a function is defined."""


class ParamError(SliceCauchyError, ValueError):
    """Invalid construction parameter (radius, order, sample count, ...)."""


class PoleError(SliceCauchyError, ArithmeticError):
    """Evaluation too close to the pole sphere of a kernel."""


class NonConvergence(SliceCauchyError, RuntimeError):
    """An adaptive or iterative procedure did not reach its tolerance."""


class Undecidable(SliceCauchyError, RuntimeError):
    """Finite data cannot decide the requested classification."""
