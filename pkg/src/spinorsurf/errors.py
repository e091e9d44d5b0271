"""Exception types raised by the toolkit."""


class SpinorSurfError(Exception):
    """Base class for all toolkit errors."""


class DegenerateParametrizationError(SpinorSurfError):
    """dF has rank < 2 at some grid point."""


class FrameDegeneracyError(SpinorSurfError):
    """No seed vector yields a nondegenerate normal frame on the grid."""


class FrameLiftError(SpinorSurfError):
    """The spin lift of the frame rotation has a branch cut on the grid."""


class QuadrantVanishingError(SpinorSurfError):
    """A spinor half-norm is below the threshold required for curvature recovery."""


class NormConditionError(SpinorSurfError):
    """Spinor half-norms are not unit, which the quaternionic 1-form requires."""


class ClosednessError(SpinorSurfError):
    """A 1-form failed its closedness budget; carries the residual report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IntegrabilityError(SpinorSurfError):
    """Prescribed (g, connection, B) data violate the structure equations."""

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports


class ExprSyntaxError(SpinorSurfError):
    """Expression parse failure; carries the byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PoleError(SpinorSurfError):
    """An integrand is singular inside the requested domain."""


class DegenerateMetricError(SpinorSurfError):
    """Holomorphic data induce a degenerate metric."""


class MinimalityError(SpinorSurfError):
    """A construction that needs a minimal source surface got a non-minimal one."""


class ValidationError(SpinorSurfError):
    """Invalid run configuration."""
