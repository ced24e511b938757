"""Exception types raised by the library.

Every error carries a short machine-readable ``name`` (used by the CLI) in
addition to the human-readable message.
"""


class MrangeError(Exception):
    """Base class for all library errors."""

    @property
    def name(self):
        return type(self).__name__


class NonSquare(MrangeError):
    pass


class NotHermitian(MrangeError):
    pass


class NotPSD(MrangeError):
    pass


class BadShape(MrangeError):
    pass


class ShapeMismatch(MrangeError):
    pass


class NotCP(MrangeError):
    pass


class NotUnital(MrangeError):
    pass


class NotPartitionOfIdentity(MrangeError):
    pass


class RadiusTooLarge(MrangeError):
    pass


class RangeViolation(MrangeError):
    pass


class NoConvergence(MrangeError):
    pass


class NotContraction(MrangeError):
    pass


class WindowTooSmall(MrangeError):
    pass


class ConditionFails(MrangeError):
    pass


class SolverUndetermined(MrangeError):
    pass


class InconsistentAffine(MrangeError):
    pass


class NotStrictlyPositive(MrangeError):
    pass


class RootPairingFailed(MrangeError):
    pass


class MomentResidualTooLarge(MrangeError):
    pass


class BoundaryBand(MrangeError):
    pass


class BadJson(MrangeError):
    pass


class UnknownCommand(MrangeError):
    pass
