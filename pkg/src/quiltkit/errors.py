"""Exception hierarchy.

Every error a computation can raise on bad mathematical input derives from
:class:`QuiltError`; the CLI maps those to exit code 2 and reports
``type(exc).__name__`` as the machine-readable error tag.
"""


class QuiltError(Exception):
    """Base class for precondition failures."""


class DimensionMismatch(QuiltError):
    pass


class SpaceMismatch(QuiltError):
    pass


class NotSymplectic(QuiltError):
    pass


class NotLagrangian(QuiltError):
    pass


class NonIntegralIndex(QuiltError):
    pass


class DegenerateStep(QuiltError):
    """Consecutive loop samples admit no canonical short interpolation."""


class InvalidQuilt(QuiltError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid quilt")


class EndMismatch(QuiltError):
    pass


class NotAStrip(QuiltError):
    pass


class BothSidesBoundary(QuiltError):
    pass


class CompositionNotEmbedded(QuiltError):
    pass


class ModulusMismatch(QuiltError):
    pass


class RingMismatch(QuiltError):
    pass


class NotEndomorphism(QuiltError):
    pass


class NonzeroDegree(QuiltError):
    pass


class NotAComplex(QuiltError):
    pass


class FactorMismatch(QuiltError):
    pass


class UnassignedGenerator(QuiltError):
    pass
