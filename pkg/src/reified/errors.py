"""Exception hierarchy shared by all modules.

Every domain error derives from :class:`ReifiedError` so that the command
line front end can map them to exit code 1 with the error's class name.
"""


class ReifiedError(Exception):
    """Base class for domain errors."""


class NotALattice(ReifiedError):
    pass


class NotDistributive(ReifiedError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"distributivity fails at triple {witness}")


class NotInjective(ReifiedError):
    pass


class NotSurjective(ReifiedError):
    pass


class Unclassifiable(ReifiedError):
    pass


class Type4Unsupported(ReifiedError):
    pass


class PreconditionViolated(ReifiedError):
    pass


class UnitIdealFailure(ReifiedError):
    pass


class NotACoverOnWitnesses(ReifiedError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"witness {witness!r} lies in no input piece")


class NotAUnit(ReifiedError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"parameter {index} has a zero in the closed unit disc")


class InternalCheck(ReifiedError):
    pass


class ExactnessFailure(ReifiedError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class IncompatiblePair(ReifiedError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__("sections disagree on the overlap")


class NoConvergence(ReifiedError):
    pass


class ZeroPolynomial(ReifiedError):
    pass


class PrecisionMismatch(ReifiedError):
    pass


class NotDivisible(ReifiedError):
    def __init__(self, digit):
        self.digit = digit
        super().__init__(f"not divisible at digit {digit}")


class NotCompatible(ReifiedError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"p-power compatibility fails at index {index}")


class Unstable(ReifiedError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"limit not settled at component {index}; increase depth")
