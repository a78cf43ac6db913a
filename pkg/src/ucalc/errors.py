"""Shared exception types."""


class UcalcError(Exception):
    pass


class UnsupportedKind(UcalcError):
    pass


class InvalidInvolution(UcalcError):
    pass


class InvalidLambda(UcalcError):
    pass


class NotAFormParameter(UcalcError):
    pass


class NotAFormIdeal(UcalcError):
    pass


class BadIndex(UcalcError):
    pass


class BadLongParameter(UcalcError):
    pass


class NonUnitary(UcalcError):
    pass


class BadLevel(UcalcError):
    pass


class NoAuxiliaryIndex(UcalcError):
    pass


class BadFactorization(UcalcError):
    pass


class UnknownIdentity(UcalcError):
    pass


class CapExceeded(UcalcError):
    """Raised when a closure run exceeds its element or memory cap.

    Carries how far the run got so callers can report partial progress.
    """

    def __init__(self, msg, count=None):
        super().__init__(msg)
        self.count = count


class NotInSubgroup(UcalcError):
    pass


class InfeasibleCase(UcalcError):
    """A requested verification is out of enumeration reach; reported, not faked."""
