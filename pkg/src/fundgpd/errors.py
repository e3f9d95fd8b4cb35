"""Exception hierarchy shared by every module."""


class FundGpdError(Exception):
    pass


class CycleWithT0Flag(FundGpdError):
    """Antisymmetry was requested but the closure of the relation has a cycle."""


class NotT0(FundGpdError):
    pass


class UnknownPoint(FundGpdError, KeyError):
    pass


class BadPartition(FundGpdError):
    pass


class InvalidPreorder(FundGpdError):
    pass


class Disconnected(FundGpdError):
    pass


class Exceeded(FundGpdError):
    """Coset enumeration hit its cap: pi_1 is infinite or the cap is too small."""

    def __init__(self, max_cosets):
        super().__init__(f"coset enumeration exceeded {max_cosets} cosets")
        self.max_cosets = max_cosets


class LiftInconsistency(FundGpdError):
    """The lifted order failed the even-covering check (internal error)."""


class MismatchedProvenance(FundGpdError):
    pass


class NotAnAction(FundGpdError):
    pass


class NotContinuous(FundGpdError):
    pass


class NotSimplyConnected(FundGpdError):
    pass


class SearchCapExceeded(FundGpdError):
    pass


class NotComposable(FundGpdError):
    pass


class MalformedBasic(FundGpdError):
    pass


class FormatError(FundGpdError):
    """Input file could not be parsed."""
