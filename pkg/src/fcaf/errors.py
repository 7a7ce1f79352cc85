"""Exception hierarchy shared by every fcaf module."""


class FcafError(Exception):
    """Base class for all errors raised by fcaf."""


class SettingError(FcafError, ValueError):
    """A (n, m, p, scale, variant) combination outside the supported domain."""


class DimensionMismatch(FcafError, ValueError):
    pass


class LengthMismatch(FcafError, ValueError):
    pass


class InvalidPermutation(FcafError, ValueError):
    pass


class NotSurjective(FcafError, ValueError):
    pass


class InvalidClassification(FcafError, ValueError):
    """Raised when a value that must be a valid classification is not.

    ``violation`` carries the :class:`fcaf.model.Violation` that was found,
    and ``voter`` the offending voter when the matrix came from a profile.
    """

    def __init__(self, violation, voter=None):
        self.violation = violation
        self.voter = voter
        where = "" if voter is None else f"voter {voter}: "
        super().__init__(f"{where}{violation}")


class InvalidWeights(FcafError, ValueError):
    pass


class WrongSetting(FcafError, ValueError):
    pass


class InvalidH(FcafError, ValueError):
    pass


class EvenExponent(FcafError, ValueError):
    pass


class PairGenerationFailed(FcafError):
    pass


class PreconditionFailed(FcafError):
    """Weight recovery refused because the aggregator failed a probe check."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"precondition {report.axiom!r} failed on probe profiles")


class NonAdditive(FcafError):
    pass


class BudgetExceeded(FcafError):
    def __init__(self, expansions, survivors):
        self.expansions = expansions
        self.survivors = survivors
        super().__init__(
            f"search budget exhausted after {expansions} node expansions "
            f"({len(survivors)} survivors so far)"
        )


class TooLarge(FcafError, ValueError):
    pass
