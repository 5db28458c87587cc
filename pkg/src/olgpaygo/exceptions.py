"""Exception hierarchy shared by all solver modules."""


class OLGError(Exception):
    """Base class for every error raised by olgpaygo."""


class DomainError(OLGError, ValueError):
    """An argument lies outside the domain of a map (e.g. a non-positive price)."""


class DegenerateInputError(OLGError, ValueError):
    """Inputs are formally valid but degenerate (e.g. zero wealth)."""


class RangeError(OLGError, IndexError):
    """A period or series index falls outside the modeled window."""


class InfeasibleRateError(OLGError, ValueError):
    """A forward rate recursion left the range of the map it inverts."""


class AdmissibilityError(OLGError, ValueError):
    """A tail boundary parameter lies outside its admissible interval."""


class ContractViolation(OLGError, ValueError):
    """Inconsistent inputs that break an operation's stated contract."""


class ParameterError(OLGError, ValueError):
    """Model parameters that make a closed form undefined."""


class SingularStepError(OLGError, ArithmeticError):
    """A backward step has a vanishing coefficient on its unknown price."""


class NoEquilibriumError(OLGError):
    """No feasible equilibrium candidate is available."""


class IngestionError(OLGError, ValueError):
    """Malformed or invalid country data."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class LookupFailure(OLGError, KeyError):
    """Unknown country or table key."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
