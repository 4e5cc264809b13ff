"""Exception hierarchy shared by every engine in the package."""


class CQEDNetError(Exception):
    """Base class for all errors raised by cqednet."""


class ValidationError(CQEDNetError):
    """Malformed configuration or input values outside their domain."""


class DimensionError(CQEDNetError):
    """Operator shape inconsistent with the declared subsystem layout."""


class ContractViolationError(CQEDNetError):
    """A numerical contract (hermiticity, trace, positivity) failed."""


class CapacityError(CQEDNetError):
    """Requested state carries more excitations than the basis holds."""


class DegenerateProjectionError(CQEDNetError):
    """Vacuum projection hit a state with numerically zero vacuum weight."""


class IntegrationAccuracyError(CQEDNetError):
    """Trace drift exceeded tolerance; a smaller step is required."""


class UndefinedRatioError(CQEDNetError):
    """Transmission ratio undefined because the source correlation is zero."""
