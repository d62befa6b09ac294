"""Exception hierarchy shared by all modules."""


class ToricGaugeError(Exception):
    """Base class for domain errors (CLI exit code 3)."""


class DimensionError(ToricGaugeError, ValueError):
    """Vectors or matrices of incompatible ambient rank."""


class WallError(ToricGaugeError):
    """The polarization lies on a wall of the secondary fan."""


class InfiniteInertiaError(ToricGaugeError):
    """Some semistable support has a positive-dimensional stabilizer."""


class GroupTooLargeError(ToricGaugeError):
    """Torsion enumeration exceeded the configured order cap."""


class InvalidDegreeError(ToricGaugeError, ValueError):
    """No gauged map class of the requested degree exists."""


class InadmissibleError(ToricGaugeError, ValueError):
    """A one-parameter subgroup has no limit on the given support."""


class IllegalMergeError(ToricGaugeError, ValueError):
    """Edge collapse between incompatible scaling states."""


class BudgetError(ToricGaugeError):
    """Enumeration exceeded its configured size cap."""
