"""Exception hierarchy shared across the package."""


class MRQubitError(Exception):
    """Base class for all errors raised by mrqubit."""


class DomainError(MRQubitError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigurationError(MRQubitError, ValueError):
    """A physics/platform/run configuration is invalid."""


class CapacityError(MRQubitError, ValueError):
    """A register or table would exceed its supported size."""


class EmptyTableError(MRQubitError, ValueError):
    """The requested window holds no echoes."""


class DegenerateTableError(MRQubitError, ValueError):
    """A measured echo train carries no usable signal."""


class SelectivityError(MRQubitError):
    """Q-coils do not address their sites one-to-one.

    The offending :class:`~mrqubit.platform.SelectivityReport` is kept on
    ``report``.
    """

    def __init__(self, report):
        self.report = report
        pairs = ", ".join(f"coil {c} -> site {s}" for c, s in report.failures)
        super().__init__(f"Q-coil crosstalk: {pairs}")
