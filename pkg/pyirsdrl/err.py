class StandardError(Exception):
    """Exception related to the IRS network simulator."""


class Warning(Warning, StandardError):
    """Exception raised for situations that are degenerate but usable,
    e.g. fewer neighbouring cells than the requested neighbour set size."""


class Error(StandardError):
    """Exception that is the base class of all other error exceptions
    (not Warning)."""


class InterfaceError(Error):
    """Exception raised for errors that are related to the simulator's
    public interface rather than to the simulated network itself."""


class ConfigError(InterfaceError):
    """Exception raised for an invalid or unresolvable simulation
    configuration: unknown keys, wrong types, out-of-range values,
    unreadable config files."""


class DataError(Error, ValueError):
    """Exception raised for invalid arguments: sizes, indices or values
    out of range, non-finite inputs, etc."""


class DimensionError(DataError):
    """Exception raised when vector or matrix dimensions do not match."""


class DomainError(DataError):
    """Exception raised when a value lies outside the mathematical domain
    of an operation, e.g. converting a non-positive power to dB."""


class InternalError(Error):
    """Exception raised when the simulator reaches an inconsistent
    internal state."""


class InvalidStateError(InternalError):
    """Exception raised when an agent state cannot be built because a
    measurement it depends on is missing."""


class OperationalError(Error):
    """Exception raised for errors that happen while a run is in
    progress and are not necessarily under the control of the caller."""


class NumericalError(OperationalError):
    """Exception raised when a NaN or infinite value shows up during a
    run.

    Attributes:
        slot -- index of the slot in which the value was detected
    """

    def __init__(self, message, slot=None):
        super(NumericalError, self).__init__(message)
        self.slot = slot


class NotSupportedError(Error):
    """Exception raised when a configuration or file is valid in
    principle but not handled by this implementation, e.g. cells with
    different UE, antenna or IRS element counts."""
