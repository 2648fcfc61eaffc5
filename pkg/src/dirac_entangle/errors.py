"""Exception hierarchy shared by the library and the command line."""


class DiracEntangleError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParameterDomainError(DiracEntangleError, ValueError):
    """A model parameter lies outside its physical domain."""

    exit_code = 4


class UnsupportedBranchError(DiracEntangleError, ValueError):
    """The requested closed form does not exist for these parameters."""

    exit_code = 4


class NumericDomainError(DiracEntangleError, ValueError):
    """Input violates a numerical precondition (e.g. non-Hermitian matrix)."""

    exit_code = 4


class ConfigError(DiracEntangleError, ValueError):
    """Invalid run configuration or unknown name."""

    exit_code = 2


class OutputError(DiracEntangleError, OSError):
    """Result file could not be written."""

    exit_code = 3
