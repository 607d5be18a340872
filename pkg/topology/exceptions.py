"""
Exceptions Module
Error hierarchy shared by the toolkit and mapped to exit codes by the CLI
"""


class TopologyError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(TopologyError, ValueError):
    """Points, origins or cells of different dimension were combined."""


class EmptyInputError(TopologyError, ValueError):
    """The operation is undefined on an empty cloud, grid or diagram."""


class InvalidParameterError(TopologyError, ValueError):
    """A numeric or categorical parameter is outside its domain."""


class LatticeError(TopologyError, ValueError):
    """A grid lives on the wrong lattice or a point is off its lattice."""


class DataFormatError(TopologyError):
    """An input file could not be parsed."""


class VerificationFailure(TopologyError):
    """A verification case did not meet its bound."""
