"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class MalformedProgramError(ValueError):
    """A linear program is structurally invalid (ragged rows, no variables...)."""


class EmptyFiberError(ValueError):
    """The queried point has an empty preimage under the map."""


class NotSurjectiveError(ValueError):
    """The map does not send C onto D."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InternalInconsistencyError(RuntimeError):
    """An exact identity that must hold on valid input failed.

    Seeing this means a solver bug, or a caller passing a wrong gap constant.
    """
