"""Exception types shared across the library."""


class RBATLError(Exception):
    """Base class for all errors raised by this package."""


class VectorError(RBATLError, ValueError):
    """Resource vector misuse (length mismatch, bad component)."""


class FormulaError(RBATLError, ValueError):
    """Formula syntax or well-formedness error."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ModelError(RBATLError, ValueError):
    """Malformed or invalid game structure or model file."""


class PetriError(RBATLError, ValueError):
    """Malformed net, marking, or illegal transition firing."""


class WitnessError(RBATLError, ValueError):
    """Malformed or unconcretizable strategy certificate."""


class EngineError(RBATLError, ValueError):
    """A checking engine was invoked outside its contract."""
