from typing import Any, Mapping, Optional


class ConfigurationError(Exception):

    invalid_data: Mapping[str, Any]

    def __init__(self, invalid_data: Mapping[str, Any]) -> None:
        super().__init__(invalid_data)
        self.invalid_data = invalid_data


class ChromaticError(Exception):
    '''
    The base class of all domain errors raised by this package.
    The first argument should be a human-readable one-line message.
    '''

    def __str__(self) -> str:
        if not self.args:
            return type(self).__name__
        return str(self.args[0])


class InvalidInput(ChromaticError, ValueError):
    '''
    Represents malformed or out-of-range arguments (atom indices, vector lengths,
    non-prime moduli, ...).
    '''


class InvalidPartition(InvalidInput):
    pass


class Infeasible(ChromaticError):
    '''
    Raised when no cover by sets of submeasure below the threshold exists.
    The offending atom (1-based) is kept in ``atom`` when known.
    '''

    def __init__(self, message: str, atom: Optional[int] = None) -> None:
        super().__init__(message)
        self.atom = atom


class Degenerate(ChromaticError):
    pass


class Uncolorable(ChromaticError):
    '''
    Represents a graph with at least one loop, which admits no proper coloring.
    '''


class ResourceLimitExceeded(ChromaticError):

    def __init__(self, message: str, limit: Optional[int] = None) -> None:
        super().__init__(message)
        self.limit = limit


class NotSimplicial(ChromaticError):
    pass


class MissingAction(ChromaticError):
    pass
