"""Shared exception types."""


class GraphError(ValueError):
    """Malformed graph construction (bad endpoints, loops, duplicates)."""


class DisconnectedGraphError(GraphError):
    """Operation requires a connected graph."""


class FormatError(ValueError):
    """Malformed .gr / .td / solution file; message carries a line number."""


class InvalidSpanningTreeError(ValueError):
    """Edge set is not a spanning tree of the host graph."""


class InvalidDecompositionError(ValueError):
    """Tree decomposition fails an axiom or a nice-form rule."""


class InvalidCertificateError(ValueError):
    """Witness certificate does not satisfy its instance."""


class BudgetExceededError(RuntimeError):
    """Enumeration budget ran out.

    emitted holds the number of spanning trees yielded before the cap hit.
    """

    def __init__(self, message: str, emitted: int = 0):
        super().__init__(message)
        self.emitted = emitted
