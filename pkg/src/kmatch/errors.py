"""Exception hierarchy shared by every kmatch module."""


class KMatchError(Exception):
    """Base class for all kmatch errors."""


class GraphError(KMatchError, ValueError):
    """Malformed graph, unknown builder, or an illegal surgery."""


class BudgetExceeded(KMatchError):
    """An enumeration would visit more candidate subsets than allowed."""

    def __init__(self, what: str, required: int, limit: int, visited: int | None = None):
        self.what = what
        self.required = required
        self.limit = limit
        self.visited = visited
        msg = f"{what}: budget exceeded (limit {limit}, required up to {required}"
        if visited is not None:
            msg += f", visited {visited} before stopping"
        super().__init__(msg + ")")


class ComplexError(KMatchError, ValueError):
    """Invalid simplicial complex data (closure failure, label clash)."""


class MatchingError(KMatchError, ValueError):
    """A face pairing that is not a partial matching of the face poset."""


class AcyclicityError(MatchingError):
    """An operation that needs an acyclic matching received a cyclic one."""


class StrataError(KMatchError, ValueError):
    """Strata handed to patchwork do not come from an order-preserving map."""


class ScriptError(KMatchError, ValueError):
    """A clawed build script references something that is not a leaf."""
