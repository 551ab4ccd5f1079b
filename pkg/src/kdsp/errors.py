"""Exception types raised across the package."""


class KdspError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(KdspError, ValueError):
    """An operation was called with inputs outside its contract."""


class NonContiguousIntersection(KdspError):
    """A coloured path met a bi-coloured component in more than one stretch.

    This cannot happen on a well-formed shortest graph, so seeing it means the
    graph or the component was corrupted.
    """


class StateBudgetExceeded(KdspError):
    """The product-state search visited more states than allowed."""

    def __init__(self, budget: int):
        super().__init__(f"product search exceeded {budget} states")
        self.budget = budget


class CyclicGraphError(KdspError, ValueError):
    """A digraph expected to be acyclic contains a cycle."""


class DisconnectedPair(KdspError, ValueError):
    def __init__(self, s: int, t: int):
        super().__init__(f"no path between {s} and {t}")
        self.s, self.t = s, t


class EnumerationCapExceeded(KdspError):
    def __init__(self, cap: int):
        super().__init__(f"brute-force enumeration exceeded {cap} visited paths")
        self.cap = cap


class AssemblyMismatch(KdspError):
    """Segment paths could not be stitched into valid request paths."""


class InstanceFormatError(KdspError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
