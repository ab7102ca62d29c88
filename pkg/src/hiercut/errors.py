"""Exception types shared across the library.

Everything raised on bad input derives from :class:`HiercutError`, so the
CLI can catch one base class and turn it into a nonzero exit code.
"""

from __future__ import annotations


class HiercutError(Exception):
    """Base class for all library errors."""


class ParseError(HiercutError):
    """Malformed dataset file. Carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NodeLookupError(HiercutError):
    """A node id or label does not exist in the graph."""


class EdgeLookupError(HiercutError):
    """An edge is absent (never existed, or already removed)."""


class ContractViolation(HiercutError):
    """Caller broke an API precondition (wrong criterion kind, stale table, ...)."""


class ConfigError(HiercutError):
    """Invalid run configuration (k_max out of range, empty criteria, ...)."""


class UnreachableCutError(HiercutError):
    """Requested community count was never reached by the removal log."""


class CoverageError(HiercutError):
    """A partition does not cover exactly the expected node set."""


class EmptyPruneError(HiercutError):
    """Pruning would delete every node. Names the closest threshold that survives."""

    def __init__(self, threshold: int, first_surviving: int):
        super().__init__(
            f"pruning at threshold {threshold} empties the graph; "
            f"highest surviving threshold is {first_surviving}"
        )
        self.threshold = threshold
        self.first_surviving = first_surviving


class DegenerateInputError(HiercutError):
    """Statistic undefined for this input (zero variance, all-zero differences)."""


class UndefinedInputError(HiercutError):
    """Quantity undefined for this input (e.g. modularity of an edgeless graph)."""


class InsufficientDataError(HiercutError):
    """Too few usable observations for the requested test."""


class DependencyError(HiercutError):
    """A command needs outputs of an earlier command that are missing."""
