"""Exception types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """Base class for rejected inputs; the CLI maps these to exit code 3."""


class ParseError(InputError):
    """Malformed graph or precoloring file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class EmbeddingError(InputError):
    """Rotation system fails an embedding invariant.

    Raised for self-loops, repeated neighbors, asymmetric rotations,
    disconnected input, or an Euler-formula failure (positive genus).
    """


class UnknownVertexError(InputError):
    """A vertex id outside 0..n-1 was supplied."""


class SubgraphError(InputError):
    """A subgraph does not sit inside its host graph."""


class ColorRangeError(InputError):
    """A color outside the palette 1..k was supplied."""


class ImproperColoringError(InputError):
    """An operation requiring a proper partial coloring received an improper one."""


class PreconditionError(InputError):
    """A documented operation precondition was violated (e.g. a list too small)."""


class ConfigurationOverlapError(InputError):
    """Precolored cliques are closer than distance 3, so their closed
    neighborhoods may overlap; the instance is rejected."""


class SchemeMismatchError(InputError):
    """The precolored subgraph does not satisfy the discharging scheme's hypothesis."""


class BudgetExhaustedError(RuntimeError):
    """A search exceeded its node budget (an engineering verdict, not a mathematical one)."""


class InternalInvariantError(AssertionError):
    """A theorem-backed internal guarantee failed; this indicates a bug,
    never an input problem."""
