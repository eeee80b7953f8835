"""Shared exception types.

The command-line surface maps these onto exit codes: validation failures
exit 2, illegal moves / unmet preconditions exit 3, malformed input 4.
"""


class IllegalMoveError(ValueError):
    """A move whose precondition fails (it would not be a legal surgery)."""


class DiagramStructureError(ValueError):
    """An event list that is not structurally well-formed."""


class InvalidSurfaceError(ValueError):
    """Surface data violating its defining invariants (intersection form,
    orientability, or the vanishing condition behind the invariant)."""
