"""Exception types shared across the package."""


class NecklaceError(Exception):
    """Base class for all library errors."""


class DivisibilityError(NecklaceError):
    """Bead counts are not divisible as required by exact mode."""


class EmptyInputError(NecklaceError):
    """A necklace needs at least one bead."""


class UnassignedBeadError(NecklaceError):
    """Operation requires every bead to have an owner."""


class NotTwoColorsError(NecklaceError):
    """Operation is defined for two-color necklaces only."""


class QuotaMismatchError(NecklaceError):
    """Subsequence color counts do not match the agents' quotas."""


class OutOfRangeError(NecklaceError):
    """A bead or boundary position is outside the necklace."""


class DirtyStateError(NecklaceError):
    """Structure-preserving updates are disabled until a full re-split."""


class NotPeelableError(NecklaceError):
    """The allocation does not have the laminar block structure."""


class ZeroBatchError(NecklaceError):
    """The batch leaves every agent's bead counts unchanged."""


class ColorMismatchError(NecklaceError):
    """Batch updates must touch beads of a single color."""


class BatchCountError(NecklaceError):
    """Insertions and deletions must move a multiple of k beads."""


class NotDenseError(NecklaceError):
    """Necklace is not in the one-bead-per-agent-per-color regime."""


class PopulationTooSmallError(NecklaceError):
    """Requested sample exceeds the live population."""


class IndexDesyncError(NecklaceError):
    """Order index and necklace disagree on size."""


class TooLargeError(NecklaceError):
    """Instance exceeds the exhaustive oracle's size limit."""


class InfeasibleError(NecklaceError):
    """No feasible flow exists (should not occur on balanced trees)."""


class ScriptParseError(NecklaceError):
    """A necklace or script file could not be parsed."""


class AlgorithmMismatchError(NecklaceError):
    """Command is not supported by the selected algorithm family."""
