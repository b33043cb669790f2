"""Exception hierarchy shared by the toolkit."""


class FreeEmbedError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(FreeEmbedError, ValueError):
    """Malformed input: overlapping blocks, unsorted ground sets, bad words."""


class DomainError(FreeEmbedError, ValueError):
    """Input is well formed but outside the operation's domain."""


class SizeLimitError(FreeEmbedError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap} (set FREEEMBED_MAX_K to override)")


class MixedBlockError(FreeEmbedError):
    """A block mixes positions from different families where only pure blocks are supported."""


class StructureViolation(FreeEmbedError):
    """A structural identity that must hold did not (would falsify a claimed identity)."""


class ConfigError(FreeEmbedError, ValueError):
    """Inconsistent simulation or CLI configuration."""


class SimulationError(FreeEmbedError):
    """Numerical failure inside a Monte Carlo replicate."""
