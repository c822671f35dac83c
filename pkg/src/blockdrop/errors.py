"""Exception types shared across the package.

Action errors are kept distinct so harnesses can count each kind of
invalid intervention separately.
"""


class BlockdropError(Exception):
    """Base class for all package errors."""


class UnknownGame(BlockdropError):
    pass


class SceneInvalid(BlockdropError):
    """Scene file violates an invariant; message names the violation."""


class UnknownBody(BlockdropError):
    pass


class NotEliminable(BlockdropError):
    """Target exists but is black/blue/red."""


class AlreadyEliminated(BlockdropError):
    pass


class EpisodeOver(BlockdropError):
    """Stepping or acting on a world that is no longer running."""


class MalformedResponse(BlockdropError):
    """An agent returned something outside its declared contract."""


class DigestMismatch(BlockdropError):
    def __init__(self, step: int, expected: str, got: str):
        super().__init__(f"replay digest mismatch at step {step}: expected {expected}, got {got}")
        self.step = step
        self.expected = expected
        self.got = got


class NoFailures(BlockdropError):
    """Failure attribution is undefined when every game was solved."""
