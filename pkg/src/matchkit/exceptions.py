"""Exception types shared across matchkit."""


class InstanceError(ValueError):
    """Raised when an instance, solution or context is malformed or invalid.

    The ``code`` attribute carries a short machine-readable reason so callers
    (the CLI in particular) can branch without parsing the message.
    """

    def __init__(self, message: str, code: str = "invalid"):
        super().__init__(message)
        self.code = code


class ForcedSetError(ValueError):
    """Raised when a forced edge set is not itself a matching."""


class SizeLimitError(RuntimeError):
    """Raised when a brute-force oracle is asked to handle a too-large instance."""


class VerificationError(ValueError):
    """Raised when a translated or reported certificate fails re-verification."""
