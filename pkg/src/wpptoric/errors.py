"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """A precondition on user-supplied data was violated."""


class InternalInconsistencyError(RuntimeError):
    """An identity that must hold by construction failed.

    Raised when an exact computation lands outside its certified range
    (e.g. a provably rational sum comes out irrational, or a provably
    integral exponent comes out fractional).  Always indicates a bug or
    a transcription error, never a valid state.
    """


class InsufficientWindowError(InvalidInputError):
    """A lattice window is too small for the requested comparison."""
