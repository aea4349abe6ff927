"""Exception types shared across modules."""


class Undecided(RuntimeError):
    """A decision procedure hit its declared bound without an answer."""


class Refusal(RuntimeError):
    """The requested operation is not supported for this theory or input."""
