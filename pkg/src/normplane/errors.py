"""Exception types shared across the package."""


class SpecError(ValueError):
    """Raised when a norm spec, curve file or map file fails validation.

    The ``path`` attribute points at the offending field, e.g.
    ``"spec.vertices[3]"``, so command line users can find the problem.
    """

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class PreconditionError(ValueError):
    """An operation was called outside its mathematical hypotheses."""
