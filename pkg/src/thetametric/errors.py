"""Exception hierarchy shared by all modules."""


class ThetaMetricError(Exception):
    """Base class for every error raised by the package."""


class InputError(ThetaMetricError, ValueError):
    """Malformed or out-of-domain input (CLI exit code 2)."""


class DomainError(InputError):
    """Arguments outside the domain of the inverse action (s > r)."""


class ImageError(ThetaMetricError):
    """A value that must lie in the image of an action does not."""


class StrictRangeError(ThetaMetricError):
    """No inverse value exists inside ``[0, r]`` for a strict-mode solve."""

    def __init__(self, action_name, r, s):
        super().__init__(
            f"action {action_name!r}: no t in [0, {r!r}] solves theta(t, {s!r}) = {r!r}"
        )
        self.action_name = action_name
        self.r = r
        self.s = s


class PreconditionError(ThetaMetricError):
    """A checked hypothesis of an operation does not hold; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvariantError(ThetaMetricError):
    """A property that should follow from verified hypotheses failed."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
