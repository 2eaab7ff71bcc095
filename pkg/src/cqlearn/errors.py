"""Exception hierarchy shared by all modules."""


class CQLearnError(Exception):
    """Base class for every structured error raised by the package."""


class DimensionMismatch(CQLearnError, ValueError):
    def __init__(self, expected: int, got: int, what: str = "vector"):
        super().__init__(f"{what} has dimension {got}, expected {expected}")
        self.expected = expected
        self.got = got


class DegeneratePool(CQLearnError, ValueError):
    """Every point of the pool evaluates to zero under the concept."""


class Inconsistent(CQLearnError):
    """A transcript (or labeled sample) admits no consistent half space.

    With a simulated annotator this means the oracle or the transcript is broken.
    """


class UnknownPoint(CQLearnError, KeyError):
    def __init__(self, point_id):
        super().__init__(f"unknown point id {point_id!r}")
        self.point_id = point_id


class GenerationFailed(CQLearnError):
    """A rejection sampler ran out of budget."""


class NonTermination(CQLearnError):
    """The boosting loop rejected too many weak hypotheses in a row."""


class ParseError(CQLearnError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message
