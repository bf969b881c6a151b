"""Exception hierarchy for localpriv.

Every error raised on bad input derives from :class:`LocalPrivError`, which
is itself a ``ValueError`` so callers that only care about "bad input" can
catch that.
"""


class LocalPrivError(ValueError):
    """Base class for all input/validation errors."""


class ShapeMismatch(LocalPrivError):
    pass


class NegativeEntry(LocalPrivError):
    pass


class RowSumError(LocalPrivError):
    pass


class AlphabetMismatch(LocalPrivError):
    pass


class ZeroMarginal(LocalPrivError):
    pass


class DegenerateAlphabet(LocalPrivError):
    pass


class EmptyPairs(LocalPrivError):
    pass


class UnknownSymbol(LocalPrivError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class AlphabetTooLarge(LocalPrivError):
    pass


class NotAGrid(LocalPrivError):
    pass


class NoEmbedding(LocalPrivError):
    pass


class ZeroDistance(LocalPrivError):
    pass


class EmptyBatch(LocalPrivError):
    pass


class EmptyDataset(LocalPrivError):
    pass


class MissingInput(LocalPrivError):
    pass


class ParseError(LocalPrivError):
    """A file could not be parsed; carries the position when known."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
                if column is not None:
                    where += f":{column}"
            where += ": "
        super().__init__(where + message)


class NoConvergence(RuntimeError):
    """An iterative solver hit its iteration cap.

    ``best`` holds the best iterate found so far (usually a Channel) so the
    caller can still inspect it.
    """

    def __init__(self, message, best=None, where=None):
        super().__init__(message)
        self.best = best
        self.where = where
