"""Exception types shared across the package."""


class MotifEmbedError(Exception):
    """Base class for errors raised by this package."""


class EdgeListParseError(MotifEmbedError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DataError(MotifEmbedError):
    """Input data is structurally unusable (empty graph, missing file, id mismatch)."""


class TrainingDiverged(MotifEmbedError):
    """Training produced a non-finite loss; carries the 1-based iteration index."""

    def __init__(self, iteration: int, detail: str = ""):
        msg = f"non-finite loss at iteration {iteration}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.iteration = iteration
