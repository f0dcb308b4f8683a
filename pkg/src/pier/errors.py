class PierError(ValueError):
    """Base class for all input and scoring errors raised by this package."""


class MarkupError(PierError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class AnnotationError(PierError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class CorpusError(PierError):
    pass


class UndefinedMetricError(PierError):
    """Raised when a rate would divide by zero (empty reference or empty interest set)."""


class ConfigError(PierError):
    pass
