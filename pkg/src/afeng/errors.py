"""Error types shared across the engine.

Everything deriving from AfengError is a data error: the CLI reports it
with a message and exit code 2, never a stack trace.
"""


class AfengError(Exception):
    """Base class for all engine data errors."""


# -- corpus ---------------------------------------------------------------

class CorpusError(AfengError):
    pass


class UnknownLabel(CorpusError):
    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: unknown emotion label {value!r}")


class EmptyText(CorpusError):
    def __init__(self, row: int | None = None):
        self.row = row
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}text is empty")


class TooLong(CorpusError):
    def __init__(self, length: int, limit: int):
        self.length = length
        self.limit = limit
        super().__init__(f"text of {length} characters exceeds limit {limit}")


class MalformedRow(CorpusError):
    def __init__(self, row: int, detail: str = ""):
        self.row = row
        suffix = f" ({detail})" if detail else ""
        super().__init__(f"row {row}: malformed row{suffix}")


class MissingClass(CorpusError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"no instances for emotion {label!s}")


class InvalidFraction(CorpusError):
    pass


# -- embeddings -----------------------------------------------------------

class EmbeddingError(AfengError):
    pass


class DimensionMismatch(EmbeddingError):
    def __init__(self, line: int, found: int, expected: int):
        self.line = line
        super().__init__(
            f"line {line}: expected {expected} vector values, found {found}"
        )


class NonFinite(EmbeddingError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: vector contains NaN or Inf")


# -- neural ---------------------------------------------------------------

class ShapeMismatch(AfengError):
    pass


class CheckpointError(AfengError):
    pass


class BadMagic(CheckpointError):
    pass


class VersionMismatch(CheckpointError):
    pass


class ShapeHeaderMismatch(CheckpointError):
    pass


# -- baselines / eval -----------------------------------------------------

class NotFitted(AfengError):
    pass


class LengthMismatch(AfengError):
    pass


class DegenerateInput(AfengError):
    pass


# -- affect ---------------------------------------------------------------

class InvalidDistribution(AfengError):
    pass


# -- memory ---------------------------------------------------------------

class StoreError(AfengError):
    """Base for interaction-store errors."""


class IoFailure(StoreError):
    pass


class StorageFull(StoreError):
    pass


class DuplicateId(StoreError):
    def __init__(self, rec_id: int, last_id: int):
        self.rec_id = rec_id
        super().__init__(f"record id {rec_id} is not greater than stored id {last_id}")


# -- runtime --------------------------------------------------------------

class ModelNotLoaded(AfengError):
    pass
