"""Exception hierarchy shared across the package.

Every error carries a machine-readable ``code`` string; the HTTP layer maps
codes to status codes in one table (see api.ERROR_STATUS).
"""


class DiymkgError(Exception):
    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- graph store ---

class NotFound(DiymkgError):
    code = "NotFound"


class DuplicateWord(DiymkgError):
    code = "DuplicateWord"


class EmptyWord(DiymkgError):
    code = "EmptyWord"


class InvalidLanguage(DiymkgError):
    code = "InvalidLanguage"


class SelfLoop(DiymkgError):
    code = "SelfLoop"


class DuplicateEdge(DiymkgError):
    code = "DuplicateEdge"


class TooFewNodes(DiymkgError):
    code = "TooFewNodes"


class IoError(DiymkgError):
    code = "IoError"


class ParseError(DiymkgError):
    code = "ParseError"


class SchemaVersionMismatch(DiymkgError):
    code = "SchemaVersionMismatch"


class IntegrityError(DiymkgError):
    code = "IntegrityError"


class DuplicateSnapshotName(DiymkgError):
    code = "DuplicateSnapshotName"


# --- LLM gateway ---

class TransportError(DiymkgError):
    code = "TransportError"


class AuthError(DiymkgError):
    code = "AuthError"


class RequestTimeout(DiymkgError):
    code = "TimeoutError"


class TemplateError(DiymkgError):
    code = "TemplateError"

    def __init__(self, message: str = "", missing: list[str] | None = None):
        super().__init__(message)
        self.missing = missing or []


class MalformedOutput(DiymkgError):
    code = "MalformedOutput"


# --- expansion ---

class BatchRejected(DiymkgError):
    code = "BatchRejected"


# --- quiz ---

class EmptyGraph(DiymkgError):
    code = "EmptyGraph"


class GenerationFailed(DiymkgError):
    code = "GenerationFailed"


class LengthMismatch(DiymkgError):
    code = "LengthMismatch"


class IndexOutOfRange(DiymkgError):
    code = "IndexOutOfRange"


class NotGraded(DiymkgError):
    code = "NotGraded"


# --- service ---

class BindError(DiymkgError):
    code = "BindError"


class ConfigError(DiymkgError):
    code = "ConfigError"
