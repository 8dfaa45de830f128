"""Exception types shared across the package."""


class RdgaiError(Exception):
    """Base class for all errors raised by this package."""


class DocumentParseError(RdgaiError):
    """The XML input could not be parsed at all."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DocumentValidationError(RdgaiError):
    """The document is well-formed XML but violates a model invariant."""


class PromptError(RdgaiError):
    """A prompt could not be constructed from the document."""


class ResponseFormatError(RdgaiError):
    """No usable JSON array could be found in a model response."""


class GatewayError(RdgaiError):
    """Base class for LLM gateway failures."""


class PermanentGatewayError(GatewayError):
    """A request that will not succeed on retry (bad key, bad request...)."""


class TransientGatewayError(GatewayError):
    """Retries were exhausted on a retriable failure (429, 5xx, timeout)."""


class TableFormatError(RdgaiError):
    """The tabular import file does not match the expected schema."""
