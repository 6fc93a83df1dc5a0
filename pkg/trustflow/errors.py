"""
Exception hierarchy. Every error carries a machine-readable code; the CLI maps
InputError to exit 1 and everything else to exit 2.
"""


class TrustflowError(Exception):
    code: str = "error"

    def __init__(self, code: str, detail: str):
        super().__init__(f"[{code}] {detail}")
        self.code = code
        self.detail = detail


class InputError(TrustflowError):
    """Problem with user-supplied documents or options."""


class BundleError(InputError):
    def __init__(self, code: str, detail: str, line: int | None = None, column: int | None = None):
        if line is not None:
            detail = f"{detail} (line {line}, column {column})"
        super().__init__(code, detail)
        self.line = line
        self.column = column


class CatalogError(InputError):
    pass


class DocumentError(InputError):
    """Malformed exchange, flow or report document."""


class ConfigError(InputError):
    pass


class AnalysisError(TrustflowError):
    """Internal inconsistency between analysis phases."""


class SliceError(AnalysisError):
    pass


class FlowGraphError(AnalysisError):
    pass
