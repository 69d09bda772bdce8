from typing import Any


EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


class WorkbenchError(Exception):
    exit_code: int = EXIT_USAGE

    def __init__(self, detail: str, witness: Any = None) -> None:
        super().__init__(detail)
        self.detail = detail
        self.witness = witness

    def payload(self) -> dict[str, Any]:
        body: dict[str, Any] = {"error": type(self).__name__, "detail": self.detail}
        if self.witness is not None:
            body["witness"] = self.witness
        return body


class InputError(WorkbenchError):
    pass


class StructuralError(InputError):
    def __init__(self, detail: str, problems: list[str] | None = None) -> None:
        super().__init__(detail, witness=problems or None)
        self.problems = problems or []


class CatalogFormatError(InputError):
    def __init__(self, detail: str, line: int, column: int | None = None) -> None:
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {detail}", witness={"line": line, "column": column})
        self.line = line
        self.column = column


class PreconditionError(WorkbenchError):
    pass


class NotAHomomorphismError(PreconditionError):
    pass


class NotACongruenceError(PreconditionError):
    pass


class NotDownDirectedError(PreconditionError):
    pass


class NotCofinalError(PreconditionError):
    pass


class InvalidSystemError(PreconditionError):
    pass


class SizeBoundExceededError(PreconditionError):
    pass


class TheoremViolation(WorkbenchError):
    exit_code = EXIT_VIOLATION

    def __init__(self, claim: str, witness: Any = None) -> None:
        super().__init__(f"{claim} failed", witness=witness)
        self.claim = claim
