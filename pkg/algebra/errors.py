# algebra/errors.py
from typing import List, Optional, Tuple


class TurancertError(Exception):
    """Base class for every error raised by the certification toolkit."""


class DomainError(TurancertError, ValueError):
    pass


class RootAtEndpointError(DomainError):
    def __init__(self, endpoint):
        self.endpoint = endpoint
        super().__init__(f"interval endpoint {endpoint} is a root; perturb the endpoint")


class ZeroTermError(DomainError, ZeroDivisionError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"term a_{index} is zero")


class ParseError(TurancertError):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SpecValidationError(TurancertError):
    def __init__(self, issues: List[Tuple[str, str]]):
        self.issues = list(issues)
        lines = "; ".join(f"{path}: {msg}" for path, msg in self.issues)
        super().__init__(f"invalid spec: {lines}")


class SingularRecurrenceError(TurancertError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"singular recurrence point: leading coefficient vanishes at n={index}")


class EventuallyNonpositiveError(TurancertError):
    pass


class InconclusiveError(TurancertError):
    pass


class UnsupportedOrderError(TurancertError):
    pass


class StageFailure(TurancertError):
    def __init__(self, stage: str, detail: str):
        self.stage = stage
        self.detail = detail
        super().__init__(f"{stage}: {detail}")


class CriterionFailure(StageFailure):
    def __init__(self, form: str, detail: str):
        self.form = form
        super().__init__("criterion", f"{form}: {detail}")


class CertificateMismatch(TurancertError):
    pass


class OeisError(TurancertError):
    pass


class InvalidOeisIdError(OeisError, ValueError):
    pass


class NetworkUnavailableError(OeisError):
    pass
