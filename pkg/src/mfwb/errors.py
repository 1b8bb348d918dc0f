"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: validation failures exit 1,
computation failures exit 2, parse and I/O failures exit 3.
"""
from __future__ import annotations


class MFError(Exception):
    """Base class for all library errors."""

    kind = "error"
    exit_code = 2

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": str(self)}


class ContextError(MFError, ValueError):
    """Operands live in different variable contexts or have incompatible shapes."""

    kind = "context"


class ValidationError(MFError, ValueError):
    """An input object violates its defining identity (e.g. phi*psi != w*I)."""

    kind = "validation"
    exit_code = 1

    def __init__(self, message: str, *, where: str | None = None, entry=None):
        super().__init__(message)
        self.where = where
        self.entry = entry

    def to_dict(self) -> dict:
        d = super().to_dict()
        if self.where is not None:
            d["where"] = self.where
        if self.entry is not None:
            d["entry"] = list(self.entry)
        return d


class ComputationError(MFError, RuntimeError):
    """A computation could not be completed (caps exceeded, no stabilization, ...)."""

    kind = "computation"
    exit_code = 2


class ParseError(MFError, ValueError):
    """Malformed polynomial expression; carries the 0-based source position."""

    kind = "parse"
    exit_code = 3

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["position"] = self.position
        return d


class InputError(MFError, OSError):
    """A problem file could not be read or does not follow the schema."""

    kind = "input"
    exit_code = 3
