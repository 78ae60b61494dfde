"""Exception types shared across the package.

Structural problems raise; semantic model violations are collected in
validation reports instead (see orir.ir.validator).
"""

from __future__ import annotations


class OrirError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(OrirError):
    """An IR document has the wrong shape at a known location."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class TokenError(OrirError):
    """An index token is neither a symbol nor ``Name[0]``/``Name[-1]``."""


class CsvError(OrirError):
    """A CSV table is malformed (e.g. ragged row)."""

    def __init__(self, file: str, line: int, message: str):
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line


class MissingTable(OrirError):
    pass


class MissingColumn(OrirError):
    pass


class DuplicateElement(OrirError):
    def __init__(self, set_name: str, element: str):
        super().__init__(f"set {set_name!r}: duplicate element {element!r}")
        self.set_name = set_name
        self.element = element


class DuplicateKey(OrirError):
    pass


class UnknownIndexElement(OrirError):
    def __init__(self, param: str, key: tuple):
        super().__init__(f"parameter {param!r}: key {key!r} has a component "
                         "that is not a member of its set")
        self.param = param
        self.key = key


class CellParseError(OrirError):
    """A CSV cell could not be parsed as the declared numeric type."""


class ScalarCardinality(OrirError):
    """A scalar parameter table does not contain exactly one row."""


class ArityError(OrirError):
    pass


class UnboundSymbol(OrirError):
    pass


class EmptyOrderedSet(OrirError):
    pass


class CoefficientError(OrirError):
    """A non-finite coefficient would multiply an existing variable."""


class LagUnderflow(OrirError):
    """A lagged index fell before the first element of its ordered set."""


class NonlinearError(OrirError):
    pass


class InfRhsError(OrirError):
    """An infinite right-hand side on an equality or >= row."""


class NameOverflow(OrirError):
    """A sanitized LP name exceeds 255 characters."""


class CompileError(OrirError):
    """Wraps a lower-stage failure with the IR path and binding context."""

    def __init__(self, path: str, binding: dict | None, cause: Exception):
        ctx = f" at binding {binding!r}" if binding else ""
        super().__init__(f"{path}{ctx}: {cause}")
        self.path = path
        self.binding = binding
        self.cause = cause


class ValidationFailed(OrirError):
    """A model failed re-validation after a structural patch."""

    def __init__(self, report):
        lines = "; ".join(f"{e.path}: {e.message}" for e in report.errors)
        super().__init__(f"validation failed: {lines}")
        self.report = report


class UnknownParam(OrirError):
    pass


class NoMatch(OrirError):
    """An exact-key scale patch matched no row."""


class UnknownConstraint(OrirError):
    pass


class DuplicateConstraint(OrirError):
    pass


class UnknownVariable(OrirError):
    pass


class ConfigError(OrirError):
    """An instance-generation config is out of range."""


class NumericalBreakdown(OrirError):
    """No acceptable pivot remains; the solve cannot continue."""
