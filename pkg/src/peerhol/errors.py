"""Exception hierarchy shared by all engine layers.

Script execution wraps any of these into a ScriptError carrying the source
position, so front ends can anchor messages to the offending statement.
"""


class PeerHolError(Exception):
    """Base class for all errors raised by the engine."""


class TermTypeError(PeerHolError):
    """A term does not typecheck, or an instance type is missing/malformed."""


class ParseError(PeerHolError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        if self.line is None:
            return self.message
        return f"{self.message} (line {self.line}, column {self.column})"


class UnknownNameError(PeerHolError):
    """An identifier is unbound, or masked by an unbind."""


class DanglingConstant(PeerHolError):
    """A negative constant shift would leave an index pointing past the stack."""


class GuardMismatch(PeerHolError):
    """A have guard does not equal the theorem's proposition."""


class NotExistential(PeerHolError):
    """obtain was given a theorem whose proposition has no leading exists."""


class NotApplicable(PeerHolError):
    """Application of a value that is neither a function nor a usable theorem."""


class NotAncestor(PeerHolError):
    """constants_between called on contexts without an ancestor relation."""


class DependencyCycle(PeerHolError):
    """Creating this context would make a chronicle depend on itself."""


class UnknownContext(PeerHolError):
    pass


class UnknownParent(PeerHolError):
    pass


class UnknownChronicle(PeerHolError):
    pass


class AmbiguousChronicle(PeerHolError):
    """@name resolves to several chronicles, none owned by the current user."""


class CodecError(PeerHolError):
    """Stored bytes cannot be decoded (corruption or unsupported version)."""


class StorageFailure(PeerHolError):
    pass


class AuthFailure(PeerHolError):
    pass


class KernelLimitError(PeerHolError):
    """Internal safety ceiling hit (normalization step budget)."""


class ScriptError(PeerHolError):
    """Any failure during script execution, tagged with a source position."""

    def __init__(self, message, line=None, column=None, cause=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.cause = cause

    @property
    def error_class(self):
        return type(self.cause).__name__ if self.cause is not None else "ScriptError"

    def __str__(self):
        pos = "" if self.line is None else f" (line {self.line}, column {self.column})"
        return f"{self.message}{pos}"
