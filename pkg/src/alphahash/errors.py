"""Exception types shared across the package."""


class AlphaHashError(Exception):
    """Base class for all package errors."""


class PositionInvalid(AlphaHashError):
    """A position does not denote a node of the term it was applied to."""

    def __init__(self, position, reason=""):
        self.position = position
        shown = position if isinstance(position, str) else format_steps(position)
        msg = "invalid position %r" % (shown,)
        if reason:
            msg += ": " + reason
        super().__init__(msg)


class NotLocallyClosed(AlphaHashError):
    """Lifting a subterm out of its context would leave a dangling variable."""


class NotClosed(AlphaHashError):
    """An operation required a (g-)closed term but got an open one."""


class IndexOutOfRange(AlphaHashError):
    """A free variable index exceeded the substitution environment."""


class TermTooLarge(AlphaHashError):
    """Input exceeds a size bound of an exhaustive oracle."""


class ModeMismatch(AlphaHashError):
    """Hash values from different hash back-ends (or tables) were mixed."""


class NoTermOfSize(AlphaHashError):
    """No closed term of the requested size exists."""


class TermSyntaxError(AlphaHashError):
    """Concrete-syntax parse failure, with 1-based source coordinates."""

    def __init__(self, line, column, expected, found=""):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        self.found = found
        what = " or ".join(self.expected)
        msg = "%d:%d: expected %s" % (line, column, what)
        if found:
            msg += ", found %r" % (found,)
        super().__init__(msg)


class TrailingInput(TermSyntaxError):
    """Input continued after a complete term."""


class IndexOverflow(TermSyntaxError):
    """A variable index literal exceeded 2**63 - 1."""


def format_steps(position):
    """Render a position as its concrete syntax ('.' for the root)."""
    if not position:
        return "."
    return "".join(position)
