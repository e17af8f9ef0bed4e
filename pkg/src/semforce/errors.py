"""Exception types shared across the package."""


class SemforceError(Exception):
    """Base class for all engine errors."""


class ParseError(SemforceError):
    """Raised on malformed formula text; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FreeVariableError(SemforceError):
    """A closed formula was required but a free variable occurred."""


class PremiseError(SemforceError):
    """A marking rule was applied whose premises do not hold."""


class StateError(SemforceError):
    """A marking-state operation was used out of order."""


class FragmentError(SemforceError):
    """The formula lies outside the decidable fragments and no budget was given."""


class ResourceLimitError(SemforceError):
    """The search exceeded its configured branch limit."""
