"""Exception types shared across the package."""


class SdnError(Exception):
    """Base class for all library errors."""


class CorruptSequenceError(SdnError):
    """A packed sequence does not decode as a run of valid codewords."""


class ContainerFullError(SdnError):
    """An append would exceed the fixed bit capacity of a sequence."""


class FormatError(SdnError):
    """A container or text file does not match its documented format."""


class TreeInputError(SdnError):
    """The given edges/parenthesis string do not describe a tree."""


class IteratorExhaustedError(SdnError):
    """next() was called on a finished height iterator."""
