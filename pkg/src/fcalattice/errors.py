"""Exception hierarchy shared by every module of the package."""


class FCAError(Exception):
    """Base class for all errors raised by fcalattice."""


class ParseError(FCAError, ValueError):
    """Input text could not be turned into a formal context."""


class DuplicateObject(ParseError):
    def __init__(self, name):
        super().__init__(f"duplicate object name {name!r}")
        self.name = name


class MalformedLine(ParseError):
    def __init__(self, line, reason="malformed line"):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class BadMagic(ParseError):
    def __init__(self, header):
        super().__init__(f"expected 'B' header, got {header!r}")
        self.header = header


class DimensionMismatch(ParseError):
    pass


class BadId(FCAError, IndexError):
    pass


class CalledOnTop(FCAError):
    """upper_neighbors was asked to expand the greatest concept."""


class TooLarge(FCAError):
    pass


class DanglingEdge(FCAError, KeyError):
    pass
