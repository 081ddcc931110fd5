"""Exception hierarchy shared by every module of the engine."""


class GenpriorError(Exception):
    """Base class for all engine errors."""


class ParseError(GenpriorError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += " (expected one of: %s)" % ", ".join(sorted(self.expected))
        super().__init__("%s at position %d" % (detail, position))


class ReservedNameError(GenpriorError, NameError):
    """An atom or binding name collides with a reserved word."""


class InvalidPermutation(GenpriorError):
    pass


class DuplicateAtoms(GenpriorError):
    pass


class AtomCollision(GenpriorError):
    pass


class IncompleteAssignment(GenpriorError):
    pass


class AtomOutsideUniverse(GenpriorError):
    pass


class ResourceLimitError(GenpriorError):
    """A counting backend would exceed its configured size limit."""


class UniverseTooLarge(ResourceLimitError):
    pass


class NodeLimitExceeded(ResourceLimitError):
    pass


class ConditionOnContradiction(GenpriorError):
    """The conditioning formula has no models, so the quotient is undefined."""


class HarnessError(GenpriorError):
    pass
