"""Exception hierarchy shared by all grafhen modules."""


class GrafhenError(Exception):
    """Base class for every error raised by this package."""


class NotAMember(GrafhenError):
    """A permutation lies outside the group described by a stabilizer chain."""


class ConstantNotLifted(GrafhenError):
    """A constant word does not project onto the constant it should lift."""


class MemoryBudgetExceeded(GrafhenError):
    """An enumeration would grow past its configured memory cap."""


class BudgetExceeded(GrafhenError):
    """A bounded search ran out of budget before finishing.

    ``partial`` carries whatever was found before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class GenerationFailed(GrafhenError):
    """Random generator tuples never generated the target group."""


class NotACipher(GrafhenError):
    """A word evaluates outside the set of valid ciphers."""


class SearchSpaceTooLarge(GrafhenError):
    """A brute-force search space exceeds its guard."""


class NoKeyFound(GrafhenError):
    """No generator tuple satisfies the published rules."""


class FormatError(GrafhenError, ValueError):
    """A serialized artifact could not be parsed."""


class ConfigError(GrafhenError, ValueError):
    """Scheme parameters are inconsistent or unsupported."""


class MalformedCircuit(GrafhenError, ValueError):
    """A gate list does not describe a well-formed circuit."""
