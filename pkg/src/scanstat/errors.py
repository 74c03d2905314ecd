"""Exception hierarchy shared by every module.

Each class carries a ``category`` used by the CLI to pick an exit code
(``"io"`` -> 1, ``"parse"`` -> 2, ``"domain"`` -> 3).
"""


class ScanStatError(ValueError):
    category = "domain"

    @property
    def name(self) -> str:
        return type(self).__name__


class EmptyInput(ScanStatError):
    category = "parse"


class NonFiniteValue(ScanStatError):
    category = "parse"


class ParseError(ScanStatError):
    category = "parse"


class OutOfUnitInterval(ScanStatError):
    pass


class DomainError(ScanStatError):
    pass


class DegenerateLength(ScanStatError):
    pass


class DegenerateSpan(ScanStatError):
    pass


class EmptyWindow(ScanStatError):
    pass


class AllDegenerate(ScanStatError):
    pass


class IncompatibleLaw(ScanStatError):
    pass


class DigestMismatch(ScanStatError):
    """A stored experiment record disagrees with a fresh run of the same config."""
