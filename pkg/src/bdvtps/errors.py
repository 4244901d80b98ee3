"""Exception hierarchy shared by every protocol module."""

from __future__ import annotations


class SchemeError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(SchemeError, ValueError):
    """Invalid parameters or malformed inputs."""


class SuiteMismatch(ParameterError):
    """Two group elements come from different pairing suites."""


class CheckFailed(SchemeError):
    """A protocol check rejected data sent by another party.

    ``culprit`` names the party index (or role) that produced the data.
    """

    def __init__(self, check: str, culprit, message: str = ""):
        self.check = check
        self.culprit = culprit
        super().__init__(message or f"{check} failed for {culprit}")


class SubshareRejected(CheckFailed):
    pass


class WarrantRejected(CheckFailed):
    pass


class PartialRejected(CheckFailed):
    pass
