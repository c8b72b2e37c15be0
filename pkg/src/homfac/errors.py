"""Exception hierarchy shared by every module.

The CLI maps these onto its exit codes, so library code raises the most
specific class that applies.
"""

from __future__ import annotations


class HomfacError(Exception):
    """Base class for all library errors."""


class InvalidParameters(HomfacError, ValueError):
    """Input parameters violate a documented precondition."""


class CapExceeded(HomfacError, RuntimeError):
    """A computation would exceed a configured size cap."""


class ParseError(HomfacError, ValueError):
    """A file or specification string could not be parsed."""


class VerificationFailed(HomfacError):
    """A structural check that must hold on constructed objects failed."""
