"""Exception types. Everything a user can trigger derives from QuiverError."""

from __future__ import annotations


class QuiverError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class UnknownVertex(QuiverError):
    pass


class DuplicateVertexId(QuiverError):
    pass


class DuplicateArrowId(QuiverError):
    pass


class Unsupported(QuiverError):
    pass


class ZeroVector(QuiverError):
    pass


class InvalidStability(QuiverError):
    pass


class InvalidLocalQuiver(QuiverError):
    pass


class CapExceeded(QuiverError):
    pass


class NotAnExtension(QuiverError):
    pass


class InvalidParams(QuiverError):
    pass


class TooLarge(QuiverError):
    pass


class NotAllOnes(QuiverError):
    pass


class ShapeMismatch(QuiverError):
    pass


class NotUpwardClosed(QuiverError):
    pass


class NegativeCycle(QuiverError):
    pass


class NoOutgoingPath(QuiverError):
    pass


class PreconditionViolated(QuiverError):
    pass
