"""
Exception hierarchy for the workbench
Every error raised by the core modules derives from WorkbenchException
"""
from typing import Any, Optional


class WorkbenchException(Exception):
    """Base exception carrying an optional witness"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


# Lattice ingestion
class NotALattice(WorkbenchException):
    """Some pair lacks a unique least upper bound or greatest lower bound"""
    pass


class NoBounds(WorkbenchException):
    pass


class CycleInCovers(WorkbenchException):
    pass


class TooLarge(WorkbenchException):
    """Carrier beyond the configured size gate"""
    pass


# Frames and algebras
class FrameInvalid(WorkbenchException):
    pass


class NotAbelian(WorkbenchException):
    pass


class ClosureFailure(WorkbenchException):
    """A structure violates the closure a theorem guarantees"""
    pass


class MismatchFound(WorkbenchException):
    """Two computations that must agree did not"""
    pass


# Morphisms
class NotModular(WorkbenchException):
    pass


class NotCompleteSublattice(WorkbenchException):
    pass


class ConditionsFailed(WorkbenchException):
    pass
