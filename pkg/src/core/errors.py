from __future__ import annotations
from typing import Optional


class SatSumError(Exception):
    """Base error for the counting pipeline; `stage` names where it was raised."""

    stage = "pipeline"

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage


# --- parse ---
class CnfParseError(SatSumError):
    stage = "parse"


class MissingHeader(CnfParseError):
    pass


class ClauseWidthUnsupported(CnfParseError):
    pass


class VariableOutOfRange(CnfParseError):
    pass


class ClauseCountMismatch(CnfParseError):
    pass


class MixedWidths(CnfParseError):
    pass


# --- algebra ---
class AlreadyRelaxed(SatSumError):
    stage = "encode"


class DimensionMismatch(SatSumError):
    stage = "encode"


# --- oracle ---
class TooLarge(SatSumError):
    stage = "oracle"


class NegativeExponent(SatSumError):
    stage = "oracle"


class NotMultilinear(SatSumError):
    stage = "oracle"


# --- spectrum ---
class DegenerateSpectrum(SatSumError):
    stage = "spectrum"


class IntegerizationUnsafe(SatSumError):
    stage = "integerize"

    def __init__(self, message: str, signs=None):
        super().__init__(message)
        self.signs = signs


# --- counter ---
class ResidualTooLarge(SatSumError):
    stage = "lattice"

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class BudgetExceeded(SatSumError):
    stage = "lattice"


class MismatchDetected(SatSumError):
    stage = "verify"

    def __init__(self, message: str, counts: Optional[dict] = None):
        super().__init__(message)
        self.counts = counts or {}
