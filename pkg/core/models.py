"""
Request and Report Models
"""

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator


# ============================================================================
# Command Options
# ============================================================================

class Command(str, Enum):
    COMPUTE = "compute"
    ENUMERATE = "enumerate"
    VERIFY = "verify"
    BARBELL = "barbell"


class Algorithm(str, Enum):
    COMBINATORIAL = "combinatorial"
    TENSORIAL = "tensorial"
    BOTH = "both"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


# Label lengths accepted per rank in label form.
LABEL_LENGTHS = {1: 1, 2: 3, 3: 6}


class Request(BaseModel):
    command: Command = Field(..., description="Subcommand to run.")
    rank: int = Field(3, ge=1, le=3, description="Rank of the free group.")
    label: Optional[Tuple[int, ...]] = Field(None, description="Label form: n, (a,b,c) or (a,b,c,d,e,f).")
    index: Optional[Tuple[int, int, int, int, int, int]] = Field(None, description="Index form (a,b,c,d,i,j) for rank 3.")
    algorithm: Algorithm = Field(Algorithm.COMBINATORIAL, description="Engine used to compute.")
    format: OutputFormat = Field(OutputFormat.TEXT, description="Output format.")
    seed: Optional[int] = Field(None, ge=0, description="Seed for random triples; settings default when omitted.")
    trials: Optional[int] = Field(None, ge=1, description="Random triples per cross-validation.")
    order: Optional[int] = Field(None, ge=0, description="Fundamental order for enumerate and verify.")

    @model_validator(mode="after")
    def check_addressing(self) -> "Request":
        if self.label is not None and any(v < 0 for v in self.label):
            raise ValueError("Labels must be non-negative")
        if self.index is not None and any(v < 0 for v in self.index):
            raise ValueError("Index entries must be non-negative")
        if self.command is Command.COMPUTE:
            if (self.label is None) == (self.index is None):
                raise ValueError("compute needs exactly one of a label or an index")
            if self.index is not None and self.rank != 3:
                raise ValueError("Index form is only defined for rank 3")
            if self.label is not None and len(self.label) != LABEL_LENGTHS[self.rank]:
                raise ValueError(f"Rank {self.rank} labels have {LABEL_LENGTHS[self.rank]} entries")
        if self.command is Command.BARBELL and (self.label is None or len(self.label) != 3):
            raise ValueError("barbell needs a label (a, c, b)")
        if self.command is Command.VERIFY and self.label is not None and len(self.label) != 6:
            raise ValueError("verify takes a rank-3 label (a,b,c,d,e,f)")
        if self.command is Command.ENUMERATE and self.order is None:
            raise ValueError("enumerate needs an order")
        return self


# ============================================================================
# Verification Reports
# ============================================================================

class TrialResult(BaseModel):
    seed: int = Field(..., description="Seed of the random triple.")
    combinatorial: str = Field(..., description="Exact value from the loop recurrences.")
    tensorial: str = Field(..., description="Exact value from tensor contraction.")
    equal: bool


class CrossValidationReport(BaseModel):
    label: Tuple[int, int, int, int, int, int] = Field(..., description="Rank-3 label (a,b,c,d,e,f).")
    trials: int
    seed: int
    results: List[TrialResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.equal for result in self.results)

    @property
    def mismatches(self) -> List[TrialResult]:
        return [result for result in self.results if not result.equal]


class FunctionRecord(BaseModel):
    """One enumerated or computed function, as emitted in CSV rows"""
    index: str = Field(..., description="Comma-separated index or label tuple.")
    label: str = Field(..., description="Comma-separated rank-3 label (a,b,c,d,e,f).")
    polynomial: str = Field(..., description="Canonical text form.")
