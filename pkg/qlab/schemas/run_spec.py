"""
Pydantic schema for one CLI run.
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class Command(str, Enum):
    VALIDATE = "validate"
    STAGES = "stages"
    EVAL = "eval"
    VERIFY = "verify"


class HierarchyTag(str, Enum):
    """Which hierarchy a stage belongs to."""
    V = "V"
    FRAK_L = "frakL"
    BB_L = "bbL"
    CLASSICAL_L = "L"


class Suite(str, Enum):
    ALGEBRA = "algebra"
    PAPER = "paper"


class RunSpec(BaseModel):
    """Schema for a single batch run."""
    quantale: str
    command: Command
    alpha: int = Field(default=3, ge=0)
    max_depth: int = Field(default=2, ge=0)
    max_params: int = Field(default=1, ge=0)
    saturate: bool = False
    classical_connectives: bool = False
    values: Optional[List[str]] = None
    hierarchy: HierarchyTag = HierarchyTag.BB_L
    suite: Suite = Suite.PAPER
    report_path: Optional[str] = None
    dump_path: Optional[str] = None
