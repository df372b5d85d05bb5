"""
Pydantic schema for the quantale file format.
"""
from typing import List, Optional

from pydantic import BaseModel, model_validator


class QuantaleFile(BaseModel):
    """Schema for a quantale given by explicit tables."""
    labels: List[str]
    leq: List[List[int]]
    product: List[List[int]]
    bottom: int
    top: int
    name: Optional[str] = None
    values: Optional[List[str]] = None

    @model_validator(mode="after")
    def check_shapes(self):
        n = len(self.labels)
        if n == 0:
            raise ValueError("labels must be nonempty")
        for key in ("leq", "product"):
            table = getattr(self, key)
            if len(table) != n or any(len(row) != n for row in table):
                raise ValueError(f"{key} must be a {n}x{n} table")
        if any(v not in (0, 1) for row in self.leq for v in row):
            raise ValueError("leq entries must be 0 or 1")
        if any(not 0 <= v < n for row in self.product for v in row):
            raise ValueError(f"product entries must be indices in 0..{n - 1}")
        if not (0 <= self.bottom < n and 0 <= self.top < n):
            raise ValueError(f"bottom and top must be indices in 0..{n - 1}")
        if self.values is not None and len(self.values) != n:
            raise ValueError("values must have one entry per label")
        return self
