"""
Pydantic schema for the bounds of the definability sweep.
"""
from pydantic import BaseModel, ConfigDict, Field

from qlab.formulas.enumeration import ConnectiveSet


class DefConfig(BaseModel):
    """Template bounds stamped on every constructed stage."""
    model_config = ConfigDict(frozen=True)

    max_depth: int = Field(default=2, ge=0)
    max_params: int = Field(default=1, ge=0)
    saturate: bool = False
    connectives: ConnectiveSet = ConnectiveSet.RESIDUATED

    def saturated(self) -> "DefConfig":
        return self.model_copy(update={"saturate": True})

    def __str__(self) -> str:
        text = f"max_depth={self.max_depth} max_params={self.max_params} saturate={str(self.saturate).lower()}"
        if self.connectives != ConnectiveSet.RESIDUATED:
            text += f" connectives={self.connectives.value}"
        return text
