from pydantic import BaseModel, ConfigDict, Field
from typing import Literal, Optional


class LatticeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    j1: float = 1.0
    j2: float = 0.5
    boundary: Literal["open", "periodic"] = "open"

    @property
    def sites(self) -> int:
        return self.rows * self.cols

    @property
    def label(self) -> str:
        return f"{self.rows}x{self.cols}"


class SpectrumSummary(BaseModel):
    e0: float
    e1: Optional[float] = None
    gap: Optional[float] = None
    overlap: float
    window_overlap: Optional[float] = None
    method: Literal["dense", "iterative"]


class ModelSummary(BaseModel):
    label: str
    n_qubits: int
    n_terms: int
    scale: float
    ground_energy: float
    ground_energy_physical: float
    ground_energy_per_site: float
    initial_overlap: float
    gap: Optional[float] = None
    ground_method: Literal["dense", "iterative"]
