from pydantic import BaseModel, Field, field_validator
from typing import Literal, Optional, Union

from app.config import get_settings
from app.schemas.lattice import LatticeSpec


class BasisIndex(BaseModel):
    basis_index: int = Field(..., ge=0)


DEFAULT_DEPTHS = {"2x2": 5, "2x3": 40, "3x3": 40, "3x4": 50, "4x4": 50}


class ExperimentConfig(BaseModel):
    model: Union[LatticeSpec, str] = LatticeSpec(rows=2, cols=2)
    initial_state: Union[Literal["antiferro"], BasisIndex] = "antiferro"
    d_max: int = Field(20, ge=1)
    noise_rates: list[float] = [0.0]
    trials: int = Field(default_factory=lambda: get_settings().default_trials, ge=1)
    seed: int = Field(0, ge=0)
    threshold_family: Literal["spin", "molecule"] = "spin"
    threshold_constant_override: Optional[float] = Field(None, gt=0)
    output: Optional[str] = None
    lattices: Optional[list[LatticeSpec]] = None
    depths: dict[str, int] = {}
    converged_window: int = Field(10, ge=1)
    cache: bool = True

    @field_validator("noise_rates")
    @classmethod
    def _check_rates(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("noise_rates must not be empty")
        if any(eta < 0 for eta in value):
            raise ValueError("noise rates must be nonnegative")
        return value

    def depth_for(self, label: str) -> int:
        if label in self.depths:
            return self.depths[label]
        if label in DEFAULT_DEPTHS:
            return DEFAULT_DEPTHS[label]
        return self.d_max


class MomentsRequest(BaseModel):
    model: Union[LatticeSpec, str] = LatticeSpec(rows=2, cols=2)
    initial_state: Union[Literal["antiferro"], BasisIndex] = "antiferro"
    d_max: int = Field(..., ge=1)
    eta: float = Field(0.0, ge=0)
    seed: int = Field(0, ge=0)


class Fig2Result(BaseModel):
    csv: str
    smoothed_csv: str
