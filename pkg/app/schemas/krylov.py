import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from typing import Literal, Optional

from app.schemas.moments import MomentSeq


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    eta: Optional[float] = None
    seed: Optional[int] = None
    scale: float = 1.0

    @property
    def noiseless(self) -> bool:
        return not self.eta


class KrylovPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    h_mat: tuple[tuple[float, ...], ...]
    s_mat: tuple[tuple[float, ...], ...]
    provenance: Provenance = Provenance()

    @property
    def h_array(self) -> np.ndarray:
        return np.asarray(self.h_mat, dtype=np.float64)

    @property
    def s_array(self) -> np.ndarray:
        return np.asarray(self.s_mat, dtype=np.float64)


class ThresholdReport(BaseModel):
    epsilon: float
    kept: int
    discarded_eigs: list[float]
    eps_total: float = Field(..., ge=0)
    energy_normalized: float
    energy_physical: float
    second_energy_normalized: Optional[float] = None
    kept_condition: float


class SolveRequest(BaseModel):
    pair: KrylovPair
    epsilon: float = Field(..., gt=0)


class ThresholdQuery(BaseModel):
    eta: float = Field(0.0, ge=0)
    family: Literal["spin", "molecule"] = "spin"


class AssembleRequest(BaseModel):
    moments: MomentSeq
