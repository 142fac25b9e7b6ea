import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Optional


class NoiseInfo(BaseModel):
    model_config = ConfigDict(frozen=True)

    eta: float = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    stream: tuple[int, ...] = ()


class MomentSeq(BaseModel):
    """Chebyshev moments mu_k = <psi0|T_k(H)|psi0>, k = 0..2D-1."""

    model_config = ConfigDict(frozen=True)

    d_max: int = Field(..., ge=1)
    mu: tuple[float, ...]
    noise: Optional[NoiseInfo] = None
    scale: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _check_length(self):
        if len(self.mu) != 2 * self.d_max:
            raise ValueError(f"expected {2 * self.d_max} moments, got {len(self.mu)}")
        return self

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=np.float64)

    @property
    def noiseless(self) -> bool:
        return self.noise is None or self.noise.eta == 0.0
