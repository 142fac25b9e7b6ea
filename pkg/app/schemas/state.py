import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class StateVec(BaseModel):
    """Dense complex amplitude vector over the 2^n computational basis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_qubits: int = Field(..., ge=0)
    amps: np.ndarray

    @field_validator("amps", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return np.ascontiguousarray(value, dtype=np.complex128)

    @model_validator(mode="after")
    def _check_length(self):
        if self.amps.ndim != 1 or self.amps.shape[0] != 1 << self.n_qubits:
            raise ValueError(
                f"amps must have length 2^{self.n_qubits}, got shape {self.amps.shape}"
            )
        if not np.all(np.isfinite(self.amps)):
            raise ValueError("amplitudes must be finite")
        return self

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))
