from pydantic import BaseModel, Field, model_validator
from typing import Literal, Optional


class BoundParams(BaseModel):
    d: int = Field(..., ge=1)
    eta: float = Field(0.0, ge=0)
    eta_s: float = Field(0.0, ge=0)
    eta_h: float = Field(0.0, ge=0)
    gamma0: float = Field(..., gt=0, le=1)
    gamma: float = Field(1.0, gt=0, le=1)
    delta: float = Field(..., gt=0)
    epsilon: float = Field(0.0, ge=0)
    eps_total: float = Field(0.0, ge=0)
    alpha: float = Field(0.5, ge=0, le=0.5)
    mu_const: float = Field(1.0, ge=0)
    rho: float = Field(1.0, gt=0)
    gap: Optional[float] = Field(None, gt=0)
    s_norm: float = Field(1.0, gt=0)
    target_error: Optional[float] = Field(None, gt=0, le=1)

    @model_validator(mode="after")
    def _check_overlaps(self):
        if self.gamma0 > self.gamma + 1e-15:
            raise ValueError("gamma0 must not exceed gamma")
        return self


class BoundReport(BaseModel):
    k: int
    theorem2: Optional[float] = None
    theorem2_error: Optional[str] = None
    chi: Optional[float] = None
    noise_bound: Optional[float] = None
    combined: Optional[float] = None
    g_bound: Optional[float] = None
    threshold_scale: Optional[float] = None
    required_dimension: Optional[int] = None
    measurement_budget: Optional[float] = None


class GateCostReport(BaseModel):
    scheme: Literal["binary_index", "symplectic"]
    n: int
    t: int
    u_two_qubit: int
    g_two_qubit: int
    g_single_qubit: int = 0
    r_two_qubit: int
    r_single_qubit: int = 0
    aux_qubits: int
    counting_qubits: int = 0
    depth: Optional[int] = None
    d: Optional[int] = None
