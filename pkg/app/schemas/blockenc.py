import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class BlockEncoding(BaseModel):
    """Dense (U, |G>, R) triple for a normalized Pauli sum.

    The auxiliary register is the most significant part of the joint index.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_sys: int = Field(..., ge=1)
    n_aux: int = Field(..., ge=0)
    u_op: np.ndarray
    g_vec: np.ndarray
    r_op: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << (self.n_aux + self.n_sys)

    @property
    def sys_dim(self) -> int:
        return 1 << self.n_sys


class Lemma1Request(BaseModel):
    qubits: int = Field(2, ge=1)
    terms: int = Field(3, ge=1)
    seed: int = 0
    kmax: int = Field(10, ge=0)
    samples: int = Field(1, ge=1)


class Lemma1Report(BaseModel):
    qubits: int
    terms: int
    seed: int
    kmax: int
    samples: int
    max_block_deviation: float
    max_moment_deviation: float
    max_unitarity_deviation: float
    passed: bool
