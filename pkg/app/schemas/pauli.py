from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Literal


class PauliTerm(BaseModel):
    """Signed Pauli string in binary-symplectic form.

    Represents sign * prod_j i^(x_j z_j) X^(x_j) Z^(z_j). Qubit 0 is the
    leftmost character of the Pauli string and the most significant bit of
    a basis-state index.
    """

    model_config = ConfigDict(frozen=True)

    x_bits: tuple[int, ...]
    z_bits: tuple[int, ...]
    sign: Literal[1, -1] = 1

    @model_validator(mode="after")
    def _check_bits(self):
        if len(self.x_bits) == 0:
            raise ValueError("a Pauli term needs at least one qubit")
        if len(self.x_bits) != len(self.z_bits):
            raise ValueError("x_bits and z_bits must have equal length")
        if any(b not in (0, 1) for b in self.x_bits + self.z_bits):
            raise ValueError("bits must be 0 or 1")
        return self

    @property
    def n_qubits(self) -> int:
        return len(self.x_bits)

    @property
    def x_mask(self) -> int:
        return _mask(self.x_bits)

    @property
    def z_mask(self) -> int:
        return _mask(self.z_bits)

    @property
    def y_count(self) -> int:
        return sum(x & z for x, z in zip(self.x_bits, self.z_bits))

    @property
    def is_identity(self) -> bool:
        return not any(self.x_bits) and not any(self.z_bits)

    @property
    def unsigned(self) -> "PauliTerm":
        return PauliTerm(x_bits=self.x_bits, z_bits=self.z_bits, sign=1)


def _mask(bits: tuple[int, ...]) -> int:
    n = len(bits)
    return sum(b << (n - 1 - j) for j, b in enumerate(bits))


class WeightedTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    coeff: float = Field(..., ge=0)
    term: PauliTerm


class PauliSum(BaseModel):
    """Normalized Hamiltonian H = sum_i coeff_i * P_i with sum_i coeff_i = 1.

    `scale` is the l1 norm of the physical coefficients, so that
    physical energies are normalized energies times `scale`.
    """

    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(..., ge=1)
    terms: tuple[WeightedTerm, ...]
    scale: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _check_invariants(self):
        if not self.terms:
            raise ValueError("a PauliSum needs at least one term")
        if any(t.term.n_qubits != self.n_qubits for t in self.terms):
            raise ValueError("all terms must act on n_qubits qubits")
        total = sum(t.coeff for t in self.terms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"coefficients must sum to 1, got {total!r}")
        keys = [(t.term.x_bits, t.term.z_bits) for t in self.terms]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate Pauli strings must be merged")
        return self

    @property
    def n_terms(self) -> int:
        return len(self.terms)


class PauliParseRequest(BaseModel):
    text: str


class PauliSumResponse(BaseModel):
    n_qubits: int
    n_terms: int
    scale: float
    terms: list[tuple[float, str]]
