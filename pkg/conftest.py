import numpy as np
import pytest

from app.schemas.lattice import LatticeSpec
from app.services.pauli_service import pauli_service

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_label(label: str) -> np.ndarray:
    """Dense matrix of an unsigned Pauli string, qubit 0 as the leftmost factor."""
    out = np.array([[1.0 + 0j]])
    for letter in label:
        out = np.kron(out, PAULI[letter])
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def lattice_2x2():
    return LatticeSpec(rows=2, cols=2)


@pytest.fixture
def half_xz():
    return pauli_service.load_hamiltonian("0.5 X\n0.5 Z\n")


@pytest.fixture
def random_sum(rng):
    def make(n: int = 3, t: int = 6):
        return pauli_service.random_pauli_sum(n, t, rng)

    return make
