import logging
import math
from pathlib import Path

import numpy as np

from app.config import get_settings
from app.errors import (
    DimensionMismatch,
    DomainError,
    EmptyHamiltonian,
    ParseError,
    QubitMismatch,
    SizeGuard,
)
from app.schemas.pauli import PauliSum, PauliTerm, WeightedTerm
from app.schemas.state import StateVec

logger = logging.getLogger(__name__)

_LETTERS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)
# merged coefficients below this fraction of the largest input are cancellation residue
CANCEL_TOL = 1e-12


def term_diagonal(n_qubits: int, z_mask: int, phase: complex) -> np.ndarray:
    """phase * (-1)^popcount(b & z) for every basis index b."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    parity = np.bitwise_count(idx & z_mask) & 1
    return phase * (1.0 - 2.0 * parity)


def term_phase(term: PauliTerm) -> complex:
    return term.sign * _I_POWERS[term.y_count % 4]


class PauliService:
    def __init__(self):
        self.settings = get_settings()

    def normalize(self, raw_terms: list[tuple[float, PauliTerm]]) -> PauliSum:
        if not raw_terms:
            raise EmptyHamiltonian("no terms given")
        n = raw_terms[0][1].n_qubits
        merged: dict[tuple, float] = {}
        for coeff, term in raw_terms:
            if term.n_qubits != n:
                raise QubitMismatch(
                    f"term {self.pauli_label(term)} acts on {term.n_qubits} qubits, expected {n}"
                )
            if not math.isfinite(coeff):
                raise DomainError(f"coefficient {coeff!r} is not finite")
            key = (term.x_bits, term.z_bits)
            merged[key] = merged.get(key, 0.0) + coeff * term.sign
        cutoff = CANCEL_TOL * max(abs(coeff) for coeff, _ in raw_terms)
        kept = [(key, value) for key, value in merged.items() if abs(value) > cutoff]
        if not kept:
            raise EmptyHamiltonian("all coefficients are zero")
        scale = math.fsum(abs(value) for _, value in kept)
        terms = tuple(
            WeightedTerm(
                coeff=abs(value) / scale,
                term=PauliTerm(x_bits=x, z_bits=z, sign=1 if value > 0 else -1),
            )
            for (x, z), value in kept
        )
        # renormalize so the stored coefficients sum to one in floating point
        total = math.fsum(t.coeff for t in terms)
        terms = tuple(WeightedTerm(coeff=t.coeff / total, term=t.term) for t in terms)
        return PauliSum(n_qubits=n, terms=terms, scale=scale)

    def pauli_parse(self, text: str, line: int = 1) -> tuple[float, PauliTerm]:
        stripped = text.strip()
        offset = len(text) - len(text.lstrip())
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError("expected '<coefficient> <pauli-string>'", line, offset + 1)
        raw_coeff, label = parts
        try:
            coeff = float(raw_coeff)
        except ValueError:
            raise ParseError(f"invalid coefficient {raw_coeff!r}", line, offset + 1)
        if not math.isfinite(coeff):
            raise ParseError(f"coefficient {raw_coeff!r} is not finite", line, offset + 1)
        label_col = text.index(label, offset + len(raw_coeff)) + 1
        x_bits, z_bits = [], []
        for pos, letter in enumerate(label):
            if letter not in _LETTERS:
                raise ParseError(f"unexpected Pauli letter {letter!r}", line, label_col + pos)
            x, z = _LETTERS[letter]
            x_bits.append(x)
            z_bits.append(z)
        return coeff, PauliTerm(x_bits=tuple(x_bits), z_bits=tuple(z_bits))

    def load_hamiltonian(self, text: str) -> PauliSum:
        raw_terms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            if not body.strip():
                continue
            raw_terms.append(self.pauli_parse(body, line=lineno))
        if not raw_terms:
            raise EmptyHamiltonian("Hamiltonian file contains no terms")
        h = self.normalize(raw_terms)
        logger.info(f"[Pauli] Loaded {h.n_terms} terms on {h.n_qubits} qubits, scale={h.scale:.6g}")
        return h

    def load_hamiltonian_file(self, path: str | Path) -> PauliSum:
        return self.load_hamiltonian(Path(path).read_text())

    def pauli_label(self, term: PauliTerm) -> str:
        letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        body = "".join(letters[(x, z)] for x, z in zip(term.x_bits, term.z_bits))
        return body if term.sign == 1 else f"-{body}"

    def apply_pauli(self, p: PauliTerm, v: StateVec) -> StateVec:
        if p.n_qubits != v.n_qubits:
            raise DimensionMismatch(
                f"term acts on {p.n_qubits} qubits, state has {v.n_qubits}"
            )
        idx = np.arange(v.dim, dtype=np.int64)
        d = term_diagonal(p.n_qubits, p.z_mask, term_phase(p))
        return StateVec(n_qubits=v.n_qubits, amps=(d * v.amps)[idx ^ p.x_mask])

    def to_dense(self, h: PauliSum) -> np.ndarray:
        if h.n_qubits > self.settings.dense_max_qubits:
            raise SizeGuard(
                f"dense matrix of {h.n_qubits} qubits exceeds limit {self.settings.dense_max_qubits}"
            )
        dim = 1 << h.n_qubits
        cols = np.arange(dim, dtype=np.int64)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for wt in h.terms:
            rows = cols ^ wt.term.x_mask
            mat[rows, cols] += wt.coeff * term_diagonal(h.n_qubits, wt.term.z_mask, term_phase(wt.term))
        return mat

    def random_pauli_sum(self, n: int, t: int, rng: np.random.Generator) -> PauliSum:
        available = 4**n - 1
        if n < 1 or t < 1 or t > available:
            raise DomainError(f"cannot draw {t} distinct non-identity Pauli strings on {n} qubits")
        codes = rng.choice(available, size=t, replace=False) + 1
        coeffs = rng.normal(size=t)
        raw_terms = []
        for code, coeff in zip(codes, coeffs):
            code = int(code)
            x = tuple((code >> (2 * n - 1 - j)) & 1 for j in range(n))
            z = tuple((code >> (n - 1 - j)) & 1 for j in range(n))
            raw_terms.append((float(coeff), PauliTerm(x_bits=x, z_bits=z)))
        return self.normalize(raw_terms)


pauli_service = PauliService()
