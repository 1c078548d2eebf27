"""Independent dense oracles used to check the bit-packed fast paths.

Everything here is deliberately naive: explicit 2^n statevectors and
kron products, no shared code with the package internals beyond the
PauliOperator container itself.
"""

from __future__ import annotations

import numpy as np

from floquet_lab.pauli import PauliOperator

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
MATS = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}


def pauli_matrix(op: PauliOperator) -> np.ndarray:
    """Dense matrix of a PauliOperator (qubit 0 = least significant)."""
    m = np.array([[1.0 + 0j]])
    for q in range(op.n):
        m = np.kron(MATS[op.letter_at(q)], m)
    return (1j ** op.phase) * m


def snap_probability(p: float) -> float:
    """Measurement probabilities on stabilizer states are 0, 1/2 or 1."""
    for exact in (0.0, 0.5, 1.0):
        if abs(p - exact) < 1e-9:
            return exact
    raise AssertionError(f"non-stabilizer probability {p}")


class DensityMatrixState:
    """Dense n-qubit density matrix, starting maximally mixed.

    Matches a rank-0 tableau: the schedule's initial state before any
    check has been learned.
    """

    def __init__(self, n: int):
        self.n = n
        self.rho = np.eye(2 ** n, dtype=complex) / (2 ** n)

    def copy(self) -> "DensityMatrixState":
        s = DensityMatrixState(self.n)
        s.rho = self.rho.copy()
        return s

    def probability_plus(self, op: PauliOperator) -> float:
        plus = 0.5 * (np.eye(2 ** self.n) + pauli_matrix(op))
        return snap_probability(float(np.real(np.trace(plus @ self.rho))))

    def project(self, op: PauliOperator, outcome: int) -> float:
        proj = 0.5 * (np.eye(2 ** self.n) + outcome * pauli_matrix(op))
        p = snap_probability(float(np.real(np.trace(proj @ self.rho))))
        if p == 0.0:
            raise AssertionError("projected onto zero-probability branch")
        self.rho = proj @ self.rho @ proj / p
        return p

    def measure(self, op: PauliOperator, rng: np.random.Generator) -> tuple[int, float]:
        p_plus = self.probability_plus(op)
        if p_plus == 1.0:
            outcome = +1
        elif p_plus == 0.0:
            outcome = -1
        else:
            outcome = +1 if rng.integers(2) == 0 else -1
        self.project(op, outcome)
        return outcome, p_plus

    def is_stabilized_by(self, op: PauliOperator) -> bool:
        m = pauli_matrix(op)
        return bool(np.allclose(m @ self.rho, self.rho, atol=1e-9))


class StatevectorState:
    """Dense n-qubit state supporting projective Pauli measurement."""

    def __init__(self, n: int):
        self.n = n
        self.vec = np.zeros(2 ** n, dtype=complex)
        self.vec[0] = 1.0

    def copy(self) -> "StatevectorState":
        s = StatevectorState(self.n)
        s.vec = self.vec.copy()
        return s

    def probability_plus(self, op: PauliOperator) -> float:
        m = pauli_matrix(op)
        plus = 0.5 * (self.vec + m @ self.vec)
        return snap_probability(float(np.real(np.vdot(plus, plus))))

    def project(self, op: PauliOperator, outcome: int) -> float:
        """Project onto the outcome eigenspace; returns the branch probability."""
        m = pauli_matrix(op)
        proj = 0.5 * (self.vec + outcome * (m @ self.vec))
        p = snap_probability(float(np.real(np.vdot(proj, proj))))
        if p == 0.0:
            raise AssertionError("projected onto zero-probability branch")
        self.vec = proj / np.sqrt(p)
        return p

    def measure(self, op: PauliOperator, rng: np.random.Generator) -> tuple[int, float]:
        p_plus = self.probability_plus(op)
        if p_plus == 1.0:
            outcome = +1
        elif p_plus == 0.0:
            outcome = -1
        else:
            outcome = +1 if rng.integers(2) == 0 else -1
        self.project(op, outcome)
        return outcome, p_plus

    def is_stabilized_by(self, op: PauliOperator) -> bool:
        m = pauli_matrix(op)
        return bool(np.allclose(m @ self.vec, self.vec, atol=1e-9))
