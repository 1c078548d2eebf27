"""Phase-tracked n-qubit Pauli operators in symplectic (x, z) form.

An operator is i**phase times the qubit-wise tensor product of letters,
where the letter on qubit q is I/X/Y/Z for (x_q, z_q) = 00/10/11/01.
Phases are exact mod 4; Hermitian operators have even phase.  Bit vectors
are Python ints, so products and commutators are word-wise XOR/AND plus
popcounts.
"""

from __future__ import annotations

from dataclasses import dataclass

_LETTER_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_LETTER = {v: k for k, v in _LETTER_TO_XZ.items()}
_SIGN_TO_PHASE = {"+": 0, "+i": 1, "-": 2, "-i": 3}
_PHASE_TO_SIGN = {v: k for k, v in _SIGN_TO_PHASE.items()}


@dataclass(frozen=True)
class PauliOperator:
    """Immutable Pauli with exact i**phase bookkeeping."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        object.__setattr__(self, "x", self.x & mask)
        object.__setattr__(self, "z", self.z & mask)
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliOperator":
        return PauliOperator(n)

    @staticmethod
    def single(n: int, qubit: int, letter: str, sign: int = +1) -> "PauliOperator":
        return PauliOperator.from_pairs(n, [(qubit, letter)], sign)

    @staticmethod
    def from_pairs(n: int, pairs, sign: int = +1) -> "PauliOperator":
        """Build from (qubit, letter) pairs on distinct qubits."""
        x = z = 0
        for q, letter in pairs:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            lx, lz = _LETTER_TO_XZ[letter]
            if (x >> q) & 1 or (z >> q) & 1:
                raise ValueError(f"duplicate qubit {q}")
            x |= lx << q
            z |= lz << q
        phase = 0 if sign == +1 else 2
        return PauliOperator(n, x, z, phase)

    @staticmethod
    def parse(text: str, n: int) -> "PauliOperator":
        """Parse the literal format, e.g. ``+X0*Y3*Z7`` or ``-I``."""
        text = text.strip()
        phase = 0
        for sig in ("+i", "-i", "+", "-"):
            if text.startswith(sig):
                phase = _SIGN_TO_PHASE[sig]
                text = text[len(sig):]
                break
        pairs = []
        if text and text != "I":
            for term in text.split("*"):
                letter, idx = term[0], term[1:]
                if letter == "I":
                    continue
                pairs.append((int(idx), letter))
        op = PauliOperator.from_pairs(n, pairs)
        return PauliOperator(n, op.x, op.z, phase)

    # -- inspection ----------------------------------------------------

    def letter_at(self, q: int) -> str:
        return _XZ_TO_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)]

    @property
    def support(self) -> list[int]:
        bits = self.x | self.z
        out = []
        while bits:
            q = (bits & -bits).bit_length() - 1
            out.append(q)
            bits &= bits - 1
        return out

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        if not self.hermitian:
            raise ValueError(f"non-Hermitian phase {self.phase}")
        return +1 if self.phase == 0 else -1

    def symplectic(self) -> int:
        """(x | z<<n) packed key, the GF(2) vector of the operator."""
        return self.x | (self.z << self.n)

    def __str__(self) -> str:
        if self.is_identity:
            return _PHASE_TO_SIGN[self.phase] + "I"
        terms = "*".join(f"{self.letter_at(q)}{q}" for q in self.support)
        return _PHASE_TO_SIGN[self.phase] + terms

    # -- algebra -------------------------------------------------------

    def commutes_with(self, other: "PauliOperator") -> bool:
        return commutes(self, other)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def negated(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, (self.phase + 2) % 4)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic inner product of a and b vanishes mod 2."""
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product a*b with the exact phase mod 4.

    Per-qubit Levi-Civita bookkeeping, vectorized over the bit-packed
    rows: count cyclic letter pairs (XY, YZ, ZX -> +i) and anticyclic
    ones (YX, ZY, XZ -> -i).
    """
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")
    mask = (1 << a.n) - 1
    ax, az, bx, bz = a.x, a.z, b.x, b.z
    nax, naz, nbx, nbz = ~ax & mask, ~az & mask, ~bx & mask, ~bz & mask
    plus = (ax & naz & bx & bz) | (ax & az & nbx & bz) | (nax & az & bx & nbz)
    minus = (ax & az & bx & nbz) | (nax & az & bx & bz) | (ax & naz & nbx & bz)
    phase = (a.phase + b.phase + plus.bit_count() - minus.bit_count()) % 4
    return PauliOperator(a.n, ax ^ bx, az ^ bz, phase)


def product(ops, n: int | None = None) -> PauliOperator:
    """Phase-tracked product of a sequence of operators, left to right."""
    ops = list(ops)
    if not ops:
        if n is None:
            raise ValueError("empty product needs explicit n")
        return PauliOperator.identity(n)
    acc = ops[0]
    for op in ops[1:]:
        acc = multiply(acc, op)
    return acc
