"""Stabilizer/destabilizer tableau driven purely by Pauli measurements.

The group is allowed to be non-maximal (rank < n): a measurement schedule
starts from the trivial group and learns checks as it goes.  Destabilizers
are kept paired with stabilizers so membership and deterministic outcomes
are O(rank) inner products instead of fresh eliminations.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import gf2
from .pauli import PauliOperator, multiply, symplectic_product


class InconsistentForcingError(ValueError):
    """Forced outcome contradicts a deterministic measurement."""


class OutcomeSource:
    """Supplies signs for non-deterministic measurement outcomes."""

    def draw(self) -> int:
        raise NotImplementedError


class RandomOutcomes(OutcomeSource):
    """Seeded random +-1 stream (numpy PCG64 under the hood)."""

    def __init__(self, seed):
        if isinstance(seed, np.random.Generator):
            self.rng = seed
        else:
            self.rng = np.random.default_rng(seed)

    def draw(self) -> int:
        return +1 if self.rng.integers(2) == 0 else -1


class ForcedOutcomes(OutcomeSource):
    """Always returns the given sign for random outcomes."""

    def __init__(self, sign: int = +1):
        if sign not in (+1, -1):
            raise ValueError("forced sign must be +1 or -1")
        self.sign = sign

    def draw(self) -> int:
        return self.sign


FORCED_PLUS = ForcedOutcomes(+1)


class _Row:
    __slots__ = ("x", "z", "phase")

    def __init__(self, x: int, z: int, phase: int):
        self.x = x
        self.z = z
        self.phase = phase % 4

    def to_pauli(self, n: int) -> PauliOperator:
        return PauliOperator(n, self.x, self.z, self.phase)

    def copy(self) -> "_Row":
        return _Row(self.x, self.z, self.phase)


def _row_mul(n: int, a: _Row, b: _Row) -> _Row:
    p = multiply(PauliOperator(n, a.x, a.z, a.phase), PauliOperator(n, b.x, b.z, b.phase))
    return _Row(p.x, p.z, p.phase)


def _anticommute(a, b) -> bool:
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 1


class Tableau:
    """Measurement-updatable stabilizer group on n qubits."""

    def __init__(self, n: int):
        self.n = n
        self.stabs: list[_Row] = []
        self.destabs: list[_Row] = []

    @property
    def rank(self) -> int:
        return len(self.stabs)

    def copy(self) -> "Tableau":
        t = Tableau(self.n)
        t.stabs = [r.copy() for r in self.stabs]
        t.destabs = [r.copy() for r in self.destabs]
        return t

    def stabilizers(self) -> list[PauliOperator]:
        return [r.to_pauli(self.n) for r in self.stabs]

    def destabilizers(self) -> list[PauliOperator]:
        return [r.to_pauli(self.n) for r in self.destabs]

    # -- group queries ---------------------------------------------------

    def _decompose(self, p: PauliOperator) -> Optional[list[int]]:
        """Indices of stabilizer generators whose product matches p's letters.

        Uses the destabilizer pairing <stab_i, destab_j> = delta_ij, so the
        candidate index set is just the destabilizers anticommuting with p.
        Returns None when p is not in the group's GF(2) row space.
        """
        combo = [i for i, d in enumerate(self.destabs) if _anticommute(p, d)]
        x = z = 0
        for i in combo:
            x ^= self.stabs[i].x
            z ^= self.stabs[i].z
        if x != p.x or z != p.z:
            return None
        return combo

    def expansion_sign(self, p: PauliOperator) -> Optional[int]:
        """Sign s with s*p in the group, or None when p is independent."""
        if not p.hermitian:
            raise ValueError("membership queries need Hermitian operators")
        combo = self._decompose(p)
        if combo is None:
            return None
        acc = PauliOperator.identity(self.n)
        for i in combo:
            acc = multiply(acc, self.stabs[i].to_pauli(self.n))
        delta = (acc.phase - p.phase) % 4
        if delta % 2 != 0:
            raise AssertionError("non-real relative phase in stabilizer group")
        return +1 if delta == 0 else -1

    def contains(self, p: PauliOperator, mode: str = "up_to_sign") -> bool:
        """Group membership; `exact` also matches the reconstructed phase."""
        sign = self.expansion_sign(p)
        if sign is None:
            return False
        return True if mode == "up_to_sign" else sign == +1

    # -- state updates -----------------------------------------------------

    def apply_pauli(self, e: PauliOperator) -> None:
        """Conjugate the state by a Pauli error: flips anticommuting signs."""
        for row in self.stabs:
            if _anticommute(e, row):
                row.phase = (row.phase + 2) % 4

    def measure(self, p: PauliOperator, source: OutcomeSource) -> tuple[int, bool]:
        """Measure Hermitian p; returns (outcome, deterministic).

        Three branches: anticommuting generator exists (random outcome,
        conjugation update), p already in the group (deterministic, state
        unchanged), or p independent and commuting (group extension, the
        fresh-check case).
        """
        if not p.hermitian:
            raise ValueError("measured operators must be Hermitian")
        anti = [i for i, s in enumerate(self.stabs) if _anticommute(p, s)]
        if anti:
            k = anti[0]
            pivot = self.stabs[k]
            for i in anti[1:]:
                self.stabs[i] = _row_mul(self.n, self.stabs[i], pivot)
            for j, d in enumerate(self.destabs):
                if j != k and _anticommute(p, d):
                    self.destabs[j] = _row_mul(self.n, d, pivot)
            outcome = source.draw()
            self.destabs[k] = pivot
            self.stabs[k] = _Row(p.x, p.z, p.phase + (0 if outcome == +1 else 2))
            return outcome, False

        sign = self.expansion_sign(p)
        if sign is not None:
            if isinstance(source, ForcedOutcomes) and source.sign != sign:
                raise InconsistentForcingError(
                    f"forced {source.sign:+d} but group fixes {p} to {sign:+d}"
                )
            return sign, True

        # Fresh commuting check: random outcome, extend by (outcome)*p, and
        # solve for a partner destabilizer anticommuting with p only.
        outcome = source.draw()
        rows = []
        rhs = []
        for r in self.stabs + self.destabs:
            rows.append(r.z | (r.x << self.n))
            rhs.append(0)
        rows.append(p.z | (p.x << self.n))
        rhs.append(1)
        sol = gf2.solve_parity_system(rows, rhs)
        if sol is None:
            raise AssertionError("destabilizer extension must be solvable below full rank")
        mask = (1 << self.n) - 1
        partner = _Row(sol & mask, sol >> self.n, 0)
        # Existing destabilizers anticommuting with p would break the
        # delta-pairing against the new stabilizer; the partner repairs them.
        for j, d in enumerate(self.destabs):
            if _anticommute(p, d):
                self.destabs[j] = _row_mul(self.n, d, partner)
        self.stabs.append(_Row(p.x, p.z, p.phase + (0 if outcome == +1 else 2)))
        self.destabs.append(partner)
        return outcome, False

    # -- comparisons -------------------------------------------------------

    def canonical_stabilizers(self) -> list[PauliOperator]:
        """Unique echelon form of the generator list (phased)."""
        rows = [r.to_pauli(self.n) for r in self.stabs]
        rows.sort(key=lambda p: p.symplectic())
        out: list[PauliOperator] = []
        pivots: dict[int, int] = {}
        for p in rows:
            cur = p
            while not cur.is_identity:
                key = cur.symplectic()
                piv = gf2.lowest_bit(key)
                at = pivots.get(piv)
                if at is None:
                    pivots[piv] = len(out)
                    out.append(cur)
                    break
                cur = multiply(out[at], cur)
            else:
                if cur.phase != 0:
                    raise AssertionError("inconsistent generating set")
        # Full reduction: clear pivot bits from the other rows.
        changed = True
        while changed:
            changed = False
            for piv, i in sorted(pivots.items()):
                for j, other in enumerate(out):
                    if j != i and (other.symplectic() >> piv) & 1:
                        out[j] = multiply(out[i], other)
                        changed = True
        return sorted(out, key=lambda p: p.symplectic())

    def group_equal(self, other: "Tableau", mode: str = "up_to_sign") -> bool:
        return group_equal(self, other, mode)

    def dumps(self) -> str:
        return "\n".join(str(p) for p in self.canonical_stabilizers())

    @staticmethod
    def loads(text: str, n: int) -> "Tableau":
        """Rebuild a tableau from a generator dump (one literal per line)."""
        t = Tableau(n)
        for line in text.strip().splitlines():
            line = line.strip()
            if not line:
                continue
            p = PauliOperator.parse(line, n)
            outcome, _ = t.measure(
                PauliOperator(n, p.x, p.z, 0), ForcedOutcomes(p.sign)
            )
        return t


def group_equal(a: Tableau, b: Tableau, mode: str = "up_to_sign") -> bool:
    """Equality of generated groups, optionally including signs."""
    if a.n != b.n or a.rank != b.rank:
        return False
    return all(a.contains(p, mode) for p in b.stabilizers())


def span_contains(generators: list[PauliOperator], p: PauliOperator,
                  mode: str = "up_to_sign") -> bool:
    """Membership of p in the group generated by a raw operator list."""
    if not generators:
        return p.is_identity
    n = generators[0].n
    basis = gf2.GF2Basis()
    for g in generators:
        basis.add(g.symplectic())
    combo = basis.solve(p.symplectic())
    if combo is None:
        return False
    if mode == "up_to_sign":
        return True
    acc = PauliOperator.identity(n)
    for i, g in enumerate(generators):
        if (combo >> i) & 1:
            acc = multiply(acc, g)
    return acc.phase == p.phase
