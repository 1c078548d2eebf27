"""Bit-packed GF(2) linear algebra on Python int bitsets.

Vectors are plain ints (bit i = coordinate i).  All row reduction here is
XOR on machine words, which is the hot path under tableau membership
queries, logical-class solves and the distance search.
"""

from __future__ import annotations

from typing import Iterable, Optional


def parity(x: int) -> int:
    """Parity of the popcount of x."""
    return x.bit_count() & 1


def lowest_bit(x: int) -> int:
    """Index of the lowest set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


class GF2Basis:
    """Incremental row-echelon basis with combination tracking.

    Each inserted vector gets an index; `solve` returns which inserted
    vectors XOR to a target, which is what sign reconstruction and
    logical-class decompositions need.
    """

    def __init__(self) -> None:
        self._rows: list[tuple[int, int]] = []  # (vector, combo over inserted indices)
        self._pivots: dict[int, int] = {}  # pivot bit -> row position
        self.n_inserted = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: int, combo: int) -> tuple[int, int]:
        while vec:
            p = lowest_bit(vec)
            row = self._pivots.get(p)
            if row is None:
                return vec, combo
            rvec, rcombo = self._rows[row]
            vec ^= rvec
            combo ^= rcombo
        return vec, combo

    def add(self, vec: int) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        idx = self.n_inserted
        self.n_inserted += 1
        residual, combo = self._reduce(vec, 1 << idx)
        if residual == 0:
            return False
        self._pivots[lowest_bit(residual)] = len(self._rows)
        self._rows.append((residual, combo))
        return True

    def contains(self, vec: int) -> bool:
        residual, _ = self._reduce(vec, 0)
        return residual == 0

    def solve(self, vec: int) -> Optional[int]:
        """Bitmask over inserted-vector indices XORing to vec, or None."""
        residual, combo = self._reduce(vec, 0)
        if residual != 0:
            return None
        return combo


def rank(vectors: Iterable[int]) -> int:
    """GF(2) rank of a collection of int-bitset vectors."""
    basis = GF2Basis()
    for v in vectors:
        basis.add(v)
    return basis.rank


def in_span(vectors: Iterable[int], target: int) -> bool:
    basis = GF2Basis()
    for v in vectors:
        basis.add(v)
    return basis.contains(target)


def solve_parity_system(rows: list[int], rhs: list[int]) -> Optional[int]:
    """Solve for x with parity(rows[i] & x) == rhs[i] for every i.

    Returns one solution as an int bitset, or None if inconsistent.
    """
    work = [(rows[i], rhs[i] & 1) for i in range(len(rows))]
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, mask, rhs)
    for mask, b in work:
        for p, pm, pb in pivots:
            if (mask >> p) & 1:
                mask ^= pm
                b ^= pb
        if mask == 0:
            if b:
                return None
            continue
        pivots.append((lowest_bit(mask), mask, b))
    x = 0
    # Back-substitute in reverse insertion order.
    for p, mask, b in reversed(pivots):
        if parity(mask & x) != b:
            x ^= 1 << p
    return x


def nullspace(rows: list[int], n_cols: int) -> list[int]:
    """Basis of {x : parity(row & x) == 0 for every row}."""
    pivots: list[tuple[int, int]] = []  # (pivot bit, mask)
    for mask in rows:
        for p, pm in pivots:
            if (mask >> p) & 1:
                mask ^= pm
        if mask:
            pivots.append((lowest_bit(mask), mask))
    pivot_bits = {p for p, _ in pivots}
    basis = []
    for free in range(n_cols):
        if free in pivot_bits:
            continue
        x = 1 << free
        for p, mask in reversed(pivots):
            if parity(mask & x):
                x ^= 1 << p
        basis.append(x)
    return basis
