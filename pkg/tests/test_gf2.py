import numpy as np
import pytest

from floquet_lab import gf2


def _to_bits(vec: int, n: int) -> np.ndarray:
    return np.array([(vec >> i) & 1 for i in range(n)], dtype=np.uint8)


def _numpy_rank(vectors, n):
    m = np.array([_to_bits(v, n) for v in vectors], dtype=np.uint8)
    rank = 0
    for col in range(n):
        rows = [r for r in range(rank, m.shape[0]) if m[r, col]]
        if not rows:
            continue
        m[[rank, rows[0]]] = m[[rows[0], rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


@pytest.mark.parametrize("seed", range(10))
def test_rank_matches_numpy_elimination(seed):
    rng = np.random.default_rng(seed)
    n = 17
    vecs = [int(rng.integers(0, 2 ** n)) for _ in range(12)]
    assert gf2.rank(vecs) == _numpy_rank(vecs, n)


def test_basis_solve_reconstructs_combination():
    rng = np.random.default_rng(7)
    n = 24
    vecs = [int(rng.integers(1, 2 ** n)) for _ in range(10)]
    basis = gf2.GF2Basis()
    for v in vecs:
        basis.add(v)
    # XOR of a random subset must be solvable and reproduce the target.
    subset = [i for i in range(len(vecs)) if rng.integers(2)]
    target = 0
    for i in subset:
        target ^= vecs[i]
    combo = basis.solve(target)
    assert combo is not None
    rebuilt = 0
    for i in range(len(vecs)):
        if (combo >> i) & 1:
            rebuilt ^= vecs[i]
    assert rebuilt == target


def test_solve_detects_out_of_span():
    basis = gf2.GF2Basis()
    basis.add(0b0011)
    basis.add(0b0110)
    assert basis.solve(0b0101) is not None
    assert basis.solve(0b1000) is None
    assert not basis.contains(0b1000)


@pytest.mark.parametrize("seed", range(8))
def test_parity_system_solutions_verify(seed):
    rng = np.random.default_rng(100 + seed)
    n = 15
    rows = [int(rng.integers(0, 2 ** n)) for _ in range(9)]
    planted = int(rng.integers(0, 2 ** n))
    rhs = [gf2.parity(r & planted) for r in rows]
    x = gf2.solve_parity_system(rows, rhs)
    assert x is not None
    assert all(gf2.parity(r & x) == b for r, b in zip(rows, rhs))


def test_parity_system_inconsistent():
    rows = [0b011, 0b011]
    assert gf2.solve_parity_system(rows, [0, 1]) is None


@pytest.mark.parametrize("seed", range(8))
def test_nullspace_is_orthogonal_and_complete(seed):
    rng = np.random.default_rng(200 + seed)
    n = 12
    rows = [int(rng.integers(0, 2 ** n)) for _ in range(7)]
    basis = gf2.nullspace(rows, n)
    for v in basis:
        assert all(gf2.parity(r & v) == 0 for r in rows)
    assert gf2.rank(basis) == len(basis)
    assert len(basis) == n - gf2.rank(rows)
