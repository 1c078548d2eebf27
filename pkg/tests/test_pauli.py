import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquet_lab.pauli import PauliOperator, commutes, multiply, product

from oracles import pauli_matrix


def random_pauli(rng, n):
    return PauliOperator(
        n,
        int(rng.integers(0, 2 ** n)),
        int(rng.integers(0, 2 ** n)),
        int(rng.integers(0, 4)),
    )


def test_single_qubit_anticommutation():
    x0 = PauliOperator.single(1, 0, "X")
    z0 = PauliOperator.single(1, 0, "Z")
    assert not commutes(x0, z0)


def test_two_sign_flips_cancel():
    xx = PauliOperator.from_pairs(2, [(0, "X"), (1, "X")])
    zz = PauliOperator.from_pairs(2, [(0, "Z"), (1, "Z")])
    assert commutes(xx, zz)


def test_self_commutation():
    y0 = PauliOperator.single(1, 0, "Y")
    assert commutes(y0, y0)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        commutes(PauliOperator.identity(2), PauliOperator.identity(3))
    with pytest.raises(ValueError):
        multiply(PauliOperator.identity(2), PauliOperator.identity(3))


def test_x_times_z_is_minus_i_y():
    x0 = PauliOperator.single(1, 0, "X")
    z0 = PauliOperator.single(1, 0, "Z")
    prod = multiply(x0, z0)
    assert prod.letter_at(0) == "Y"
    assert prod.phase == 3


def test_involution_has_trivial_phase():
    xx = PauliOperator.from_pairs(2, [(0, "X"), (1, "X")])
    prod = multiply(xx, xx)
    assert prod.is_identity and prod.phase == 0


def test_y_times_z_against_matrix_oracle():
    y0 = PauliOperator.single(1, 0, "Y")
    z0 = PauliOperator.single(1, 0, "Z")
    prod = multiply(y0, z0)
    assert prod.letter_at(0) == "X" and prod.phase == 1
    assert np.allclose(pauli_matrix(prod), pauli_matrix(y0) @ pauli_matrix(z0))


@pytest.mark.parametrize("seed", range(20))
def test_multiply_matches_matrix_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    a, b = random_pauli(rng, n), random_pauli(rng, n)
    assert np.allclose(
        pauli_matrix(multiply(a, b)), pauli_matrix(a) @ pauli_matrix(b)
    )


@pytest.mark.parametrize("seed", range(20))
def test_commutes_matches_matrix_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(1, 4))
    a, b = random_pauli(rng, n), random_pauli(rng, n)
    ab = pauli_matrix(a) @ pauli_matrix(b)
    ba = pauli_matrix(b) @ pauli_matrix(a)
    assert commutes(a, b) == np.allclose(ab, ba)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 40 - 1), st.integers(0, 2 ** 40 - 1),
       st.integers(0, 2 ** 40 - 1), st.integers(0, 2 ** 40 - 1),
       st.integers(0, 2 ** 40 - 1), st.integers(0, 2 ** 40 - 1),
       st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_multiply_associative_including_phase(ax, az, bx, bz, cx, cz, pa, pb, pc):
    n = 40
    a = PauliOperator(n, ax, az, pa)
    b = PauliOperator(n, bx, bz, pb)
    c = PauliOperator(n, cx, cz, pc)
    assert multiply(a, multiply(b, c)) == multiply(multiply(a, b), c)


def test_literal_round_trip():
    for text in ["+X0*Y3*Z7", "-Z1", "+i" + "Y0", "-i" + "X2*X4", "+I"]:
        op = PauliOperator.parse(text, 8)
        assert PauliOperator.parse(str(op), 8) == op


def test_product_of_empty_needs_n():
    assert product([], n=3) == PauliOperator.identity(3)
    with pytest.raises(ValueError):
        product([])
