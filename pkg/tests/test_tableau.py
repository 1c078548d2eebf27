import numpy as np
import pytest

from floquet_lab.pauli import PauliOperator, multiply
from floquet_lab.tableau import (
    FORCED_PLUS,
    ForcedOutcomes,
    InconsistentForcingError,
    RandomOutcomes,
    Tableau,
    group_equal,
    span_contains,
)

from oracles import DensityMatrixState


def P(text, n):
    return PauliOperator.parse(text, n)


def tableau_from(literals, n):
    t = Tableau(n)
    for lit in literals:
        p = P(lit, n)
        t.measure(PauliOperator(n, p.x, p.z, 0), ForcedOutcomes(p.sign))
    return t


def test_measure_existing_stabilizer_is_deterministic():
    t = tableau_from(["+Z0"], 1)
    outcome, det = t.measure(P("+Z0", 1), RandomOutcomes(0))
    assert (outcome, det) == (+1, True)
    assert t.rank == 1


def test_forced_anticommuting_replaces_generator():
    t = tableau_from(["+Z0"], 1)
    outcome, det = t.measure(P("+X0", 1), ForcedOutcomes(-1))
    assert (outcome, det) == (-1, False)
    assert t.contains(P("-X0", 1), "exact")
    assert not t.contains(P("+X0", 1), "exact")
    assert t.rank == 1


def test_third_measurement_forced_by_phase_algebra():
    # After measuring X0X1 and Z0Z1, Y0Y1 = -(X0X1)(Z0Z1) is determined.
    for s1 in (+1, -1):
        for s2 in (+1, -1):
            t = Tableau(2)
            o1, d1 = t.measure(P("+X0*X1", 2), ForcedOutcomes(s1))
            o2, d2 = t.measure(P("+Z0*Z1", 2), ForcedOutcomes(s2))
            assert (d1, d2) == (False, False)  # fresh checks: random outcomes
            o3, d3 = t.measure(P("+Y0*Y1", 2), RandomOutcomes(1))
            assert d3 is True
            assert o3 == -(o1 * o2)


def test_contains_up_to_sign_and_exact():
    t = tableau_from(["+X0*X1", "+Z0*Z1"], 2)
    assert t.contains(P("+Y0*Y1", 2), "up_to_sign")
    assert t.contains(P("-Y0*Y1", 2), "exact")
    assert not t.contains(P("+Y0*Y1", 2), "exact")
    assert not tableau_from(["+Z0"], 1).contains(P("+X0", 1), "up_to_sign")


def test_group_equal_regenerates():
    a = tableau_from(["+X0*X1", "+Z0*Z1"], 2)
    b = tableau_from(["-Y0*Y1", "+Z0*Z1"], 2)
    assert group_equal(a, b, "up_to_sign")
    assert group_equal(a, b, "exact")
    c = tableau_from(["+Z0"], 2)
    d = tableau_from(["+Z0", "+Z1"], 2)
    assert not group_equal(c, d)


def test_canonicalized_form_is_group_preserving():
    t = tableau_from(["+X0*X1", "+Z0*Z1", "+Z2"], 3)
    canon = Tableau.loads(t.dumps(), 3)
    assert group_equal(t, canon, "exact")
    assert canon.dumps() == t.dumps()


def test_inconsistent_forcing_raises():
    t = tableau_from(["+Z0"], 1)
    with pytest.raises(InconsistentForcingError):
        t.measure(P("+Z0", 1), ForcedOutcomes(-1))


def test_non_hermitian_rejected():
    t = Tableau(1)
    with pytest.raises(ValueError):
        t.measure(PauliOperator(1, 1, 1, 1), FORCED_PLUS)


def test_rank_changes_only_on_extension():
    t = Tableau(2)
    t.measure(P("+Z0", 2), FORCED_PLUS)
    assert t.rank == 1
    t.measure(P("+X0", 2), FORCED_PLUS)  # anticommuting: replacement
    assert t.rank == 1
    t.measure(P("+Z1", 2), FORCED_PLUS)  # fresh: extension
    assert t.rank == 2


def _assert_pairing_invariants(t):
    stabs, destabs = t.stabilizers(), t.destabilizers()
    for i, s in enumerate(stabs):
        for j, other in enumerate(stabs):
            assert s.commutes_with(other)
        for j, d in enumerate(destabs):
            expected = i == j
            assert (not s.commutes_with(d)) == expected


@pytest.mark.parametrize("seed", range(15))
def test_random_sequences_match_density_matrix_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    t = Tableau(n)
    dm = DensityMatrixState(n)
    for _ in range(12):
        p = PauliOperator(n, int(rng.integers(0, 2 ** n)),
                          int(rng.integers(0, 2 ** n)),
                          int(rng.integers(0, 2)) * 2)
        prob_plus = dm.probability_plus(p)
        outcome, det = t.measure(p, ForcedOutcomes(+1 if prob_plus > 0 else -1))
        # Tableau determinism must agree with the oracle's branch structure.
        assert det == (prob_plus in (0.0, 1.0))
        if det:
            assert prob_plus == (1.0 if outcome == +1 else 0.0)
        dm.project(p, outcome)
        for s in t.stabilizers():
            assert dm.is_stabilized_by(s)
        _assert_pairing_invariants(t)


def test_span_contains_modes():
    gens = [P("+X0*X1", 2), P("+Z0*Z1", 2)]
    assert span_contains(gens, P("-Y0*Y1", 2), "exact")
    assert not span_contains(gens, P("+Y0*Y1", 2), "exact")
    assert span_contains(gens, P("+Y0*Y1", 2), "up_to_sign")
    assert not span_contains(gens, P("+X0", 2), "up_to_sign")


def test_tableau_dump_load_round_trip():
    t = tableau_from(["-X0*X1", "+Z1*Z2", "+Y0*Y1*X2"], 3)
    again = Tableau.loads(t.dumps(), 3)
    assert group_equal(t, again, "exact")
