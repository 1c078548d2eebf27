"""Measurement schedule execution and instantaneous stabilizer group checks.

The cyclic three-step schedule measures all checks of one color per round
(default order R, B, G).  After the two warm-up rounds, each round also
records one color of face stabilizers, reconstructed from the check
outcomes of the last two rounds; the tableau's deterministic value is
asserted to agree, which ties the classical record to the quantum state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import gf2
from .lattice import COLORS, Color, ColorLattice, complement, count_params
from .pauli import PauliOperator, product
from .rand import spawn_rng
from .tableau import OutcomeSource, RandomOutcomes, Tableau

DEFAULT_ORDER = (Color.R, Color.B, Color.G)


@dataclass(frozen=True)
class RoundPlan:
    color: Color
    checks: tuple[tuple[int, PauliOperator], ...]  # ascending check id
    record_color: Optional[Color]
    record_faces: tuple[int, ...]


def make_plan(lattice: ColorLattice, start_color: Color = Color.R,
              order: Sequence[Color] = DEFAULT_ORDER) -> list[RoundPlan]:
    """Cyclic list of three round plans starting from start_color.

    Checks within a round commute and touch each qubit at most once, so
    the in-round order is algebraically irrelevant; ascending check id is
    used to keep RNG streams reproducible.
    """
    order = list(order)
    if sorted(c.value for c in order) != ["B", "G", "R"]:
        raise ValueError("order must be a permutation of R, G, B")
    shift = order.index(start_color)
    order = order[shift:] + order[:shift]
    plans = []
    face_ids = {c: tuple(i for i, f in enumerate(lattice.faces) if f.color == c)
                for c in COLORS}
    for i, c in enumerate(order):
        rec = complement(order[i - 1], c)
        plans.append(RoundPlan(
            color=c,
            checks=tuple(sorted(lattice.checks_of_color(c))),
            record_color=rec,
            record_faces=face_ids[rec],
        ))
    return plans


class ScheduleState:
    """Tableau plus the classical measurement record of a running schedule."""

    def __init__(self, lattice: ColorLattice,
                 plans: Optional[list[RoundPlan]] = None,
                 check_records: bool = True):
        self.lattice = lattice
        self.plans = plans if plans is not None else make_plan(lattice)
        self.tableau = Tableau(lattice.n_vertices)
        self.t = 0
        self.outcomes: dict[tuple[int, int], int] = {}  # (check id, round) -> sign
        self.records: dict[tuple[int, int], int] = {}  # (face id, round) -> sign
        self.round_colors: list[Color] = []
        self.check_records = check_records

    def plan_for(self, t: int) -> RoundPlan:
        return self.plans[t % len(self.plans)]

    def copy(self) -> "ScheduleState":
        st = ScheduleState(self.lattice, self.plans, self.check_records)
        st.tableau = self.tableau.copy()
        st.t = self.t
        st.outcomes = dict(self.outcomes)
        st.records = dict(self.records)
        st.round_colors = list(self.round_colors)
        return st


def _face_reconstruction(lattice: ColorLattice, face_id: int,
                         prev_color: Color, cur_color: Color):
    """Edge checks reconstructing P_f from two successive rounds, plus the
    fixed +-1 factor relating their ordered product to the face stabilizer."""
    face = lattice.faces[face_id]
    k = len(face.vertices)
    prev_edges, cur_edges = [], []
    for i in range(k):
        pair = tuple(sorted((face.vertices[i], face.vertices[(i + 1) % k])))
        ei = lattice.edge_index[pair]
        c = lattice.edge_colors[ei]
        if c == prev_color:
            prev_edges.append(ei)
        elif c == cur_color:
            cur_edges.append(ei)
        else:
            raise ValueError(
                f"face {face_id} (color {face.color.value}) cannot be recorded "
                f"after rounds {prev_color.value},{cur_color.value}")
    prev_edges.sort()
    cur_edges.sort()
    prod = product([lattice.edge_check(e) for e in prev_edges + cur_edges],
                   n=lattice.n_vertices)
    stab = lattice.face_stabilizer(face_id)
    if (prod.x, prod.z) != (stab.x, stab.z):
        raise AssertionError(f"face {face_id} edge product does not match stabilizer")
    delta = (prod.phase - stab.phase) % 4
    if delta % 2 != 0:
        raise AssertionError(f"face {face_id} edge product has imaginary phase")
    return prev_edges, cur_edges, (+1 if delta == 0 else -1)


def run_round(state: ScheduleState, plan: RoundPlan,
              source: OutcomeSource) -> ScheduleState:
    """Measure one round of checks and record the due face stabilizers.

    Mutates and returns the state.  Recorded signs are reconstructed from
    reported outcomes (the physical convention); in a noiseless run the
    tableau's deterministic value must agree and this is asserted.
    """
    lattice = state.lattice
    t = state.t
    for check_id, op in plan.checks:
        outcome, _ = state.tableau.measure(op, source)
        state.outcomes[(check_id, t)] = outcome
    if t >= 1:
        prev_color = state.round_colors[-1]
        for fid in plan.record_faces:
            prev_edges, cur_edges, factor = _face_reconstruction(
                lattice, fid, prev_color, plan.color)
            sign = factor
            for e in prev_edges:
                sign *= state.outcomes[(e, t - 1)]
            for e in cur_edges:
                sign *= state.outcomes[(e, t)]
            state.records[(fid, t)] = sign
            if state.check_records:
                det = state.tableau.expansion_sign(lattice.face_stabilizer(fid))
                if det is None or det != sign:
                    raise AssertionError(
                        f"face {fid} at round {t}: reconstructed sign {sign} vs "
                        f"tableau {det}")
    state.round_colors.append(plan.color)
    state.t += 1
    return state


def run_rounds(state: ScheduleState, n: int, source: OutcomeSource) -> ScheduleState:
    for _ in range(n):
        run_round(state, state.plan_for(state.t), source)
    return state


def warmed_up_state(lattice: ColorLattice, rounds: int = 3,
                    source: Optional[OutcomeSource] = None,
                    seed: Optional[int] = None) -> ScheduleState:
    """Fresh state advanced through the warm-up (and more, if asked)."""
    if source is None:
        source = RandomOutcomes(spawn_rng(0 if seed is None else seed))
    state = ScheduleState(lattice)
    return run_rounds(state, rounds, source)


# ---------------------------------------------------------------------------
# ISG contract


@dataclass
class ISGReport:
    ok: bool
    rank: int
    expected_rank: int
    phase: str
    missing: list[str] = field(default_factory=list)
    unexpected: int = 0

    def __str__(self):
        status = "ok" if self.ok else "FAIL"
        return (f"ISG {status}: phase={self.phase} rank={self.rank} "
                f"expected={self.expected_rank} missing={len(self.missing)}")


def expected_isg_generators(state: ScheduleState) -> tuple[list[PauliOperator], str]:
    """Generating set the tableau group must equal (up to signs)."""
    lattice = state.lattice
    if state.t == 0:
        raise ValueError("no rounds have run")
    last = state.round_colors[-1]
    gens = [op for _, op in lattice.checks_of_color(last)]
    recorded: set[Color] = set()
    for i in range(1, state.t):
        recorded.add(complement(state.round_colors[i - 1], state.round_colors[i]))
    for fid, f in enumerate(lattice.faces):
        if f.color in recorded:
            gens.append(lattice.face_stabilizer(fid))
    phase = f"warmup-{state.t}" if state.t < 3 else "steady"
    return gens, phase


def logical_qubit_count(lattice: ColorLattice) -> int:
    """Protected qubits of the running code (not the subsystem count n_L)."""
    if lattice.topology == "torus":
        return 2 * lattice.genus if lattice.orientable else lattice.genus
    return len(lattice.boundaries) // 3 - 1


def assert_isg(state: ScheduleState, lattice: Optional[ColorLattice] = None) -> ISGReport:
    """Compare the tableau group against the phase's expected generators."""
    lattice = lattice or state.lattice
    gens, phase = expected_isg_generators(state)
    expected_rank = gf2.rank(g.symplectic() for g in gens)
    rank = state.tableau.rank
    missing = [str(g) for g in gens if not state.tableau.contains(g, "up_to_sign")]
    ok = (rank == expected_rank) and not missing
    if state.t >= 3:
        ok = ok and rank == lattice.n_vertices - logical_qubit_count(lattice)
    return ISGReport(ok=ok, rank=rank, expected_rank=expected_rank,
                     phase=phase, missing=missing)


# ---------------------------------------------------------------------------
# inner logical operators


def inner_logicals(lattice: ColorLattice) -> list[PauliOperator]:
    """Homologically nontrivial check-cycle operators; empty on disks.

    On the torus the two wrapping cycles are read off the brick-wall
    vertex names; phases are normalized away (class-level objects).
    """
    if lattice.topology == "disk":
        return []
    if lattice.family.get("family") != "torus":
        raise ValueError("inner logicals implemented for the honeycomb torus")
    rows, cols = lattice.family["rows"], lattice.family["cols"]
    name_to_id = {name: i for i, name in enumerate(lattice.names)}

    def edge_op(u_name, v_name):
        pair = tuple(sorted((name_to_id[u_name], name_to_id[v_name])))
        return lattice.edge_check(lattice.edge_index[pair])

    ops = []
    vertical = []
    for i in range(rows):
        vertical.append(edge_op(("A", i, 0), ("B", i, 0)))
        vertical.append(edge_op(("B", i, 0), ("A", (i + 1) % rows, 0)))
    horizontal = []
    for j in range(cols):
        horizontal.append(edge_op(("A", 0, j), ("B", 0, j)))
        horizontal.append(edge_op(("B", 0, j), ("A", 0, (j + 1) % cols)))
    for chain in (vertical, horizontal):
        op = product(chain, n=lattice.n_vertices)
        ops.append(PauliOperator(lattice.n_vertices, op.x, op.z, 0))
    return ops


@dataclass
class CertReport:
    passed: bool
    trials: int
    rounds: int
    max_rank: int
    rank_cap: int
    violations: list[str] = field(default_factory=list)


def certify_never_measured(lattice: ColorLattice, rounds: int, trials: int,
                           seed: int = 0) -> CertReport:
    """Random-outcome runs never make an inner logical deterministic.

    Checks, per round of every trial: the tableau rank stays capped at
    n_v - k, and no inner logical (nor any product with group elements,
    which membership modulo the group covers) is in the tableau.
    """
    logicals = inner_logicals(lattice)
    k = logical_qubit_count(lattice)
    cap = lattice.n_vertices - k
    max_rank = 0
    violations = []
    for trial in range(trials):
        source = RandomOutcomes(spawn_rng(seed, trial))
        state = ScheduleState(lattice)
        last_rank = 0
        for _ in range(rounds):
            run_round(state, state.plan_for(state.t), source)
            rank = state.tableau.rank
            max_rank = max(max_rank, rank)
            if rank < last_rank:
                violations.append(f"trial {trial} round {state.t}: rank decreased")
            last_rank = rank
            if rank > cap:
                violations.append(
                    f"trial {trial} round {state.t}: rank {rank} exceeds cap {cap}")
            for li, op in enumerate(logicals):
                if state.tableau.contains(op, "up_to_sign"):
                    violations.append(
                        f"trial {trial} round {state.t}: inner logical {li} "
                        f"became deterministic")
    return CertReport(passed=not violations, trials=trials, rounds=rounds,
                      max_rank=max_rank, rank_cap=cap, violations=violations)


# ---------------------------------------------------------------------------
# equivalent homological code view


@dataclass
class HomologicalView:
    color: Color
    edge_qubits: tuple[int, ...]  # edge ids of the last-measured color
    zbar: dict[int, PauliOperator]
    xbar: dict[int, PauliOperator]
    plaquette_faces: tuple[int, ...]
    vertex_faces: tuple[int, ...]
    boundary_labels: dict[int, str]  # arc index -> smooth | rough
    logical_count: int


def homological_view(state: ScheduleState,
                     lattice: Optional[ColorLattice] = None) -> HomologicalView:
    """Per-round effective homological code.

    Each just-measured edge is projected onto one effective qubit with
    logical pair Zbar = P^c on one endpoint, Xbar = the complementary
    letter on both.  Faces of the measured color become plaquette-type
    stabilizers, the others vertex-type; same-color boundaries are smooth.
    """
    lattice = lattice or state.lattice
    if state.t < 1:
        raise ValueError("homological view requires at least one completed round")
    c = state.round_colors[-1]
    ctilde = c.next
    edge_ids = tuple(i for i, col in enumerate(lattice.edge_colors) if col == c)
    zbar, xbar = {}, {}
    n = lattice.n_vertices
    for ei in edge_ids:
        u, v = lattice.edges[ei]
        zbar[ei] = PauliOperator.from_pairs(n, [(u, c.pauli_letter)])
        xbar[ei] = PauliOperator.from_pairs(
            n, [(u, ctilde.pauli_letter), (v, ctilde.pauli_letter)])
    return HomologicalView(
        color=c,
        edge_qubits=edge_ids,
        zbar=zbar,
        xbar=xbar,
        plaquette_faces=tuple(i for i, f in enumerate(lattice.faces) if f.color == c),
        vertex_faces=tuple(i for i, f in enumerate(lattice.faces) if f.color != c),
        boundary_labels={ai: ("smooth" if arc.color == c else "rough")
                         for ai, arc in enumerate(lattice.boundaries)},
        logical_count=logical_qubit_count(lattice),
    )


def effective_expression(lattice: ColorLattice, view: HomologicalView,
                         face_id: int):
    """Express a face stabilizer over the effective qubits.

    Returns ("Z", edge ids) for plaquette-type faces and ("X", edge ids)
    for vertex-type ones; the expansion is exact modulo the just-measured
    edge checks (GF(2) solve over the dictionary operators).
    """
    stab = lattice.face_stabilizer(face_id)
    kind = "Z" if lattice.faces[face_id].color == view.color else "X"
    table = view.zbar if kind == "Z" else view.xbar
    rows = []
    keys = []
    for ei in view.edge_qubits:
        rows.append(table[ei].symplectic())
        keys.append(ei)
    for ei in view.edge_qubits:
        rows.append(lattice.edge_check(ei).symplectic())
        keys.append(None)
    basis = gf2.GF2Basis()
    for r in rows:
        basis.add(r)
    combo = basis.solve(stab.symplectic())
    if combo is None:
        raise AssertionError(
            f"face {face_id} does not map onto the effective-qubit dictionary")
    used = [keys[i] for i in range(len(keys)) if (combo >> i) & 1 and keys[i] is not None]
    return kind, sorted(used)
