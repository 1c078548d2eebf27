"""Colored-lattice construction and validation.

A ColorLattice is a 3-valent graph with 3-colorable faces on a torus or a
disk.  Disk lattices carry colored boundary arcs and corner vertices.

Planar patches are generated through the dual picture: a triangulated disk
whose vertices are 3-colored.  Triangles become qubits, interior vertices
become faces, and a handful of boundary "super" vertices become the colored
boundary arcs (each arc is one big removed face).  Corners are the triangles
wedged between two consecutive super vertices.  This is the only way the
boundary constraints close up: inside an arc every boundary edge must border
the same missing face, so arcs cannot be carved out of a plain tiling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .pauli import PauliOperator


class Color(Enum):
    R = "R"
    G = "G"
    B = "B"

    @property
    def pauli_letter(self) -> str:
        return {"R": "X", "G": "Y", "B": "Z"}[self.value]

    @property
    def next(self) -> "Color":
        return _NEXT[self]

    @property
    def prev(self) -> "Color":
        return _NEXT[_NEXT[self]]

    def __lt__(self, other):
        return self.value < other.value


_NEXT = {Color.R: Color.G, Color.G: Color.B, Color.B: Color.R}
COLORS = (Color.R, Color.G, Color.B)


def complement(a: Color, b: Color) -> Color:
    """The third color."""
    if a == b:
        raise ValueError(f"no complement of equal colors {a}")
    return next(c for c in COLORS if c not in (a, b))


class LatticeBuildError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    vertices: tuple[int, ...]  # cyclic order
    color: Color


@dataclass(frozen=True)
class BoundaryArc:
    vertices: tuple[int, ...]  # path, both endpoint corners included
    color: Color


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    element: object = None

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, element=None):
        self.violations.append(Violation(code, message, element))

    def raise_if_invalid(self):
        if not self.ok:
            lines = "\n".join(str(v) for v in self.violations)
            raise LatticeBuildError(f"invalid lattice:\n{lines}")


@dataclass(frozen=True)
class LatticeParams:
    n_v: int
    n_e: int
    n_f: int
    n_c: int
    k: int
    n_g: int
    n_s: int
    n_L: int


class ColorLattice:
    """Static geometry consumed by the schedule, decoder and surgery.

    Immutable after construction; all caches are derived lazily but never
    mutate the defining data.
    """

    def __init__(self, *, n_vertices: int, edges: list[tuple[int, int]],
                 edge_colors: list[Color], faces: list[Face],
                 corners: list[tuple[int, Color]],
                 boundaries: list[BoundaryArc], topology: str,
                 genus: int, orientable: bool = True,
                 coords: Optional[list[tuple[float, float]]] = None,
                 names: Optional[list] = None,
                 family: Optional[dict] = None):
        if topology not in ("torus", "disk"):
            raise LatticeBuildError(f"unknown topology {topology!r}")
        self.n_vertices = n_vertices
        self.edges = [tuple(sorted(e)) for e in edges]
        self.edge_colors = list(edge_colors)
        self.faces = list(faces)
        self.corners = list(corners)
        self.boundaries = list(boundaries)
        self.topology = topology
        self.genus = genus
        self.orientable = orientable
        self.coords = coords
        self.names = names
        self.family = family or {}
        self._caches: dict = {}

    # -- derived lookups -------------------------------------------------

    def _cache(self, key, fn):
        if key not in self._caches:
            self._caches[key] = fn()
        return self._caches[key]

    @property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return self._cache("edge_index",
                           lambda: {e: i for i, e in enumerate(self.edges)})

    @property
    def vertex_edges(self) -> list[list[int]]:
        def build():
            out = [[] for _ in range(self.n_vertices)]
            for i, (u, v) in enumerate(self.edges):
                out[u].append(i)
                out[v].append(i)
            return out
        return self._cache("vertex_edges", build)

    @property
    def vertex_faces(self) -> list[list[int]]:
        def build():
            out = [[] for _ in range(self.n_vertices)]
            for fi, f in enumerate(self.faces):
                for v in f.vertices:
                    out[v].append(fi)
            return out
        return self._cache("vertex_faces", build)

    @property
    def edge_faces(self) -> list[list[int]]:
        def build():
            out = [[] for _ in range(len(self.edges))]
            for fi, f in enumerate(self.faces):
                k = len(f.vertices)
                for i in range(k):
                    pair = tuple(sorted((f.vertices[i], f.vertices[(i + 1) % k])))
                    ei = self.edge_index.get(pair)
                    if ei is not None:
                        out[ei].append(fi)
            return out
        return self._cache("edge_faces", build)

    @property
    def corner_colors(self) -> dict[int, Color]:
        return self._cache("corner_colors", lambda: dict(self.corners))

    def face_of_color_at(self, v: int, color: Color) -> Optional[int]:
        """The face of the given color containing v, if any."""
        for fi in self.vertex_faces[v]:
            if self.faces[fi].color == color:
                return fi
        return None

    # -- check operators ---------------------------------------------------

    def edge_check(self, ei: int) -> PauliOperator:
        u, v = self.edges[ei]
        letter = self.edge_colors[ei].pauli_letter
        return PauliOperator.from_pairs(self.n_vertices, [(u, letter), (v, letter)])

    def corner_check(self, vertex: int) -> PauliOperator:
        color = self.corner_colors[vertex]
        return PauliOperator.from_pairs(self.n_vertices, [(vertex, color.pauli_letter)])

    def face_stabilizer(self, fi: int) -> PauliOperator:
        f = self.faces[fi]
        letter = f.color.pauli_letter
        return PauliOperator.from_pairs(self.n_vertices, [(v, letter) for v in f.vertices])

    def checks_of_color(self, color: Color) -> list[tuple[int, PauliOperator]]:
        """(check id, operator) pairs: edges first, then corner checks.

        Check ids are stable: edge index, or n_edges + corner position.
        """
        out = []
        for ei, c in enumerate(self.edge_colors):
            if c == color:
                out.append((ei, self.edge_check(ei)))
        for ci, (v, c) in enumerate(self.corners):
            if c == color:
                out.append((len(self.edges) + ci, self.corner_check(v)))
        return out

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_corners(self) -> int:
        return len(self.corners)

    def __repr__(self):
        return (f"ColorLattice({self.topology}, n_v={self.n_vertices}, "
                f"n_e={self.n_edges}, n_f={self.n_faces}, n_c={self.n_corners})")


# ---------------------------------------------------------------------------
# validation


def validate(lat: ColorLattice) -> ValidationReport:
    """Check every structural invariant; report-based, never raises."""
    rep = ValidationReport()
    corner_set = dict(lat.corners)

    for i, (u, v) in enumerate(lat.edges):
        if not (0 <= u < lat.n_vertices and 0 <= v < lat.n_vertices) or u == v:
            rep.add("edge-endpoints", f"edge {i} has bad endpoints {(u, v)}", i)
    if len(set(lat.edges)) != len(lat.edges):
        rep.add("edge-duplicates", "duplicate edges present")

    # Vertex degrees: corners have 2 edges and 1 face, others 3 edges.
    for v in range(lat.n_vertices):
        deg = len(lat.vertex_edges[v])
        nf = len(lat.vertex_faces[v])
        if v in corner_set:
            if deg != 2:
                rep.add("corner-degree", f"corner {v} has {deg} edges (want 2)", v)
            if nf != 1:
                rep.add("corner-faces", f"corner {v} belongs to {nf} faces (want 1)", v)
            elif lat.faces[lat.vertex_faces[v][0]].color != corner_set[v]:
                rep.add("corner-color",
                        f"corner {v} color differs from its face color", v)
        else:
            if deg != 3:
                rep.add("vertex-degree", f"vertex {v} has {deg} edges (want 3)", v)
            if nf == 0:
                rep.add("vertex-no-face", f"vertex {v} belongs to no face", v)

    # Face structure and face-face coloring.
    for fi, f in enumerate(lat.faces):
        k = len(f.vertices)
        if len(set(f.vertices)) != k:
            rep.add("face-repeat", f"face {fi} repeats vertices", fi)
        for i in range(k):
            pair = tuple(sorted((f.vertices[i], f.vertices[(i + 1) % k])))
            if pair not in lat.edge_index:
                rep.add("face-cycle", f"face {fi} cycle pair {pair} is not an edge", fi)

    arc_of_edge: dict[int, int] = {}
    if lat.topology == "disk":
        for ai, arc in enumerate(lat.boundaries):
            for i in range(len(arc.vertices) - 1):
                pair = tuple(sorted((arc.vertices[i], arc.vertices[i + 1])))
                ei = lat.edge_index.get(pair)
                if ei is None:
                    rep.add("arc-edge", f"arc {ai} pair {pair} is not an edge", ai)
                else:
                    arc_of_edge[ei] = ai

    for ei, fs in enumerate(lat.edge_faces):
        if len(fs) == 2:
            c1, c2 = lat.faces[fs[0]].color, lat.faces[fs[1]].color
            if c1 == c2:
                rep.add("adjacent-face-color",
                        f"faces {fs} sharing edge {ei} are both {c1.value}", ei)
            elif lat.edge_colors[ei] != complement(c1, c2):
                rep.add("edge-color",
                        f"edge {ei} color {lat.edge_colors[ei].value} is not the "
                        f"complement of its faces", ei)
        elif len(fs) == 1:
            if lat.topology == "torus":
                rep.add("torus-open-edge", f"edge {ei} borders one face on a torus", ei)
                continue
            ai = arc_of_edge.get(ei)
            if ai is None:
                rep.add("edge-unassigned",
                        f"boundary edge {ei} lies on no boundary arc", ei)
                continue
            fc = lat.faces[fs[0]].color
            ac = lat.boundaries[ai].color
            if fc == ac:
                rep.add("arc-face-color",
                        f"edge {ei}: face color equals arc color {fc.value}", ei)
            elif lat.edge_colors[ei] != complement(fc, ac):
                rep.add("edge-color",
                        f"boundary edge {ei} color is not the complement of "
                        f"face and arc", ei)
        else:
            rep.add("edge-face-count",
                    f"edge {ei} belongs to {len(fs)} faces", ei)

    if lat.topology == "torus":
        if lat.corners or lat.boundaries:
            rep.add("torus-boundary", "torus lattice has corners or boundaries")
        if lat.n_vertices - lat.n_edges + lat.n_faces != 0:
            rep.add("euler", "torus Euler count n_v - n_e + n_f != 0")
        if 3 * lat.n_vertices != 2 * lat.n_edges:
            rep.add("trivalence", "3 n_v != 2 n_e on torus")
    else:
        _validate_boundary(lat, rep)
        if lat.n_faces - lat.n_edges + lat.n_vertices != 1:
            rep.add("euler", "disk Euler count n_f - n_e + n_v != 1")
        if 3 * lat.n_vertices != 2 * lat.n_edges + lat.n_corners:
            rep.add("trivalence", "3 n_v != 2 n_e + n_c on disk")

    return rep


def _validate_boundary(lat: ColorLattice, rep: ValidationReport):
    corner_set = dict(lat.corners)
    arcs = lat.boundaries
    if not arcs:
        rep.add("no-boundary", "disk lattice with no boundary arcs")
        return
    if len(arcs) % 3 != 0:
        rep.add("arc-count", f"{len(arcs)} boundary arcs is not a multiple of 3")

    for ai, arc in enumerate(arcs):
        vs = arc.vertices
        if len(vs) < 2:
            rep.add("arc-short", f"arc {ai} has fewer than 2 vertices", ai)
            continue
        head, tail = vs[0], vs[-1]
        for endpoint in (head, tail):
            if endpoint not in corner_set:
                rep.add("arc-endpoint", f"arc {ai} endpoint {endpoint} is not a corner", ai)
        for v in vs[1:-1]:
            if v in corner_set:
                rep.add("arc-interior-corner",
                        f"arc {ai} passes through corner {v}", ai)
        if head in corner_set and tail in corner_set:
            if corner_set[head] == corner_set[tail]:
                rep.add("even-boundary",
                        f"arc {ai} joins two {corner_set[head].value} corners; an "
                        f"even boundary must be a stabilizer, not a boundary", ai)
            elif len(vs) % 2 == 0:
                rep.add("odd-boundary",
                        f"arc {ai} has an even vertex count {len(vs)}", ai)
            if corner_set[head] == arc.color or corner_set[tail] == arc.color:
                rep.add("arc-corner-color",
                        f"arc {ai} color equals an endpoint corner color", ai)

    # Arcs chain into a single boundary cycle with colors cycling R,G,B.
    # Arc paths are undirected: chain by shared endpoint corners either way.
    by_end: dict[int, list[int]] = {}
    for ai, arc in enumerate(arcs):
        by_end.setdefault(arc.vertices[0], []).append(ai)
        by_end.setdefault(arc.vertices[-1], []).append(ai)
    order = [0]
    seen = {0}
    tail = arcs[0].vertices[-1]
    while len(order) < len(arcs):
        nxts = [ai for ai in by_end.get(tail, []) if ai not in seen]
        if not nxts:
            rep.add("boundary-chain", "boundary arcs do not chain into one cycle")
            return
        ai = nxts[0]
        order.append(ai)
        seen.add(ai)
        ends = (arcs[ai].vertices[0], arcs[ai].vertices[-1])
        tail = ends[1] if ends[0] == tail else ends[0]
    if tail != arcs[0].vertices[0]:
        rep.add("boundary-chain", "boundary arc chain does not close")
        return
    colors = [arcs[ai].color for ai in order]
    fwd = all(colors[(i + 1) % len(colors)] == colors[i].next for i in range(len(colors)))
    bwd = all(colors[(i + 1) % len(colors)] == colors[i].prev for i in range(len(colors)))
    if not (fwd or bwd):
        rep.add("boundary-cycle-colors",
                f"arc colors {[c.value for c in colors]} do not cycle through R,G,B")


# ---------------------------------------------------------------------------
# parameter counting


def count_params(lat: ColorLattice) -> LatticeParams:
    """Counting identities; requires a lattice that passes validate()."""
    validate(lat).raise_if_invalid()
    n_v, n_e, n_f, n_c = lat.n_vertices, lat.n_edges, lat.n_faces, lat.n_corners
    if lat.topology == "torus":
        k = 2 * lat.genus if lat.orientable else lat.genus
        n_g = n_e - 1
        n_s = n_f - 1 + k
    else:
        k = 0
        n_g = n_e + n_c - 1
        n_s = n_f
    n_L = n_v - (n_g - n_s) // 2 - n_s
    if (n_g - n_s) % 2 != 0:
        raise LatticeBuildError("n_g - n_s is odd; counting identities violated")
    if n_L != 0:
        raise LatticeBuildError(f"subsystem logical count n_L = {n_L} != 0")
    return LatticeParams(n_v, n_e, n_f, n_c, k, n_g, n_s, n_L)


# ---------------------------------------------------------------------------
# torus builder (direct honeycomb construction)


def build_torus_honeycomb(rows: int, cols: int) -> ColorLattice:
    """Honeycomb lattice on a torus in brick-wall indexing.

    Faces f(i,j) are 3-colored by (i - j) mod 3, which closes periodically
    only when both periods are multiples of 3.
    """
    if rows <= 0 or cols <= 0:
        raise LatticeBuildError("rows and cols must be positive")
    if rows % 3 != 0 or cols % 3 != 0:
        raise LatticeBuildError(
            f"honeycomb torus needs rows and cols to be multiples of 3 for the "
            f"face 3-coloring to close; got rows={rows}, cols={cols}")

    def A(i, j):
        return 2 * ((i % rows) * cols + (j % cols))

    def B(i, j):
        return A(i, j) + 1

    n_v = 2 * rows * cols
    names: list = [None] * n_v
    coords: list = [None] * n_v
    for i in range(rows):
        for j in range(cols):
            names[A(i, j)] = ("A", i, j)
            names[B(i, j)] = ("B", i, j)
            coords[A(i, j)] = (2.0 * j + i, 2.0 * i)
            coords[B(i, j)] = (2.0 * j + i + 1.0, 2.0 * i + 1.0)

    edge_set: dict[tuple[int, int], Color] = {}
    faces = []
    for i in range(rows):
        for j in range(cols):
            cycle = (A(i, j), B(i, j), A(i + 1, j), B(i + 1, j - 1),
                     A(i + 1, j - 1), B(i, j - 1))
            faces.append(Face(cycle, COLORS[(i - j) % 3]))
    # Edge colors from incident face pairs.
    pair_faces: dict[tuple[int, int], list[Color]] = {}
    for f in faces:
        k = len(f.vertices)
        for t in range(k):
            pair = tuple(sorted((f.vertices[t], f.vertices[(t + 1) % k])))
            pair_faces.setdefault(pair, []).append(f.color)
    for pair, cs in pair_faces.items():
        if len(cs) != 2 or cs[0] == cs[1]:
            raise LatticeBuildError(f"torus edge {pair} has bad face colors {cs}")
        edge_set[pair] = complement(cs[0], cs[1])

    edges = sorted(edge_set)
    return ColorLattice(
        n_vertices=n_v, edges=edges,
        edge_colors=[edge_set[e] for e in edges],
        faces=faces, corners=[], boundaries=[],
        topology="torus", genus=1, orientable=True,
        coords=coords, names=names,
        family={"family": "torus", "rows": rows, "cols": cols},
    )


# ---------------------------------------------------------------------------
# dual-triangulation machinery for planar patches


@dataclass
class Triangulation:
    """3-colored triangulated disk with super vertices marking the arcs.

    vertex_colors maps opaque vertex keys to colors; triangles are frozensets
    of three keys; supers lists the boundary super vertices in cyclic order.
    runs maps each super to its ordered region-vertex run (both endpoint
    corner vertices included).
    """

    vertex_colors: dict
    triangles: list[frozenset]
    supers: list
    positions: dict = field(default_factory=dict)
    runs: dict = field(default_factory=dict)


def dualize(tri: Triangulation, family: Optional[dict] = None) -> ColorLattice:
    """Primal color lattice of a triangulated disk: triangles become qubits,
    interior vertices faces, super vertices boundary arcs."""
    tri_keys = sorted(tri.triangles, key=lambda t: tuple(sorted(map(str, t))))
    index = {t: i for i, t in enumerate(tri_keys)}
    n_v = len(tri_keys)
    super_set = set(tri.supers)

    # Triangulation edge -> incident triangles.
    edge_tris: dict[frozenset, list[frozenset]] = {}
    for t in tri.triangles:
        a, b, c = sorted(t, key=str)
        for pair in (frozenset((a, b)), frozenset((a, c)), frozenset((b, c))):
            edge_tris.setdefault(pair, []).append(t)

    edges = []
    edge_colors = []
    for pair, ts in sorted(edge_tris.items(), key=lambda kv: tuple(sorted(map(str, kv[0])))):
        if len(ts) > 2:
            raise LatticeBuildError(f"triangulation edge {set(pair)} in {len(ts)} triangles")
        if len(ts) == 2:
            u, v = tuple(pair)
            cu, cv = tri.vertex_colors[u], tri.vertex_colors[v]
            if cu == cv:
                raise LatticeBuildError(f"adjacent triangulation vertices share color {cu}")
            edges.append(tuple(sorted((index[ts[0]], index[ts[1]]))))
            edge_colors.append(complement(cu, cv))

    order = sorted(range(len(edges)), key=lambda i: edges[i])
    edges = [edges[i] for i in order]
    edge_colors = [edge_colors[i] for i in order]

    # Fans: triangles around each vertex, ordered by walking shared edges.
    fans = {v: _fan_around(v, tri, edge_tris) for v in tri.vertex_colors}

    faces = []
    for v in sorted((v for v in tri.vertex_colors if v not in super_set), key=str):
        closed, fan = fans[v]
        if not closed:
            raise LatticeBuildError(f"interior triangulation vertex {v} has an open fan")
        faces.append(Face(tuple(index[t] for t in fan), tri.vertex_colors[v]))

    corners = []
    for t in tri.triangles:
        ss = [v for v in t if v in super_set]
        if len(ss) == 2:
            c = next(v for v in t if v not in super_set)
            corners.append((index[t], tri.vertex_colors[c]))
        elif len(ss) > 2:
            raise LatticeBuildError("triangle touching three super vertices")
    corners.sort()

    boundaries = []
    ns = len(tri.supers)
    for si, s in enumerate(tri.supers):
        closed, fan = fans[s]
        if closed:
            raise LatticeBuildError(f"super vertex {s} has a closed fan")
        # Orient each arc from the corner shared with the previous super to
        # the one shared with the next, so arcs chain head-to-tail.
        if ns > 1:
            prev_s = tri.supers[(si - 1) % ns]
            if prev_s not in fan[0]:
                fan = fan[::-1]
            if prev_s not in fan[0] or tri.supers[(si + 1) % ns] not in fan[-1]:
                raise LatticeBuildError(f"arc of super {s} does not end at corners")
        boundaries.append(BoundaryArc(tuple(index[t] for t in fan),
                                      tri.vertex_colors[s]))

    coords = None
    if tri.positions:
        coords = []
        for t in tri_keys:
            pts = [tri.positions[v] for v in t if v in tri.positions]
            coords.append((sum(p[0] for p in pts) / len(pts),
                           sum(p[1] for p in pts) / len(pts)))

    return ColorLattice(
        n_vertices=n_v, edges=edges, edge_colors=edge_colors, faces=faces,
        corners=corners, boundaries=boundaries, topology="disk", genus=0,
        coords=coords, names=[tuple(sorted(t, key=str)) for t in tri_keys],
        family=family,
    )


def _fan_around(v, tri: Triangulation, edge_tris) -> tuple[bool, list[frozenset]]:
    """Order the triangles around v by walking shared edges through v.

    Returns (closed, ordered fan).  Open fans start at one end so the result
    is a path; ties are broken canonically for reproducibility.
    """
    incident = [t for t in tri.triangles if v in t]
    if not incident:
        raise LatticeBuildError(f"isolated triangulation vertex {v}")
    # Adjacency between incident triangles: share an edge through v.
    adj = {id(t): [] for t in incident}
    by_id = {id(t): t for t in incident}
    for t in incident:
        for u in t:
            if u == v:
                continue
            pair = frozenset((v, u))
            for other in edge_tris[pair]:
                if other is not t and v in other:
                    adj[id(t)].append(other)
    degs = {k: len(vs) for k, vs in adj.items()}
    ends = [by_id[k] for k, d in degs.items() if d <= 1]
    closed = not ends
    if closed:
        start = min(incident, key=lambda t: tuple(sorted(map(str, t))))
    else:
        if len(ends) != 2:
            raise LatticeBuildError(f"fan around {v} is disconnected")
        start = min(ends, key=lambda t: tuple(sorted(map(str, t))))
    fan = [start]
    prev = None
    while True:
        nxts = [t for t in adj[id(fan[-1])] if t is not prev]
        if not nxts:
            break
        if len(fan) == 1 and closed:
            nxts = [min(nxts, key=lambda t: tuple(sorted(map(str, t))))]
        prev = fan[-1]
        fan.append(nxts[0])
        if closed and fan[-1] is start:
            fan.pop()
            break
        if len(fan) > len(incident):
            raise LatticeBuildError(f"fan walk around {v} did not terminate")
    if len(fan) != len(incident):
        raise LatticeBuildError(f"fan around {v} is disconnected")
    return closed, fan


# -- triangular-lattice regions for honeycomb-bulk patches ------------------

_TRI_FORMS = (
    lambda a, b: a - b,
    lambda a, b: 2 * a + b,
    lambda a, b: a + 2 * b,
    lambda a, b: b - a,
    lambda a, b: -2 * a - b,
    lambda a, b: -a - 2 * b,
)


def _tri_position(a: int, b: int) -> tuple[float, float]:
    return (1.7320508075688772 * (a + b / 2.0), 1.5 * b)


def _triangular_region(offsets) -> set[tuple[int, int]]:
    bound = max(offsets) + 2
    out = set()
    for a in range(-2 * bound, 2 * bound + 1):
        for b in range(-2 * bound, 2 * bound + 1):
            if all(f(a, b) <= t for f, t in zip(_TRI_FORMS, offsets)):
                out.add((a, b))
    return out


def _region_triangles(region: set) -> list[frozenset]:
    if not region:
        return []
    amin = min(a for a, _ in region) - 1
    amax = max(a for a, _ in region) + 1
    bmin = min(b for _, b in region) - 1
    bmax = max(b for _, b in region) + 1
    tris = []
    for a in range(amin, amax + 1):
        for b in range(bmin, bmax + 1):
            if (a, b) in region and (a + 1, b) in region and (a, b + 1) in region:
                tris.append(frozenset(((a, b), (a + 1, b), (a, b + 1))))
            if ((a + 1, b) in region and (a, b + 1) in region
                    and (a + 1, b + 1) in region):
                tris.append(frozenset(((a + 1, b), (a, b + 1), (a + 1, b + 1))))
    return tris


def _region_boundary_cycle(region: set, triangles: list[frozenset]) -> list:
    """Vertices of the region's outer boundary, in cyclic order."""
    edge_count: dict[frozenset, int] = {}
    for t in triangles:
        a, b, c = tuple(t)
        for pair in (frozenset((a, b)), frozenset((a, c)), frozenset((b, c))):
            edge_count[pair] = edge_count.get(pair, 0) + 1
    boundary_edges = [tuple(p) for p, n in edge_count.items() if n == 1]
    adj: dict = {}
    for u, v in boundary_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(vs) != 2 for vs in adj.values()):
        raise LatticeBuildError("region boundary is not a simple cycle")
    start = min(adj)
    cycle = [start, min(adj[start])]
    while True:
        nxt = [u for u in adj[cycle[-1]] if u != cycle[-2]]
        if not nxt:
            raise LatticeBuildError("region boundary walk failed")
        if nxt[0] == start:
            break
        cycle.append(nxt[0])
    return cycle


def _split_cycle_into_runs(cycle: list, color_of, arc_colors: list[Color]):
    """Corner indices splitting the boundary cycle into runs.

    Run i spans corners w_{i-1}..w_i (inclusive) and must avoid arc_colors[i];
    the corner between runs i and i+1 therefore has the complementary color.
    Returns the first valid corner index list, or None.
    """
    n = len(cycle)
    k = len(arc_colors)

    def corner_color(i):
        a, b = arc_colors[i % k], arc_colors[(i + 1) % k]
        return None if a == b else complement(a, b)

    if any(corner_color(i) is None for i in range(k)):
        return None

    # pos[0] = w_{k-1}; pos[i] = w_{i-1} for i >= 1 (w_i ends run i).
    def extend(pos: list[int]) -> Optional[list[int]]:
        m = len(pos)
        if m == k:
            # Verify the closing run k-1, from w_{k-2} back around to w_{k-1}.
            for j in range(pos[-1] + 1, pos[0] + n):
                if color_of(cycle[j % n]) == arc_colors[k - 1]:
                    return None
            return pos
        run_color = arc_colors[m - 1]
        want = corner_color(m - 1)
        j = pos[-1]
        while True:
            j += 1
            if j - pos[0] >= n:
                return None
            c = color_of(cycle[j % n])
            if c == run_color:
                return None
            if c == want:
                result = extend(pos + [j])
                if result is not None:
                    return result

    for start in range(n):
        if color_of(cycle[start]) != corner_color(k - 1):
            continue
        result = extend([start])
        if result is not None:
            # Normalize to [w_0, ..., w_{k-1}].
            return [r % n for r in result[1:]] + [result[0] % n]
    return None


def _attach_supers(region: Iterable, triangles: list[frozenset], cycle: list,
                   color_of, arc_colors: list[Color], positions,
                   super_prefix: str = "s") -> Optional[Triangulation]:
    """Cone one super vertex per boundary run; returns None if no valid split."""
    n = len(cycle)
    k = len(arc_colors)
    corner_idx = _split_cycle_into_runs(cycle, color_of, arc_colors)
    if corner_idx is None:
        return None
    # corner_idx[i] ends run i and starts run i+1 (mod k); run i spans
    # corner_idx[i-1] .. corner_idx[i].
    vertex_colors = {v: color_of(v) for v in region}
    tris = list(triangles)
    supers = []
    for ai in range(k):
        i0, i1 = corner_idx[ai - 1], corner_idx[ai]
        run = [cycle[i0]]
        j = i0
        while j % n != i1 % n:
            j = (j + 1) % n
            run.append(cycle[j])
        s = (super_prefix, ai)
        supers.append(s)
        vertex_colors[s] = arc_colors[ai]
        for t in range(len(run) - 1):
            tris.append(frozenset((s, run[t], run[t + 1])))
    for ai in range(k):
        # corner between run ai and run ai+1 sits at corner_idx[ai]
        tris.append(frozenset((supers[ai], supers[(ai + 1) % k],
                               cycle[corner_idx[ai]])))
    pos = dict(positions)
    pts = [positions[v] for v in region]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    runs = {}
    for ai in range(k):
        i0, i1 = corner_idx[ai - 1], corner_idx[ai]
        run = [cycle[i0]]
        j = i0
        while j % n != i1 % n:
            j = (j + 1) % n
            run.append(cycle[j])
        runs[supers[ai]] = run
        mx, my = positions[cycle[corner_idx[ai - 1]]]
        mx2, my2 = positions[cycle[corner_idx[ai]]]
        px, py = (mx + mx2) / 2, (my + my2) / 2
        pos[supers[ai]] = (cx + 1.8 * (px - cx), cy + 1.8 * (py - cy))
    return Triangulation(vertex_colors, tris, supers, pos, runs)


# ---------------------------------------------------------------------------
# frozen planar families
#
# Offsets below were calibrated once against validate() and are regression
# constants of this construction; growing every offset by one color period
# (3 for the triangular lattice, 2 per scale step in doubled Union-Jack
# coordinates) scales the patch while preserving all boundary colors.

_HEXAGON_BASE_OFFSETS = (1, 1, 2, 3, 3, 2)
_HEXAGON_ARCS = [Color.R, Color.G, Color.B, Color.R, Color.G, Color.B]


def _hexagon_triangulation(scale: int) -> Triangulation:
    if scale < 1:
        raise LatticeBuildError(f"scale must be >= 1, got {scale}")
    offsets = tuple(t + 3 * (scale - 1) for t in _HEXAGON_BASE_OFFSETS)
    region = _triangular_region(offsets)
    tris = _region_triangles(region)
    cycle = _region_boundary_cycle(region, tris)

    def color_of(v):
        return COLORS[(v[0] - v[1]) % 3]

    positions = {v: _tri_position(*v) for v in region}
    tri = _attach_supers(region, tris, cycle, color_of, _HEXAGON_ARCS, positions)
    if tri is None:
        tri = _attach_supers(region, tris, cycle, color_of,
                             _HEXAGON_ARCS[::-1], positions)
    if tri is None:
        raise LatticeBuildError(f"hexagon offsets {offsets} failed to split")
    return tri


def build_planar_hexagon(scale: int) -> ColorLattice:
    """Hexagonal patch with six odd boundaries cycling through the colors.

    Honeycomb bulk; boundary-ring faces are squares where the arcs trim
    the outermost hexagons.  Scale s has arcs of length 2s+1.
    """
    lat = dualize(_hexagon_triangulation(scale),
                  family={"family": "hexagon", "scale": scale})
    validate(lat).raise_if_invalid()
    return lat


_SQUAREOCT_ARC_CHOICES = (
    [Color.B, Color.R, Color.G, Color.B, Color.R, Color.G],
    [Color.B, Color.G, Color.R, Color.B, Color.G, Color.R],
)


def _squareoct_vertices_and_triangles(offsets):
    forms = (
        lambda x, y: y,
        lambda x, y: y - x,
        lambda x, y: -x - y,
        lambda x, y: -y,
        lambda x, y: x - y,
        lambda x, y: x + y,
    )

    def pos2(v):
        kind, i, j = v
        return (2 * i, 2 * j) if kind == "O" else (2 * i - 1, 2 * j - 1)

    bound = max(offsets) + 2
    region = set()
    for i in range(-bound, bound + 1):
        for j in range(-bound, bound + 1):
            for v in (("O", i, j), ("Q", i, j)):
                x, y = pos2(v)
                if all(f(x, y) <= t for f, t in zip(forms, offsets)):
                    region.add(v)
    tris = []
    for v in sorted(region):
        if v[0] != "Q":
            continue
        _, i, j = v
        o = {"a": ("O", i, j), "b": ("O", i - 1, j),
             "c": ("O", i, j - 1), "d": ("O", i - 1, j - 1)}
        for pa, pb in (("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")):
            t = frozenset((v, o[pa], o[pb]))
            if all(u in region for u in t):
                tris.append(t)
    covered = set()
    for t in tris:
        covered |= set(t)
    region &= covered
    tris = [t for t in tris if all(u in region for u in t)]
    positions = {v: tuple(map(float, pos2(v))) for v in region}
    return region, tris, positions


def build_planar_square_octagon(scale: int) -> ColorLattice:
    """Hexagonal patch with square-octagon bulk (4.8.8 squares stay blue)."""
    if scale < 1:
        raise LatticeBuildError(f"scale must be >= 1, got {scale}")
    offsets = (2 * scale, 2 * scale + 1, 2 * scale + 2,
               2 * scale, 2 * scale + 1, 2 * scale + 2)
    region, tris, positions = _squareoct_vertices_and_triangles(offsets)
    cycle = _region_boundary_cycle(region, tris)

    def color_of(v):
        kind, i, j = v
        if kind == "Q":
            return Color.B
        return Color.R if (i + j) % 2 == 0 else Color.G

    tri = None
    for arcs in _SQUAREOCT_ARC_CHOICES:
        tri = _attach_supers(region, tris, cycle, color_of, arcs, positions)
        if tri is None:
            tri = _attach_supers(region, tris, cycle, color_of, arcs[::-1],
                                 positions)
        if tri is not None:
            break
    if tri is None:
        raise LatticeBuildError(f"square-octagon offsets {offsets} failed to split")
    lat = dualize(tri, family={"family": "square-octagon", "scale": scale})
    validate(lat).raise_if_invalid()
    return lat


# ---------------------------------------------------------------------------
# merged patches: two hexagons fused into a nonagon


def _triangulate_seam(poly: list, colors: dict, required: frozenset,
                      super_keys: set) -> Optional[list[frozenset]]:
    """Triangulate the seam polygon under the coloring constraints.

    Diagonals must join distinctly-colored vertices and never two supers;
    `required` (the new corner triangle) must appear.  Returns the first
    triangulation found in a canonical search order.
    """
    n = len(poly)

    def allowed(i, j):
        u, v = poly[i], poly[j]
        if colors[u] == colors[v]:
            return False
        if u in super_keys and v in super_keys:
            # Only the pair inside the required corner triangle may meet.
            return frozenset((u, v)) < required
        return True

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def solve(i, j):
        """Triangulation of the sub-polygon poly[i..j] (edge (i,j) closing)."""
        if j - i < 2:
            return ()
        if not allowed(i, j):
            return None
        for m in range(i + 1, j):
            if not (allowed(i, m) and allowed(m, j)):
                continue
            left = solve(i, m)
            if left is None:
                continue
            right = solve(m, j)
            if right is None:
                continue
            return left + right + (frozenset((poly[i], poly[m], poly[j])),)
        return None

    # Fix the required triangle's polygon indices, then solve the two halves.
    req_idx = sorted(poly.index(v) for v in required)
    a, b, c = req_idx
    parts = []
    for (i, j) in ((a, b), (b, c)):
        part = solve(i, j)
        if part is None:
            return None
        parts.extend(part)
    outer = solve_outer(a, c, n, poly, allowed)
    if outer is None:
        return None
    parts.extend(outer)
    parts.append(required)
    return parts


def solve_outer(a, c, n, poly, allowed):
    """Triangulate the polygon piece outside indices a..c (wrapping)."""
    piece = [poly[i % n] for i in range(c, a + n + 1)]
    if len(piece) < 3:
        return ()
    sub = {v: i for i, v in enumerate(piece)}

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def solve(i, j):
        if j - i < 2:
            return ()
        if not allowed(poly.index(piece[i]), poly.index(piece[j])):
            return None
        for m in range(i + 1, j):
            if not (allowed(poly.index(piece[i]), poly.index(piece[m]))
                    and allowed(poly.index(piece[m]), poly.index(piece[j]))):
                continue
            left = solve(i, m)
            if left is None:
                continue
            right = solve(m, j)
            if right is None:
                continue
            return left + right + (frozenset((piece[i], piece[m], piece[j])),)
        return None

    return solve(0, len(piece) - 1)


def merge_hexagon_triangulations(scale: int, facing=(Color.R, Color.G)):
    """Stitch two hexagon patches along facing arcs into a nonagon.

    The left patch faces its arc of color facing[0], the right its arc of
    facing[1] (patch rotation is the choice of facing arc).  One pair of
    same-colored neighbor arcs fuses (their supers are identified), the
    right patch's corner qubit between the facing and fused-side arcs is
    removed, and the seam strip is retriangulated.
    """
    if facing[0] == facing[1]:
        raise LatticeBuildError(
            f"facing boundaries must have distinct colors, got "
            f"{facing[0].value} and {facing[1].value}: no valid seam coloring "
            f"exists between same-colored boundaries")
    base = _hexagon_triangulation(scale)
    k = len(base.supers)

    def relabel(tri: Triangulation, tag: str) -> Triangulation:
        def m(v):
            return (tag,) + (v if isinstance(v, tuple) else (v,))
        return Triangulation(
            vertex_colors={m(v): c for v, c in tri.vertex_colors.items()},
            triangles=[frozenset(m(v) for v in t) for t in tri.triangles],
            supers=[m(s) for s in tri.supers],
            positions={m(v): p for v, p in tri.positions.items()},
            runs={m(s): [m(v) for v in run] for s, run in tri.runs.items()},
        )

    left = relabel(base, "L")
    dx = max(p[0] for p in base.positions.values()) * 2.6
    right = relabel(base, "R")
    right.positions = {v: (p[0] + dx, p[1]) for v, p in right.positions.items()}

    def super_of_color(tri, color):
        idxs = [i for i, s in enumerate(tri.supers) if tri.vertex_colors[s] == color]
        return idxs[0]

    li = super_of_color(left, facing[0])
    ri = super_of_color(right, facing[1])
    sL, sR = left.supers[li], right.supers[ri]
    sL_prev, sL_next = left.supers[(li - 1) % k], left.supers[(li + 1) % k]
    sR_prev, sR_next = right.supers[(ri - 1) % k], right.supers[(ri + 1) % k]
    cL_prev, cL_next = left.vertex_colors[sL_prev], left.vertex_colors[sL_next]
    cR_prev, cR_next = right.vertex_colors[sR_prev], right.vertex_colors[sR_next]
    if cL_next != cR_prev:
        raise LatticeBuildError(
            f"fusing arcs must share a color; got {cL_next.value} vs "
            f"{cR_prev.value}")
    runL = left.runs[sL]
    runR = right.runs[sR]

    # Identify the fused supers.
    fused = sL_next

    def ident(v):
        return fused if v == sR_prev else v

    vertex_colors = {}
    for tri_ in (left, right):
        for v, c in tri_.vertex_colors.items():
            if v not in (sL, sR):
                vertex_colors[ident(v)] = c
    positions = {}
    for tri_ in (left, right):
        for v, p in tri_.positions.items():
            if v not in (sL, sR):
                positions[ident(v)] = p

    removed = frozenset((sR, sR_next, right.runs[sR][-1]))
    old_left = [t for t in left.triangles if sL in t]
    old_right = [t for t in right.triangles if sR in t]
    if removed not in old_right:
        raise LatticeBuildError("right corner qubit not found for removal")

    keep = ([t for t in left.triangles if sL not in t]
            + [frozenset(ident(v) for v in t)
               for t in right.triangles if sR not in t])

    # Seam polygon: left-prev super, left run, fused super, right run
    # (from the fused end to the new-corner end), right-next super.  The
    # removed corner's vertex stays: only its triangle (qubit) is dropped.
    poly = [sL_prev] + list(runL) + [fused] + [ident(v) for v in runR] + [sR_next]
    required = frozenset((sL_prev, sR_next, runL[0]))
    seam = _triangulate_seam(poly, {v: vertex_colors[v] for v in poly},
                             required, set(left.supers) | set(right.supers))
    if seam is None:
        raise LatticeBuildError(
            f"no valid seam triangulation exists for facing colors "
            f"{facing[0].value},{facing[1].value} at scale {scale}")

    supers = ([left.supers[(li + 1 + i) % k] for i in range(k - 1)]
              + [ident(right.supers[(ri + 1 + i) % k]) for i in range(k - 1)])
    # Drop the duplicate fused entry (appears once from each side).
    seen = []
    for s in supers:
        if s not in seen:
            seen.append(s)
    supers = seen

    merged = Triangulation(vertex_colors, keep + list(seam), supers,
                           positions, runs={})
    meta = {
        "old_left": old_left,
        "old_right": [t for t in old_right if t != removed],
        "removed": removed,
        "seam": list(seam),
        "runL": list(runL),
        "runR": [ident(v) for v in runR],
        "ident_source": sR_prev,
        "fused": fused,
    }
    return merged, left, right, meta


def _seam_assignment(meta) -> dict:
    """Old seam triangle -> new seam triangle, by region-vertex continuity."""
    import numpy as np
    from scipy.optimize import linear_sum_assignment

    olds = sorted(meta["old_left"] + meta["old_right"],
                  key=lambda t: tuple(sorted(map(str, t))))
    news = sorted(meta["seam"], key=lambda t: tuple(sorted(map(str, t))))
    if len(olds) != len(news):
        raise LatticeBuildError(
            f"seam qubit mismatch: {len(olds)} old vs {len(news)} new")

    def region_verts(t):
        return {meta["fused"] if v == meta["ident_source"] else v
                for v in t if not (len(v) >= 2 and v[1] == "s")}

    cost = np.zeros((len(olds), len(news)))
    for i, to in enumerate(olds):
        for j, tn in enumerate(news):
            cost[i, j] = -len(region_verts(to) & region_verts(tn))
    rows, cols = linear_sum_assignment(cost)
    return {olds[i]: news[j] for i, j in zip(rows, cols)}


def build_planar_nonagon(scale: int) -> ColorLattice:
    """Nonagon patch: two hexagons fused along facing red/green arcs.

    Nine odd boundaries cycling through the colors three times; this is
    also the target geometry of the plain-surgery merge, so the merge
    protocol can be checked against a natively built lattice.
    """
    if scale < 1:
        raise LatticeBuildError(f"scale must be >= 1, got {scale}")
    merged, left, right, meta = merge_hexagon_triangulations(scale)
    lat = dualize(merged, family={"family": "nonagon", "scale": scale})
    validate(lat).raise_if_invalid()
    return lat


# ---------------------------------------------------------------------------
# serialization


def save_lattice(lat: ColorLattice, path):
    with open(path, "w") as fh:
        json.dump(lattice_to_dict(lat), fh, indent=1, sort_keys=True)


def lattice_to_dict(lat: ColorLattice) -> dict:
    return {
        "topology": lat.topology,
        "genus": lat.genus,
        "orientable": lat.orientable,
        "vertices": [
            {"id": i,
             "x": None if lat.coords is None else lat.coords[i][0],
             "y": None if lat.coords is None else lat.coords[i][1]}
            for i in range(lat.n_vertices)
        ],
        "edges": [[int(u), int(v)] for u, v in lat.edges],
        "edge_colors": [c.value for c in lat.edge_colors],
        "faces": [{"vertices": [int(v) for v in f.vertices], "color": f.color.value}
                  for f in lat.faces],
        "corners": [[int(v), c.value] for v, c in lat.corners],
        "boundaries": [{"vertices": [int(v) for v in a.vertices],
                        "color": a.color.value} for a in lat.boundaries],
        "family": {k: v for k, v in lat.family.items()
                   if isinstance(v, (str, int, float))},
    }


def lattice_from_dict(data: dict) -> ColorLattice:
    coords = None
    if data["vertices"] and data["vertices"][0]["x"] is not None:
        coords = [(v["x"], v["y"]) for v in data["vertices"]]
    return ColorLattice(
        n_vertices=len(data["vertices"]),
        edges=[tuple(e) for e in data["edges"]],
        edge_colors=[Color(c) for c in data["edge_colors"]],
        faces=[Face(tuple(f["vertices"]), Color(f["color"])) for f in data["faces"]],
        corners=[(v, Color(c)) for v, c in data["corners"]],
        boundaries=[BoundaryArc(tuple(b["vertices"]), Color(b["color"]))
                    for b in data["boundaries"]],
        topology=data["topology"],
        genus=data["genus"],
        orientable=data.get("orientable", True),
        coords=coords,
        family=data.get("family", {}),
    )


def load_lattice(path) -> ColorLattice:
    with open(path) as fh:
        return lattice_from_dict(json.load(fh))
