"""Dev calibration: offsets for the square-octagon-bulk hexagonal patch."""

import itertools
import sys

sys.path.insert(0, "src")

from floquet_lab.lattice import (
    COLORS, Color, _attach_supers, _region_boundary_cycle, dualize, validate,
)

# Union-Jack (tetrakis) lattice: dual of the square-octagon tiling.
# O(i,j) at doubled coords (2i, 2j), checkerboard R/G; Q(i,j) at
# (2i-1, 2j-1), always B.  Triangles: 4 per Q.

FORMS = (
    lambda x, y: y,        # top
    lambda x, y: y - x,    # upper-left
    lambda x, y: -x - y,   # lower-left
    lambda x, y: -y,       # bottom
    lambda x, y: x - y,    # lower-right
    lambda x, y: x + y,    # upper-right
)


def pos(v):
    kind, i, j = v
    return (2 * i, 2 * j) if kind == "O" else (2 * i - 1, 2 * j - 1)


def color_of(v):
    kind, i, j = v
    if kind == "Q":
        return Color.B
    return Color.R if (i + j) % 2 == 0 else Color.G


def region_vertices(offsets, bound=14):
    out = set()
    for i in range(-bound, bound + 1):
        for j in range(-bound, bound + 1):
            for v in (("O", i, j), ("Q", i, j)):
                x, y = pos(v)
                if all(f(x, y) <= t for f, t in zip(FORMS, offsets)):
                    out.add(v)
    return out


def region_triangles(region):
    tris = []
    for v in list(region):
        if v[0] != "Q":
            continue
        _, i, j = v
        o = {
            "a": ("O", i, j), "b": ("O", i - 1, j),
            "c": ("O", i, j - 1), "d": ("O", i - 1, j - 1),
        }
        for pair in (("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")):
            t = frozenset((v, o[pair[0]], o[pair[1]]))
            if all(u in region for u in t):
                tris.append(t)
    return tris


def try_offsets(offsets, arc_colors):
    region = region_vertices(offsets)
    if len(region) < 6:
        return None
    tris = region_triangles(region)
    if not tris:
        return None
    covered = set()
    for t in tris:
        covered |= set(t)
    if covered != region:
        return None
    try:
        cycle = _region_boundary_cycle(region, tris)
    except Exception:
        return None
    positions = {v: tuple(map(float, pos(v))) for v in region}
    tri = _attach_supers(region, tris, cycle, color_of, arc_colors, positions)
    if tri is None:
        return None
    try:
        lat = dualize(tri)
    except Exception:
        return None
    return lat if validate(lat).ok else None


def main():
    seqs = [
        [Color.B, Color.R, Color.G, Color.B, Color.R, Color.G],
        [Color.B, Color.G, Color.R, Color.B, Color.G, Color.R],
    ]
    found = []
    for offsets in itertools.product(range(0, 7, 1), repeat=6):
        for arc in seqs:
            lat = try_offsets(offsets, arc)
            if lat is not None:
                found.append((lat.n_vertices, offsets, tuple(c.value for c in arc), lat))
                break
    found.sort(key=lambda x: (x[0], x[1]))
    print(f"{len(found)} valid")
    shown = 0
    for n_v, offsets, arc, lat in found:
        arcs = [(a.color.value, len(a.vertices)) for a in lat.boundaries]
        sizes = {}
        for f in lat.faces:
            sizes[len(f.vertices)] = sizes.get(len(f.vertices), 0) + 1
        print(f"n_v={n_v} offsets={offsets} arc_req={arc} arcs={arcs} sizes={sizes}")
        shown += 1
        if shown > 25:
            break
    # growth check on the smallest
    for n_v, offsets, arc, lat in found[:1]:
        for s in range(2, 4):
            for step in (2, 4):
                grown = tuple(t + step * (s - 1) for t in offsets)
                seq = [Color.B, Color.R, Color.G, Color.B, Color.R, Color.G] \
                    if arc[1] == "R" else seqs[1]
                lat2 = try_offsets(grown, seq)
                print(f"scale {s} step {step}: {grown} ->",
                      "valid" if lat2 else "invalid",
                      f"n_v={lat2.n_vertices if lat2 else '-'}")


if __name__ == "__main__":
    main()
