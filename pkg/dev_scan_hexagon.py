"""Dev calibration: find support-form offsets for the hexagon patch family."""

import itertools
import sys

sys.path.insert(0, "src")

from floquet_lab.lattice import (
    COLORS, Color, Triangulation, _TRI_FORMS, _attach_supers,
    _region_boundary_cycle, _region_triangles, _tri_position,
    _triangular_region, dualize, validate,
)

ARC_COLORS = [Color.R, Color.G, Color.B, Color.R, Color.G, Color.B]


def try_offsets(offsets, verbose=False):
    region = _triangular_region(offsets)
    if len(region) < 3:
        return None
    tris = _region_triangles(region)
    if not tris:
        return None
    covered = set()
    for t in tris:
        covered |= set(t)
    if covered != region:
        return None  # dangling vertices
    try:
        cycle = _region_boundary_cycle(region, tris)
    except Exception:
        return None

    def color_of(v):
        return COLORS[(v[0] - v[1]) % 3]

    positions = {v: _tri_position(*v) for v in region}
    tri = _attach_supers(region, tris, cycle, color_of, ARC_COLORS, positions)
    if tri is None:
        tri = _attach_supers(region, tris, cycle, color_of,
                             ARC_COLORS[::-1], positions)
    if tri is None:
        return None
    try:
        lat = dualize(tri)
    except Exception as e:
        if verbose:
            print("dualize fail", e)
        return None
    rep = validate(lat)
    if not rep.ok:
        if verbose:
            for v in rep.violations[:8]:
                print("  ", v)
        return None
    return lat


def main():
    found = []
    rng = range(0, 6)
    for offsets in itertools.product(rng, repeat=6):
        lat = try_offsets(offsets)
        if lat is not None:
            found.append((lat.n_vertices, offsets, lat))
    found.sort(key=lambda x: (x[0], x[1]))
    print(f"{len(found)} valid offset tuples")
    seen_sizes = set()
    for n_v, offsets, lat in found[:40]:
        arcs = [(a.color.value, len(a.vertices)) for a in lat.boundaries]
        print(f"n_v={n_v} offsets={offsets} arcs={arcs} n_f={lat.n_faces}")
        seen_sizes.add(n_v)
    # check scale growth on the smallest
    if found:
        n_v, offsets, lat = found[0]
        for s in range(2, 4):
            grown = tuple(t + 3 * (s - 1) for t in offsets)
            lat2 = try_offsets(grown)
            print(f"scale {s}: offsets={grown} ->",
                  "valid" if lat2 is not None else "INVALID",
                  f"n_v={lat2.n_vertices if lat2 else '-'}")


if __name__ == "__main__":
    main()
