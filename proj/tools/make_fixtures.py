#!/usr/bin/env python3
"""Writes the explicit level-0 meshes under fixtures/.

Both meshes are reconstructions of initial meshes known only from figures:
  two_fractures.msh         unit square, fractures (0.3,0.1)-(0.3,0.9) and (0.6,0.1)-(0.9,0.9)
  triangle_one_fracture.msh triangle (0,0),(1,0),(0.5,1), fracture (0.3,0.25)-(0.7,0.25)

Usage: make_fixtures.py [output_dir]
"""

import pathlib
import sys


class MeshBuilder:
    def __init__(self):
        self.vertices = []
        self.index = {}
        self.triangles = []

    def vertex(self, x, y):
        key = (round(x, 12), round(y, 12))
        if key not in self.index:
            self.index[key] = len(self.vertices)
            self.vertices.append((x, y))
        return self.index[key]

    def triangle(self, a, b, c):
        (ax, ay), (bx, by), (cx, cy) = (self.vertices[i] for i in (a, b, c))
        area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if area2 <= 0:
            raise ValueError(f"triangle {a} {b} {c} is not counterclockwise")
        self.triangles.append((a, b, c))

    def crossed_quad(self, p00, p10, p11, p01):
        """Quad given counterclockwise from its lower-left corner, split at the corner average."""
        pts = [self.vertices[i] for i in (p00, p10, p11, p01)]
        c = self.vertex(sum(p[0] for p in pts) / 4, sum(p[1] for p in pts) / 4)
        for a, b in ((p00, p10), (p10, p11), (p11, p01), (p01, p00)):
            self.triangle(a, b, c)

    def strip(self, lower, upper):
        """Zipper triangulation between two rows of vertex ids ordered by x."""
        i = j = 0
        while i + 1 < len(lower) or j + 1 < len(upper):
            advance_lower = i + 1 < len(lower) and (
                j + 1 >= len(upper) or self.vertices[lower[i + 1]][0] <= self.vertices[upper[j + 1]][0])
            if advance_lower:
                self.triangle(lower[i], lower[i + 1], upper[j])
                i += 1
            else:
                self.triangle(lower[i], upper[j + 1], upper[j])
                j += 1

    def write(self, path, comment):
        with open(path, "w") as out:
            for line in comment:
                out.write(f"# {line}\n")
            out.write(f"vertices {len(self.vertices)} triangles {len(self.triangles)}\n")
            for x, y in self.vertices:
                out.write(f"{x:.17g} {y:.17g}\n")
            for a, b, c in self.triangles:
                out.write(f"{a} {b} {c}\n")


def gridded(builder, rows):
    """rows: list of (y, [x...]) with equal column counts; every cell is a crossed quad."""
    ids = [[builder.vertex(x, y) for x in xs] for y, xs in rows]
    for r in range(len(ids) - 1):
        lo, hi = ids[r], ids[r + 1]
        for c in range(len(lo) - 1):
            builder.crossed_quad(lo[c], lo[c + 1], hi[c + 1], hi[c])
    return ids


def two_fractures():
    b = MeshBuilder()

    def x2(y):
        return 0.6 + (y - 0.1) * 0.375

    rows = []
    for y in (0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0):
        g = x2(y)
        rows.append((y, [0.0, 0.15, 0.3, (0.3 + g) / 2, g, (g + 1) / 2, 1.0]))
    gridded(b, rows)
    return b


def triangle_one_fracture():
    b = MeshBuilder()
    ids = gridded(b, [
        (0.0, [0.0, 0.3, 0.5, 0.7, 1.0]),
        (0.25, [0.125, 0.3, 0.5, 0.7, 0.875]),
        (0.5, [0.25, 0.375, 0.5, 0.625, 0.75]),
    ])
    top = [b.vertex(x, 0.75) for x in (0.375, 0.5, 0.625)]
    b.strip(ids[-1], top)
    b.strip(top, [b.vertex(0.5, 1.0)])
    return b


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent.parent / "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    two_fractures().write(out / "two_fractures.msh", [
        "Unit square with fractures (0.3,0.1)-(0.3,0.9) and (0.6,0.1)-(0.9,0.9).",
        "Reconstructed start mesh: 6 rows, columns follow both fractures, quads split at their centre.",
        "Generated by tools/make_fixtures.py.",
    ])
    triangle_one_fracture().write(out / "triangle_one_fracture.msh", [
        "Triangle (0,0),(1,0),(0.5,1) with fracture (0.3,0.25)-(0.7,0.25).",
        "Reconstructed start mesh: crossed quads in the lower two rows, zipper strips above.",
        "Generated by tools/make_fixtures.py.",
    ])


if __name__ == "__main__":
    main()
