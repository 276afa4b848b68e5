"""Regenerates the gluing-table fixtures in data/ using regina."""
import pathlib
import regina

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def export(tri, mark):
    lines = [f"tets={tri.size()}"]
    for i in range(tri.size()):
        tet = tri.tetrahedron(i)
        recs = []
        for f in range(4):
            adj = tet.adjacentTetrahedron(f)
            if adj is None:
                recs.append(f"bd:{mark}")
                continue
            p = tet.adjacentGluing(f)
            recs.append(f"{adj.index()}:{p[f]}:{''.join(str(p[k]) for k in range(4))}")
        lines.append(" ".join(recs))
    return "\n".join(lines) + "\n"


def main():
    knot = regina.Example3.trefoil()
    knot.idealToFinite()
    knot.simplify()
    assert knot.isValid() and knot.countBoundaryComponents() == 1
    (OUT / "trefoil_complement.tri").write_text(
        f"# trefoil exterior, isoSig {knot.isoSig()}\n" + export(knot, "peripheral_torus"))

    lst = regina.Example3.lst(1, 2)
    (OUT / "solid_torus.tri").write_text(
        f"# layered solid torus, isoSig {lst.isoSig()}\n" + export(lst, "peripheral_torus"))

    ball = regina.Example3.ball()
    (OUT / "ball.tri").write_text("# one tetrahedron\n" + export(ball, "outer_sphere"))


if __name__ == "__main__":
    main()
