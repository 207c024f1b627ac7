import json

import pytest

from geomink.fileio import (
    ParseError,
    format_mesh,
    parse_mesh,
    parse_scene,
    read_mesh,
    read_points,
    report,
    write_mesh,
    write_scene,
)
from geomink.gaussian import InvalidMesh
from geomink.kernel import Vec3
from geomink.shapes import cube, octahedron, split_star_assembly, tetrahedron


def test_roundtrip_is_bit_exact(tmp_path):
    for mesh in (tetrahedron(), cube(), octahedron()):
        p = tmp_path / "m.eoff"
        write_mesh(mesh, str(p))
        text = p.read_text()
        again = read_mesh(str(p))
        write_mesh(again, str(p))
        assert p.read_text() == text


def test_rational_coordinates_roundtrip(tmp_path):
    from fractions import Fraction

    m = cube()
    m.vertices[0] = Vec3(Fraction(-7, 3), Fraction(1, 9), Fraction(2, 5))
    # not a valid cube anymore; only exercise formatting
    text = format_mesh(m)
    assert "-7/3" in text and "1/9" in text


def test_malformed_rational_reports_line():
    bad = "EOFF\n4 4\n0 0 3/0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 3 1\n3 1 3 2\n3 0 2 3\n"
    with pytest.raises(ParseError) as exc:
        parse_mesh(bad, "bad.eoff")
    assert "bad.eoff:3" in str(exc.value)


def test_nonconvex_mesh_rejected():
    # flipped orientation: every facet sees the others outside
    t = tetrahedron()
    lines = format_mesh(t).splitlines()
    head, counts = lines[0], lines[1]
    nv = len(t.vertices)
    verts = lines[2 : 2 + nv]
    facets = []
    for ln in lines[2 + nv :]:
        toks = ln.split()
        facets.append(" ".join([toks[0]] + toks[1:][::-1]))
    bad = "\n".join([head, counts] + verts + facets)
    with pytest.raises(InvalidMesh) as exc:
        parse_mesh(bad, "flip.eoff")
    assert "facet" in str(exc.value)


def test_scene_roundtrip(tmp_path):
    parts = split_star_assembly()
    names = [n for n, _ in parts]
    meshes = [p for _, p in parts]
    path = tmp_path / "scene.asm"
    write_scene(names, meshes, str(path))
    names2, meshes2 = parse_scene(path.read_text(), str(path))
    assert names2 == names
    assert [len(p) for p in meshes2] == [len(p) for p in meshes]
    write_scene(names2, meshes2, str(path))
    text = path.read_text()
    write_scene(*parse_scene(text), str(path))
    assert path.read_text() == text


def test_point_file(tmp_path):
    p = tmp_path / "pts.txt"
    p.write_text("0 0 0\n1 0 0\n0 1 0\n0 0 1\n1/2 1/2 1/2\n")
    pts = read_points(str(p))
    assert len(pts) == 5


def test_report_schema():
    data = json.loads(report({"x": 1}))
    assert data["schema"] == 1 and data["x"] == 1
