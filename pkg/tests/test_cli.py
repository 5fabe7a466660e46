import pytest
from click.testing import CliRunner

from cauchy_euler.cli import main

from conftest import DATA


def data(name):
    return str(DATA / name)


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


@pytest.fixture
def torus_file(tmp_path):
    res = run("surface", "torus", 3)
    assert res.exit_code == 0
    p = tmp_path / "torus.sc2"
    p.write_text(res.output)
    return p


def test_prove_torus(torus_file):
    res = run("prove", torus_file)
    assert res.exit_code == 0
    assert res.output == "chi_K0=-1 chi=0\n"


def test_chi_of_catalog_quotient(torus_file):
    res = run("chi", torus_file)
    assert res.exit_code == 0
    assert res.output.strip().endswith("chi=0")


def test_genus_and_orientability(tmp_path):
    p = tmp_path / "rp2.sc2"
    p.write_text(run("surface", "projective_plane", 3).output)
    res = run("orientable", p)
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "orientable=no"
    assert lines[1].startswith("alpha=") and lines[2].startswith("beta=")
    assert run("genus", p).output == "genus=1 orientable=no chi=1\n"


def test_lakatos_order_fails_at_triangle_ten():
    res = run("reduce", data("lakatos.sc2"), "--strategy", "order:" + data("lakatos_order.txt"))
    assert res.exit_code == 1
    assert "label=10" in res.output and "reason=" in res.output


def test_lakatos_amended_order_with_op_three():
    order = "order:" + data("lakatos_amended_order.txt")
    assert run("reduce", data("lakatos.sc2"), "--strategy", order).exit_code == 1
    res = run("reduce", data("lakatos.sc2"), "--strategy", order, "--allow-op3")
    assert res.exit_code == 0
    assert res.output.startswith("ok ")


def test_kirk_order_reports_removed_chi():
    res = run("reduce", data("kirk.sc2"), "--strategy", "order:" + data("kirk_order.txt"))
    assert res.exit_code == 1
    assert "step=10" in res.output and "removed_chi=-1" in res.output


def test_descartes_cube():
    res = run("descartes", data("cube.sc2"))
    assert res.exit_code == 0
    assert res.output == "total=24 expected=24 defect=0.000000\n"


def test_project_then_chi(tmp_path):
    out = tmp_path / "cube_plane.sc2"
    assert run("project", data("cube.sc2"), "--face", 0, "--out", out).exit_code == 0
    res = run("chi", out)
    assert res.output == "n0=8 n1=17 n2=10 chi=1\n"


def test_cut_torus(torus_file):
    res = run("cut", torus_file, "--path", "0,1,2,0,4,8,0")
    assert res.exit_code == 0
    assert "chi=1 boundary_cycles=1" in res.output


def test_trace_replays(tmp_path, torus_file):
    trace = tmp_path / "t.txt"
    assert run("reduce", torus_file, "--strategy", "pyramid", "--trace", trace).exit_code == 0
    res = run("replay", trace, torus_file)
    assert res.exit_code == 0 and res.output.startswith("replayed ")


def test_tampered_trace_exit_one(tmp_path, torus_file):
    cert = tmp_path / "c.txt"
    run("prove", torus_file, "--cert", cert)
    lines = cert.read_text().splitlines()
    i = next(j for j, ln in enumerate(lines) if " op=II" in ln)
    lines[i] = lines[i].replace(" op=II", " op=I")
    cert.write_text("\n".join(lines) + "\n")
    assert run("replay", cert, torus_file).exit_code == 1


def test_failed_order_trace_replays(tmp_path):
    trace = tmp_path / "k.txt"
    args = ("reduce", data("kirk.sc2"), "--strategy", "order:" + data("kirk_order.txt"), "--trace", trace)
    assert run(*args).exit_code == 1
    assert run("replay", trace, data("kirk.sc2")).exit_code == 0


def test_validate_reports_violations(tmp_path):
    p = tmp_path / "bad.sc2"
    p.write_text("# vertices\n0\n1\n2\n# triangles\n0 1 2\n2 1 0\n")
    res = run("validate", p)
    assert res.exit_code == 1
    assert "duplicate" in res.output
    assert run("validate", data("tetrahedron.sc2")).output == "valid\n"


@pytest.mark.parametrize("args", [
    ("chi", "/nonexistent/file.sc2"),
    ("surface", "no_such_surface", 3),
    ("frobnicate",),
    ("prove", "CUBE"),
])
def test_usage_errors_exit_two(args):
    args = tuple(data("cube.sc2") if a == "CUBE" else a for a in args)
    assert run(*args).exit_code == 2


def test_parse_error_exit_two(tmp_path):
    p = tmp_path / "x.sc2"
    p.write_text("# nonsense\n")
    res = run("chi", p)
    assert res.exit_code == 2
    assert "line 1" in res.output


def test_deterministic_output(torus_file):
    a = run("prove", torus_file, "--cert", "-").output
    b = run("prove", torus_file, "--cert", "-").output
    assert a == b and "mode=combinatorial" in a
