"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 usage or parse error.
Every command is deterministic, so the same input gives the same stdout.
"""

from __future__ import annotations

import sys

import click

from . import sc2
from .cauchy_reduction import ExplicitOrder, Failure, GreedyKirk, parse_trace, reduce, replay
from .complex_core import Complex2, boundary_cycles, compute_genus, validate
from .elongation import prove_theorem, replay_certificate
from .errors import CauchyEulerError, DocumentError, ProofFailure
from .orientation import check_orientable
from .planar_rep import PlanarPolygon, build_quotient, surface as catalog_surface, validate_scheme
from .polyhedra import ConvexPolyhedron, descartes_angle_sum, schlegel_projection, triangulate_faces, validate_convex
from .refinement import cut_open, path_from_walk

DESCARTES_TOL = 1e-6


class Fail(click.ClickException):
    """Verification failure: exit status 1."""

    exit_code = 1


class Bad(click.ClickException):
    """Parse or usage problem: exit status 2."""

    exit_code = 2


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise Bad(f"{path}: {exc.strerror}") from None


def _load(path, check=True):
    try:
        return sc2.parse(_read(path), check=check)
    except DocumentError as exc:
        raise Bad(f"{path}: {exc}") from None


def _write(path, text):
    if path == "-":
        click.echo(text, nl=False)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _surface_complex(obj):
    """The complex whose topology a command reports on."""
    if isinstance(obj, PlanarPolygon):
        return build_quotient(obj)
    if isinstance(obj, ConvexPolyhedron):
        raise Bad("expected a triangulated document; use 'project' for a polyhedron")
    return obj


def _need_polygon(obj):
    if isinstance(obj, ConvexPolyhedron):
        raise Bad("expected a planar polygon; use 'project' for a polyhedron")
    if isinstance(obj, Complex2):
        return PlanarPolygon(obj)
    return obj


def _tri(t):
    return ",".join(map(str, t))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Euler characteristic by hole-growing reductions."""


@main.command()
@click.argument("file")
def chi(file):
    """Counts and alternating sum (of the quotient, for a polygon)."""
    obj = _load(file)
    c = obj if isinstance(obj, ConvexPolyhedron) else _surface_complex(obj)
    n = c.counts()
    click.echo(f"n0={n.n0} n1={n.n1} n2={n.n2} chi={n.chi}")


@main.command(name="validate")
@click.argument("file")
def validate_cmd(file):
    """Report every violation; exit 1 if there is one."""
    obj = _load(file, check=False)
    if isinstance(obj, ConvexPolyhedron):
        rep = validate_convex(obj)
    elif isinstance(obj, PlanarPolygon):
        rep = validate_scheme(obj)
    else:
        rep = validate(obj)
    if rep.ok:
        click.echo("valid")
        return
    for v in rep.violations:
        click.echo(str(v))
    raise Fail(f"{len(rep.violations)} violation(s)")


@main.command()
@click.argument("file")
def orientable(file):
    """Orientability, with two conflicting chains when it fails."""
    c = _surface_complex(_load(file))
    res = check_orientable(c)
    if res.orientable:
        click.echo("orientable=yes")
        return
    click.echo("orientable=no")
    for name, chain in zip(("alpha", "beta"), res.witness):
        click.echo(f"{name}=" + " ".join(_tri(o.order()) for o in chain))


@main.command()
@click.argument("file")
def genus(file):
    """Genus of a closed connected surface."""
    c = _surface_complex(_load(file))
    ori = check_orientable(c).orientable
    try:
        g = compute_genus(c, ori)
    except CauchyEulerError as exc:
        raise Fail(str(exc)) from None
    click.echo(f"genus={g} orientable={'yes' if ori else 'no'} chi={c.counts().chi}")


@main.command()
@click.argument("name")
@click.argument("resolution", type=int)
def surface(name, resolution):
    """Print a catalog surface as a document."""
    try:
        k = catalog_surface(name, resolution)
    except (ValueError, CauchyEulerError) as exc:
        raise Bad(str(exc)) from None
    click.echo(sc2.emit(k, f"{name} r={resolution}"), nl=False)


@main.command()
@click.argument("file")
@click.option("--face", type=int, required=True, help="index of the face sent to infinity")
@click.option("--out", default="-", show_default=True)
def project(file, face, out):
    """Schlegel projection of a polyhedron, triangulated."""
    p = _load(file)
    if not isinstance(p, ConvexPolyhedron):
        raise Bad("project needs a '# faces' document")
    if not 0 <= face < len(p.faces):
        raise Bad(f"face index {face} out of range 0..{len(p.faces) - 1}")
    try:
        k = triangulate_faces(schlegel_projection(p, face))
    except CauchyEulerError as exc:
        raise Fail(str(exc)) from None
    _write(out, sc2.emit(k, f"projection from face {face}"))


@main.command()
@click.argument("file")
def descartes(file):
    """Total face angle in right angles against 4(n0 - 2)."""
    p = _load(file)
    if not isinstance(p, ConvexPolyhedron):
        raise Bad("descartes needs a '# faces' document")
    try:
        total, expected, defect = descartes_angle_sum(p)
    except CauchyEulerError as exc:
        raise Fail(str(exc)) from None
    click.echo(f"total={round(total)} expected={expected} defect={defect:.6f}")
    if defect >= DESCARTES_TOL:
        raise Fail(f"defect {defect:.3g} exceeds {DESCARTES_TOL}")


@main.command()
@click.argument("file")
@click.option("--path", "walk", required=True, help="vertex walk v,v,... along the cut")
@click.option("--out", default=None, help="write the cut complex here")
def cut(file, walk, out):
    """Cut a surface open along a vertex walk."""
    c = _surface_complex(_load(file))
    try:
        vs = [int(x) for x in walk.split(",")]
    except ValueError:
        raise Bad(f"bad --path {walk!r}") from None
    try:
        res = cut_open(c, path_from_walk(vs))
    except CauchyEulerError as exc:
        raise Fail(str(exc)) from None
    n = res.complex.counts()
    cycles = boundary_cycles(res.complex)
    click.echo(f"n0={n.n0} n1={n.n1} n2={n.n2} chi={n.chi} boundary_cycles={len(cycles)}")
    if out:
        _write(out, sc2.emit(res.complex))


def _strategy(name, allow_op3, priority):
    if name == "kirk":
        items = ExplicitOrder(_order(priority)).items() if priority else ()
        return GreedyKirk(allow_op3=allow_op3, priority=tuple(t for _, t in items))
    if name.startswith("order:"):
        return ExplicitOrder(_order(name[len("order:"):]), allow_op3=allow_op3)
    raise Bad(f"unknown strategy {name!r}; use pyramid, kirk or order:<file>")


def _order(path):
    try:
        return sc2.parse_order(_read(path))
    except DocumentError as exc:
        raise Bad(f"{path}: {exc}") from None


@main.command(name="reduce")
@click.argument("file")
@click.option("--strategy", required=True, help="pyramid | kirk | order:<file>")
@click.option("--allow-op3", is_flag=True, help="permit operation III")
@click.option("--priority", default=None, help="tie-break order file for the kirk strategy")
@click.option("--trace", "trace_out", default=None, help="write the trace here ('-' for stdout)")
def reduce_cmd(file, strategy, allow_op3, priority, trace_out):
    """Grow a hole until one triangle is left (or K0, for pyramid)."""
    k = _need_polygon(_load(file))
    if strategy == "pyramid":
        if allow_op3:
            raise Bad("the pyramid schedule uses operations I and II only")
        try:
            cert = prove_theorem(k)
        except ProofFailure as exc:
            raise Fail(str(exc)) from None
        if trace_out:
            _write(trace_out, cert.text())
        click.echo(f"ok steps={len(cert.trace.steps)} terminal=K0")
        return
    res = reduce(k, _strategy(strategy, allow_op3, priority))
    if trace_out:
        _write(trace_out, res.text())
    if isinstance(res, Failure):
        raise Fail(res.line())
    term = " ".join(_tri(t) for t in res.terminal.triangles)
    click.echo(f"ok steps={len(res.steps)} terminal={term}")


@main.command()
@click.argument("file")
@click.option("--mode", type=click.Choice(["combinatorial", "euclidean"]), default="combinatorial",
              show_default=True)
@click.option("--cert", "cert_out", default=None, help="write the certificate here ('-' for stdout)")
def prove(file, mode, cert_out):
    """Certified chi(K) = chi(K0) + 1 by the level-curve schedule."""
    k = _need_polygon(_load(file))
    try:
        cert = prove_theorem(k, mode=mode)
    except ProofFailure as exc:
        raise Fail(str(exc)) from None
    if cert_out:
        _write(cert_out, cert.text())
    click.echo(f"chi_K0={cert.chi_K0} chi={cert.chi_K}")


@main.command(name="replay")
@click.argument("trace")
@click.argument("file")
def replay_cmd(trace, file):
    """Re-apply a trace or certificate; exit 1 on any mismatch."""
    text = _read(trace)
    k = _need_polygon(_load(file))
    try:
        headers, _, _ = parse_trace(text)
    except (ValueError, KeyError) as exc:
        raise Bad(f"{trace}: malformed trace ({exc})") from None
    res = replay_certificate(text, k) if "mode" in headers else replay(text, k)
    if not res.ok:
        raise Fail(res.message)
    click.echo(f"replayed steps={res.steps} {res.message}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
