"""Reading and writing ``.sc2`` documents.

Grammar (one item per line, ``%`` starts a comment)::

    document  := section*
    section   := "# vertices"  vertex*      vertex := id [x y [z]]
               | "# triangles" triangle*    triangle := v v v
               | "# identify"  ident*       ident := "e" a1 b1 a2 b2 ["rev"] | "v" a b
               | "# faces"     face*        face := v v v ...

A document with ``# faces`` is a convex polyhedron, one with ``# identify``
(possibly empty) is a planar polygon, anything else a plain complex.
"""

from __future__ import annotations

from .complex_core import Complex2, validate
from .errors import SemanticError, SyntaxError
from .planar_rep import EdgePair, IdentificationScheme, PlanarPolygon, validate_scheme
from .polyhedra import ConvexPolyhedron, validate_convex

SECTIONS = ("vertices", "triangles", "identify", "faces")


def _num(tok, line, col):
    try:
        if any(ch in tok for ch in ".eE") or tok.lower() in ("nan", "inf"):
            return float(tok)
        return int(tok)
    except ValueError:
        raise SyntaxError(line, f"not a number: {tok!r}", col) from None


def _int(tok, line, col):
    try:
        return int(tok)
    except ValueError:
        raise SyntaxError(line, f"expected an integer, got {tok!r}", col) from None


def _tokens(raw):
    """(token, 1-based column) pairs of a comment-stripped line."""
    out, i = [], 0
    while i < len(raw):
        if raw[i].isspace():
            i += 1
            continue
        j = i
        while j < len(raw) and not raw[j].isspace():
            j += 1
        out.append((raw[i:j], i + 1))
        i = j
    return out


def parse_sections(text):
    secs = {}
    cur = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            name = line.strip()[1:].strip().lower()
            if name not in SECTIONS:
                raise SyntaxError(n, f"unknown section {name!r}", line.index("#") + 1)
            if name in secs:
                raise SyntaxError(n, f"section {name!r} repeated")
            cur = name
            secs[cur] = []
            continue
        if cur is None:
            raise SyntaxError(n, "content before the first section", 1)
        secs[cur].append((n, _tokens(line)))
    return secs


def parse(text, check=True):
    """Complex2, PlanarPolygon or ConvexPolyhedron, depending on the sections.

    With ``check=False`` the object is returned without running the
    validators (used by ``validate`` to report every violation).
    """
    secs = parse_sections(text)
    coords, ids = {}, []
    for n, toks in secs.get("vertices", []):
        if len(toks) not in (1, 3, 4):
            raise SyntaxError(n, "vertex line needs an id and 0, 2 or 3 coordinates", toks[0][1])
        v = _int(toks[0][0], n, toks[0][1])
        if v in coords or v in ids:
            raise SemanticError(f"line {n}: vertex {v} declared twice")
        ids.append(v)
        if len(toks) > 1:
            coords[v] = tuple(_num(t, n, c) for t, c in toks[1:])
    if coords and len(coords) != len(ids):
        raise SemanticError("either every vertex has coordinates or none has")
    if len({len(p) for p in coords.values()}) > 1:
        raise SemanticError("vertices mix 2D and 3D coordinates")

    if "faces" in secs:
        if "triangles" in secs or "identify" in secs:
            raise SemanticError("a faces document may not have triangles or identify sections")
        faces = []
        for n, toks in secs["faces"]:
            if len(toks) < 3:
                raise SyntaxError(n, "a face needs at least three vertices", toks[0][1])
            f = tuple(_int(t, n, c) for t, c in toks)
            for v in f:
                if v not in coords:
                    raise SemanticError(f"line {n}: face uses undeclared vertex {v}")
            faces.append(f)
        if any(len(p) != 3 for p in coords.values()):
            raise SemanticError("polyhedron vertices need 3D coordinates")
        p = ConvexPolyhedron(coords, faces)
        if not check:
            return p
        rep = validate_convex(p)
        if not rep.ok:
            raise SemanticError(f"not a convex polyhedron: {rep.violations[0]}")
        return p

    tris = []
    for n, toks in secs.get("triangles", []):
        if len(toks) != 3:
            raise SyntaxError(n, "a triangle line has exactly three vertices", toks[0][1])
        t = tuple(_int(tk, n, c) for tk, c in toks)
        for v in t:
            if v not in ids:
                raise SemanticError(f"line {n}: triangle uses undeclared vertex {v}")
        tris.append(t)
    emb = coords or None
    c = Complex2.from_triangles(tris, emb, vertices=ids)
    rep = validate(c) if check else None
    if rep is not None and not rep.ok:
        raise SemanticError(f"invalid complex: {rep.violations[0]}")
    if "identify" not in secs:
        return c

    pairs, vpairs = [], []
    for n, toks in secs["identify"]:
        kind = toks[0][0]
        if kind == "e":
            if len(toks) not in (5, 6) or (len(toks) == 6 and toks[5][0] != "rev"):
                raise SyntaxError(n, "expected: e a1 b1 a2 b2 [rev]", toks[0][1])
            a1, b1, a2, b2 = (_int(t, n, col) for t, col in toks[1:5])
            pairs.append(EdgePair((a1, b1), (a2, b2), len(toks) == 6))
        elif kind == "v":
            if len(toks) != 3:
                raise SyntaxError(n, "expected: v a b", toks[0][1])
            vpairs.append((_int(toks[1][0], n, toks[1][1]), _int(toks[2][0], n, toks[2][1])))
        else:
            raise SyntaxError(n, f"unknown identification kind {kind!r}", toks[0][1])
    k = PlanarPolygon(c, IdentificationScheme(tuple(pairs), tuple(vpairs)))
    if not check:
        return k
    rep = validate_scheme(k)
    if not rep.ok:
        raise SemanticError(f"inadmissible identification: {rep.violations[0]}")
    return k


def _fmt(x):
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _vertex_lines(ids, coords):
    out = ["# vertices"]
    for v in ids:
        if coords:
            out.append(" ".join([str(v)] + [_fmt(x) for x in coords[v]]))
        else:
            out.append(str(v))
    return out


def emit(obj, comment=None) -> str:
    """Canonical document text; ``parse(emit(x))`` reproduces ``x``."""
    out = [f"% {line}" for line in (comment or "").splitlines()]
    if isinstance(obj, ConvexPolyhedron):
        out += _vertex_lines(sorted(obj.vertices), obj.vertices)
        out.append("# faces")
        out += [" ".join(map(str, f)) for f in obj.faces]
        return "\n".join(out) + "\n"
    c = obj.complex if isinstance(obj, PlanarPolygon) else obj
    out += _vertex_lines(c.vertices, c.embedding)
    out.append("# triangles")
    out += [" ".join(map(str, t)) for t in c.triangles]
    if isinstance(obj, PlanarPolygon):
        out.append("# identify")
        for p in obj.scheme.pairs:
            line = f"e {p.a[0]} {p.a[1]} {p.b[0]} {p.b[1]}"
            out.append(line + (" rev" if p.reversed else ""))
        for x, y in obj.scheme.vertex_pairs:
            out.append(f"v {x} {y}")
    return "\n".join(out) + "\n"


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def parse_order(text):
    """Removal order: lines ``v1 v2 v3`` or ``label: v1 v2 v3``."""
    items = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        label = None
        if ":" in line:
            label, line = (s.strip() for s in line.split(":", 1))
        toks = _tokens(line)
        if len(toks) != 3:
            raise SyntaxError(n, "an order line names exactly three vertices")
        t = tuple(_int(tk, n, c) for tk, c in toks)
        items.append((label, t) if label is not None else t)
    return items
