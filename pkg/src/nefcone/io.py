"""File formats and report rendering.

Rationals cross the I/O boundary as strings (``"p/q"`` or ``"p"``), never as
floats. JSON output is canonical: sorted keys, fixed indentation, so equal
requests give byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__, linalg
from .cone import RationalCone, cone_from_facets, cone_from_rays
from .errors import (
    DuplicateTensorEntry,
    InvariantViolation,
    NefconeError,
    ParseError,
    SchemaError,
    UnsupportedFormat,
)
from .lattice import DivisorLattice, make_lattice


# -- reading -----------------------------------------------------------------

def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _rational(value, where):
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"{where}: expected an integer or a 'p/q' string, got {value!r}")
    try:
        return linalg.to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: expected an integer or a 'p/q' string, got {value!r}") from None


def _vector(value, where, length=None):
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    if length is not None and len(value) != length:
        raise SchemaError(f"{where}: expected {length} entries, got {len(value)}")
    return tuple(_rational(x, f"{where}[{i}]") for i, x in enumerate(value))


def _vectors(value, where, length):
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list of vectors")
    return [_vector(v, f"{where}[{i}]", length) for i, v in enumerate(value)]


def _int_field(data, key, src):
    if key not in data:
        raise SchemaError(f"{src}: $.{key}: required field missing")
    v = data[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{src}: $.{key}: expected an integer")
    return v


def lattice_from_dict(data: dict, src: str = "<lattice>") -> DivisorLattice:
    if not isinstance(data, dict):
        raise SchemaError(f"{src}: $: expected an object")
    rank = _int_field(data, "rank", src)
    degree = _int_field(data, "degree", src)
    basis = data.get("basis")
    if basis is not None and (not isinstance(basis, list) or not all(isinstance(b, str) for b in basis)):
        raise SchemaError(f"{src}: $.basis: expected a list of strings")
    entries = []
    for i, item in enumerate(data.get("tensor", [])):
        where = f"{src}: $.tensor[{i}]"
        if not isinstance(item, dict) or "idx" not in item or "val" not in item:
            raise SchemaError(f"{where}: expected an object with 'idx' and 'val'")
        idx = item["idx"]
        if not isinstance(idx, list) or not all(isinstance(j, int) and not isinstance(j, bool) for j in idx):
            raise SchemaError(f"{where}.idx: expected a list of integers")
        entries.append((tuple(idx), _rational(item["val"], f"{where}.val")))
    opts = {}
    for key in ("fiber_class", "ample_class"):
        if data.get(key) is not None:
            opts[key] = _vector(data[key], f"{src}: $.{key}", rank if isinstance(rank, int) else None)
    for key in ("roots", "vertical_basis"):
        if data.get(key) is not None:
            opts[key] = _vectors(data[key], f"{src}: $.{key}", rank)
    try:
        return make_lattice(rank, degree, entries, basis=basis, name=data.get("name"), **opts)
    except DuplicateTensorEntry as exc:
        raise SchemaError(f"{src}: $.tensor: {exc}") from None
    except NefconeError as exc:
        raise InvariantViolation(f"{src}: $: {exc}") from None


def lattice_to_dict(lat: DivisorLattice) -> dict:
    def vec(c):
        return [linalg.fraction_str(x) for x in c.coords]

    out = {
        "rank": lat.rank,
        "degree": lat.degree,
        "basis": list(lat.basis_labels),
        "tensor": [{"idx": list(k), "val": linalg.fraction_str(v)} for k, v in sorted(lat.form.entries.items())],
    }
    if lat.fiber_class is not None:
        out["fiber_class"] = vec(lat.fiber_class)
    if lat.ample_class is not None:
        out["ample_class"] = vec(lat.ample_class)
    if lat.roots is not None:
        out["roots"] = [vec(r) for r in lat.roots]
    if lat.vertical_basis is not None:
        out["vertical_basis"] = [vec(v) for v in lat.vertical_basis]
    return out


def cone_from_dict(data: dict, src: str = "<cone>") -> RationalCone:
    """Build a cone from whichever descriptions the file supplies.

    Rays (with optional lineality) take precedence; if facets are present
    as well they must describe the same cone.
    """
    if not isinstance(data, dict):
        raise SchemaError(f"{src}: $: expected an object")
    rank = _int_field(data, "rank", src)
    if rank < 1:
        raise InvariantViolation(f"{src}: $.rank: must be positive")
    lists = {k: _vectors(data[k], f"{src}: $.{k}", rank)
             for k in ("rays", "facets", "lineality", "equations") if data.get(k) is not None}
    if "rays" in lists or "lineality" in lists:
        cone = cone_from_rays(rank, lists.get("rays", []), lists.get("lineality", []))
        if "facets" in lists or "equations" in lists:
            other = cone_from_facets(rank, lists.get("facets", []), lists.get("equations", []))
            if other != cone:
                raise InvariantViolation(f"{src}: $: rays and facets describe different cones")
        return cone
    if "facets" in lists or "equations" in lists:
        return cone_from_facets(rank, lists.get("facets", []), lists.get("equations", []))
    raise SchemaError(f"{src}: $: need at least one of rays, facets, lineality")


def cone_to_dict(cone: RationalCone) -> dict:
    def ints(vs):
        return [list(v) for v in vs]

    return {"rank": cone.rank, "rays": ints(cone.rays), "facets": ints(cone.facets),
            "lineality": ints(cone.lineality), "equations": ints(cone.equations)}


def load_lattice(path) -> DivisorLattice:
    return lattice_from_dict(read_json(path), str(path))


def load_cone(path) -> RationalCone:
    return cone_from_dict(read_json(path), str(path))


# -- writing -----------------------------------------------------------------

def to_jsonable(obj):
    """Convert Fractions to strings and tuples to lists, recursively."""
    if isinstance(obj, Fraction):
        return linalg.fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def make_report(request: dict, result: dict) -> dict:
    return {"request": to_jsonable(request), "result": to_jsonable(result),
            "versions": {"nefcone": __version__}}


def emit(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _emit_csv(report)
    if fmt == "svg":
        result = report.get("result", {})
        if "slice" in result:
            return render_slice_svg(result["slice"])
        if "cone" in result:
            return render_cone_svg(result["cone"])
        raise UnsupportedFormat("svg output needs a chamber slice or a cone of rank 2 or 3")
    raise UnsupportedFormat(f"unknown format {fmt!r}")


def _emit_csv(report: dict) -> str:
    result = to_jsonable(report.get("result", {}))
    buf = _io.StringIO()
    rows = result.get("rows") if isinstance(result, dict) else None
    if rows:
        keys = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v
                        for k, v in r.items()})
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k in sorted(result):
        v = result[k]
        w.writerow([k, json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v])
    return buf.getvalue()


# -- svg ---------------------------------------------------------------------

def _fr(x):
    return Fraction(x) if not isinstance(x, Fraction) else x


def chamber_slice(instance, bound: int) -> dict:
    """Exact polygons of chambers ``|n| <= bound`` on the degree-1 slice.

    Slice coordinates are (chain coordinate, height), where the height is
    the apex coefficient scaled by the degree. Chambers with an apex ray
    are unbounded upward and are truncated at a common cap.
    """
    rank = instance.rank
    if rank not in (2, 3):
        raise UnsupportedFormat("slices are drawn for rank 2 and rank 3 instances only")

    def point(v):
        num, den = instance.slope_parts(v)
        x = Fraction(num) / Fraction(den)
        y = Fraction(v[0]) / Fraction(den) if rank == 3 else Fraction(0)
        return x, y

    pts = {j: point(instance.chain_ray(j)) for j in range(-bound, bound + 2)}
    polygons = []
    if rank == 3:
        cap = max(y for _, y in pts.values()) + 2
        for n in range(-bound, bound + 1):
            (x0, y0), (x1, y1) = pts[n], pts[n + 1]
            polygons.append({"index": n, "vertices": [(x0, y0), (x1, y1), (x1, cap), (x0, cap)]})
    else:
        for n in range(-bound, bound + 1):
            (x0, _), (x1, _) = pts[n], pts[n + 1]
            polygons.append({"index": n, "vertices": [(x0, 0), (x1, 0), (x1, 1), (x0, 1)]})
    labels = [{"text": f"Q{j}", "at": pts[j]} for j in sorted(pts)]
    return to_jsonable({"instance": instance.name, "bound": bound, "polygons": polygons,
                        "labels": labels, "apex_direction": "up" if rank == 3 else None})


def _svg_document(shapes, xs, ys, width=640, height=480, pad=30):
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    sx = (width - 2 * pad) / ((xmax - xmin) or 1)
    sy = (height - 2 * pad) / ((ymax - ymin) or 1)

    def tx(x):
        return pad + (x - xmin) * sx

    def ty(y):
        return height - pad - (y - ymin) * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    for kind, data in shapes:
        if kind == "polygon":
            pts = " ".join(f"{tx(x):.3f},{ty(y):.3f}" for x, y in data["vertices"])
            shade = "#d0e0f0" if data.get("index", 0) % 2 == 0 else "#f0e0d0"
            out.append(f'<polygon points="{pts}" fill="{shade}" stroke="#333" stroke-width="1">'
                       f'<title>chamber {data.get("index")}</title></polygon>')
        elif kind == "line":
            (x0, y0), (x1, y1) = data
            out.append(f'<line x1="{tx(x0):.3f}" y1="{ty(y0):.3f}" x2="{tx(x1):.3f}" y2="{ty(y1):.3f}" '
                       f'stroke="#333" stroke-width="1"/>')
        elif kind == "label":
            x, y = data["at"]
            out.append(f'<text x="{tx(x):.3f}" y="{ty(y) + 12:.3f}" font-size="9" '
                       f'text-anchor="middle">{data["text"]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_slice_svg(slice_data: dict) -> str:
    shapes = []
    xs, ys = [], []
    for poly in slice_data["polygons"]:
        verts = [(float(_fr(x)), float(_fr(y))) for x, y in poly["vertices"]]
        xs += [x for x, _ in verts]
        ys += [y for _, y in verts]
        shapes.append(("polygon", {"index": poly["index"], "vertices": verts}))
    for lab in slice_data.get("labels", []):
        x, y = (float(_fr(v)) for v in lab["at"])
        if min(xs) <= x <= max(xs):
            shapes.append(("label", {"text": lab["text"], "at": (x, y)}))
    return _svg_document(shapes, xs, ys)


def render_cone_svg(cone_data: dict) -> str:
    rank = cone_data["rank"]
    rays = [tuple(Fraction(x) for x in r) for r in cone_data["rays"]]
    if rank == 2:
        if cone_data.get("lineality"):
            raise UnsupportedFormat("cones with lineality are not drawn")
        segs = [((0.0, 0.0), (float(r[0]), float(r[1]))) for r in rays]
        xs = [0.0] + [p[1][0] for p in segs]
        ys = [0.0] + [p[1][1] for p in segs]
        return _svg_document([("line", s) for s in segs], xs, ys)
    if rank == 3:
        if cone_data.get("lineality") or cone_data.get("equations") or len(rays) < 3:
            raise UnsupportedFormat("only pointed full-dimensional rank-3 cones are drawn")
        facets = [tuple(Fraction(x) for x in f) for f in cone_data["facets"]]
        s = [sum(f[i] for f in facets) for i in range(3)]
        # slice {s . x = 1}, projected along the coordinate where s is largest
        drop = max(range(3), key=lambda i: abs(s[i]))
        keep = [i for i in range(3) if i != drop]
        pts = []
        for r in rays:
            t = sum(a * b for a, b in zip(s, r))
            pts.append([r[i] / t for i in keep])
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        pts.sort(key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))
        verts = [(float(p[0]), float(p[1])) for p in pts]
        return _svg_document([("polygon", {"index": 0, "vertices": verts})],
                             [v[0] for v in verts], [v[1] for v in verts])
    raise UnsupportedFormat(f"cannot draw a rank-{rank} cone")
