"""Command-line front end.

Exit codes: 0 success, 2 validation failure, 3 inconclusive verification
(a fundamental-domain check left samples uncovered at the word bound).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import abelian, chambers, group, io, k3, linalg
from .cone import Membership, cone_from_rays, member
from .errors import NefconeError, ParseError, UnsupportedFormat

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

OUTPUT_DIR_ENV = "NEFCONE_OUTPUT_DIR"


def _matrix_arg(text: str, what: str):
    """A matrix given inline as JSON or as a path to a JSON file."""
    try:
        is_file = Path(text).suffix == ".json" or Path(text).is_file()
    except OSError:
        is_file = False
    data = io.read_json(text) if is_file else None
    if data is None:
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            raise ParseError(f"{what}: expected a JSON matrix or a JSON file, got {text!r}") from None
    if isinstance(data, dict):
        data = data.get("matrix", data.get("gram"))
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{what}: expected a list of rows")
    if any(isinstance(x, float) for r in data for x in r):
        raise ParseError(f"{what}: floats are not accepted; use integers or 'p/q' strings")
    return [[linalg.to_fraction(x) for x in r] for r in data]


def _vector_arg(text: str):
    try:
        return tuple(Fraction(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse vector {text!r}") from None


# -- subcommands ---------------------------------------------------------------

def cmd_cone(args):
    if args.file:
        cone = io.load_cone(args.file)
    elif args.rays:
        rays = _matrix_arg(args.rays, "--rays")
        cone = cone_from_rays(len(rays[0]), rays)
    else:
        raise ParseError("cone: give --file or --rays")
    result = {"cone": io.cone_to_dict(cone), "dim": cone.dim}
    if args.member:
        z = _vector_arg(args.member)
        result["member"] = member(cone, z, Membership(args.mode))
    return result, EXIT_OK


def cmd_abelian(args):
    ab = abelian.build_abelian(args.n)
    if args.action == "build":
        return {"n": ab.n, "rank": ab.lattice.rank, "lattice": io.lattice_to_dict(ab.lattice)}, EXIT_OK
    if not args.cls:
        raise ParseError(f"abelian {args.action}: --class is required")
    z = ab.lattice.parse_class(args.cls)
    if args.action == "tau":
        return {"class": z.label(), "tau": abelian.tau(ab, z)}, EXIT_OK
    if args.action == "classify":
        c = abelian.classify(ab, z)
        return {"class": z.label(), "ample": c.ample, "nef": c.nef, "big_given_nef": c.big_given_nef,
                "top_self_intersection": c.top_self_intersection}, EXIT_OK
    if not args.theta:
        raise ParseError("abelian push: --theta is required")
    theta = [[int(x) for x in row] for row in _matrix_arg(args.theta, "--theta")]
    img = abelian.push_forward(ab, theta, z)
    return {"class": z.label(), "theta": theta, "image": img.label(), "image_coords": img.coords}, EXIT_OK


def cmd_k3(args):
    lat = io.load_lattice(args.lattice)
    k = k3.K3Lattice(lat)
    z = lat.parse_class(args.cls)
    if args.action == "walk":
        w = k3.to_nef_chamber(k, z, args.max_steps)
        return {"start": z.coords, "end": w.end.coords, "word": [r.coords for r in w.word],
                "steps": len(w.word)}, EXIT_OK
    c = k3.classify_k3(k, z, args.max_coefficient)
    cert = None
    if c.effective_certificate is not None:
        cert = {"positive_part": c.effective_certificate.positive_part.coords,
                "root_coefficients": list(c.effective_certificate.coefficients)}
    return {"class": z.coords, "nef": c.nef, "big": c.big, "effective_certificate": cert}, EXIT_OK


def _chain_instance(name):
    inst = chambers.load_instance(name)
    if not isinstance(inst, chambers.ChainInstance):
        raise ParseError(f"instance {name!r} has no cone chambers")
    return inst


def cmd_walk(args):
    if args.action == "enumerate":
        e = chambers.enumerate_models(args.a, args.b, args.max_size)
        return {"a": args.a, "b": args.b, "count": e.count, "representatives": e.representatives,
                "flop_graph_connected": e.flop_graph_connected}, EXIT_OK
    inst = _chain_instance(args.instance)
    if args.action == "load":
        chambers_out = [{"index": n, "rays": inst.chamber_rays(n), "facets": inst.chamber(n).facets}
                        for n in range(-args.bound, args.bound + 1)]
        result = {"instance": inst.name, "rank": inst.rank,
                  "generators": [g.matrix for g in inst.group_generators],
                  "chambers": chambers_out, "metadata": inst.metadata}
        if args.format == "svg":
            result["slice"] = io.chamber_slice(inst, args.bound)
        return result, EXIT_OK
    if args.action == "locate":
        if not args.cls:
            raise ParseError("walk locate: --class is required")
        z = inst.lattice.parse_class(args.cls)
        path = inst.locate_chamber(z)
        return {"class": z.coords, "start": path.start, "end": path.end,
                "steps": [{"from": s.source, "wall": s.wall, "to": s.target} for s in path.steps]}, EXIT_OK
    if not args.probe:
        raise ParseError("walk meeting: --probe is required")
    probe = io.load_cone(args.probe)
    lo, hi = inst.probe_index_range(probe)
    ids = inst.chambers_meeting(probe, args.bound)
    return {"chambers": ids, "index_range": [lo, hi],
            "complete": max(abs(lo), abs(hi)) <= args.bound}, EXIT_OK


def cmd_fundom(args):
    if args.action == "reduce":
        red, u = group.minkowski_reduce(_matrix_arg(args.gram, "--gram"))
        return {"reduced": red, "transform": u}, EXIT_OK
    inst = _chain_instance(args.instance)
    kind, _, idx = args.domain.partition(":")
    if kind != "chamber" or not idx:
        raise ParseError("--domain must look like chamber:0 or chamber:0,1")
    pieces = [inst.chamber(int(i)) for i in idx.split(",")]
    gens = group.GeneratorSet(inst.group_generators)
    rep = group.verify_fundamental_domain(gens, pieces, region=inst.is_movable, samples=args.samples,
                                          word_bound=args.word_bound, seed=args.seed, box=args.box)
    code = EXIT_OK if rep.fully_covered else EXIT_INCONCLUSIVE
    payload = rep.to_dict()
    payload["rows"] = payload.pop("samples")
    return payload, code


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "svg"], default="json")
    common.add_argument("--output", "-o", help=f"output file (relative paths resolve under ${OUTPUT_DIR_ENV})")
    p = argparse.ArgumentParser(prog="nefcone", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cone", parents=[common], help="convert and query rational cones")
    c.add_argument("--file")
    c.add_argument("--rays", help="JSON list of rays")
    c.add_argument("--member", help="comma-separated point to test")
    c.add_argument("--mode", choices=[m.value for m in Membership], default="closed")
    c.set_defaults(func=cmd_cone)

    a = sub.add_parser("abelian", parents=[common], help="the self-product of an elliptic curve")
    a.add_argument("action", choices=["build", "tau", "classify", "push"])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--class", dest="cls")
    a.add_argument("--theta")
    a.set_defaults(func=cmd_abelian)

    k = sub.add_parser("k3", parents=[common], help="reflection walks on a K3-type lattice")
    k.add_argument("action", choices=["walk", "classify"])
    k.add_argument("--lattice", required=True)
    k.add_argument("--class", dest="cls", required=True)
    k.add_argument("--max-steps", type=int, default=10_000)
    k.add_argument("--max-coefficient", type=int, default=10)
    k.set_defaults(func=cmd_k3)

    w = sub.add_parser("walk", parents=[common], help="chamber complexes and flops")
    w.add_argument("action", choices=["load", "locate", "enumerate", "meeting"])
    w.add_argument("--instance", default="cy322")
    w.add_argument("--class", dest="cls")
    w.add_argument("--a", type=int, default=1)
    w.add_argument("--b", type=int, default=1)
    w.add_argument("--max-size", type=int, default=12)
    w.add_argument("--probe")
    w.add_argument("--bound", type=int, default=5)
    w.set_defaults(func=cmd_walk)

    f = sub.add_parser("fundom", parents=[common], help="fundamental domains and form reduction")
    f.add_argument("action", choices=["verify", "reduce"])
    f.add_argument("--instance", default="cy322")
    f.add_argument("--domain", default="chamber:0")
    f.add_argument("--samples", type=int, default=1000)
    f.add_argument("--word-bound", type=int, default=8)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--box", type=int, default=10)
    f.add_argument("--gram")
    f.set_defaults(func=cmd_fundom)
    return p


def _request_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output") and v is not None}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code = args.func(args)
        text = io.emit(io.make_report(_request_echo(args), result), args.format)
    except (NefconeError, UnsupportedFormat) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        out = Path(args.output)
        if not out.is_absolute() and os.environ.get(OUTPUT_DIR_ENV):
            out = Path(os.environ[OUTPUT_DIR_ENV]) / out
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    else:
        sys.stdout.write(text)
    return code
