"""Command-line interface: ``mapcert invariants | certify | gen-fixture``."""

from __future__ import annotations

import argparse
import sys

from . import fixtures
from .engine import (FINITE_COVER, HOMEOMORPHISM, INCONCLUSIVE, NOT_CERTIFIED, NOT_HOMEOMORPHIC,
                     Config, _default_depth, certify, explain)
from .errors import MapCertError
from .mapping.pmap import AmbientSimplyConnected, ExplicitDomain, PiecewiseMap
from .meshio import read_mesh, write_mesh
from .report import certificate_report, dumps, invariants_report
from .topology.complex import check_manifold

EXIT_CODES = {
    HOMEOMORPHISM: 0,
    NOT_CERTIFIED: 1,
    NOT_HOMEOMORPHIC: 1,
    INCONCLUSIVE: 2,
    FINITE_COVER: 2,
}
INPUT_ERROR = 3

FLOAT_PARAMS = {"r0", "r1"}


class InputError(Exception):
    pass


def exit_code(verdict: str) -> int:
    return EXIT_CODES[verdict]


def _cmd_invariants(args) -> int:
    fx = read_mesh(args.mesh)
    rep = check_manifold(fx.complex)
    if not rep.ok:
        raise InputError(f"{args.mesh}: not a manifold: {rep.summary()}")
    print(dumps(invariants_report(fx.complex)))
    return 0


def _realization(fx, name, path):
    if name not in fx.realizations:
        raise InputError(f"{path}: no realization named {name!r} "
                         f"(available: {', '.join(fx.realizations)})")
    return fx.realizations[name]


def _cmd_certify(args) -> int:
    fx = read_mesh(args.mesh)
    src = _realization(fx, args.source, args.mesh)
    tgt = _realization(fx, args.target, args.mesh)
    f = PiecewiseMap(fx.complex, src, tgt)
    if args.image_mode:
        target = AmbientSimplyConnected()
    elif args.target_mesh:
        ty = read_mesh(args.target_mesh)
        target = ExplicitDomain(ty.complex, _realization(ty, args.target_realization, args.target_mesh))
    else:
        target = ExplicitDomain(fx.complex, src, same_mesh=True)
    config = Config(
        paths=tuple(args.paths.split(",")) if args.paths else None,
        max_depth=args.depth if args.depth is not None else _default_depth(),
        samples=args.samples,
        seed=args.seed,
        dist_tol=args.dist_tol,
        trust_source=args.trust_source,
        covering_fallback=not args.no_fallback,
    )
    cert = certify(f, target, config)
    print(dumps(certificate_report(cert)))
    if args.explain:
        print(explain(cert), file=sys.stderr)
    return exit_code(cert.verdict)


def _parse_params(name, names, values):
    if len(values) > len(names):
        raise InputError(f"{name} takes at most {len(names)} parameters ({', '.join(names)})")
    out = {}
    for key, val in zip(names, values):
        try:
            out[key] = float(val) if key in FLOAT_PARAMS else int(val)
        except ValueError:
            raise InputError(f"{name}: parameter {key} must be a number, got {val!r}") from None
    return out


def _cmd_gen_fixture(args) -> int:
    name, params = args.name, list(args.params)
    if name == "tangle":
        if not params:
            raise InputError("tangle needs a mesh file")
        base = read_mesh(params[0])
        if args.random is not None:
            seed, amplitude = args.random
            fx = fixtures.tangle_random(base, int(seed), float(amplitude))
        else:
            if len(params) != 2:
                raise InputError("tangle needs <file> <cell-id> or <file> --random <seed> <amplitude>")
            try:
                cell = int(params[1])
            except ValueError:
                raise InputError(f"cell id must be an integer, got {params[1]!r}") from None
            fx = fixtures.tangle(base, cell)
    elif name == "tfi":
        if len(params) != 1:
            raise InputError("tfi needs a boundary-curves JSON file")
        fx = fixtures.tfi(fixtures.load_curves(params[0]))
    elif name in fixtures.GENERATORS:
        fn, names = fixtures.GENERATORS[name]
        fx = fn(**_parse_params(name, names, params))
    else:
        raise InputError(f"unknown fixture {name!r}; choose from "
                         f"{', '.join(sorted(list(fixtures.GENERATORS) + ['tangle', 'tfi']))}")
    rep = check_manifold(fx.complex)
    if not rep.ok:
        raise InputError(f"generated {name} is not a manifold: {rep.summary()}")
    if args.output == "-":
        from .meshio import dumps as mesh_dumps
        sys.stdout.write(mesh_dumps(fx))
    else:
        write_mesh(fx, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapcert", description=(
        "Certify piecewise-interpolated maps between meshed manifolds as homeomorphisms or coverings."))
    sub = p.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("invariants", help="topological invariants of a mesh")
    pi.add_argument("mesh")
    pi.set_defaults(func=_cmd_invariants)

    pc = sub.add_parser("certify", help="run the decision tree on a map")
    pc.add_argument("mesh")
    pc.add_argument("--source", default="default", help="realization used as the domain X")
    pc.add_argument("--target", default="physical", help="realization giving the images f(x)")
    mode = pc.add_mutually_exclusive_group()
    mode.add_argument("--target-mesh", help="mesh file whose default realization is Y")
    mode.add_argument("--image-mode", action="store_true",
                      help="certify a homeomorphism onto the image in R^n")
    pc.add_argument("--target-realization", default="default",
                    help="realization of --target-mesh to use as Y")
    pc.add_argument("--depth", type=int, default=None,
                    help="Bernstein subdivision depth (default: MC_MAX_DEPTH or 8)")
    pc.add_argument("--samples", type=int, default=7, help="generic points for the covering degree")
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--dist-tol", type=float, default=None, help="boundary containment tolerance")
    pc.add_argument("--paths", help="comma-separated theorem ids to try, in order (e.g. T3,T2)")
    pc.add_argument("--trust-source", action="store_true",
                    help="skip verifying that the source realization is an embedding")
    pc.add_argument("--no-fallback", action="store_true", help="disable the covering-degree fallback")
    pc.add_argument("--explain", action="store_true", help="print a readable trace to stderr")
    pc.set_defaults(func=_cmd_certify)

    pg = sub.add_parser("gen-fixture", help="write a generated fixture as an MCMESH file")
    pg.add_argument("name")
    pg.add_argument("params", nargs="*")
    pg.add_argument("--random", nargs=2, metavar=("SEED", "AMPLITUDE"),
                    help="tangle: jitter all interior vertices instead of inverting one cell")
    pg.add_argument("-o", "--output", required=True, help="output path, or - for stdout")
    pg.set_defaults(func=_cmd_gen_fixture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else 0
    try:
        return args.func(args)
    except (InputError, MapCertError, ValueError, OSError, KeyError) as e:
        print(f"mapcert: error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
