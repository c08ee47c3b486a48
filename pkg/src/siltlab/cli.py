"""Command line front end: build, enumerate, verify, report.

Every file-writing command also writes ``<out>.manifest.json`` recording
the exact invocation, input hashes, seed, version and wall time; output
artifacts themselves are deterministic functions of those inputs.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 internal diagnostic.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .algebra import (
    algebra_from_json,
    algebra_to_json,
    make_lambda,
    make_linear_a,
)
from .errors import (
    DiagnosticError,
    InputError,
    SiltlabError,
    VerificationFailure,
)
from .homotopy import Category
from .serialize import (
    complex_from_dict,
    dumps,
    poset_payload_from_dict,
    silting_list_to_dict,
)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class Runner:
    """Collects written artifacts and emits manifests."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = argv
        self.t0 = time.time()
        self.algebra_hash = None
        self.seed = getattr(args, "seed", None)

    def config_hash(self) -> str:
        payload = {k: v for k, v in sorted(vars(self.args).items()) if k != "func"}
        return _sha256(json.dumps(payload, sort_keys=True, default=str))

    def write(self, path: str, text: str):
        with open(path, "w") as fh:
            fh.write(text)
        manifest = {
            "schema": "siltlab/1",
            "kind": "run-manifest",
            "command": self.argv,
            "config_hash": self.config_hash(),
            "algebra_hash": self.algebra_hash,
            "seed": self.seed,
            "version": __version__,
            "wall_time_s": round(time.time() - self.t0, 3),
        }
        with open(path + ".manifest.json", "w") as fh:
            fh.write(dumps(manifest))
        print(f"wrote {path}")


def _load_algebra(runner, path):
    with open(path) as fh:
        text = fh.read()
    runner.algebra_hash = _sha256(text)
    return algebra_from_json(text)


def _build_algebra_from_args(args):
    if args.lam:
        r, n, m = args.lam
        return make_lambda(r, n, m)
    if args.linear_a:
        orient = [o for o in (args.orient or "f," * (args.linear_a - 1)).split(",") if o]
        return make_linear_a(args.linear_a, orient)
    if args.file:
        with open(args.file) as fh:
            return algebra_from_json(fh.read())
    raise InputError("choose one of --lambda, --linear-a, --file")


def cmd_algebra(runner, args):
    alg = _build_algebra_from_args(args)
    text = algebra_to_json(alg)
    runner.algebra_hash = _sha256(text)
    runner.write(args.out, text)
    return 0


def _base_silting(cat, spec: str):
    from .silting import is_silting, standard_silting

    std = standard_silting(cat)  # interns the projectives as ids 0..n-1
    if spec == "standard":
        return std
    try:
        ids = tuple(sorted(int(x) for x in spec.split(",")))
    except ValueError:
        raise InputError(f"bad base silting spec {spec!r}")
    if any(i < 0 or i >= len(cat.objects) for i in ids):
        raise InputError(f"base ids {ids} outside the registry")
    if not is_silting(cat, ids):
        raise InputError(f"base ids {ids} are not a silting object")
    return ids


def cmd_enumerate(runner, args):
    from .silting import SiltingPair, enumerate_interval, right_mutation

    alg = _load_algebra(runner, args.algebra)
    cat = Category(alg)
    base = _base_silting(cat, args.base)
    interval = enumerate_interval(cat, base, args.k)
    runner.write(args.out, dumps(silting_list_to_dict(cat, interval)))
    if args.dot:
        members = set(interval)
        lines = ["digraph silting {", "  rankdir=TB;"]
        label = {ids: ",".join(map(str, ids)) for ids in interval}
        for ids in interval:
            lines.append(f'  "{label[ids]}";')
        for ids in interval:
            for m in ids:
                pair = SiltingPair.of(ids, tuple(x for x in ids if x != m))
                mu = right_mutation(cat, pair)
                if mu in members:
                    lines.append(f'  "{label[ids]}" -> "{label[mu]}";')
        lines.append("}")
        runner.write(args.dot, "\n".join(lines) + "\n")
    return 0


def cmd_poset(runner, args):
    from .pairsposet import build_pairs_poset, hasse_dot, poset_to_json

    alg = _load_algebra(runner, args.algebra)
    cat = Category(alg)
    base = _base_silting(cat, args.base)
    poset = build_pairs_poset(cat, base, args.k)
    runner.write(args.out, poset_to_json(poset))
    if args.dot:
        runner.write(args.dot, hasse_dot(poset))
    if args.figure:
        from .figures import poset_figure

        poset_figure(poset, args.figure)
        print(f"wrote {args.figure}")
    return 0


def cmd_verify_cw(runner, args):
    from .pairsposet import poset_from_dict, verify_cw_poset

    with open(args.poset) as fh:
        data = json.load(fh)
    poset = poset_from_dict(data)
    report = verify_cw_poset(poset, sphere_checks=not args.no_spheres)
    if args.out:
        runner.write(args.out, dumps(report))
    else:
        print(dumps(report), end="")
    for sub in report["reports"]:
        status = "pass" if sub["pass"] else "FAIL"
        print(f"{sub['check']}: {status}")
    return 0 if report["pass"] else 1


def cmd_homology(runner, args):
    from .pairsposet import poset_from_dict
    from .topology import homology, homology_to_json, order_complex

    with open(args.poset) as fh:
        data = json.load(fh)
    poset = poset_from_dict(data)
    try:
        lo_key, hi_key = args.interval.split("..")
    except ValueError:
        raise InputError("interval must look like 0hat..NODEKEY")
    lo, hi = poset.node_of(lo_key), poset.node_of(hi_key)
    mask = poset.interval(lo, hi)
    if args.open:
        mask &= ~(1 << lo) & ~(1 << hi)
    nodes = poset.members(mask)
    sc = order_complex(nodes, lambda a, b: poset.leq(a, b))
    profile = homology(sc)
    text = homology_to_json(profile)
    if args.out:
        runner.write(args.out, text)
    else:
        print(text, end="")
    return 0


def cmd_embed(runner, args):
    from .pairsposet import poset_from_dict
    from .stability import (
        embed_cw_point,
        injectivity_probe,
        sample_cw_points,
        simple_classes,
        validate_point,
    )

    with open(args.poset) as fh:
        data = json.load(fh)
    poset = poset_from_dict(data)
    cat, pairs = poset_payload_from_dict(data)
    points = sample_cw_points(cat, poset, pairs, args.samples, args.seed)
    failures = []
    charge_values = []
    for pt in points:
        sp = embed_cw_point(cat, pt)
        verdict = validate_point(cat, sp)
        if verdict["verdict"] != "PASS":
            failures.append(verdict)
        for cls in simple_classes(cat, sp.heart):
            charge_values.append(sp.charge(cls))
    probe = injectivity_probe(cat, points)
    report = {
        "schema": "siltlab/1",
        "kind": "embed-report",
        "samples": len(points),
        "validation_failures": failures,
        "injectivity": probe,
        "sample_points": [
            embed_cw_point(cat, pt).to_jsonable() for pt in points[:10]
        ],
        "pass": not failures and probe["pass"],
    }
    runner.write(args.out, dumps(report))
    if args.figure:
        from .figures import charges_figure

        charges_figure(charge_values, args.figure)
        print(f"wrote {args.figure}")
    return 0 if report["pass"] else 1


def cmd_classify(runner, args):
    from .stability import a3_window_objects, classification_tsv, classify_objects

    alg = _load_algebra(runner, args.algebra)
    cat = Category(alg)
    base = _base_silting(cat, args.silting)
    if args.objects:
        with open(args.objects) as fh:
            data = json.load(fh)
        objects = [
            (entry["label"], complex_from_dict(alg, entry["complex"]))
            for entry in data["objects"]
        ]
    elif args.a3_window:
        x0, x1 = args.a3_window
        objects = a3_window_objects(alg, x0, x1)
    else:
        raise InputError("provide --objects FILE or --a3-window X0 X1")
    rows = classify_objects(cat, base, objects)
    runner.write(args.out, classification_tsv(rows))
    return 0


def _parse_coord(text, r, n, m):
    from .arcoords import ZCoord

    try:
        k, i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad coordinate {text!r}, expected k,i,j")
    return ZCoord(k, i, j, r, n, m)


def cmd_hammock(runner, args):
    from .arcoords import (
        finiteness_survivors,
        survivors_csv,
        z_hom_nonzero,
    )

    r, n, m = args.rnm
    if args.frm and args.to:
        a = _parse_coord(args.frm, r, n, m)
        b = _parse_coord(args.to, r, n, m)
        result = z_hom_nonzero(a, b)
        print(json.dumps({"from": args.frm, "to": args.to, "nonzero": result}))
        return 0
    if args.survivors:
        base = _parse_coord(args.base, r, n, m)
        i0, i1, j0, j1 = args.box
        box = (list(range(r)), i0, i1, j0, j1)
        out = finiteness_survivors(base, args.shift, box)
        runner.write(args.out, survivors_csv(out))
        if args.figure:
            from .figures import hammock_figure

            hammock_figure(out, box, args.figure)
            print(f"wrote {args.figure}")
        return 0
    raise InputError("give --from/--to for one test or --survivors for a dump")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siltlab",
        description="exact silting mutation, CW posets and stability charges",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="worker cap; outputs are independent of this value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="build and write an algebra document")
    p.add_argument("--lambda", dest="lam", type=int, nargs=3, metavar=("R", "N", "M"))
    p.add_argument("--linear-a", type=int, metavar="L")
    p.add_argument("--orient", type=str, default=None, help="comma list of f/b")
    p.add_argument("--file", type=str, help="existing algebra JSON to validate")
    p.add_argument("-o", "--out", default="algebra.json")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("enumerate", help="silting objects in [S^-k M, M]")
    p.add_argument("--algebra", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--base", default="standard")
    p.add_argument("--dot", help="also write the silting quiver as DOT")
    p.add_argument("-o", "--out", default="silting.json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("poset", help="build the silting pairs poset")
    p.add_argument("--algebra", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--base", default="standard")
    p.add_argument("--dot", help="also write the Hasse diagram as DOT")
    p.add_argument("--figure", help="also render the Hasse diagram as PNG")
    p.add_argument("-o", "--out", default="poset.json")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("verify-cw", help="run the CW-poset certificates")
    p.add_argument("--poset", required=True)
    p.add_argument("--no-spheres", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_verify_cw)

    p = sub.add_parser("homology", help="homology of an order-complex interval")
    p.add_argument("--poset", required=True)
    p.add_argument("--interval", required=True, help="LOKEY..HIKEY")
    p.add_argument("--open", action="store_true", help="strip the endpoints")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("embed", help="sample the embedding into stability data")
    p.add_argument("--poset", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--figure", help="render sampled simple charges as PNG")
    p.add_argument("-o", "--out", default="embed.json")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("classify", help="tag window objects against a silting object")
    p.add_argument("--algebra", required=True)
    p.add_argument("--silting", default="standard")
    p.add_argument("--objects", help="JSON file with labelled complexes")
    p.add_argument(
        "--a3-window",
        type=int,
        nargs=2,
        metavar=("X0", "X1"),
        help="generate the standard window of the linear A_3 picture",
    )
    p.add_argument("-o", "--out", default="classify.tsv")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hammock", help="AR-coordinate hammock oracle")
    p.add_argument("--rnm", type=int, nargs=3, required=True, metavar=("R", "N", "M"))
    p.add_argument("--from", dest="frm", help="k,i,j")
    p.add_argument("--to", help="k,i,j")
    p.add_argument("--survivors", action="store_true")
    p.add_argument("--base", help="k,i,j centre of the exclusion test")
    p.add_argument("--shift", type=int, default=1)
    p.add_argument(
        "--box", type=int, nargs=4, metavar=("IMIN", "IMAX", "JMIN", "JMAX")
    )
    p.add_argument("--figure")
    p.add_argument("-o", "--out", default="survivors.csv")
    p.set_defaults(func=cmd_hammock)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    runner = Runner(args, ["siltlab"] + argv)
    try:
        return args.func(runner, args)
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except DiagnosticError as exc:
        print(f"internal diagnostic: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except SiltlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
