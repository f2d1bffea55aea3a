"""Batch interface: load structures, run predicate reports and
constructions, and execute the theorem-verification suites.

Exit codes: 0 all-pass, 1 verdict failure, 2 input error, 3 resource cap.
Reports are byte-identical across runs for identical inputs and flags;
timings appear only under --timings.  QUANTALIB_SEED is read and ignored
(reserved; all computation is deterministic).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions as cons
from . import corpus as corp
from . import oracles
from . import quantaloid as qd
from . import sites as sites_mod
from . import verify
from .errors import InputError, QuantalibError, ResourceLimitError
from .report import Report, render

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


def load_quantaloid(spec: str) -> tuple[str, qd.FiniteQuantaloid]:
    """A path to a quantaloid JSON file, or 'corpus:<name>' for a built-in."""
    if spec.startswith("corpus:"):
        name = spec.split(":", 1)[1]
        stock = corp.corpus_quantaloids()
        stock["truncated-sum"] = corp.truncated_sum_quantale()
        if name not in stock:
            raise InputError(f"unknown corpus quantaloid {name!r} "
                             f"(have: {', '.join(sorted(stock))})")
        return name, stock[name]
    return spec, qd.FiniteQuantaloid.from_json(_load_json(spec))


def _emit(reports: list[Report], args) -> int:
    print(render(reports, fmt=args.format, with_timing=args.timings))
    if any(r.verdict == "unknown" for r in reports):
        return EXIT_RESOURCE
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERDICT


def cmd_check(args) -> int:
    subject, q = load_quantaloid(args.path)
    which = args.predicates.split(",") if args.predicates else None
    reports = qd.predicate_report(q, subject, which=which,
                                  max_clique_nodes=args.max_cliques)
    return _emit(reports, args)


def cmd_construct(args) -> int:
    reports: list[Report] = []
    artifact = None
    if args.op == "crible-quantaloid":
        cat, topo = sites_mod.site_from_json(_load_json(args.path))
        q = sites_mod.closed_crible_quantaloid(cat, topo)
        artifact = q.to_json()
        reports.append(Report(args.path, "crible-quantaloid", "pass",
                              witness={"objects": list(q.objects)}))
    else:
        subject, q = load_quantaloid(args.path)
        if args.op == "ssi":
            qe = qd.ssi(q)
            artifact = qe.to_json()
            reports.append(Report(subject, "ssi", "pass",
                                  witness={"objects": list(qe.objects)}))
        elif args.op == "split":
            if not args.idempotents:
                raise InputError("--idempotents is required for --op split "
                                 "(format: 'X:e,Y:f')")
            idems = []
            for item in args.idempotents.split(","):
                try:
                    obj, elt = item.split(":", 1)
                except ValueError:
                    raise InputError(f"bad idempotent spec {item!r}") from None
                idems.append(q.morphism(obj, obj, elt))
            qe, embedding = qd.split_idempotents(q, idems)
            artifact = qe.to_json()
            reports.append(Report(subject, "split", "pass",
                                  witness={"objects": list(qe.objects),
                                           "embedding": embedding}))
        elif args.op in ("sh-q", "rel-q"):
            mode = "symmetric" if args.op == "sh-q" else "all"
            classes = cons.enumerate_sheaves(q, args.max, mode=mode,
                                             max_morita=args.max_morita,
                                             max_presheaves=args.max_presheaves)
            base = (qd.ssi(q) if mode == "symmetric" else qd.si(q)) \
                if q.objects else None
            artifact = {"mode": mode, "max_points": args.max,
                        "base": base.to_json() if base is not None else None,
                        "classes": [{"points": c.points,
                                     "representative": c.representative.to_json(),
                                     "members_found": c.members_found,
                                     "morita_unknown": c.morita_unknown}
                                    for c in classes]}
            verdict = "unknown" if any(c.morita_unknown for c in classes) else "pass"
            reports.append(Report(subject, f"census[{mode}]<={args.max}", verdict,
                                  witness={"classes": len(classes),
                                           "points": [c.points for c in classes]}))
        elif args.op == "morita-quantale":
            qm = cons.morita_quantale(q, max_size=args.max_matrices)
            artifact = qm.to_json()
            reports.append(Report(subject, "morita-quantale", "pass",
                                  witness={"carrier": len(qm.hom(qm.objects[0],
                                                                 qm.objects[0]).elements)}))
        elif args.op == "site-roundtrip":
            cat, topo, _ = sites_mod.topology_from_quantaloid(q)
            rebuilt = sites_mod.closed_crible_quantaloid(cat, topo)
            iso = qd.find_isomorphism(q, rebuilt)
            artifact = {"site": sites_mod.site_to_json(cat, topo),
                        "rebuilt": rebuilt.to_json()}
            reports.append(Report(subject, "site-roundtrip",
                                  "pass" if iso else "fail",
                                  witness=iso["objects"] if iso else None,
                                  counterexample=None if iso else
                                  {"not_isomorphic": True}))
        else:
            raise InputError(f"unknown construction {args.op!r}")
    if args.out and artifact is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(artifact, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return _emit(reports, args)


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.suite, inject_fault=args.inject_fault)
    return _emit(reports, args)


def cmd_oracle(args) -> int:
    if args.kind == "sets":
        n = oracles.count_set_iso_classes(args.max)
        print(json.dumps({"oracle": "set-census", "max_size": args.max, "classes": n}))
        return EXIT_OK
    if args.kind == "gsets":
        if args.path:
            gpd = cons.FiniteGroupoid.from_json(_load_json(args.path))
        else:
            gpd = cons.group_z2()
        if len(gpd.objects) != 1:
            raise InputError("the G-set oracle expects a one-object groupoid (a group)")
        mult = {(a, b): gpd.comp[(a, b)] for a in gpd.arrows for b in gpd.arrows}
        unit = gpd.identities[gpd.objects[0]]
        n = oracles.count_gset_iso_classes(list(gpd.arrows), unit, mult, args.max)
        print(json.dumps({"oracle": "gset-census", "max_size": args.max, "classes": n}))
        return EXIT_OK
    if args.kind == "locale-sheaves":
        if not args.path:
            raise InputError("locale-sheaves oracle needs a lattice JSON path")
        from .lattice import FiniteSupLattice
        lat = FiniteSupLattice.from_json(_load_json(args.path))
        ok, bad = lat.is_locale()
        if not ok:
            raise InputError(f"not a locale: {bad}")
        irr = oracles.join_irreducibles(lat)
        leq = {(p, r): lat.leq(p, r) for p in irr for r in irr}
        n = oracles.count_poset_presheaf_classes(irr, leq, args.max)
        print(json.dumps({"oracle": "locale-sheaf-census", "max_total": args.max,
                          "irreducibles": sorted(irr), "classes": n}))
        return EXIT_OK
    raise InputError(f"unknown oracle {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quantalib",
        description="finite involutive quantaloid computation engine")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in reports "
                             "(breaks byte-identity)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common],
                       help="run predicates on a quantaloid file")
    c.add_argument("path", help="quantaloid JSON path or corpus:<name>")
    c.add_argument("--predicates", default=None,
                   help=f"comma list from: {', '.join(sorted(qd.PREDICATE_NAMES))}")
    c.add_argument("--max-cliques", type=int, default=1 << 20)
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("construct", parents=[common], help="run a construction, emit a re-loadable artifact")
    c.add_argument("path", help="input JSON path or corpus:<name>")
    c.add_argument("--op", required=True,
                   choices=("ssi", "split", "rel-q", "sh-q", "morita-quantale",
                            "site-roundtrip", "crible-quantaloid"))
    c.add_argument("--out", default=None, help="artifact output path")
    c.add_argument("--max", type=int, default=2, help="census size bound")
    c.add_argument("--idempotents", default=None, help="for --op split: 'X:e,Y:f'")
    c.add_argument("--max-matrices", type=int, default=1024)
    c.add_argument("--max-morita", type=int, default=100000)
    c.add_argument("--max-presheaves", type=int, default=10 ** 6)
    c.set_defaults(fn=cmd_construct)

    c = sub.add_parser("verify", parents=[common], help="run a theorem-verification suite on the corpus")
    c.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    c.add_argument("--inject-fault", action="store_true",
                   help="mutate a corpus composition entry and demand detection")
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("oracle", parents=[common], help="run a brute-force counter standalone")
    c.add_argument("kind", choices=("sets", "gsets", "locale-sheaves"))
    c.add_argument("path", nargs="?", default=None)
    c.add_argument("--max", type=int, default=2)
    c.set_defaults(fn=cmd_oracle)
    return p


def main(argv=None) -> int:
    os.environ.get("QUANTALIB_SEED")  # reserved, deliberately ignored
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QuantalibError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
