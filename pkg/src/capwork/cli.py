"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 size guard or budget exhausted.
Structured results go to --out (JSON, or CSV for sweeps) or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import SCHEMA_VERSION
from .errors import BudgetExceeded, CapworkError, GuardError, UsageError
from .gf import field_of_order

KNOWN_CONFIG_KEYS = {"constants", "cache_dir", "threads"}

POLAR_FAMILIES = {
    "symplectic": "symplectic",
    "parabolic": "parabolic-quadric",
    "hyperbolic": "hyperbolic-quadric",
    "elliptic": "elliptic-quadric",
    "hermitian": "hermitian",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub):
    sub.add_argument("--out", help="output path (default: stdout)")
    sub.add_argument("--threads", type=int, default=1, help="worker cap (informational)")
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--cache-dir", help="cache directory (or CAPWORK_CACHE_DIR)")


def build_parser() -> _Parser:
    parser = _Parser(prog="capwork", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    geom = subs.add_parser("geom", help="build a geometry, emit its descriptor")
    geom.add_argument("--family", required=True, choices=list(POLAR_FAMILIES) + ["pg"])
    geom.add_argument("--rank", "--r", dest="rank", type=int, required=True)
    geom.add_argument("--q", type=int, required=True)
    geom.add_argument("--ambient", type=int, default=3, help="hermitian ambient dimension")
    geom.add_argument("--points", action="store_true", help="include the point list")
    _add_common(geom)

    graph = subs.add_parser("graph", help="build a graph, emit meta (binary cache with --out)")
    graph.add_argument("--instance", required=True, help="e.g. collinearity:symplectic:r2:q2")
    _add_common(graph)

    spectrum = subs.add_parser("spectrum", help="eigenvalues vs closed forms")
    spectrum.add_argument("--family", default="symplectic", choices=list(POLAR_FAMILIES) + ["pg"])
    spectrum.add_argument("--rank", "--r", dest="rank", type=int, default=2)
    spectrum.add_argument("--q", type=int, required=True)
    spectrum.add_argument(
        "--graph",
        default="collinearity",
        choices=["collinearity", "oppositeness", "lines", "planes"],
    )
    _add_common(spectrum)

    bound = subs.add_parser("bound", help="ratio bound / size thresholds / first-moment")
    bound.add_argument("--kind", required=True, choices=["dh", "threshold", "first-moment"])
    bound.add_argument("--n", type=int)
    bound.add_argument("--d", type=int)
    bound.add_argument("--lam", "--lambda", dest="lam", type=int)
    bound.add_argument(
        "--threshold-kind",
        choices=["ovoid", "ekr", "linespread", "planespread", "generic"],
    )
    bound.add_argument("--r", type=int)
    bound.add_argument("--t", default="1")
    bound.add_argument("--q", type=int)
    bound.add_argument("--p", type=float)
    bound.add_argument("--m", type=int)
    _add_common(bound)

    enum = subs.add_parser("enumerate", help="exact maximum independent substructure")
    enum.add_argument(
        "--object", required=True, choices=["ovoid", "ekr", "spread", "cap", "mis"]
    )
    enum.add_argument("--family", default="symplectic", choices=list(POLAR_FAMILIES))
    enum.add_argument("--rank", type=int, default=2)
    enum.add_argument("--r", type=int, help="projective dimension for pg objects")
    enum.add_argument("--q", type=int, required=True)
    enum.add_argument("--k", type=int, default=2, help="spread subspace dimension (vector)")
    enum.add_argument("--budget", type=int, default=10**8)
    enum.add_argument("--witness-out", help="write the witness JSON here")
    enum.add_argument("--instance", help="graph instance for --object mis")
    _add_common(enum)

    count = subs.add_parser("count", help="count independent substructures of size m")
    count.add_argument("--geometry", default="pg", choices=["pg"])
    count.add_argument("--r", type=int, required=True)
    count.add_argument("--q", type=int, required=True)
    count.add_argument("--object", default="cap", choices=["cap"])
    count.add_argument("--m", type=int, required=True)
    _add_common(count)

    supersat = subs.add_parser("supersat", help="minimum induced edges vs lemma bound")
    supersat.add_argument("--instance", required=True)
    supersat.add_argument("--size", type=int, required=True)
    supersat.add_argument("--mode", default="exact", choices=["exact", "sampled"])
    supersat.add_argument("--trials", type=int, default=10**4)
    supersat.add_argument("--seed", type=int, default=0)
    _add_common(supersat)

    containers = subs.add_parser("containers", help="build and verify a container family")
    containers.add_argument("--instance", required=True)
    containers.add_argument("--epsilon", help="graph container epsilon (rational)")
    containers.add_argument("--gamma", help="refinement gamma (rational)")
    containers.add_argument("--e0", type=int, help="triple container edge target")
    containers.add_argument("--verify-with", default="maximal", help="maximal or sampled:N")
    containers.add_argument("--family-out", help="write the family JSON-lines here")
    _add_common(containers)

    sweep = subs.add_parser("random-sweep", help="p-random subset sweep, CSV + sidecar")
    sweep.add_argument("--r", type=int, required=True)
    sweep.add_argument("--q", type=int, required=True)
    sweep.add_argument("--pmin", type=float, required=True)
    sweep.add_argument("--pmax", type=float, required=True)
    sweep.add_argument("--points", type=int, default=12)
    sweep.add_argument("--trials", type=int, required=True)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--budget", type=int, default=2 * 10**6)
    _add_common(sweep)

    report = subs.add_parser("report", help="markdown verification table from artifacts")
    report.add_argument("artifacts", nargs="+", help="JSON/CSV artifact paths")
    _add_common(report)

    certs = subs.add_parser("certificates", help="closed-form container certificates")
    certs.add_argument("--r", type=int, default=3)
    certs.add_argument("--q", type=int, action="append", required=True)
    _add_common(certs)

    return parser


def _load_config(args) -> dict:
    if not getattr(args, "config", None):
        return {}
    cfg = json.loads(Path(args.config).read_text())
    unknown = set(cfg) - KNOWN_CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if "threads" in cfg and int(cfg["threads"]) < 1:
        raise UsageError("threads must be >= 1")
    return cfg


def _emit(args, obj):
    obj = dict(obj)
    obj.setdefault("schema_version", SCHEMA_VERSION)
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _build_polar(family: str, rank: int, q: int, ambient: int = 3):
    from .polar import PolarSpace, PolarSpaceSpec

    field = field_of_order(q)
    spec_family = POLAR_FAMILIES[family]
    if spec_family == "hermitian":
        return PolarSpace(PolarSpaceSpec(spec_family, rank, field, hermitian_ambient=ambient))
    return PolarSpace(PolarSpaceSpec(spec_family, rank, field))


def parse_instance(text: str):
    """Instance grammar: kind:family:r<rank>:q<order>.

    kinds: collinearity, oppositeness (polar families); lines, planes, caps
    (family must be pg).
    """
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"bad instance {text!r}; expected kind:family:rN:qN")
    kind, family, rpart, qpart = parts
    if not rpart.startswith("r") or not qpart.startswith("q"):
        raise UsageError(f"bad instance {text!r}")
    r = int(rpart[1:])
    q = int(qpart[1:])
    return kind, family, r, q


def build_instance_graph(text: str):
    from .graphs import collinearity_graph, oppositeness_graph, subspace_intersection_graph
    from .projective import build_pg

    kind, family, r, q = parse_instance(text)
    if kind in ("collinearity", "oppositeness"):
        if family not in POLAR_FAMILIES:
            raise UsageError(f"{kind} needs a polar family, got {family!r}")
        space = _build_polar(family, r, q)
        return collinearity_graph(space) if kind == "collinearity" else oppositeness_graph(space)
    if kind in ("lines", "planes"):
        if family != "pg":
            raise UsageError(f"{kind} graphs are defined on pg")
        return subspace_intersection_graph(build_pg(r, field_of_order(q)), 2 if kind == "lines" else 3)
    raise UsageError(f"unknown graph instance kind {kind!r}")


def build_instance_hypergraph(text: str):
    from .graphs import collinear_triple_hypergraph
    from .projective import build_pg

    kind, family, r, q = parse_instance(text)
    if kind != "caps" or family != "pg":
        raise UsageError(f"hypergraph instances look like caps:pg:rN:qN, got {text!r}")
    return collinear_triple_hypergraph(build_pg(r, field_of_order(q)))


# -- subcommand bodies


def _cmd_geom(args):
    from .cache import cache_dir, save_geometry_descriptor
    from .projective import build_pg

    if args.family == "pg":
        space = build_pg(args.rank, field_of_order(args.q))
        desc = space.descriptor()
        if args.points:
            desc["points"] = [list(map(int, row)) for row in space.points]
    else:
        space = _build_polar(args.family, args.rank, args.q, args.ambient)
        desc = space.descriptor()
        if args.points:
            desc["points"] = [
                list(map(int, space.ambient.points[i])) for i in space.point_ids
            ]
    if args.cache_dir:
        save_geometry_descriptor(desc, cache_dir(args.cache_dir))
    _emit(args, desc)
    return 0


def _cmd_graph(args):
    from .cache import graph_to_bytes

    g = build_instance_graph(args.instance)
    meta = {
        "kind": g.meta.kind,
        "family": g.meta.family,
        "r": g.meta.r,
        "t": str(g.meta.t) if g.meta.t is not None else None,
        "q": g.meta.q,
        "n": g.n,
        "d": g.degree() if g.is_regular() else None,
        "edges": g.edge_count(),
    }
    if args.out:
        Path(args.out).write_bytes(graph_to_bytes(g))
        sys.stdout.write(json.dumps(meta, sort_keys=True) + "\n")
    else:
        _emit(args, meta)
    return 0


def _cmd_spectrum(args):
    from .fronts import spectrum_report

    report = spectrum_report(args.family, args.rank, args.q, args.graph)
    _emit(args, report)
    return 0


def _cmd_bound(args):
    import math

    from .randomcaps import first_moment_bound
    from .spectra import ratio_bound, sample_size_threshold

    if args.kind == "dh":
        if args.n is None or args.d is None or args.lam is None:
            raise UsageError("dh bound needs --n --d --lambda")
        value = ratio_bound(args.n, args.d, args.lam)
        _emit(args, {"kind": "dh-bound", "value": str(value), "value_float": float(value)})
        return 0
    if args.kind == "threshold":
        if not args.threshold_kind:
            raise UsageError("--threshold-kind required")
        value = sample_size_threshold(
            args.threshold_kind,
            r=args.r or 0,
            t=Fraction(args.t),
            q=args.q or 0,
            n=args.n,
            d=args.d,
        )
        _emit(args, {"kind": "size-threshold", "threshold_kind": args.threshold_kind, "value": value})
        return 0
    if args.kind == "first-moment":
        if args.r is None or args.q is None or args.p is None or args.m is None:
            raise UsageError("first-moment needs --r --q --p --m")
        value = first_moment_bound(args.r, args.q, args.p, args.m)
        _emit(args, {"kind": "first-moment", "ln_bound": value, "rules_out": value < 0})
        return 0
    raise UsageError(f"unknown bound kind {args.kind}")


def _cmd_enumerate(args):
    from .graphs import collinear_triple_hypergraph
    from .projective import build_pg
    from .solvers import (
        max_cap,
        max_ekr_set,
        max_independent_set,
        max_partial_ovoid,
        max_partial_spread,
    )

    if args.object == "ovoid":
        res = max_partial_ovoid(_build_polar(args.family, args.rank, args.q), args.budget)
    elif args.object == "ekr":
        res = max_ekr_set(_build_polar(args.family, args.rank, args.q), args.budget)
    elif args.object == "spread":
        if args.r is None:
            raise UsageError("spread needs --r (projective dimension)")
        res = max_partial_spread(build_pg(args.r, field_of_order(args.q)), args.k, args.budget)
    elif args.object == "cap":
        if args.r is None:
            raise UsageError("cap needs --r (projective dimension)")
        res = max_cap(collinear_triple_hypergraph(build_pg(args.r, field_of_order(args.q))), args.budget)
    else:
        if not args.instance:
            raise UsageError("mis needs --instance")
        res = max_independent_set(build_instance_graph(args.instance), args.budget)
    payload = res.to_json()
    if args.witness_out:
        Path(args.witness_out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _emit(args, payload)
    return 0


def _cmd_count(args):
    from .graphs import collinear_triple_hypergraph
    from .projective import build_pg
    from .solvers import count_independent_sets

    h = collinear_triple_hypergraph(build_pg(args.r, field_of_order(args.q)))
    res = count_independent_sets(h, args.m)
    out = res.to_json()
    out["count"] = str(res.count)
    _emit(args, out)
    return 0


def _cmd_supersat(args):
    from .supersat import min_induced_edges

    kind = parse_instance(args.instance)[0]
    obj = (
        build_instance_hypergraph(args.instance)
        if kind == "caps"
        else build_instance_graph(args.instance)
    )
    report = min_induced_edges(
        obj,
        args.size,
        mode=args.mode,
        trials=args.trials,
        seed=args.seed,
        instance=args.instance,
    )
    _emit(args, report.to_json())
    return 0


def _cmd_containers(args):
    from .fronts import container_run

    report, family = container_run(
        args.instance,
        epsilon=args.epsilon,
        gamma=args.gamma,
        e0=args.e0,
        verify_with=args.verify_with,
    )
    if args.family_out:
        Path(args.family_out).write_text(family.to_jsonl())
    _emit(args, report)
    return 0


def _cmd_sweep(args):
    from .randomcaps import run_sweep

    table = run_sweep(
        args.r,
        args.q,
        args.pmin,
        args.pmax,
        args.points,
        args.trials,
        args.seed,
        args.budget,
    )
    csv_text = table.to_csv()
    sidecar = json.dumps(table.sidecar(), indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        out.write_text(csv_text)
        out.with_suffix(".json").write_text(sidecar)
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(sidecar)
    return 0


def _cmd_report(args):
    from .fronts import render_report

    sys_out = render_report([Path(p) for p in args.artifacts])
    if args.out:
        Path(args.out).write_text(sys_out)
    else:
        sys.stdout.write(sys_out)
    return 0


def _cmd_certificates(args):
    from .containers import full_certificate

    rows = [full_certificate(args.r, q) for q in args.q]
    _emit(args, {"kind": "certificates", "rows": rows})
    return 0


_COMMANDS = {
    "geom": _cmd_geom,
    "graph": _cmd_graph,
    "spectrum": _cmd_spectrum,
    "bound": _cmd_bound,
    "enumerate": _cmd_enumerate,
    "count": _cmd_count,
    "supersat": _cmd_supersat,
    "containers": _cmd_containers,
    "random-sweep": _cmd_sweep,
    "report": _cmd_report,
    "certificates": _cmd_certificates,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _load_config(args)
        return _COMMANDS[args.command](args)
    except (GuardError, BudgetExceeded) as exc:
        print(f"capwork: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"capwork: usage error: {exc}", file=sys.stderr)
        return 1
    except CapworkError as exc:
        print(f"capwork: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
