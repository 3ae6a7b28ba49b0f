"""Instance-level assembly: spectrum reports, container runs, markdown
verification tables. Shared by the CLI and the acceptance suite.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import SCHEMA_VERSION, kernels
from .errors import UsageError
from .spectra import ClosedFormParams, closed_form_params, ratio_bound, spectrum


def _closed_form_for(graph_meta, graph_kind: str) -> ClosedFormParams | None:
    t = graph_meta.t
    q = graph_meta.q
    if graph_kind == "collinearity":
        return closed_form_params("collinearity", graph_meta.r, t, q)
    if graph_kind == "oppositeness":
        return closed_form_params("oppositeness", graph_meta.r, t, q)
    if graph_kind == "lines":
        return closed_form_params("line-intersection", graph_meta.r, None, q)
    if graph_kind == "planes":
        return closed_form_params("plane-intersection", graph_meta.r, None, q)
    return None


def spectrum_report(family: str, rank: int, q: int, graph_kind: str) -> dict:
    from .cli import _build_polar
    from .gf import field_of_order
    from .graphs import collinearity_graph, oppositeness_graph, subspace_intersection_graph
    from .projective import build_pg

    if graph_kind in ("collinearity", "oppositeness"):
        space = _build_polar(family, rank, q)
        g = collinearity_graph(space) if graph_kind == "collinearity" else oppositeness_graph(space)
        t = space.t
    elif graph_kind in ("lines", "planes"):
        if family != "pg":
            raise UsageError("line/plane spectra are defined on pg")
        g = subspace_intersection_graph(build_pg(rank, field_of_order(q)), 2 if graph_kind == "lines" else 3)
        t = None
    else:
        raise UsageError(f"unknown graph kind {graph_kind!r}")
    summary = spectrum(g)
    cf = _closed_form_for(g.meta, graph_kind)
    match = None
    lam_resolved = None
    if cf is not None:
        if cf.lam is not None:
            lam_resolved = cf.lam
        else:
            # ambiguous closed form: pick the candidate the numeric value hits
            hits = [c for c in cf.lam_candidates if abs(summary.lambda_min - c) <= 1e-6]
            lam_resolved = hits[0] if hits else None
        match = (
            cf.n == summary.n
            and cf.d == summary.d
            and lam_resolved is not None
            and abs(summary.lambda_min - lam_resolved) <= 1e-6
        )
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "spectrum-report",
        "family": family,
        "graph": graph_kind,
        "r": rank,
        "t": str(t) if t is not None else None,
        "q": q,
        "n": summary.n,
        "d": summary.d,
        "lambda_min": summary.lambda_min,
        "lambda2": summary.lambda2,
        "closed_form": cf.to_json() if cf else None,
        "match": match,
    }
    if cf is not None and lam_resolved is not None:
        report["dh_bound"] = str(ratio_bound(cf.n, cf.d, lam_resolved))
    return report


def _resolved_integer_lambda(g) -> int:
    summary = spectrum(g)
    lam = round(summary.lambda_min)
    if abs(summary.lambda_min - lam) > 1e-6:
        raise UsageError("least eigenvalue is not integral; supply parameters explicitly")
    return lam


def sampled_maximal_independents(g, count: int, seed: int = 0) -> list:
    """Randomized-greedy maximal independent sets from seeded orders."""
    out = []
    n = g.n
    for t in range(count):
        perm = sorted(range(n), key=lambda i: kernels.mix64(seed * 31 + t * 7 + i))
        taken = []
        blocked = set()
        for v in perm:
            if v not in blocked:
                taken.append(v)
                blocked.add(v)
                blocked.update(g.neighbors(v))
        out.append(tuple(sorted(taken)))
    return sorted(set(out))


def container_run(instance: str, epsilon=None, gamma=None, e0=None, verify_with="maximal"):
    from .cli import build_instance_graph, build_instance_hypergraph, parse_instance
    from .containers import (
        build_graph_containers,
        build_triple_containers,
        gamma_refinement,
        graph_container_params,
        verify_graph_containers,
        verify_triple_containers,
    )
    from .projective import gaussian_binomial
    from .solvers import list_maximal_independent_sets, max_cap

    kind = parse_instance(instance)[0]
    if kind == "caps":
        h = build_instance_hypergraph(instance)
        if e0 is None:
            e0 = 4 * gaussian_binomial(h.r, 1, h.q) ** 2
        alpha = max_cap(h).alpha
        caps = _all_caps_of_size(h, alpha)
        fam = build_triple_containers(h, caps, e0)
        rep = verify_triple_containers(fam, h, caps, e0)
        report = {
            "schema_version": SCHEMA_VERSION,
            "kind": "container-report",
            "instance": instance,
            "e0": e0,
            "independents": len(caps),
            "stats": fam.stats,
            "verify": {k: v for k, v in rep.items() if k != "uncovered"},
        }
        if gamma is not None:
            refined = gamma_refinement(h, fam, Fraction(gamma), caps)
            report["refined"] = {
                "gamma": str(Fraction(gamma)),
                "stats": refined.stats,
                "size_cap": refined.meta["size_cap"],
            }
            fam = refined
        return report, fam
    g = build_instance_graph(instance)
    if epsilon is None:
        raise UsageError("graph containers need --epsilon")
    lam = _resolved_integer_lambda(g)
    params = graph_container_params(g.n, g.degree(), lam, Fraction(epsilon))
    if verify_with == "maximal":
        independents = list_maximal_independent_sets(g)
    elif verify_with.startswith("sampled:"):
        independents = sampled_maximal_independents(g, int(verify_with.split(":")[1]))
    else:
        raise UsageError("--verify-with must be maximal or sampled:N")
    fam = build_graph_containers(g, params, independents)
    rep = verify_graph_containers(fam, g, params, independents)
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "container-report",
        "instance": instance,
        "params": params.to_json(),
        "independents": len(independents),
        "stats": fam.stats,
        "verify": {k: v for k, v in rep.items() if k != "uncovered"},
    }
    return report, fam


def _all_caps_of_size(h, size: int, cap: int = 10**6) -> list:
    third = h.third_masks()
    w = third.shape[2]
    buf_cap = 65536
    while True:
        out = np.zeros((buf_cap, w), dtype=np.uint64)
        found = int(kernels.collect_caps_3u(third, size, out))
        if found <= buf_cap:
            return [tuple(kernels.mask_indices(out[i])) for i in range(found)]
        buf_cap *= 4
        if buf_cap > cap:
            raise UsageError(f"more than {cap} caps of size {size}")


def cap_count_report(r: int, q: int, ms, gamma="1/10") -> dict:
    """Exact cap counts versus the container binomial envelope.

    The envelope uses the container size bound 4 [r]_q (edge target
    4 [r]_q^2 plus the edge-to-size corollary), which is what the finite-q
    container run actually certifies.
    """
    from .containers import count_vs_bound
    from .gf import field_of_order
    from .graphs import collinear_triple_hypergraph
    from .projective import build_pg, gaussian_binomial
    from .solvers import count_independent_sets

    h = collinear_triple_hypergraph(build_pg(r, field_of_order(q)))
    counts = [(m, count_independent_sets(h, m).count) for m in ms]
    alpha_env = 4 * gaussian_binomial(r, 1, q)
    report = count_vs_bound(counts, alpha_env, Fraction(gamma))
    report.update({"r": r, "q": q, "alpha_envelope": alpha_env})
    return report


# -- markdown report rendering


def render_report(paths) -> str:
    rows = []
    for path in paths:
        path = Path(path)
        if path.suffix == ".csv":
            rows.extend(_sweep_rows(path))
            continue
        obj = json.loads(path.read_text())
        kind = obj.get("kind", "?")
        if kind == "spectrum-report":
            cf = obj.get("closed_form") or {}
            rows.append(
                (
                    f"spectrum {obj['family']}:{obj['graph']} r={obj['r']} q={obj['q']}",
                    f"(n,d,lam)=({cf.get('n')},{cf.get('d')},{cf.get('lambda')})",
                    f"({obj['n']},{obj['d']},{obj['lambda_min']:.6f})",
                    "pass" if obj.get("match") else "FAIL",
                )
            )
        elif kind == "supersat-report":
            rows.append(
                (
                    f"supersat {obj['instance']} s={obj['subset_size']}",
                    f"min e(S) >= {obj['bound_value']}",
                    f"min observed {obj['min_observed']} ({obj['mode']})",
                    "pass" if obj["holds"] else "FAIL",
                )
            )
        elif kind == "container-report":
            ver = obj.get("verify", {})
            ok = all(bool(v) for k, v in ver.items() if k.endswith("_ok"))
            rows.append(
                (
                    f"containers {obj['instance']}",
                    "coverage / size / edges",
                    json.dumps(ver, sort_keys=True),
                    "pass" if ok else "FAIL",
                )
            )
        elif kind == "count-vs-bound":
            rows.append(
                (
                    f"cap counts r={obj.get('r')} q={obj.get('q')}",
                    "count <= C((1+g) alpha, m)",
                    f"{len(obj['entries'])} sizes",
                    "pass" if obj["all_ok"] else "FAIL",
                )
            )
        elif kind == "certificates":
            for row in obj["rows"]:
                rows.append(
                    (
                        f"certificate r={row['r']} q={row['q']}",
                        "tau < 1/2 and ratio <= 1/288",
                        f"tau={row['tau']:.4f} lhs={row['codegree_lhs']:.3e}",
                        "pass" if row["ok"] else "FAIL",
                    )
                )
        else:
            rows.append((path.name, "?", kind, "?"))
    lines = [
        "| instance | stated bound | computed | verdict |",
        "| --- | --- | --- | --- |",
    ]
    for r4 in rows:
        lines.append("| " + " | ".join(str(c) for c in r4) + " |")
    return "\n".join(lines) + "\n"


def _sweep_rows(path: Path):
    from .randomcaps import read_sweep_csv, regime_boundaries

    records = read_sweep_csv(path.read_text())
    if not records:
        return [(path.name, "sweep", "empty", "FAIL")]
    r, q = records[0].r, records[0].q
    bounds = regime_boundaries(r, q)
    deletion_ok = all(rec.alpha >= rec.v_sampled - rec.e_sampled for rec in records)
    sparse = [rec for rec in records if rec.p <= q ** -2.25]
    ratios = sorted(
        (rec.alpha / rec.v_sampled if rec.v_sampled else 1.0) for rec in sparse
    )
    sparse_ok = not ratios or ratios[len(ratios) // 2] >= 0.9
    return [
        (
            f"sweep r={r} q={q}",
            f"boundaries {bounds['sparse_upper']:.3e}, {bounds['mid_upper']:.3e}",
            f"{len(records)} trials; deletion bound {'holds' if deletion_ok else 'VIOLATED'}",
            "pass" if deletion_ok and sparse_ok else "FAIL",
        )
    ]
