"""Command line: analyze a finite model, run the circle demo, compare groupoids."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import gpdcheck
from .circlemodel import circle_demo
from .errors import (CycleWithT0Flag, Exceeded, FormatError, InvalidPreorder,
                     NotT0, SearchCapExceeded, UnknownPoint)
from .finspace import FinSpace, path_components, space_report, subspace
from .formats import load
from .gpdbuild import (GroupoidMorphism, fundamental_groupoid, groupoid_iso_check,
                       topologies_equal, trivial_pair_groupoid, uc_topology)
from .pi1.cover import deck_action_report
from .pi1.homology import homology
from .pi1.todd_coxeter import DEFAULT_MAX_COSETS
from .serialize import dumps, load_groupoid, to_dot
from .simplicial import SimplicialComplex, face_poset, order_complex

EXIT_OK, EXIT_FAILED, EXIT_EXCEEDED, EXIT_PARSE, EXIT_SEARCH_CAP = 0, 2, 3, 4, 5
PARSE_ERRORS = (FormatError, InvalidPreorder, CycleWithT0Flag, NotT0, UnknownPoint)


def _read_space(path: str, fmt: str | None) -> FinSpace:
    obj = load(path, fmt)
    if isinstance(obj, SimplicialComplex):
        return face_poset(obj)
    if not obj.is_t0:
        raise NotT0("the poset input is not antisymmetric")
    return obj


def _h1(X: FinSpace) -> dict:
    H = homology(order_complex(X), 1)
    return {"group": str(H), "rank": H.rank, "torsion": list(H.torsion), "order": H.order}


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def analyze(args) -> int:
    try:
        X = _read_space(args.path, args.format)
    except PARSE_ERRORS as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    basepoints = {}
    comps = path_components(X)
    if args.basepoint is not None:
        if args.basepoint not in X.index:
            print(f"parse error: unknown basepoint {args.basepoint!r}", file=sys.stderr)
            return EXIT_PARSE
        i = X.idx(args.basepoint)
        basepoints = {k: args.basepoint for k, c in enumerate(comps) if (c >> i) & 1}

    report = {"input": Path(args.path).name, "checks": args.checks,
              "max_cosets": args.max_cosets, "space": space_report(X)}
    try:
        F = fundamental_groupoid(X, args.max_cosets, basepoints)
    except Exceeded as exc:
        report["status"] = "exceeded"
        report["exceeded"] = {"max_cosets": exc.max_cosets,
                              "h1": [_h1(X if c == X.full else subspace(X, c)) for c in comps]}
        report["components"] = []
        _write(args.report, _dump(_jsonable(report)))
        print(f"{X.n} points: coset enumeration exceeded {args.max_cosets} cosets; "
              f"H1 = {', '.join(h['group'] for h in report['exceeded']['h1'])}")
        return EXIT_EXCEEDED

    G = F.groupoid
    want = {"all": {"axioms", "topology", "pointset"}}.get(args.checks, {args.checks})
    ok = True
    components = []
    for C in F.covers:
        h1 = _h1(C.base)
        entry = {
            "basepoint": C.base_point,
            "points": C.base.n,
            "pi1_order": C.m,
            "pi1_abelian": C.deck.is_abelian,
            "abelianization_order": C.deck.abelianization_order,
            "h1": h1,
            "hurewicz_consistent": h1["order"] == C.deck.abelianization_order,
            "cover_points": C.total.n,
        }
        ok &= entry["hurewicz_consistent"]
        if "topology" in want:
            uc = uc_topology(G, C)
            cmp = topologies_equal(G, uc)
            entry["uc_topology"] = {"equal_to_quotient": cmp.equal,
                                    "general_sets_open": uc.general_sets_open,
                                    "containment": uc.containment_ok,
                                    "projection_open": cmp.projection_open}
            if cmp.witness:
                entry["uc_topology"]["witness"] = list(cmp.witness)
            entry["identifications"] = gpdcheck.check_subspace_identifications(G, C)
            ok &= all(v for k, v in entry["uc_topology"].items() if k != "witness")
            ok &= entry["identifications"]["pass"]
        if "pointset" in want:
            deck = deck_action_report(C)
            entry["deck_action"] = deck
            entry["point_set"] = gpdcheck.point_set_report(G, C)
            ok &= deck["free"] and deck["covering_space_action"] and deck["criterion_matches_base"]
            ok &= entry["point_set"]["pass"]
        components.append(entry)
    report["components"] = components

    gpd = {"arrows": G.n, "units": len(G.units),
           "expected_arrows": sum(C.base.n ** 2 * C.m for C in F.covers)}
    ok &= gpd["arrows"] == gpd["expected_arrows"]
    if "axioms" in want:
        gpd["axioms"] = gpdcheck.check_algebraic_axioms(G)
        ok &= gpd["axioms"]["pass"]
    lte = gpdcheck.check_local_trivial_etale(G)
    if "topology" in want:
        gpd["topology"] = gpdcheck.check_topological(G)
        gpd["local_trivial_etale"] = lte
        gpd["r_times_s"] = gpdcheck.check_r_times_s(G)
        ok &= gpd["topology"]["pass"] and lte["pass"] and lte["locally_trivial"]
        ok &= gpd["r_times_s"]["pass"]
        if len(F.covers) == 1 and F.covers[0].m == 1:
            gpd["simply_connected_iso"] = gpdcheck.simply_connected_iso(F)
            ok &= gpd["simply_connected_iso"]
    report["groupoid"] = gpd

    hausdorff = gpdcheck.space_properties(G.space)["hausdorff"]
    report["summary"] = {
        "arrows": G.n,
        "components": len(F.covers),
        "pi1_orders": [C.m for C in F.covers],
        "etale": lte["etale"],
        "locally_trivial": lte["locally_trivial"],
        "hausdorff": hausdorff,
        "base_hausdorff": report["space"]["hausdorff"],
        "pass": bool(ok),
    }
    report["status"] = "ok" if ok else "check_failed"
    report = _jsonable(report)
    _write(args.report, _dump(report))
    _write(args.dot, to_dot(G))
    _write(args.export, dumps(G))
    s = report["summary"]
    print(f"{X.n} points, {s['components']} component(s), pi1 orders {s['pi1_orders']}, "
          f"{s['arrows']} arrows; locally trivial={s['locally_trivial']}, "
          f"etale={s['etale']}, hausdorff={s['hausdorff']}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILED


def export_pair(args) -> int:
    try:
        X = _read_space(args.path, args.format)
    except PARSE_ERRORS as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _write(args.out, dumps(trivial_pair_groupoid(X)))
    return EXIT_OK


def demo(args) -> int:
    try:
        report = circle_demo(args.samples, args.seed)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAILED
    _write(args.report, _dump(report))
    for key, val in report.items():
        if isinstance(val, dict):
            print(f"{key}: {'PASS' if val['pass'] else 'FAIL'} {val['checks']}")
    return EXIT_OK if report["pass"] else EXIT_FAILED


def _read_map(path: str, G, H) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(str(exc)) from None
    if isinstance(data, dict) and "assignment" in data:
        data = data["assignment"]
    try:
        if isinstance(data, dict):
            return np.array([H.space.idx(data[a]) for a in G.arrows], dtype=np.int64)
        out = np.array([int(v) for v in data], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad map: {exc}") from None
    if out.shape != (G.n,) or (G.n and (out.min() < 0 or out.max() >= H.n)):
        raise FormatError("map must assign one target arrow to every source arrow")
    return out


def check_iso(args) -> int:
    try:
        G, H = load_groupoid(args.g1), load_groupoid(args.g2)
        cand = None
        if args.map:
            cand = GroupoidMorphism(G, H, _read_map(args.map, G, H))
    except PARSE_ERRORS as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        res = groupoid_iso_check(G, H, cand, args.search_cap)
    except SearchCapExceeded as exc:
        print(f"search cap exceeded: {exc}", file=sys.stderr)
        return EXIT_SEARCH_CAP
    if res:
        cert = {G.arrows[a]: H.arrows[b] for a, b in enumerate(res.certificate)}
        print(json.dumps({"isomorphic": True, "certificate": cert}, sort_keys=True))
        return EXIT_OK
    print(json.dumps({"isomorphic": False, "reason": res.reason}, sort_keys=True))
    return EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fundgpd", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="build and verify the fundamental groupoid of a finite model")
    a.add_argument("path")
    a.add_argument("--format", choices=["poset", "complex"])
    a.add_argument("--report")
    a.add_argument("--dot")
    a.add_argument("--export", help="write the groupoid as JSON")
    a.add_argument("--basepoint")
    a.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    a.add_argument("--checks", choices=["all", "axioms", "topology", "pointset"], default="all")
    a.set_defaults(func=analyze)

    e = sub.add_parser("export-pair", help="write the pair groupoid of a finite model as JSON")
    e.add_argument("path")
    e.add_argument("out")
    e.add_argument("--format", choices=["poset", "complex"])
    e.set_defaults(func=export_pair)

    c = sub.add_parser("circle-demo", help="exact checks on the circle model")
    c.add_argument("--samples", type=int, default=10_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--report")
    c.set_defaults(func=demo)

    i = sub.add_parser("check-iso", help="decide whether two groupoid JSON files are isomorphic")
    i.add_argument("g1")
    i.add_argument("g2")
    i.add_argument("map", nargs="?")
    i.add_argument("--search-cap", type=int, default=200_000)
    i.set_defaults(func=check_iso)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
