"""Command-line interface: recognize | critical | verify | continue.

Exit codes: 0 success, 2 parse/usage error, 3 not a partial two-tree,
4 wall hit under --strict, 5 verification disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import RunConfig, Tolerances
from .enumeration import enumerate_critical_structure, match_record
from .errors import LinkmorseError, NonGenericError, NotSPError
from .geometry import wall_check
from .graphs import (
    detect_polygon_with_chains,
    is_partial_two_tree,
    load_linkage,
    relative_decomposition,
    sp_decompose,
    sp_tree_to_json,
)
from .oracle import area_oracle, continue_family

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_PTT = 3
EXIT_WALL = 4
EXIT_DIFF = 5


def _dump_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load(path: str):
    try:
        return load_linkage(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse linkage file {path!r}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _config_from_args(args) -> RunConfig:
    tols = Tolerances(
        rel_length=args.tol_length,
        collinearity=args.tol_collinearity,
        concyclicity=args.tol_concyclicity,
        gradient=args.tol_gradient,
        eigen_zero_band=args.tol_eigen_zero,
    )
    return RunConfig(tols=tols, seed=args.seed, n_seeds=args.n_seeds,
                     strict=args.strict, out=args.out, fmt=args.format)


def cmd_recognize(args) -> int:
    g, gamma, terminals = _load(args.file)
    report: dict = {"ptt": is_partial_two_tree(g)}
    pairs = [terminals] if terminals else \
        sorted({tuple(sorted((u, v))) for u, v, _ in g.edges})
    tree = None
    for i, t in pairs:
        try:
            tree = sp_decompose(g, i, t)
            report["terminals"] = {"I": i, "T": t}
            break
        except NotSPError as exc:
            report["kernel"] = exc.kernel
    report["sp_tree"] = sp_tree_to_json(tree) if tree else None
    if gamma is not None and report["ptt"]:
        rel = relative_decomposition(g, gamma)
        report["relative_decomposition"] = [
            {"vertices": list(c.vertices), "edges": list(c.edge_indices),
             "attachments": list(c.attachments)} for c in rel.components]
    _dump_json(report, args.out)
    return EXIT_OK if report["ptt"] else EXIT_NOT_PTT


def cmd_critical(args) -> int:
    g, gamma, _ = _load(args.file)
    if gamma is None:
        print("error: the critical command needs a distinguished cycle (gamma)",
              file=sys.stderr)
        return EXIT_PARSE
    cfg = _config_from_args(args)
    try:
        walls = wall_check(g, tols=cfg.tols)
    except LinkmorseError:
        walls = None  # wall analysis needs a partial two-tree
    if walls is not None and not walls.clean and cfg.strict:
        print("error: wall proximity detected and --strict set", file=sys.stderr)
        _dump_json({"wall_check": walls.to_json_dict()}, None)
        return EXIT_WALL
    out: dict = {"wall_check": walls.to_json_dict() if walls else None}
    struct = detect_polygon_with_chains(g, gamma)
    if struct is not None and walls is not None and walls.clean:
        records = enumerate_critical_structure(struct, cfg.tols, check_walls=False)
        out["mode"] = "symbolic"
        out["records"] = [r.to_json_dict() for r in records]
    else:
        if struct is None:
            out["warning"] = ("linkage outside the symbolic class; "
                              "falling back to numeric search")
            print("warning: numeric-only fallback", file=sys.stderr)
        else:
            out["warning"] = "wall proximity; numeric-only fallback"
            print("warning: wall proximity; numeric-only fallback", file=sys.stderr)
        oracle = area_oracle(g, gamma, cfg.tols)
        found = oracle.find_critical(cfg.n_seeds, cfg.seed)
        out["mode"] = "numeric"
        out["records"] = [{
            "area": oracle.f(x),
            "inertia": tri.to_json_dict(),
            "representative": c.to_json_dict(),
        } for x, tri, c in found]
    _dump_json(out, cfg.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    g, gamma, _ = _load(args.file)
    if gamma is None:
        print("error: verify needs a distinguished cycle (gamma)", file=sys.stderr)
        return EXIT_PARSE
    cfg = _config_from_args(args)
    try:
        with open(args.records, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read records file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if payload.get("mode") != "symbolic":
        print("error: verify expects symbolic records", file=sys.stderr)
        return EXIT_PARSE

    struct = detect_polygon_with_chains(g, gamma)
    if struct is None:
        print("error: linkage outside the symbolic class", file=sys.stderr)
        return EXIT_PARSE
    records = enumerate_critical_structure(struct, cfg.tols)
    by_key = {r.key(): r for r in records}

    diffs: list[str] = []
    oracle = area_oracle(g, gamma, cfg.tols)
    from .geometry import Configuration

    for k, rec_json in enumerate(payload.get("records", [])):
        key = rec_json.get("key", f"record{k}")
        rec = by_key.get(key)
        if rec is None:
            diffs.append(f"record {k} ({key}): no matching enumerated record")
            continue
        c = Configuration.from_json_dict(rec_json["representative"])
        x = oracle.chart.reduce(oracle.chart.theta_from_configuration(c))
        resid = oracle.stationarity_residual(x)
        if resid > 1e-6 * max(1.0, oracle.scale ** 2):
            diffs.append(f"record {k} ({key}): representative not critical "
                         f"(residual {resid!r})")
            continue
        tri = oracle.inertia(x)
        claimed = rec_json["index"]["index"]
        if tri.negative != claimed:
            diffs.append(f"record {k} ({key}): index mismatch "
                         f"oracle={tri.negative} recorded={claimed}")
        if tri.zero != rec_json["index"]["manifold_dim"]:
            diffs.append(f"record {k} ({key}): zero-count mismatch "
                         f"oracle={tri.zero} recorded={rec_json['index']['manifold_dim']}")

    found = oracle.find_critical(cfg.n_seeds, cfg.seed)
    matched_keys = set()
    for x, tri, c in found:
        rec = match_record(struct, records, c, cfg.tols)
        if rec is None:
            diffs.append(f"oracle critical point at S={oracle.f(x)!r} "
                         "matches no symbolic record")
        else:
            matched_keys.add(rec.key())
            if tri.negative != rec.index.index:
                diffs.append(f"record ({rec.key()}): oracle index {tri.negative} "
                             f"!= formula {rec.index.index}")
    for r in records:
        if r.key() not in matched_keys:
            diffs.append(f"record ({r.key()}): not found by the oracle sweep")

    verdict = {"agreement": not diffs, "diffs": diffs,
               "oracle_points": len(found), "records": len(records)}
    _dump_json(verdict, cfg.out)
    return EXIT_OK if not diffs else EXIT_DIFF


def cmd_continue(args) -> int:
    g, gamma, _ = _load(args.file)
    if gamma is None:
        print("error: continue needs a distinguished cycle (gamma)", file=sys.stderr)
        return EXIT_PARSE
    cfg = _config_from_args(args)
    if args.edge < 0 or args.edge >= len(g.edges):
        print(f"error: edge index {args.edge} out of range", file=sys.stderr)
        return EXIT_PARSE
    if not (args.start > 0 and args.stop > 0) or args.steps < 0:
        print("error: bad parameter range", file=sys.stderr)
        return EXIT_PARSE
    diagram = continue_family(g, args.edge, args.start, args.stop, args.steps,
                              gamma, cfg)
    if cfg.out:
        _dump_json(diagram.to_json_dict(), cfg.out + ".json")
        with open(cfg.out + ".csv", "w", encoding="utf-8") as fh:
            fh.write(diagram.to_csv())
    elif cfg.fmt == "csv":
        sys.stdout.write(diagram.to_csv())
    else:
        _dump_json(diagram.to_json_dict(), None)
    for w in diagram.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linkmorse", allow_abbrev=False,
                                 description="critical points of the oriented "
                                             "area on linkage configuration spaces")
    ap.add_argument("--tol-length", type=float, default=1e-9)
    ap.add_argument("--tol-collinearity", type=float, default=1e-8)
    ap.add_argument("--tol-concyclicity", type=float, default=1e-8)
    ap.add_argument("--tol-gradient", type=float, default=1e-10)
    ap.add_argument("--tol-eigen-zero", type=float, default=1e-7)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--n-seeds", type=int, default=1000)
    ap.add_argument("--strict", action="store_true")
    ap.add_argument("--out", type=str, default=None)
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="partial-two-tree recognition and SP tree")
    p.add_argument("file")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("critical", help="enumerate critical records")
    p.add_argument("file")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("verify", help="cross-check records against the oracle")
    p.add_argument("file")
    p.add_argument("records")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("continue", help="one-parameter bifurcation diagram")
    p.add_argument("file")
    p.add_argument("--edge", type=int, required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=20)
    p.set_defaults(func=cmd_continue)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonGenericError as exc:
        print(f"error: non-generic lengths: {exc}", file=sys.stderr)
        return EXIT_WALL
    except LinkmorseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
