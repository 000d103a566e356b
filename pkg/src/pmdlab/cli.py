"""Command line front end: ``pmdlab count|enumerate|verify|profile``.

Exit codes: 0 all checks agree, 1 a disagreement (or an inconsistent
profile), 2 usage error, 3 brute force requested past the oracle cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import algorithms, counting
from .algorithms import KINDS, TARGETS, OracleCapExceeded
from .geometry import AffinePoint, Basis, GeometryError, ProjectivePoint
from .gf import FieldError, field_of_order

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    geometry: str | None = None
    q: int | None = None
    r: int | None = None
    target: str | None = None
    basis: str = "canonical"
    seed: int = 0
    algorithm: str = "constructive"
    format: str = "text"
    permutation: list[int] | None = None

    def field(self):
        if self.q is None:
            raise UsageError("--q is required")
        try:
            return field_of_order(self.q)
        except FieldError as e:
            raise UsageError(str(e)) from None

    def check_rank(self):
        if self.r is None:
            raise UsageError("--r is required")
        if self.r < 2:
            raise UsageError(f"--r must be at least 2 for {self.command}, got {self.r}")

    def targets(self):
        return [self.target] if self.target else list(TARGETS)

    def geometries(self):
        return [self.geometry] if self.geometry else list(KINDS)

    def make_basis(self, kind: str) -> Basis:
        F = self.field()
        if self.basis == "canonical":
            return algorithms.canonical_basis(kind, self.r, F)
        if self.basis == "random":
            return algorithms.random_basis(kind, self.r, F, self.seed)
        try:
            rows = json.loads(self.basis)
            if kind == "pg":
                pts = [ProjectivePoint.of(F, row) for row in rows]
            else:
                pts = [AffinePoint(F, tuple(row)) for row in rows]
            basis = algorithms.as_basis(pts, affine=kind == "ag")
        except (json.JSONDecodeError, TypeError) as e:
            raise UsageError(f"cannot parse --basis {self.basis!r}: {e}") from None
        except GeometryError as e:
            raise UsageError(f"--basis: {e}") from None
        if basis.r != self.r:
            raise UsageError(f"--basis has rank {basis.r}, but --r is {self.r}")
        return basis


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    return list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]


def parse_sweep(items: list[str]) -> dict[str, list[int]]:
    """``["q=2..5", "r=2..4"]`` -> ``{"q": [2, 3, 4, 5], "r": [2, 3, 4]}``."""
    out = {}
    for item in " ".join(items).split():
        key, sep, val = item.partition("=")
        if not sep or key not in ("q", "r"):
            raise UsageError(f"bad sweep term {item!r}; expected q=A..B or r=A..B")
        try:
            out[key] = _parse_range(val)
        except ValueError:
            raise UsageError(f"bad sweep range {val!r}") from None
    if set(out) != {"q", "r"}:
        raise UsageError("--sweep needs both q=.. and r=..")
    return out


# --------------------------------------------------------------------------
# output helpers


def _coords(obj) -> list[int]:
    return list(obj.dual) if hasattr(obj, "dual") else list(obj.coords)


def _key(target):
    return "dual" if target == "hyperplanes" else "point"


def _print_table(rows: list[list], out):
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(rows[0]))]
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip(), file=out)


# --------------------------------------------------------------------------
# commands


def cmd_count(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg.check_rank()
    cfg.field()
    if cfg.geometry is None:
        raise UsageError("--geometry is required")
    results = []
    for target in cfg.targets():
        res = {
            "geometry": cfg.geometry,
            "target": target,
            "r": cfg.r,
            "q": cfg.q,
            "formula": algorithms.formula_count(cfg.geometry, target, cfg.r, cfg.q),
            "closed_form": counting.closed_forms(f"{cfg.geometry}-{target}", cfg.r, cfg.q),
        }
        if cfg.algorithm in ("brute", "both"):
            try:
                res["brute"] = len(algorithms.brute(cfg.geometry, target, cfg.make_basis(cfg.geometry)))
            except OracleCapExceeded as e:
                res["brute"] = None
                res["note"] = str(e)
        counts = {res["formula"], res["closed_form"]}
        if res.get("brute") is not None:
            counts.add(res["brute"])
        res["agree"] = len(counts) == 1
        results.append(res)

    if cfg.format == "json":
        for res in results:
            print(json.dumps(res), file=out)
    elif cfg.format == "csv":
        fields = ["geometry", "target", "r", "q", "formula", "closed_form", "brute", "agree"]
        w = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(results)
    else:
        for res in results:
            print(f"{res['geometry'].upper()} {res['target']} r={res['r']} q={res['q']}: {res['formula']}", file=out)
            rows = [["formula", res["formula"]], ["closed_form", res["closed_form"]]]
            if "brute" in res:
                rows.append(["brute", "skipped" if res["brute"] is None else res["brute"]])
            rows.append(["agree", "yes" if res["agree"] else "NO"])
            _print_table([["  " + a, b] for a, b in rows], out)
            if res.get("note"):
                print(f"  note: {res['note']}", file=out)
    return EXIT_OK if all(r["agree"] for r in results) else EXIT_DISAGREE


def cmd_enumerate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg.check_rank()
    if cfg.geometry is None or cfg.target is None:
        raise UsageError("--geometry and --target are required")
    kind, target = cfg.geometry, cfg.target
    basis = cfg.make_basis(kind)
    key = _key(target)

    if cfg.algorithm == "brute":
        try:
            found = algorithms.brute(kind, target, basis)
        except OracleCapExceeded as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CAP
        records = [(None, obj) for obj in sorted(found, key=_coords)]
    else:
        try:
            records = list(algorithms.constructive(kind, target, basis, cfg.permutation))
        except ValueError as e:
            raise UsageError(str(e)) from None

    summary = {"count": len(records)}
    status = EXIT_OK
    if cfg.algorithm == "both":
        try:
            oracle = algorithms.brute(kind, target, basis)
        except OracleCapExceeded as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CAP
        agree = {obj for _, obj in records} == oracle
        summary.update(brute=len(oracle), agree=agree)
        status = EXIT_OK if agree else EXIT_DISAGREE
    expected = algorithms.formula_count(kind, target, cfg.r, cfg.q)
    summary["formula"] = expected
    if len(records) != expected:
        status = EXIT_DISAGREE

    if cfg.format == "json":
        for alpha, obj in records:
            rec = {} if alpha is None else {"alpha": list(alpha.entries)}
            rec[key] = _coords(obj)
            print(json.dumps(rec), file=out)
        print(json.dumps(summary), file=out)
    elif cfg.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        width = len(_coords(records[0][1])) if records else (cfg.r if target == "hyperplanes" or kind == "pg" else cfg.r - 1)
        head = [] if cfg.algorithm == "brute" else [f"alpha_{i + 1}" for i in range(cfg.r - 1)]
        w.writerow(head + [f"{key}_{j}" for j in range(width)])
        for alpha, obj in records:
            w.writerow(([] if alpha is None else list(alpha.entries)) + _coords(obj))
        print("# " + " ".join(f"{k}={v}" for k, v in summary.items()), file=out)
    else:
        rows = []
        for alpha, obj in records:
            a = "" if alpha is None else "(" + ",".join(map(str, alpha.entries)) + ")"
            rows.append([a, key, "[" + ",".join(map(str, _coords(obj))) + "]"])
        if rows:
            _print_table(rows, out)
        print(" ".join(f"{k}: {v}" for k, v in summary.items()), file=out)
    return status


def _verify_cell(args):
    kind, target, r, q, basis_spec, seed = args
    if basis_spec == "canonical":
        basis = None
        seed = None
    elif basis_spec == "random":
        basis = None
    else:
        basis = basis_spec
    return algorithms.verify(kind, target, r, q, basis=basis, seed=seed).to_json()


def cmd_verify(cfg: RunConfig, sweep=None, permutations=None, trials=1, jobs=1, out=None) -> int:
    out = out or sys.stdout
    cells = []
    if sweep:
        grid = parse_sweep(sweep)
        for q in grid["q"]:
            try:
                field_of_order(q)
            except FieldError as e:
                raise UsageError(str(e)) from None
        if min(grid["r"]) < 2:
            raise UsageError("sweep ranks must be at least 2")
        coords = [(k, t, r, q) for k in cfg.geometries() for t in cfg.targets() for q in grid["q"] for r in grid["r"]]
    else:
        cfg.check_rank()
        cfg.field()
        coords = [(k, t, cfg.r, cfg.q) for k in cfg.geometries() for t in cfg.targets()]

    for kind, target, r, q in coords:
        if cfg.basis in ("canonical", "random"):
            spec = cfg.basis
        else:
            spec = RunConfig("verify", kind, q, r, basis=cfg.basis).make_basis(kind)
        n = trials if cfg.basis == "random" else 1
        for i in range(n):
            cells.append((kind, target, r, q, spec, cfg.seed + i))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_cell, cells))
    else:
        reports = [_verify_cell(c) for c in cells]

    perm_results = []
    if permutations is not None:
        if sweep:
            raise UsageError("--permutations applies to a single cell, not a sweep")
        for kind in cfg.geometries():
            basis = cfg.make_basis(kind)
            for target in cfg.targets():
                sets = algorithms.order_independence(kind, target, basis)
                distinct = {frozenset(s) for s in sets.values()}
                perm_results.append(
                    {
                        "geometry": kind,
                        "target": target,
                        "permutations": len({p for p, _ in sets}),
                        "runs": len(sets),
                        "identical": len(distinct) == 1,
                        "size": len(next(iter(distinct))),
                    }
                )

    ok = all(rep["agree"] for rep in reports) and all(p["identical"] for p in perm_results)
    if cfg.format == "json":
        for rep in reports:
            print(json.dumps(rep), file=out)
        for p in perm_results:
            print(json.dumps(p), file=out)
        print(json.dumps({"cells": len(reports), "all_agree": ok}), file=out)
    elif cfg.format == "csv":
        fields = ["geometry", "target", "q", "r", "constructive", "brute", "formula", "closed_form", "agree", "note"]
        w = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(reports)
    else:
        rows = [["geometry", "target", "q", "r", "constructive", "brute", "formula", "closed", "agree"]]
        for rep in reports:
            rows.append(
                [
                    rep["geometry"],
                    rep["target"],
                    rep["q"],
                    rep["r"],
                    rep["constructive"],
                    "-" if rep["brute"] is None else rep["brute"],
                    rep["formula"],
                    rep["closed_form"],
                    "agree" if rep["agree"] else "DISAGREE",
                ]
            )
        _print_table(rows, out)
        for rep in reports:
            if rep["note"]:
                print(f"note ({rep['geometry']} {rep['target']} q={rep['q']} r={rep['r']}): {rep['note']}", file=out)
        for p in perm_results:
            verdict = "identical output sets" if p["identical"] else "OUTPUT SETS DIFFER"
            print(
                f"{p['geometry']} {p['target']}: {p['permutations']} permutations "
                f"({p['runs']} runs incl. reversed sequences), {verdict}, size {p['size']}",
                file=out,
            )
        print(f"{len(reports)} cells, {'all agree' if ok else 'DISAGREEMENT FOUND'}", file=out)
    return EXIT_OK if ok else EXIT_DISAGREE


def cmd_profile(cfg: RunConfig, builtin=None, path=None, out=None) -> int:
    out = out or sys.stdout
    if (builtin is None) == (path is None):
        raise UsageError("give exactly one of --builtin or --file")
    if path is not None:
        try:
            profile, violations = counting.check_profile_file(path)
        except (OSError, counting.ProfileError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
    else:
        if cfg.r is None:
            raise UsageError("--r is required")
        if builtin == "free":
            profile = counting.profile_free(cfg.r)
        else:
            if cfg.q is None:
                raise UsageError("--q is required for pg/ag profiles")
            make = counting.profile_pg if builtin == "pg" else counting.profile_ag
            profile = make(cfg.r, cfg.q)
        violations = [f"{loc}: {msg}" for loc, msg in profile.problems()]

    problems = bool(violations)
    shaped = (
        isinstance(profile.r, int)
        and len(profile.whitney) == profile.r + 1
        and len(profile.flat_size) == profile.r + 1
        and all(len(row) == a + 1 for a, row in enumerate(profile.whitney))
    )
    r = profile.r
    result = {"name": profile.name, "r": r, "valid": not problems}
    if shaped:
        result["whitney"] = [list(row) for row in profile.whitney]
        result["flat_size"] = list(profile.flat_size)
    if not problems:
        result["f"] = {
            f"{r},{s},{u}": counting.flats_containing(profile, s, u) for s in range(r + 1) for u in range(s + 1)
        }
        result["avoiding_hyperplanes"] = counting.count_avoiding_hyperplanes(profile) if r >= 2 else None
        result["circuit_points"] = counting.count_circuit_points(profile) if r >= 1 else None
    else:
        result["violations"] = violations

    if cfg.format == "json":
        print(json.dumps(result), file=out)
    else:
        print(f"profile {profile.name} (rank {r})", file=out)
        if shaped:
            print("Dl table (row a: rank-k flats in a rank-a flat, k = 0..a):", file=out)
            for a, row in enumerate(profile.whitney):
                print(f"  Dl({a},*) = {tuple(row)}", file=out)
            print(f"<k> = {tuple(profile.flat_size)}", file=out)
        if problems:
            print("validation: FAILED", file=out)
            for line in result["violations"]:
                print(f"  {line}", file=out)
        else:
            print("validation: ok", file=out)
            print("f(r,s,u):", file=out)
            for s in range(r + 1):
                vals = ", ".join(f"f({r},{s},{u})={result['f'][f'{r},{s},{u}']}" for u in range(s + 1))
                print(f"  {vals}", file=out)
            t1 = result["avoiding_hyperplanes"]
            print(f"hyperplanes avoiding a basis = {'n/a' if t1 is None else t1}", file=out)
            print(f"circuit points of a basis = {result['circuit_points']}", file=out)
    return EXIT_OK if not problems else EXIT_DISAGREE


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmdlab", description="Counting and enumeration in PG/AG over GF(q).")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_target=False):
        p.add_argument("--geometry", choices=KINDS)
        p.add_argument("--q", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--target", choices=TARGETS, required=need_target)
        p.add_argument("--basis", default="canonical", help="canonical, random, or a JSON list of points")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("count", help="formula, closed form and optional brute-force count")
    common(p)
    p.add_argument("--algorithm", choices=("constructive", "brute", "both"), default="constructive")

    p = sub.add_parser("enumerate", help="list the hyperplanes or circuit points")
    common(p, need_target=True)
    p.add_argument("--algorithm", choices=("constructive", "brute", "both"), default="constructive")
    p.add_argument("--permutation", type=_int_list, help="basis order, e.g. 2,0,1")

    p = sub.add_parser("verify", help="three-way cross-check of construction, brute force and formula")
    common(p)
    p.add_argument("--sweep", nargs="+", metavar="TERM", help="e.g. q=2..5 r=2..4")
    p.add_argument("--permutations", choices=("all",), help="also check all r! basis orders")
    p.add_argument("--trials", type=int, default=1, help="random bases per cell with --basis random")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("profile", help="dump and validate an SPMD profile")
    p.add_argument("--builtin", choices=("pg", "ag", "free"))
    p.add_argument("--file")
    p.add_argument("--q", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        geometry=getattr(args, "geometry", None),
        q=args.q,
        r=args.r,
        target=getattr(args, "target", None),
        basis=getattr(args, "basis", "canonical"),
        seed=getattr(args, "seed", 0),
        algorithm=getattr(args, "algorithm", "constructive"),
        format=args.format,
        permutation=getattr(args, "permutation", None),
    )
    try:
        algorithms.oracle_cap()
        if args.command == "count":
            return cmd_count(cfg)
        if args.command == "enumerate":
            return cmd_enumerate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.sweep, args.permutations, args.trials, args.jobs)
        return cmd_profile(cfg, args.builtin, args.file)
    except (UsageError, ValueError) as e:
        print(f"pmdlab {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
