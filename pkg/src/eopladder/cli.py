"""Command-line front end: ``gen``, ``verify``, ``ortho`` and ``chain``.

Exit codes: 0 success, 1 verification failure, 2 invalid spec, 3 internal
identity violation, 64 config parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import families as fam
from . import ladderlab, ortho
from .families import FamilySpec, Kind
from .ratcore import Q, rational_to_str

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_INTERNAL, EXIT_CONFIG = 0, 1, 2, 3, 64

JACOBI_GRID = [["1/2", "3/2"], ["1", "3"], ["2/3", "7/3"], ["3/2", "1/2"], ["1", "2"]]
LAGUERRE_GRID = ["1/2", "1", "5/2", "4"]

# The acceptance grid has no admissible Xm Jacobi point with m >= 2, so these are added.
ADMISSIBLE_XM_JACOBI = [
    {"kind": "XmJacobi", "m": [2], "alpha_beta": [["5/2", "2"], ["3", "3/2"], ["7/2", "2"]]},
    {"kind": "XmJacobi", "m": [3], "alpha_beta": [["7/2", "5/2"], ["4", "3/2"], ["9/2", "2"]]},
]

DEFAULT_CONFIG = {
    "families": [
        {"kind": "X1Jacobi", "alpha_beta": JACOBI_GRID},
        {"kind": "XmJacobi", "m": [0, 1, 2, 3], "alpha_beta": JACOBI_GRID},
        {"kind": "X1Laguerre", "k": LAGUERRE_GRID},
        {"kind": "XmLaguerre", "m": [0, 1, 2, 3], "k": LAGUERRE_GRID},
    ] + ADMISSIBLE_XM_JACOBI,
    "n_span": 6,
    "depth": 5,
    "quad_nodes": 400,
    "convergence_nodes": 200,
    "tol": 1e-8,
    "convergence_tol": 1e-9,
}


class ConfigError(ValueError):
    pass


@dataclass
class GridConfig:
    specs: list[FamilySpec] = field(default_factory=list)
    invalid: list[tuple[dict, str]] = field(default_factory=list)
    n_span: int = 6
    depth: int = 5
    quad_nodes: int = 400
    convergence_nodes: int = 200
    tol: float = 1e-8
    convergence_tol: float = 1e-9

    @classmethod
    def from_dict(cls, data: dict) -> "GridConfig":
        if not isinstance(data, dict) or not isinstance(data.get("families"), list):
            raise ConfigError("config must be an object with a 'families' list")
        cfg = cls()
        for key in ("n_span", "depth", "quad_nodes", "convergence_nodes"):
            if key in data:
                if not isinstance(data[key], int) or isinstance(data[key], bool):
                    raise ConfigError(f"{key} must be an integer")
                setattr(cfg, key, data[key])
        for key in ("tol", "convergence_tol"):
            if key in data:
                if not isinstance(data[key], (int, float)):
                    raise ConfigError(f"{key} must be a number")
                setattr(cfg, key, float(data[key]))
        for tmpl in data["families"]:
            try:
                kind = Kind(tmpl["kind"])
            except (KeyError, ValueError, TypeError) as exc:
                raise ConfigError(f"bad family kind in {tmpl!r}") from exc
            ms = tmpl.get("m", [1])
            ms = ms if isinstance(ms, list) else [ms]
            if kind in (Kind.X1_JACOBI, Kind.XM_JACOBI):
                points = tmpl.get("alpha_beta")
                if not isinstance(points, list):
                    raise ConfigError(f"{kind.value} template needs 'alpha_beta'")
                raw = [{"kind": kind.value, "m": m, "alpha": p[0], "beta": p[1]} for m in ms for p in points]
            else:
                points = tmpl.get("k")
                if not isinstance(points, list):
                    raise ConfigError(f"{kind.value} template needs 'k'")
                raw = [{"kind": kind.value, "m": m, "k": k} for m in ms for k in points]
            for d in raw:
                for key in ("alpha", "beta", "k"):
                    if key in d and not isinstance(d[key], (str, int)):
                        raise ConfigError(f"parameters must be rational strings, got {d[key]!r}")
                try:
                    d = {key: (str(v) if key in ("alpha", "beta", "k") else v) for key, v in d.items()}
                    cfg.specs.append(FamilySpec.from_json(d))
                except fam.FamilyError as exc:
                    cfg.invalid.append((d, str(exc)))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ConfigError(f"unparseable parameters in {d!r}") from exc
        cfg.specs.sort(key=fam.sort_key)
        return cfg


def load_config(path: str | None) -> GridConfig:
    if path is None:
        return GridConfig.from_dict(DEFAULT_CONFIG)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return GridConfig.from_dict(data)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _spec_from_args(args) -> FamilySpec:
    d = {"kind": args.kind, "alpha": args.alpha, "beta": args.beta, "k": args.k}
    if args.m is not None:
        d["m"] = args.m
    spec = FamilySpec.from_json(d)
    fam.check_structure(spec)
    return spec


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    p.add_argument("--m", type=int, default=None, help="codimension (Xm kinds)")
    p.add_argument("--alpha", help="rational string, e.g. 1/2")
    p.add_argument("--beta", help="rational string")
    p.add_argument("--k", help="rational string (Laguerre kinds)")


# -- gen ------------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (fam.FamilyError, ValueError, ZeroDivisionError) as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    n_max = spec.m if args.n_max is None else args.n_max
    if n_max < spec.m:
        print(f"n_max = {n_max} is below m = {spec.m}", file=sys.stderr)
        return EXIT_INVALID
    try:
        rows = [(n, ladderlab.eop(spec, n)) for n in range(spec.m, n_max + 1)]
    except ladderlab.LadderError as exc:
        print(f"identity violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [f"c{i}" for i in range(n_max + 1)])
        for n, p in rows:
            cs = p.to_json()
            w.writerow([n] + cs + [""] * (n_max + 1 - len(cs)))
        text = buf.getvalue()
    else:
        err = fam.validation_error(spec)
        text = _dump({
            "spec": spec.to_json(),
            "admissible": err is None,
            "rows": [{"n": n, "coeffs": p.to_json()} for n, p in rows],
        })
    _write(text, args.out)
    return EXIT_OK


# -- verify ---------------------------------------------------------------

def _verify_one(task):
    spec, n_span, depth = task
    return ladderlab.run_suite(spec, n_span=n_span, depth=depth)


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    specs = cfg.specs
    if args.paper_literal_c:
        specs = [replace(s, literal_c=True) if s.kind is Kind.X1_JACOBI else s for s in specs]
    reports = _map(_verify_one, [(s, cfg.n_span, cfg.depth) for s in specs], args.jobs)
    failed = [c.to_json() | {"label": r.spec.label()} for r in reports for c in r.failed]
    flagged = [
        {"label": r.spec.label(), "name": c.name, "detail": c.detail}
        for r in reports for c in r.checks if c.status == ladderlab.FLAGGED
    ]
    invalid = [{"params": d, "error": msg} for d, msg in cfg.invalid]
    code = EXIT_OK if not failed and not invalid else EXIT_FAIL
    summary = {
        "points": len(reports),
        "checks": sum(len(r.checks) for r in reports),
        "failed": len(failed),
        "flagged": len(flagged),
        "invalid": len(invalid),
        "exit_code": code,
        "literal_c": bool(args.paper_literal_c),
    }
    doc = {
        "summary": summary,
        "invalid": invalid,
        "failures": [{"label": f["label"], "name": f["name"], "n_range": f["n_range"]} for f in failed],
        "flagged": flagged,
        "reports": [r.to_json() for r in reports],
    }
    _write(_dump(doc), args.out)
    print(f"verify: {summary['points']} points, {summary['checks']} checks, "
          f"{summary['failed']} failed, {summary['flagged']} flagged, {summary['invalid']} invalid",
          file=sys.stderr)
    return code


# -- ortho ----------------------------------------------------------------

def ortho_point(spec: FamilySpec, cfg: GridConfig) -> dict:
    err = fam.validation_error(spec)
    if err is not None:
        return {"label": spec.label(), "spec": spec.to_json(), "status": "flagged",
                "error": type(err).__name__, "message": str(err)}
    W = ortho.builtin_weight(spec)  # asserts the Pearson identity
    n_max = spec.m + cfg.n_span
    g = ortho.gram_matrix(spec, n_max, ortho.default_rule(spec, cfg.quad_nodes), cfg.tol)
    g2 = ortho.gram_matrix(spec, n_max, ortho.default_rule(spec, cfg.convergence_nodes), cfg.tol)
    delta = ortho.convergence_delta(g, g2)
    ok = g.ok and delta < cfg.convergence_tol and W.check_root_free()
    out = g.to_json() | {
        "pearson": True,
        "weight": W.to_json(),
        "convergence_nodes": cfg.convergence_nodes,
        "convergence_delta": delta,
        "convergence_tol": cfg.convergence_tol,
        "status": "pass" if ok else "fail",
    }
    out["csv"] = g.to_csv_rows()
    return out


def _ortho_one(task):
    spec, cfg = task
    try:
        return ortho_point(spec, cfg)
    except (ortho.PearsonMismatch, ortho.NonFiniteIntegrand) as exc:
        return {"label": spec.label(), "spec": spec.to_json(), "status": "fail",
                "error": type(exc).__name__, "message": str(exc)}


def cmd_ortho(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.tol is not None:
        cfg.tol = args.tol
    if args.nodes is not None:
        cfg.quad_nodes = args.nodes
    results = _map(_ortho_one, [(s, cfg) for s in cfg.specs], args.jobs)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label"] + ["i", "j", "G", "normalized"])
        for r in results:
            for row in r.get("csv", [])[1:]:
                w.writerow([r["label"]] + row)
        _write(buf.getvalue(), args.csv)
    for r in results:
        r.pop("csv", None)
    failed = [r["label"] for r in results if r["status"] == "fail"]
    code = EXIT_OK if not failed and not cfg.invalid else EXIT_FAIL
    doc = {
        "summary": {
            "points": len(results),
            "failed": failed,
            "flagged": [r["label"] for r in results if r["status"] == "flagged"],
            "max_offdiag": max((r["max_offdiag"] for r in results if "max_offdiag" in r), default=0.0),
            "node_count": cfg.quad_nodes,
            "tol": cfg.tol,
            "pass": code == EXIT_OK,
        },
        "results": results,
    }
    _write(_dump(doc), args.out)
    return code


# -- chain ----------------------------------------------------------------

def cmd_chain(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (fam.FamilyError, ValueError, ZeroDivisionError) as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    depth = args.depth
    result = ladderlab.verify_chain(spec, depth)
    offsets = [rational_to_str(fam.chain_offset(spec, j)) for j in range(1, depth + 1)]
    R = [rational_to_str(fam.si_shift_constant(spec, j)) for j in range(1, depth + 1)]
    table = result.detail.get("E_table", [])
    if args.format == "json":
        _write(_dump({"spec": spec.to_json(), "offsets": offsets, "R": R,
                      "E_table": [{"n": n, "telescoped": t, "closed_form": c} for n, t, c in table],
                      "status": result.status}), args.out)
    else:
        lines = [f"# {spec.label()}"]
        for j in range(depth):
            lines.append(f"H^{j + 1} = B_{j} A_{j} + {offsets[j]}    R_{j + 1} = {R[j]}")
        lines.append("n  telescoped  closed_form")
        for n, t, c in table:
            lines.append(f"{n}  {t}  {c}")
        lines.append(f"status: {result.status}")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if result.status != ladderlab.FAIL else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eopladder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="tabulate EOP coefficients for n = m..n_max")
    _add_spec_args(p)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    jobs_default = os.cpu_count() or 1
    p = sub.add_parser("verify", help="run the exact identity suite over a grid")
    p.add_argument("--config", default=None, help="JSON grid config (default: acceptance grid)")
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.add_argument("--paper-literal-c", action="store_true",
                   help="debug: use c = b instead of c = b + 1/a in the X1 Jacobi operators")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ortho", help="Pearson check and Gram matrices over a grid")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None, help="write all Gram entries to this CSV file")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.set_defaults(func=cmd_ortho)

    p = sub.add_parser("chain", help="print the shape-invariance chain and telescoped spectrum")
    _add_spec_args(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_chain)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
