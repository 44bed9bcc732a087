"""Command-line front end.

Subcommands::

    nlsdress solve      sample u(t, x) on a grid (csv or json)
    nlsdress verify     run the verification suite, print a json report
    nlsdress relations  predicted vs chain-extracted mirror relations
    nlsdress figures P  sample a named preset

Exit codes: 0 success, 1 I/O error, 2 config error, 3 verification failure,
4 numeric-domain error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys

import jsonschema
import numpy as np

from .boundary import build_boundary_chain, make_boundary
from .core import SolitonParameters
from .darboux import dressed_u
from .errors import DomainError
from .presets import PRESETS, get_preset
from .scattering import extracted_relations, mirror_relations, wrap_phase
from .verification import Grid, full_report

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_DOMAIN = 4

BREAK_PAIRING_SCALE = 1.01

_NUMBER = {"type": "number"}
CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["boundary", "solitons", "grid"],
    "properties": {
        "boundary": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["dirichlet", "robin", "new"]},
                "alpha": _NUMBER,
                "beta": _NUMBER,
            },
            "allOf": [
                {"if": {"properties": {"kind": {"const": "robin"}}}, "then": {"required": ["alpha"]}},
                {"if": {"properties": {"kind": {"const": "new"}}}, "then": {"required": ["alpha", "beta"]}},
            ],
        },
        "solitons": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["xi", "eta"],
                "properties": {
                    "xi": _NUMBER,
                    "eta": {"type": "number", "exclusiveMinimum": 0},
                    "x1": _NUMBER,
                    "phi1": _NUMBER,
                },
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["t_min", "t_max", "nt", "x_min", "x_max", "nx"],
            "properties": {
                "t_min": _NUMBER,
                "t_max": _NUMBER,
                "nt": {"type": "integer", "minimum": 2},
                "x_min": _NUMBER,
                "x_max": _NUMBER,
                "nx": {"type": "integer", "minimum": 2},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"format": {"enum": ["csv", "json"]}, "path": {"type": "string"}},
        },
    },
}

CSV_COLUMNS = ("t", "x", "re_u", "im_u", "abs_u")


class ConfigError(Exception):
    pass


def _preset_config(name: str) -> dict:
    p = get_preset(name)
    bc = p.boundary
    boundary = {"kind": bc.kind}
    for key in ("alpha", "beta"):
        if hasattr(bc, key):
            boundary[key] = getattr(bc, key)
    return {
        "boundary": boundary,
        "solitons": [{"xi": s.xi, "eta": s.eta, "x1": s.x1, "phi1": s.phi1} for s in p.solitons],
        "grid": p.grid.as_dict(),
    }


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None


def resolve_config(args: argparse.Namespace) -> dict:
    """Preset, then config file, then flags; later sources win."""
    cfg: dict = {}
    preset = getattr(args, "preset_name", None) or args.preset
    if preset:
        try:
            cfg = _preset_config(preset)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if args.config:
        loaded = _load_config_file(args.config)
        if not isinstance(loaded, dict):
            raise ConfigError("config must be a JSON object")
        for key, val in loaded.items():
            if isinstance(val, dict) and isinstance(cfg.get(key), dict):
                cfg[key] = {**cfg[key], **val}
            else:
                cfg[key] = copy.deepcopy(val)

    if args.boundary is not None:
        cfg["boundary"] = {"kind": args.boundary}
    if args.alpha is not None or args.beta is not None:
        cfg.setdefault("boundary", {})
        if args.alpha is not None:
            cfg["boundary"]["alpha"] = args.alpha
        if args.beta is not None:
            cfg["boundary"]["beta"] = args.beta
    if args.soliton:
        cfg["solitons"] = [dict(zip(("xi", "eta", "x1", "phi1"), s)) for s in args.soliton]
    grid_flags = {k: getattr(args, k) for k in ("t_min", "t_max", "nt", "x_min", "x_max", "nx")}
    if any(v is not None for v in grid_flags.values()):
        cfg.setdefault("grid", {})
        cfg["grid"].update({k: v for k, v in grid_flags.items() if v is not None})
    if args.format is not None or args.output is not None:
        cfg.setdefault("output", {})
        if args.format is not None:
            cfg["output"]["format"] = args.format
        if args.output is not None:
            cfg["output"]["path"] = args.output

    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.path))
    if errors:
        lines = [f"  {'/'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors]
        raise ConfigError("invalid config:\n" + "\n".join(lines))

    grid = cfg["grid"]
    if args.full_line and args.x_min is None and grid["x_min"] == 0:
        grid["x_min"] = -grid["x_max"]
    if grid["x_min"] < 0 and not args.full_line:
        raise ConfigError("x_min < 0 needs --full-line")
    return cfg


def build_job(cfg: dict):
    try:
        b = cfg["boundary"]
        bc = make_boundary(b["kind"], b.get("alpha"), b.get("beta"))
        solitons = [
            SolitonParameters(float(s["xi"]), float(s["eta"]), float(s.get("x1", 0.0)), float(s.get("phi1", 0.0)))
            for s in cfg["solitons"]
        ]
        grid = Grid(**cfg["grid"])
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise ConfigError(str(exc)) from None
    return bc, solitons, grid


def sample_solution(bc, solitons, grid: Grid, ratio_scale: complex = 1.0) -> np.ndarray:
    """Rows ``(t, x, re_u, im_u, abs_u)`` in t-major order."""
    chain = build_boundary_chain(bc, solitons, ratio_scale)
    tt, xx = grid.mesh()
    u = dressed_u(chain, tt, xx)
    return np.column_stack([tt.ravel(), xx.ravel(), u.real.ravel(), u.imag.ravel(), np.abs(u).ravel()])


def format_rows(rows: np.ndarray, fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join("%.12g" % v for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    doc = {"columns": list(CSV_COLUMNS), "rows": [[float("%.12g" % v) for v in row] for row in rows]}
    return json.dumps(doc) + "\n"


def relations_table(bc, solitons, ratio_scale: complex = 1.0) -> list[dict]:
    chain = build_boundary_chain(bc, solitons, ratio_scale)
    predicted = mirror_relations(bc, solitons)
    extracted = extracted_relations(chain, len(solitons))
    rows = []
    for j, (s, p, e) in enumerate(zip(solitons, predicted, extracted)):
        xhat_p, phihat_p = p.x_sum - s.x1, wrap_phase(s.phi1 - p.phi_diff)
        xhat_e, phihat_e = e.x_sum - s.x1, wrap_phase(s.phi1 - e.phi_diff)
        for name, a, b in (
            ("xhat", xhat_p, xhat_e),
            ("phihat", phihat_p, phihat_e),
            ("x_sum", p.x_sum, e.x_sum),
            ("phi_diff", p.phi_diff, e.phi_diff),
            ("weight_product", p.weight_product, e.weight_product),
        ):
            diff = abs(math.remainder(a - b, 2 * math.pi)) if name.startswith("phi") else abs(a - b)
            rows.append({"soliton": j + 1, "quantity": name, "predicted": a, "extracted": b, "difference": diff})
    return rows


def _fmt_value(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}i"
    return f"{v:.12g}"


def format_relations(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        out = []
        for r in rows:
            r = dict(r)
            for key in ("predicted", "extracted"):
                if isinstance(r[key], complex):
                    r[key] = [r[key].real, r[key].imag]
            out.append(r)
        return json.dumps(out, indent=2) + "\n"
    header = f"{'j':>2}  {'quantity':<15}{'predicted':>34}{'extracted':>34}{'difference':>14}"
    lines = [header]
    for r in rows:
        lines.append(
            f"{r['soliton']:>2}  {r['quantity']:<15}{_fmt_value(r['predicted']):>34}"
            f"{_fmt_value(r['extracted']):>34}{r['difference']:>14.3e}"
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(p: argparse.ArgumentParser, with_preset: bool = True):
    p.add_argument("--config", help="JSON job config")
    if with_preset:
        p.add_argument("--preset", choices=sorted(PRESETS), help="start from a named preset")
    p.add_argument("--output", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--full-line", action="store_true", help="allow x < 0 (mirror solitons)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--break-pairing", action="store_true", help="scale the mirror ratio by 1.01 (negative control)")
    p.add_argument("--boundary", choices=["dirichlet", "robin", "new"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument(
        "--soliton", nargs=4, type=float, action="append", metavar=("XI", "ETA", "X1", "PHI1"),
        help="add a soliton; repeat for more (replaces config solitons)",
    )
    for name, typ in (("t-min", float), ("t-max", float), ("nt", int), ("x-min", float), ("x-max", float), ("nx", int)):
        p.add_argument(f"--{name}", type=typ, dest=name.replace("-", "_"))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlsdress", description="Dressed NLS solitons on the half-line")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("solve", "sample the solution on a grid"),
        ("verify", "run the verification suite"),
        ("relations", "mirror relations, predicted vs extracted"),
    ):
        _add_common(sub.add_parser(name, help=help_))
    fig = sub.add_parser("figures", help="sample a named preset")
    fig.add_argument("preset_name", choices=sorted(PRESETS))
    _add_common(fig, with_preset=False)
    fig.set_defaults(preset=None)
    return parser


def run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    bc, solitons, grid = build_job(cfg)
    out = cfg.get("output", {})
    path = out.get("path")
    scale = BREAK_PAIRING_SCALE if args.break_pairing else 1.0

    if args.command in ("solve", "figures"):
        rows = sample_solution(bc, solitons, grid, scale)
        _emit(format_rows(rows, out.get("format", "csv")), path)
        return EXIT_OK
    if args.command == "verify":
        report = full_report(bc, solitons, grid, seed=args.seed, ratio_scale=scale)
        _emit(report.to_json() + "\n", path)
        failed = [name for name, c in report.checks.items() if not c.passed]
        if failed:
            print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
            return EXIT_VERIFY
        return EXIT_OK
    if args.command == "relations":
        rows = relations_table(bc, solitons, scale)
        _emit(format_relations(rows, out.get("format", "text")), path)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
