"""Command-line front end.

Subcommands wrap the library: ``wprep`` (Weierstrass preparation), ``tower``
(brute-force tower indices vs. the closed form), ``growth`` (synthetic
quotient-tower verification), ``logmatrix`` (tower matrices, minors, character
evaluation), ``rksolve`` (signed multiplicity enumeration).

Exit codes: 0 success, 2 invalid input, 3 precision exhaustion, 4 undefined
mathematical result, 5 formula mismatch in verify mode.

Reports embed a manifest (command, config, input digest, version); pass
``--no-timestamp`` to omit wall-clock fields so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone

from . import __version__
from .config import Config
from .errors import (
    DegreeOverflowError,
    InputError,
    IwkitError,
    PrecisionExhaustedError,
    UndefinedResultError,
    ZeroSeriesError,
)
from .growth import synthetic_tower_verify, rk_solver
from .logmatrix import condition_character, h_n, index_sets, minors
from .modules import tower_report
from .series import (
    reconstruction_residual_valuation,
    weierstrass_prepare,
)
from . import serialize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECISION = 3
EXIT_UNDEFINED = 4
EXIT_MISMATCH = 5


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="iwkit",
        description="Exact p-adic tower computations over Z_p[[X]]",
        allow_abbrev=False,
    )
    ap.add_argument("--prime", type=int, default=None)
    ap.add_argument("--precision", type=int, default=None)
    ap.add_argument("--degree-cap", type=int, default=None)
    ap.add_argument("--n-max", type=int, default=None)
    ap.add_argument("--margin", type=int, default=None)
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    ap.add_argument("--no-timestamp", action="store_true",
                    help="omit wall-clock fields for byte-identical reports")
    ap.add_argument("--out", default=None, help="write the report to a file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wprep", help="Weierstrass preparation of a series file")
    p.add_argument("series_file")

    p = sub.add_parser("tower", help="per-level tower indices of a module file")
    p.add_argument("module_file")

    p = sub.add_parser("growth", help="verify increments of a scenario file")
    p.add_argument("scenario_file")

    p = sub.add_parser("logmatrix", help="tower matrices of a Frobenius file")
    p.add_argument("frobenius_file")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--minors", action="store_true")
    p.add_argument("--theta-level", type=int, default=None)
    p.add_argument("--col-values", default=None,
                   help="JSON file with one series per column index set")

    p = sub.add_parser("rksolve", help="admissible signed multiplicities")
    p.add_argument("e", type=int, nargs="+")
    return ap


def _resolve_config(args, file_prime: int | None) -> Config:
    base: dict = {}
    env_path = os.environ.get("IWKIT_CONFIG")
    if env_path:
        base = Config.from_dict(serialize.load_json(env_path)).to_dict()
    prime = args.prime if args.prime is not None else base.get(
        "prime", file_prime if file_prime is not None else 3)
    if args.prime is not None and file_prime is not None and args.prime != file_prime:
        raise InputError(
            f"--prime {args.prime} conflicts with input file prime {file_prime}")
    if file_prime is not None:
        prime = file_prime
    kw = {
        "prime": prime,
        "precision": args.precision if args.precision is not None
        else base.get("precision", 24),
        "n_max": args.n_max if args.n_max is not None else base.get("n_max", 4),
        "margin": args.margin if args.margin is not None else base.get("margin", 4),
        "output_format": args.format if args.format is not None
        else base.get("output_format", "csv"),
    }
    if args.degree_cap is not None:
        kw["degree_cap"] = args.degree_cap
    elif "degree_cap" in base and base["degree_cap"] is not None:
        kw["degree_cap"] = base["degree_cap"]
    return Config(**kw)


def _digest(paths: list[str]) -> str:
    h = hashlib.sha256()
    for path in paths:
        try:
            with open(path, "rb") as fh:
                h.update(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
    return h.hexdigest() if paths else "-"


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every report: identical inputs and config
    must yield identical manifests (timestamp fields are opt-out)."""

    command: str
    config: dict
    input_digest: str
    tool_version: str
    timestamp: str | None = None
    elapsed_ms: int | None = None

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "config": self.config,
            "input_digest": self.input_digest,
            "tool_version": self.tool_version,
        }
        if self.timestamp is not None:
            d["timestamp"] = self.timestamp
            d["elapsed_ms"] = self.elapsed_ms
        return d


def _manifest(command: str, config: Config, paths: list[str],
              no_timestamp: bool, started: float) -> RunManifest:
    ts = elapsed = None
    if not no_timestamp:
        ts = datetime.now(timezone.utc).isoformat()
        elapsed = int((time.monotonic() - started) * 1000)
    return RunManifest(
        command=command,
        config=config.to_dict(),
        input_digest=_digest(paths),
        tool_version=__version__,
        timestamp=ts,
        elapsed_ms=elapsed,
    )


def _emit(args, manifest: RunManifest, rows: list[dict] | None,
          header: list[str], kv: dict | None = None) -> str:
    fmt = manifest.config["output_format"]
    if fmt == "json":
        body = {"manifest": manifest.to_dict()}
        if kv is not None:
            body["report"] = kv
        if rows is not None:
            body["rows"] = rows
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    lines = [f"# {k}={json.dumps(v, sort_keys=True)}"
             for k, v in sorted(manifest.to_dict().items())]
    if kv is not None:
        lines.append("key,value")
        for k, v in kv.items():
            lines.append(f"{k},{_csv_cell(v)}")
    if rows is not None:
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_csv_cell(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    return str(v)


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_wprep(args, started: float) -> int:
    data = serialize.load_json(args.series_file)
    config = _resolve_config(args, int(data.get("prime", 3)))
    f = serialize.series_from_dict(data, degree_cap=config.degree_cap,
                                   precision=config.precision)
    w = weierstrass_prepare(f, margin=config.margin)
    guard_deg = max(f.degree_cap - 4, 0)
    residual = reconstruction_residual_valuation(f, w, up_to_degree=guard_deg)
    manifest = _manifest("wprep", config, [args.series_file],
                         args.no_timestamp, started)
    kv = {
        "mu": w.mu,
        "lambda": w.lambda_,
        "distinguished": [str(c) for c in w.distinguished.coeffs],
        "unit_constant_term": str(w.unit.coeffs[0]),
        "residual_valuation": residual,
        "residual_window_degree": guard_deg,
    }
    _write(args, _emit(args, manifest, None, [], kv))
    return EXIT_OK


def _cmd_tower(args, started: float) -> int:
    data = serialize.load_json(args.module_file)
    config = _resolve_config(args, int(data.get("prime", 3)))
    module = serialize.module_from_dict(data, degree_cap=config.degree_cap,
                                        precision=config.precision)
    report = tower_report(module, config.n_max, margin=config.margin)
    manifest = _manifest("tower", config, [args.module_file],
                         args.no_timestamp, started)
    rows = [
        {
            "n": lv.n,
            "rank": lv.zp_rank,
            "length": lv.finite_length,
            "nabla_brute": lv.nabla,
            "nabla_closed": lv.predicted,
            "match": lv.match,
        }
        for lv in report.levels if lv.n >= 1
    ]
    kv = {
        "lambda": report.lambda_invariant,
        "mu": report.mu_invariant,
        "stabilization_level": report.stabilization_level,
    }
    _write(args, _emit(args, manifest,
                       rows, ["n", "rank", "length", "nabla_brute",
                              "nabla_closed", "match"], kv))
    if module.generators and all(lv.nabla is None for lv in report.levels
                                 if lv.n >= 1):
        return EXIT_UNDEFINED
    return EXIT_OK


def _cmd_growth(args, started: float) -> int:
    data = serialize.load_json(args.scenario_file)
    config = _resolve_config(args, int(data.get("selmer", {}).get("prime", 3)))
    selmer, shape, n_max, expected = serialize.scenario_from_dict(
        data, degree_cap=config.degree_cap, precision=config.precision)
    report = synthetic_tower_verify(selmer, shape, n_max, margin=config.margin)
    manifest = _manifest("growth", config, [args.scenario_file],
                         args.no_timestamp, started)
    rows = [
        {
            "n": lv.n,
            "s_n": lv.finite_length if lv.zp_rank == 0 else None,
            "increment": lv.nabla,
            "predicted": lv.predicted,
            "match": lv.match,
        }
        for lv in report.levels
    ]
    kv = {
        "lambda": report.lambda_invariant,
        "mu": report.mu_invariant,
        "n0": report.n0,
        "min_valid_n0": report.min_valid_n0,
        "stabilization_level": report.stabilization_level,
        "non_finite_levels": list(report.non_finite_levels),
    }
    _write(args, _emit(args, manifest, rows,
                       ["n", "s_n", "increment", "predicted", "match"], kv))
    finite_levels = [lv for lv in report.levels if lv.n >= 1 and lv.zp_rank == 0]
    if not finite_levels:
        return EXIT_UNDEFINED
    if report.stabilization_level is None:
        return EXIT_MISMATCH
    if expected is not None:
        observed = [lv.nabla for lv in report.levels if lv.n >= 1]
        if observed[:len(expected)] != list(expected):
            return EXIT_MISMATCH
    return EXIT_OK


def _cmd_logmatrix(args, started: float) -> int:
    data = serialize.load_json(args.frobenius_file)
    config = _resolve_config(args, int(data.get("prime", 3)))
    frob = serialize.frobenius_from_dict(data, precision=config.precision)
    paths = [args.frobenius_file]
    h = h_n(frob, args.n)
    kv = {
        "g": frob.g,
        "n": args.n,
        "block_anti_diagonal": frob.block_anti_diagonal(),
    }
    def _trimmed(e):
        d = e.degree()
        return [str(c) for c in e.coeffs[:d + 1]] if d is not None else ["0"]

    rows = [
        {"i": i + 1, "j": j + 1, "coeffs": _trimmed(h.entry(i, j))}
        for i in range(2 * frob.g) for j in range(2 * frob.g)
    ]
    extra: dict = {}
    if args.minors:
        table = minors(frob, args.n)
        extra["minors"] = serialize.minor_table_to_dict(table)["minors"]
    if args.col_values:
        paths.append(args.col_values)
        col_data = serialize.load_json(args.col_values)
        sets = index_sets(frob.g)
        cols = []
        for s in sets:
            key = ",".join(map(str, s))
            if key not in col_data:
                raise InputError(f"col-values file misses index set {key}")
            cols.append(serialize.series_from_dict(
                col_data[key], degree_cap=config.degree_cap,
                precision=config.precision))
        nonzero, val = condition_character(
            frob, args.n, cols, args.theta_level, margin=config.margin)
        kv["character_nonzero"] = nonzero
        kv["character_min_valuation"] = val
        kv["theta_level"] = args.theta_level if args.theta_level is not None else args.n
    manifest = _manifest("logmatrix", config, paths, args.no_timestamp, started)
    kv.update({f"minor_{k}": ";".join(v) for k, v in
               sorted(extra.get("minors", {}).items())})
    _write(args, _emit(args, manifest, rows, ["i", "j", "coeffs"], kv))
    return EXIT_OK


def _cmd_rksolve(args, started: float) -> int:
    config = _resolve_config(args, None)
    options = rk_solver(args.e)
    manifest = _manifest("rksolve", config, [], args.no_timestamp, started)
    rows = [
        {
            "k": opt.k,
            "a": opt.a,
            "pairs": [f"({r}/{s})" for r, s in opt.pairs],
        }
        for opt in options
    ]
    _write(args, _emit(args, manifest, rows, ["k", "a", "pairs"], None))
    return EXIT_OK


_DISPATCH = {
    "wprep": _cmd_wprep,
    "tower": _cmd_tower,
    "growth": _cmd_growth,
    "logmatrix": _cmd_logmatrix,
    "rksolve": _cmd_rksolve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        return _DISPATCH[args.command](args, started)
    except (ZeroSeriesError, DegreeOverflowError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionExhaustedError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except UndefinedResultError as exc:
        print(f"undefined result: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except IwkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
