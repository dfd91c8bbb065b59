"""Command-line entry point: ``zernstab {basis-table,verify,stability,dtn-experiment}``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 solver failure. Set ``ZERNSTAB_OUTPUT_DIR`` to resolve relative ``--out``
paths against a fixed directory.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .dtn import (
    NORM_CONVENTION,
    Conductivity2D,
    ConductivityPair,
    bounded_verdict,
    contrast_family,
    growth_verdict,
    lipschitz_ratio_experiment,
    stable_family,
)
from .stability import CoefficientField, class_membership, verify_core_inequality
from .verify import DEFAULT_TOLERANCES, SUITES, run_suite
from .zernike_radial import RadialIndex, boundary_derivative, build_radial

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
OUTPUT_DIR_ENV = "ZERNSTAB_OUTPUT_DIR"


class UsageError(Exception):
    pass


# --- configuration -----------------------------------------------------------------

@dataclass
class RunConfig:
    """All run parameters; JSON config files may set any subset of these keys.

    Index caps of ``-1`` select no indices (an empty table).
    """

    d: int = 2
    l_max: int = 2
    k_max: int = 2
    p_max: int = 20
    tolerances: dict = field(default_factory=dict)
    c_boundary: float = 1.0
    extra_quadrature_nodes: int = 0
    exact: bool = True
    dtn_N: int = 16
    mesh_h: float = 0.04
    out: str | None = None
    seed: int = 0

    def validate(self) -> "RunConfig":
        if not isinstance(self.d, int) or self.d < 2:
            raise UsageError("d must be an integer >= 2")
        for name in ("l_max", "k_max", "p_max"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < -1:
                raise UsageError(f"{name} must be an integer >= -1")
        if not isinstance(self.tolerances, dict):
            raise UsageError("tolerances must be an object mapping check names to positive numbers")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise UsageError(f"unknown tolerance keys {sorted(unknown)}; allowed: {sorted(DEFAULT_TOLERANCES)}")
        if any(not (isinstance(t, (int, float)) and t > 0) for t in self.tolerances.values()):
            raise UsageError("tolerances must be positive numbers")
        if not self.c_boundary > 0:
            raise UsageError("c_boundary must be positive")
        if not isinstance(self.extra_quadrature_nodes, int) or self.extra_quadrature_nodes < 0:
            raise UsageError("extra_quadrature_nodes must be a nonnegative integer")
        if not isinstance(self.dtn_N, int) or self.dtn_N < 1:
            raise UsageError("dtn_N must be a positive integer")
        if not self.mesh_h > 0:
            raise UsageError("mesh_h must be positive")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        return self

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise UsageError("config file must contain a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data).validate()
        except TypeError as exc:
            raise UsageError(f"bad config value ({exc})") from exc


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig().validate()
    return RunConfig.from_mapping(_read_json(path))


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


# --- serialization -----------------------------------------------------------------

def _jsonable(obj: Any):
    """Make `obj` strict-JSON safe: non-finite floats become strings ``"inf"``/``"nan"``."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return _jsonable(obj.item())
    return obj


def dumps_json(obj) -> str:
    # float repr is the shortest string that round-trips to the same double
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if hasattr(v, "item") and callable(v.item):
        return _csv_cell(v.item())
    return str(v)


def dumps_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _resolve_out(out: str | None) -> Path | None:
    if out is None:
        return None
    p = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


# --- commands ----------------------------------------------------------------------

BASIS_COLUMNS = (
    "d", "l", "k", "degree", "coefficients", "root", "normalizer_rational",
    "normalizer", "eigenvalue", "boundary_value", "boundary_derivative",
)
VERIFY_COLUMNS = ("name", "max_error", "tolerance", "passed")
STABILITY_COLUMNS = (
    "status", "d", "epsilon", "epsilon_occupied", "weighted_l1", "constant_theorem",
    "constant_theorem_occupied", "constant_corollary2", "constant_common", "c_boundary",
    "interior_norm", "boundary_norm", "core_inequality_holds",
)
DTN_COLUMNS = (
    "name", "parameter", "status", "l2_difference", "dtn_norm", "ratio", "epsilon",
    "weighted_l1", "stability_bound", "boundary_l2", "core_inequality_holds", "error",
)


def basis_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for l in range(cfg.l_max + 1):
        for k in range(cfg.k_max + 1):
            poly = build_radial(RadialIndex(cfg.d, l, k))
            rows.append(
                {
                    "d": cfg.d,
                    "l": l,
                    "k": k,
                    "degree": l + 2 * k,
                    "coefficients": " ".join(str(c) for c in poly.coeffs),
                    "root": poly.norm_sq,
                    "normalizer_rational": str(poly.normalizer_rational),
                    "normalizer": poly.normalizer,
                    "eigenvalue": poly.eigenvalue,
                    "boundary_value": poly.boundary_value,
                    "boundary_derivative": boundary_derivative(poly),
                }
            )
    return rows


def cmd_basis_table(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    rows = basis_rows(cfg)
    if fmt == "csv":
        return dumps_csv(BASIS_COLUMNS, rows), EXIT_OK
    return dumps_json({"kind": "basis-table", "d": cfg.d, "rows": rows}), EXIT_OK


def cmd_verify(cfg: RunConfig, suite: str, fmt: str) -> tuple[str, int]:
    try:
        checks = run_suite(
            suite, cfg.d, max(cfg.l_max, 0), max(cfg.k_max, 0), max(cfg.p_max, 0),
            seed=cfg.seed, tolerances=cfg.tolerances, extra_nodes=cfg.extra_quadrature_nodes, exact=cfg.exact,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = all(c["passed"] for c in checks)
    code = EXIT_OK if ok else EXIT_VERIFY
    if fmt == "csv":
        return dumps_csv(VERIFY_COLUMNS, checks), code
    report = {"kind": "verify", "suite": suite, "d": cfg.d, "passed": ok, "checks": checks}
    return dumps_json(report), code


def load_coefficients(path: str, d: int) -> CoefficientField:
    data = _read_json(path)
    if data is None:
        data = []
    if not isinstance(data, list):
        raise UsageError("coefficient file must contain a JSON array of records")
    try:
        return CoefficientField.from_records(d, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: bad coefficient record ({exc})") from exc


def stability_report(cfg: RunConfig, fld: CoefficientField) -> dict:
    rep = class_membership(fld, cfg.c_boundary).to_dict()
    core = None
    if rep["epsilon"] is not None:
        core = verify_core_inequality(fld, rep["epsilon"])
    rep["core_inequality"] = core
    rep["core_inequality_holds"] = None if core is None else core["holds"]
    rep["kind"] = "stability"
    rep["coefficient_count"] = len(fld)
    return rep


def cmd_stability(cfg: RunConfig, coeff_path: str, fmt: str) -> tuple[str, int]:
    rep = stability_report(cfg, load_coefficients(coeff_path, cfg.d))
    if fmt == "csv":
        return dumps_csv(STABILITY_COLUMNS, [rep]), EXIT_OK
    return dumps_json(rep), EXIT_OK


_GAMMA_KEYS = {
    "constant": {"value"},
    "two_phase": {"inner", "outer", "radius"},
    "zernike": {"base", "coefficients"},
    "bump": {"amplitude", "frequency", "radius", "base"},
}


def _conductivity(spec: dict) -> tuple[Conductivity2D, CoefficientField | None, float]:
    """Parse one conductivity; returns it, its coefficient field (if any), and its base level."""
    if not isinstance(spec, dict) or spec.get("type") not in _GAMMA_KEYS:
        raise UsageError(f"conductivity needs a 'type' in {sorted(_GAMMA_KEYS)}, got {spec!r}")
    kind = spec["type"]
    extra = set(spec) - _GAMMA_KEYS[kind] - {"type"}
    if extra:
        raise UsageError(f"unknown keys for {kind} conductivity: {sorted(extra)}")
    try:
        if kind == "constant":
            v = float(spec.get("value", 1.0))
            return Conductivity2D.constant(v), CoefficientField(2), v
        if kind == "two_phase":
            return Conductivity2D.two_phase(float(spec["inner"]), float(spec.get("outer", 1.0)),
                                            float(spec.get("radius", 0.5))), None, math.nan
        if kind == "zernike":
            base = float(spec.get("base", 1.0))
            fld = CoefficientField.from_records(2, spec.get("coefficients", []))
            return Conductivity2D.from_field(fld, base), fld, base
        return Conductivity2D.bump(float(spec["amplitude"]), int(spec["frequency"]),
                                   float(spec.get("radius", 0.5)), float(spec.get("base", 1.0))), None, math.nan
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad {kind} conductivity ({exc})") from exc


def load_family(path: str, cfg: RunConfig) -> tuple[list[ConductivityPair], str | None]:
    """Parse a family-spec file into conductivity pairs and the expected verdict kind."""
    spec = _read_json(path)
    if not isinstance(spec, dict):
        raise UsageError("family spec must be a JSON object")
    kind = spec.get("family", "pairs")
    params = {k: v for k, v in spec.items() if k not in ("family", "pairs", "expect")}
    expect = spec.get("expect")
    try:
        if kind == "stable":
            params.setdefault("seed", cfg.seed)
            return stable_family(**params), expect or "bounded"
        if kind == "contrast":
            return contrast_family(**params), expect or "growth"
    except TypeError as exc:
        raise UsageError(f"bad {kind} family parameters ({exc})") from exc
    if kind != "pairs":
        raise UsageError(f"unknown family {kind!r}; use 'stable', 'contrast' or 'pairs'")
    if params:
        raise UsageError(f"unknown family-spec keys: {sorted(params)}")
    pairs = []
    for i, p in enumerate(spec.get("pairs", [])):
        if not isinstance(p, dict) or "gamma1" not in p or "gamma2" not in p:
            raise UsageError(f"pair {i} needs 'gamma1' and 'gamma2'")
        g1, f1, b1 = _conductivity(p["gamma1"])
        g2, f2, b2 = _conductivity(p["gamma2"])
        diff = None
        if f1 is not None and f2 is not None and b1 == b2:
            keys = set(f1.entries) | set(f2.entries)
            diff = CoefficientField(2, {k: f1.entries.get(k, 0) - f2.entries.get(k, 0) for k in keys})
        pairs.append(ConductivityPair(g1, g2, p.get("name", f"pair-{i}"), diff, p.get("parameter")))
    return pairs, expect


def dtn_summary(rows: list[dict], expect: str | None) -> dict:
    bounded = bounded_verdict(rows)
    growth = growth_verdict(rows)
    failed = [r["name"] for r in rows if r["status"] == "solver-failure"]
    summary = {
        "kind": "dtn-experiment",
        "norm_convention": NORM_CONVENTION,
        "pairs": len(rows),
        "failed_pairs": failed,
        "undefined_pairs": [r["name"] for r in rows if r["status"] == "undefined"],
        "bounded": bounded,
        "growth": growth,
        "expected": expect,
    }
    if expect == "bounded":
        summary["verdict"] = bounded["verdict"]
    elif expect == "growth":
        summary["verdict"] = growth["verdict"]
    else:
        summary["verdict"] = None
    return summary


def cmd_dtn_experiment(cfg: RunConfig, family_path: str, fmt: str, out: Path | None) -> tuple[str, int]:
    pairs, expect = load_family(family_path, cfg)
    rows = lipschitz_ratio_experiment(pairs, cfg.dtn_N, cfg.mesh_h, cfg.c_boundary)
    summary = dtn_summary(rows, expect)
    code = EXIT_SOLVER if summary["failed_pairs"] else EXIT_OK
    if fmt == "csv":
        if out is not None:
            _emit(dumps_json(summary), out.with_name(out.name + ".summary.json"))
        else:
            sys.stderr.write(dumps_json(summary))
        return dumps_csv(DTN_COLUMNS, rows), code
    return dumps_json({"summary": summary, "rows": rows}), code


# --- argument parsing --------------------------------------------------------------

_EPILOGS = {
    "basis-table": (
        "CSV columns: " + ", ".join(BASIS_COLUMNS) + ".\n"
        "coefficients: space-separated exact rationals a_q, q = 0..k, with\n"
        "R_{l,k}(r) = sqrt(root) * sum_q a_q r^(l+2q); normalizer = normalizer_rational * sqrt(root)."
    ),
    "verify": "CSV columns: " + ", ".join(VERIFY_COLUMNS) + ". Exit 1 if any check fails.",
    "stability": (
        "Coefficient file: JSON array of {j, k, re, im} (d=2) or {l, m, k, re, im} records.\n"
        "CSV columns: " + ", ".join(STABILITY_COLUMNS) + ".\n"
        "Constants are in units of the boundary-stability constant c_boundary."
    ),
    "dtn-experiment": (
        "Family spec: {\"family\": \"stable\" | \"contrast\", ...generator params} or\n"
        "{\"pairs\": [{\"name\", \"gamma1\", \"gamma2\"}], \"expect\": \"bounded\" | \"growth\"}; conductivity\n"
        "types: constant{value}, two_phase{inner, outer, radius}, zernike{base, coefficients},\n"
        "bump{amplitude, frequency, radius, base}.\n"
        "CSV columns: " + ", ".join(DTN_COLUMNS) + ".\n"
        "With --format csv the JSON summary goes to <out>.summary.json (stderr without --out).\n"
        "Exit 3 if any pair's forward solve failed; other pairs are still reported."
    ),
}


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zernstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON RunConfig file; unknown keys are rejected")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=_u64, help="overrides the config seed")
    fmt = argparse.RawDescriptionHelpFormatter

    sub.add_parser("basis-table", parents=[common], epilog=_EPILOGS["basis-table"], formatter_class=fmt,
                   help="coefficient table of R_{l,k} for l <= l_max, k <= k_max")
    p = sub.add_parser("verify", parents=[common], epilog=_EPILOGS["verify"], formatter_class=fmt,
                       help="numerical verification suites")
    p.add_argument("suite", choices=SUITES)
    p = sub.add_parser("stability", parents=[common], epilog=_EPILOGS["stability"], formatter_class=fmt,
                       help="stability-class report for a coefficient field")
    p.add_argument("coefficients")
    p = sub.add_parser("dtn-experiment", parents=[common], epilog=_EPILOGS["dtn-experiment"], formatter_class=fmt,
                       help="Lipschitz-ratio experiment on the disk")
    p.add_argument("family")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        out = _resolve_out(args.out if args.out is not None else cfg.out)
        if args.command == "basis-table":
            text, code = cmd_basis_table(cfg, args.format)
        elif args.command == "verify":
            text, code = cmd_verify(cfg, args.suite, args.format)
        elif args.command == "stability":
            text, code = cmd_stability(cfg, args.coefficients, args.format)
        else:
            if cfg.d != 2:
                raise UsageError("dtn-experiment requires d = 2")
            text, code = cmd_dtn_experiment(cfg, args.family, args.format, out)
    except UsageError as exc:
        print(f"zernstab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _emit(text, out)
    except OSError as exc:
        print(f"zernstab: error: cannot write output ({exc})", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
