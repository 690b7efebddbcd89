"""Command-line front end: ``hgft classify | verify | render | sweep``."""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, criteria, verifier
from .errors import HypergeometricError, InvalidC, NotZeroImbalanced
from .specfun import ParamTriple, gauss_2f1

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID_C = 3
EXIT_KERNEL = 4
EXIT_UNWRITABLE = 5
EXIT_CONTRADICTION = 6

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^([+-]?{_NUM})$")
_IMAG = re.compile(rf"^([+-]?)({_NUM})?[ij]$")
_BOTH = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})?[ij]$")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# complex literals


def parse_complex(text: str) -> complex:
    """Parse ``<real>[+|-]<real>i`` with either part optional; ``i`` alone is ``1i``."""
    s = text.strip().replace(" ", "")
    m = _REAL.match(s)
    if m:
        return complex(float(m.group(1)), 0.0)
    m = _IMAG.match(s)
    if m:
        mag = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -mag if m.group(1) == "-" else mag)
    m = _BOTH.match(s)
    if m:
        mag = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -mag if m.group(2) == "-" else mag)
    raise ValueError(f"not a complex literal: {text!r}")


def format_complex(z: complex) -> str:
    """Shortest round-tripping literal, e.g. ``0.625+1.25i``."""
    z = complex(z)
    im = repr(z.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{z.real!r}{sign}{im}i"


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------------------
# report helpers


def _verdict(v):
    return None if v is None else v.to_dict()


def _lmn(lmn):
    return None if lmn is None else lmn.to_dict()


def _params(p: ParamTriple) -> dict:
    return {"a": format_complex(p.a), "b": format_complex(p.b), "c": format_complex(p.c)}


def _document(command: str, config: dict, results: list, extra: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "hgft",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "config": config,
        "results": results,
    }
    if extra:
        doc.update(extra)
    return doc


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def _is_spiral_family(p: ParamTriple) -> bool:
    return abs(p.c - (p.a + p.b + 1)) <= criteria.REAL_TOL * max(1.0, abs(p.c))


def classify_triple(p: ParamTriple, lam: float = 0.0, alpha: float | None = None) -> dict:
    """Every predicate that applies to ``(a, b, c)`` and ``lam``."""
    case, necessary = criteria.necessary_spirallike(p, lam)
    starlike, starlike_lmn = criteria.sufficient_starlike(p)
    convex, convex_lmn = criteria.sufficient_convex(p)
    sigma_case, sigma_value, exact = criteria.thmA_sigma(p)
    out = {
        "params": _params(p),
        "lambda": lam,
        "necessary": {"case": None if case is None else case.value, "verdict": _verdict(necessary)},
        "starlike": {"verdict": _verdict(starlike), "lmn": _lmn(starlike_lmn)},
        "convex": {"verdict": _verdict(convex), "lmn": _lmn(convex_lmn)},
        "classical_starlike": _verdict(criteria.corB_starlike(p)),
        "classical_sigma": {"case": sigma_case, "value": None if math.isnan(sigma_value) else sigma_value,
                            "exact": exact},
        "coefficient_bound": _verdict(criteria.coefficient_bound_check(p)),
        "bounded": criteria.boundedness(p),
    }
    if _is_spiral_family(p) and lam != 0:
        spiral, spiral_lmn = criteria.sufficient_spirallike(p.a, p.b, lam)
        out["spirallike"] = {"verdict": _verdict(spiral), "lmn": _lmn(spiral_lmn)}
        out["spirallike_rotated_product"] = _verdict(criteria.cor1_check(p.a, p.b, lam))
        out["spirallike_positive_product"] = _verdict(criteria.cor2_check(p.a, p.b, lam))
        out["spirallike_real_sum"] = _verdict(criteria.cor_s_check(p.a, p.b, lam))
    if alpha is not None and _is_spiral_family(p):
        out["strongly_starlike"] = _verdict(criteria.strongly_starlike_check(p.a, p.b, alpha))
    try:
        ann = criteria.cluster_annulus(p)
        out["cluster_annulus"] = {"w0": format_complex(ann.w0), "R": ann.R, "inner": ann.inner, "outer": ann.outer}
    except NotZeroImbalanced:
        pass
    return out


def verify_triple(p: ParamTriple, lam: float, grid: verifier.SampleGrid, alpha: float | None = None) -> dict:
    report = verifier.consistency_report(p, lam, grid)
    numeric = report.numeric
    kernel = None
    if not math.isnan(numeric.extremal_value):
        res = gauss_2f1(p, numeric.extremal_z)
        kernel = {"z": format_complex(numeric.extremal_z), "method": res.method.value,
                  "est_abs_error": res.est_abs_error}
    sigma_case, sigma_value, exact = criteria.thmA_sigma(p)
    out = {
        "params": _params(p),
        "lambda": lam,
        "necessary": {"case": report.necessary_case, "verdict": _verdict(report.necessary)},
        "sufficient": _verdict(report.sufficient),
        "lmn": _lmn(report.lmn),
        "classical_starlike": _verdict(report.classical),
        "classical_sigma": {"case": sigma_case, "value": None if math.isnan(sigma_value) else sigma_value,
                            "exact": exact},
        "coefficient_bound": _verdict(report.coefficient),
        "numeric": numeric.to_dict(),
        "kernel": kernel,
        "near_one_value": None if math.isnan(report.near_one_value) else report.near_one_value,
        "contradictions": report.contradictions,
        "contradiction": report.contradiction,
    }
    if alpha is not None:
        out["strong_order"] = verifier.strong_order_estimate(p, grid).to_dict()
    return out


# ---------------------------------------------------------------------------
# file writers


def write_csv(path: Path, theta, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "re", "im"])
        for t, v in zip(theta, values):
            w.writerow([f"{t:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])


def svg_path(points, margin: float = 0.05) -> tuple[str, str]:
    """Path data and viewBox for a closed polyline scaled to the unit box."""
    pts = np.asarray(points, dtype=complex)
    lo_x, hi_x = pts.real.min(), pts.real.max()
    lo_y, hi_y = pts.imag.min(), pts.imag.max()
    span = max(hi_x - lo_x, hi_y - lo_y) or 1.0
    x = (pts.real - lo_x) / span
    y = (hi_y - pts.imag) / span  # svg y axis points down
    width, height = (hi_x - lo_x) / span, (hi_y - lo_y) / span
    coords = " L ".join(f"{u:.6f} {v:.6f}" for u, v in zip(x, y))
    box = f"{-margin:g} {-margin:g} {width + 2 * margin:.6f} {height + 2 * margin:.6f}"
    return f"M {coords} Z", box


def write_svg(path: Path, points):
    data, box = svg_path(points)
    text = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{box}">\n'
        f'  <path d="{data}" fill="none" stroke="black" stroke-width="0.002"/>\n'
        "</svg>\n"
    )
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# sweep configuration


@dataclass
class Axis:
    values: list


def _frange(lo: float, hi: float, step: float) -> list:
    if step <= 0:
        raise ConfigError("range step must be positive")
    if lo > hi:
        raise ConfigError(f"empty range {lo} .. {hi}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(n)]


def _axis(key: str, text: str) -> tuple[list, bool]:
    """Values for one sweep key and whether they are offsets from ``a + b``."""
    words = text.split()
    if not words:
        raise ConfigError(f"{key}: missing value")
    kind, rest = words[0], words[1:]
    if kind in ("fixed", "shift"):
        if len(rest) != 1:
            raise ConfigError(f"{key}: '{kind}' takes one complex literal")
        if kind == "shift" and key != "c":
            raise ConfigError("only c may be given as a shift from a + b")
        return [parse_complex(rest[0])], kind == "shift"
    if kind == "range":
        if len(rest) not in (3, 6):
            raise ConfigError(f"{key}: range needs 3 or 6 numbers")
        nums = [float(x) for x in rest]
        re_vals = _frange(*nums[:3])
        im_vals = _frange(*nums[3:]) if len(nums) == 6 else [0.0]
        return [complex(r, i) for r in re_vals for i in im_vals], False
    raise ConfigError(f"{key}: expected 'fixed', 'shift' or 'range', got {kind!r}")


def parse_sweep_config(text: str) -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        raw[key.lower()] = value
    for key in ("a", "b", "c"):
        if key not in raw:
            raise ConfigError(f"missing key {key!r}")
    try:
        cfg = {"raw": raw}
        cfg["a"], _ = _axis("a", raw["a"])
        cfg["b"], _ = _axis("b", raw["b"])
        cfg["c"], cfg["c_shift"] = _axis("c", raw["c"])
        lam_vals, _ = _axis("lambda", raw.get("lambda", "fixed 0"))
        if any(abs(v.imag) > 0 for v in lam_vals):
            raise ConfigError("lambda must be real")
        cfg["lambda"] = [v.real for v in lam_vals]
        for v in cfg["lambda"]:
            if not abs(v) < math.pi / 2:
                raise ConfigError(f"lambda {v} outside (-pi/2, pi/2)")
        cfg["output"] = raw.get("output", "sweep.json")
        cfg["grid_angular"] = int(raw.get("grid_angular", 4096))
        cfg["grid_refine"] = int(raw.get("grid_refine", 3))
        cfg["radius_max"] = float(raw.get("radius_max", 1.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def _sweep_point(job):
    a, b, c, lam, grid = job
    try:
        p = ParamTriple(a, b, c)
        return verify_triple(p, lam, grid)
    except HypergeometricError as exc:
        return {
            "params": {"a": format_complex(a), "b": format_complex(b), "c": format_complex(c)},
            "lambda": lam,
            "error": f"{type(exc).__name__}: {exc}",
            "contradiction": False,
        }


def _workers() -> int:
    env = os.environ.get("HGFT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(cfg: dict):
    grid = verifier.SampleGrid.default(cfg["grid_angular"], cfg["grid_refine"], cfg["radius_max"])
    jobs = []
    for a, b, c, lam in itertools.product(cfg["a"], cfg["b"], cfg["c"], cfg["lambda"]):
        jobs.append((a, b, a + b + c if cfg["c_shift"] else c, lam, grid))
    workers = min(_workers(), len(jobs))
    if workers <= 1:
        records = [_sweep_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_sweep_point, jobs))
    return records


def summarize(records: list) -> dict:
    counts = {}
    for key in ("sufficient", "classical_starlike", "coefficient_bound"):
        tally = {s.value: 0 for s in criteria.Status}
        for rec in records:
            v = rec.get(key)
            if v:
                tally[v["status"]] += 1
        counts[key] = tally
    necessary = {s.value: 0 for s in criteria.Status}
    for rec in records:
        v = (rec.get("necessary") or {}).get("verdict")
        if v:
            necessary[v["status"]] += 1
    counts["necessary"] = necessary
    return {
        "points": len(records),
        "errors": sum(1 for r in records if "error" in r),
        "contradictions": sum(1 for r in records if r.get("contradiction")),
        "counts": counts,
    }


def write_summary_csv(path: Path, records: list):
    cols = ["index", "a", "b", "c", "lambda", "necessary", "sufficient", "sufficient_margin",
            "numeric_min", "contradiction", "error"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for i, rec in enumerate(records):
            nec = ((rec.get("necessary") or {}).get("verdict") or {}).get("status", "")
            suf = rec.get("sufficient") or {}
            margin = suf.get("margin")
            numeric = (rec.get("numeric") or {}).get("extremal_value")
            w.writerow([
                i, rec["params"]["a"], rec["params"]["b"], rec["params"]["c"], f"{rec['lambda']:.17g}",
                nec, suf.get("status", ""), "" if margin is None else f"{margin:.17g}",
                "" if numeric is None else f"{numeric:.17g}", int(bool(rec.get("contradiction"))),
                rec.get("error", ""),
            ])


# ---------------------------------------------------------------------------
# commands


def _triple(args) -> ParamTriple:
    return ParamTriple(args.a, args.b, args.c)


def _lambda(args) -> float:
    lam = math.radians(args.lambda_deg) if args.lambda_deg is not None else args.lam
    if not abs(lam) < math.pi / 2:
        raise ConfigError(f"lambda {lam} outside (-pi/2, pi/2)")
    return lam


def _write_text(path, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise _Unwritable(str(exc)) from None


class _Unwritable(Exception):
    pass


def cmd_classify(args) -> int:
    p = _triple(args)
    lam = _lambda(args)
    config = {"a": format_complex(p.a), "b": format_complex(p.b), "c": format_complex(p.c), "lambda": lam,
              "alpha": args.alpha}
    doc = _document("classify", config, [classify_triple(p, lam, args.alpha)])
    _emit(doc, args.json_out)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _triple(args)
    lam = _lambda(args)
    grid = verifier.SampleGrid.default(args.grid_angular, args.grid_refine, args.radius_max)
    config = {"a": format_complex(p.a), "b": format_complex(p.b), "c": format_complex(p.c), "lambda": lam,
              "alpha": args.alpha, "grid_angular": args.grid_angular, "grid_refine": args.grid_refine,
              "radius_max": args.radius_max}
    result = verify_triple(p, lam, grid, args.alpha)
    doc = _document("verify", config, [result])
    _emit(doc, args.json_out)
    if args.figure:
        from . import plotting

        r = min(args.radius_max, verifier.INTERIOR_RADIUS)
        theta = 2 * np.pi * np.arange(args.grid_angular) / args.grid_angular
        z = r * np.exp(1j * theta)
        h, _ = verifier._quotient(p, z)
        try:
            plotting.quotient_figure(theta, (np.exp(-1j * lam) * h).real, args.figure, lam,
                                     f"Re(e^(-i lambda) h) on |z| = {r:g}")
        except OSError as exc:
            raise _Unwritable(str(exc)) from None
    return EXIT_OK


def cmd_render(args) -> int:
    out = Path(args.out)
    suffix = out.suffix.lower()
    if suffix not in (".csv", ".svg"):
        raise ConfigError("--out must end in .csv or .svg")
    if not 0 < args.r <= 1 or args.n < 1:
        raise ConfigError("need 0 < r <= 1 and n >= 1")
    p = _triple(args)
    curve = verifier.boundary_image(p, args.r, args.n)
    try:
        if suffix == ".csv":
            write_csv(out, curve.theta, curve.values)
        else:
            write_svg(out, curve.closed())
        if not args.no_figure:
            from . import plotting

            plotting.image_figure(curve, out.with_suffix(".png"),
                                  f"a = {format_complex(p.a)}, b = {format_complex(p.b)}, "
                                  f"c = {format_complex(p.c)}, r = {args.r:g}")
    except OSError as exc:
        raise _Unwritable(str(exc)) from None
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    cfg = parse_sweep_config(text)
    records = run_sweep(cfg)
    summary = summarize(records)
    config = {k: v for k, v in cfg["raw"].items()}
    doc = _document("sweep", config, records, {"summary": summary})
    out = Path(args.output or cfg["output"])
    _write_text(out, _dump(doc) + "\n")
    try:
        write_summary_csv(out.with_name(out.stem + "_summary.csv"), records)
        if not args.no_figure:
            from . import plotting

            plotting.sweep_figure(records, out.with_name(out.stem + "_summary.png"))
    except OSError as exc:
        raise _Unwritable(str(exc)) from None
    print(json.dumps(summary, indent=2))
    return EXIT_CONTRADICTION if summary["contradictions"] else EXIT_OK


def _emit(doc: dict, path):
    text = _dump(doc) + "\n"
    if path:
        _write_text(path, text)
    else:
        sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _add_params(sp):
    sp.add_argument("--a", type=_complex_arg, required=True)
    sp.add_argument("--b", type=_complex_arg, required=True)
    sp.add_argument("--c", type=_complex_arg, required=True)


def _add_angles(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=float, default=0.0, help="spiral angle in radians")
    g.add_argument("--lambda-deg", type=float, default=None, help="spiral angle in degrees")
    sp.add_argument("--alpha", type=float, default=None, help="strong starlikeness order")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgft", description="Starlikeness and spirallikeness of z*2F1(a,b;c;z).")
    parser.add_argument("--version", action="version", version=f"hgft {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("classify", help="evaluate every applicable criterion")
    _add_params(sp)
    _add_angles(sp)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="criteria plus a numerical search for the infimum")
    _add_params(sp)
    _add_angles(sp)
    sp.add_argument("--grid-angular", type=int, default=4096)
    sp.add_argument("--grid-refine", type=int, default=3)
    sp.add_argument("--radius-max", type=float, default=1.0)
    sp.add_argument("--json-out", default=None)
    sp.add_argument("--figure", default=None, help="write a PNG of Re(e^(-i lambda) h) along the outer circle")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="export the image of |z| = r as CSV or SVG")
    _add_params(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--r", type=float, default=0.999)
    sp.add_argument("--n", type=int, default=4096)
    sp.add_argument("--no-figure", action="store_true", help="skip the PNG written next to --out")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("sweep", help="run verify over a parameter lattice")
    sp.add_argument("config")
    sp.add_argument("--output", default=None, help="overrides the config's output key")
    sp.add_argument("--no-figure", action="store_true")
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"hgft: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidC as exc:
        print(f"hgft: invalid c: {exc}", file=sys.stderr)
        return EXIT_INVALID_C
    except _Unwritable as exc:
        print(f"hgft: cannot write output: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    except HypergeometricError as exc:
        print(f"hgft: kernel error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_KERNEL
    except (ValueError, ArithmeticError) as exc:
        print(f"hgft: kernel error: {exc}", file=sys.stderr)
        return EXIT_KERNEL


if __name__ == "__main__":
    sys.exit(main())
