"""Command-line front end.

Every command builds one report dictionary.  The text output and the JSON
document (``--json FILE``, ``-`` for stdout) are both rendered from it, and
exact values always appear as ``p/q`` strings.

Exit status: 0 success, 1 mathematical failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .combinatorics import gregory, stirling_first, stirling_second
from .factorize import certify_cd, factorize_gregory
from .laurent import NonDivisibleError
from .masks import (
    HermiteSequence,
    MatrixMask,
    SupportLimitError,
    contractivity_certificate,
    hermite_refine,
)
from .polyalg import Polynomial
from .scheme import (
    SchemeError,
    SchemeFile,
    format_fraction,
    parse_binding,
    parse_scalar,
    read_scheme,
    save_scheme,
)
from .spectral import reproduction_degree, solve_spectral

__all__ = ["main", "run_command", "bundled_scheme"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def bundled_scheme(name: str) -> Path:
    return Path(str(resources.files("hermite_gregory") / "data" / name))


def _resolve_scheme_path(text: str) -> Path:
    path = Path(text)
    if not path.exists():
        candidate = bundled_scheme(text)
        if candidate.exists():
            return candidate
    return path


# -- report values ----------------------------------------------------------


def _frac(x) -> str:
    return format_fraction(Fraction(x))


def _matrix(a) -> list[list[str]]:
    return [[_frac(x) for x in row] for row in a]


def _poly(p: Polynomial) -> dict[str, Any]:
    return {"display": str(p), "coefficients": [_frac(c) for c in p.coeffs]}


def _mask(mask: MatrixMask) -> dict[str, Any]:
    lo, hi = mask.support
    return {
        "support": [lo, hi],
        "matrices": {str(j): _matrix(a) for j, a in mask.items()},
    }


def _render(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}{key}:")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(item)}")
    else:
        lines.append(f"{pad}{_inline(value)}")
    return lines


def _is_flat(item) -> bool:
    if isinstance(item, dict):
        return False
    return all(not isinstance(x, dict) for x in item) and all(
        not isinstance(x, list) or all(not isinstance(y, (list, dict)) for y in x) for x in item
    )


def _inline(item) -> str:
    if isinstance(item, list):
        return "[" + ", ".join(_inline(x) for x in item) + "]"
    if item is None:
        return "none"
    if isinstance(item, bool):
        return "yes" if item else "no"
    return str(item)


def render_text(report: dict[str, Any]) -> str:
    body = {k: v for k, v in report.items() if k != "summary"}
    return "\n".join([report["summary"], *_render(body)]) + "\n"


# -- commands -----------------------------------------------------------------


def _load(args) -> tuple[SchemeFile, dict[str, Fraction], MatrixMask]:
    scheme = read_scheme(_resolve_scheme_path(args.scheme))
    binding = parse_binding(args.param)
    return scheme, binding, scheme.evaluate(binding)


def _scheme_info(scheme: SchemeFile, binding) -> dict[str, Any]:
    return {"name": scheme.name, "parameters": {k: _frac(v) for k, v in binding.items()}}


def _spectral_report(result) -> dict[str, Any]:
    out: dict[str, Any] = {
        "requested_order": result.requested,
        "order": result.order,
        "polynomials": [_poly(p) for p in result.polynomials],
    }
    if not result.ok:
        (index, component), residual = result.witness.label, result.witness.residual
        out["failure_order"] = result.failure_order
        out["witness"] = {"index": index, "component": component, "residual": _frac(residual)}
    return out


def cmd_spectral(args) -> tuple[int, dict]:
    scheme, binding, mask = _load(args)
    result = solve_spectral(mask, args.order)
    report = {"command": "spectral", "scheme": _scheme_info(scheme, binding)}
    report.update(_spectral_report(result))
    if result.ok:
        report["summary"] = f"spectral condition of order {args.order} holds"
        return EXIT_OK, report
    report["summary"] = (
        f"spectral condition fails at order {result.failure_order}; "
        f"holds up to order {result.order}"
    )
    return EXIT_FAIL, report


def cmd_factorize(args) -> tuple[int, dict]:
    scheme, binding, mask = _load(args)
    report: dict[str, Any] = {"command": "factorize", "scheme": _scheme_info(scheme, binding)}
    try:
        result = factorize_gregory(mask, args.order)
    except NonDivisibleError as exc:
        report["summary"] = f"factorization of order {args.order} fails: {exc}"
        report["remainder"] = str(exc.remainder)
        return EXIT_FAIL, report
    out = result.mask if args.normalization == "gregory" else result.mask_taylor_normalized
    report["summary"] = f"Gregory factorization of order {args.order} exists"
    report["normalization"] = args.normalization
    report["mask"] = _mask(out)
    if args.out:
        save_scheme(out, args.out, f"{scheme.name}-B{args.order}")
        report["written"] = str(args.out)
    return EXIT_OK, report


def _certify_one(scheme: SchemeFile, binding, order, max_iter, scale) -> dict[str, Any]:
    result = certify_cd(scheme.evaluate(binding), order, max_iter, scale)
    report: dict[str, Any] = {
        "parameters": {k: _frac(v) for k, v in binding.items()},
        "certified": result.certified,
        "failed_stage": result.failed_stage,
        "spectral": _spectral_report(result.spectral),
    }
    if result.error:
        report["error"] = result.error
    if result.contractivity is not None:
        c = result.contractivity
        report["contractivity"] = {
            "scale": _frac(scale),
            "iterations": c.iterations,
            "norm": _frac(c.norm),
            "norm_decimal": _decimal(c.norm, 8),
            "norms": [_frac(x) for x in c.norms],
        }
    return report


def _certify_summary(order, item) -> str:
    if item["certified"]:
        c = item["contractivity"]
        return f"C{order} certified: norm of power {c['iterations']} is {c['norm']} < 1"
    stage = item["failed_stage"]
    if stage == "contractivity":
        c = item["contractivity"]
        return (
            f"C{order} not certified: no power up to {len(c['norms'])} has norm below 1 "
            f"(best {min(c['norms'], key=Fraction)})"
        )
    return f"C{order} not certified: {stage} stage fails"


def _sweep_points(spec: str) -> tuple[str, list[Fraction]]:
    name, sep, rng = spec.partition("=")
    parts = rng.split(":")
    if not sep or len(parts) != 3:
        raise UsageError(f"--sweep must look like name=start:stop:step, got {spec!r}")
    start, stop, step = (parse_scalar(p) for p in parts)
    if step <= 0:
        raise UsageError("--sweep step must be positive")
    lo, hi = min(start, stop), max(start, stop)
    points = []
    x = lo
    while x <= hi:
        points.append(x)
        x += step
    return name.strip(), points


def _certify_worker(payload):
    return _certify_one(*payload)


def cmd_certify(args) -> tuple[int, dict]:
    scale = parse_scalar(args.scale)
    if not args.sweep:
        scheme, binding, _ = _load(args)
        item = _certify_one(scheme, binding, args.order, args.max_iter, scale)
        report = {"command": "certify", "scheme": _scheme_info(scheme, binding), "order": args.order}
        report.update(item)
        report["summary"] = _certify_summary(args.order, item)
        return (EXIT_OK if item["certified"] else EXIT_FAIL), report

    scheme = read_scheme(_resolve_scheme_path(args.scheme))
    base = parse_binding(args.param)
    name, points = _sweep_points(args.sweep)
    if name in base:
        raise UsageError(f"parameter {name!r} is both fixed and swept")
    if name not in scheme.params:
        raise UsageError(f"scheme has no parameter {name!r}")
    payloads = [
        (scheme, {**base, name: x}, args.order, args.max_iter, scale) for x in points
    ]
    # validate bindings up front so worker errors cannot hide usage problems
    for p in payloads[:1]:
        scheme.evaluate(p[1])
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            items = list(pool.map(_certify_worker, payloads))
    else:
        items = [_certify_worker(p) for p in payloads]
    items.sort(key=lambda it: Fraction(it["parameters"][name]))
    certified = [it for it in items if it["certified"]]
    rows = []
    for it in items:
        c = it.get("contractivity")
        rows.append(
            {
                name: it["parameters"][name],
                "certified": it["certified"],
                "iterations": c["iterations"] if c else None,
                "norm": c["norm"] if c else None,
                "failed_stage": it["failed_stage"],
            }
        )
    report = {
        "command": "certify",
        "scheme": _scheme_info(scheme, base),
        "order": args.order,
        "sweep": {"parameter": name, "points": len(items), "certified": len(certified)},
        "results": rows,
        "summary": f"C{args.order} certified at {len(certified)} of {len(items)} sweep points",
    }
    return (EXIT_OK if len(certified) == len(items) else EXIT_FAIL), report


def cmd_contractivity(args) -> tuple[int, dict]:
    scheme, binding, mask = _load(args)
    scale = parse_scalar(args.scale)
    result = contractivity_certificate(mask.scaled(scale), args.max_iter)
    report = {
        "command": "contractivity",
        "scheme": _scheme_info(scheme, binding),
        "scale": _frac(scale),
        "certified": result.certified,
        "iterations": result.iterations,
        "norm": _frac(result.norm),
        "norms": [_frac(x) for x in result.norms],
    }
    if result.certified:
        report["summary"] = f"contractive: norm of power {result.iterations} is {_frac(result.norm)} < 1"
        return EXIT_OK, report
    report["summary"] = f"not contractive within {args.max_iter} powers"
    return EXIT_FAIL, report


def cmd_reproduce(args) -> tuple[int, dict]:
    scheme, binding, mask = _load(args)
    degree = args.degree
    reached = reproduction_degree(mask, degree)
    spectral = solve_spectral(mask, degree)
    holds = "holds" if spectral.ok else "fails"
    report: dict[str, Any] = {
        "command": "reproduce",
        "scheme": _scheme_info(scheme, binding),
        "degree": degree,
        "reproduces": reached >= degree,
        "reproduction_degree": reached,
        "spectral_order": spectral.order,
        "spectral_condition": spectral.ok,
    }
    if reached >= degree:
        report["summary"] = f"reproduces polynomials up to degree {degree}"
        return EXIT_OK, report
    report["summary"] = (
        f"reproduction fails at degree {reached + 1}; spectral condition of order {degree} {holds}"
    )
    return EXIT_FAIL, report


def _read_data(path: Path) -> HermiteSequence:
    rows: dict[int, tuple[Fraction, Fraction]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            cells = [c.strip() for c in row]
            if not cells or not any(cells) or cells[0].startswith("#"):
                continue
            if cells[0] == "j":
                continue
            if len(cells) != 3:
                raise UsageError(f"{path}:{lineno}: expected j,f,df")
            try:
                j = int(cells[0])
                values = (parse_scalar(cells[1]), parse_scalar(cells[2]))
            except (ValueError, SchemeError) as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
            if j in rows:
                raise UsageError(f"{path}:{lineno}: index {j} repeated")
            rows[j] = values
    if not rows:
        raise UsageError(f"{path}: no data rows")
    lo, hi = min(rows), max(rows)
    missing = [j for j in range(lo, hi + 1) if j not in rows]
    if missing:
        raise UsageError(f"{path}: index {missing[0]} missing")
    return HermiteSequence(lo, tuple(rows[j] for j in range(lo, hi + 1)))


def _decimal(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return f"{value:.{digits}g}"


def cmd_refine(args) -> tuple[int, dict]:
    scheme, binding, mask = _load(args)
    data = _read_data(Path(args.data))
    result = hermite_refine(mask, data, args.levels)
    samples = result.samples(valid_only=not args.all)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "f", "df"])
        for x, (f, df) in samples:
            if args.exact:
                writer.writerow([_frac(x), _frac(f), _frac(df)])
            else:
                writer.writerow([_decimal(x, args.digits), _decimal(f, args.digits), _decimal(df, args.digits)])
    valid = result.valid
    report = {
        "command": "refine",
        "scheme": _scheme_info(scheme, binding),
        "levels": args.levels,
        "input_range": [data.offset, data.end],
        "valid_window": list(valid) if valid else None,
        "samples": len(samples),
        "written": str(args.out),
        "summary": f"wrote {len(samples)} samples at level {args.levels} to {args.out}",
    }
    return EXIT_OK, report


def cmd_coeffs(args) -> tuple[int, dict]:
    n = args.max
    report = {
        "command": "coeffs",
        "gregory": {str(k): _frac(gregory(k)) for k in range(n + 1)},
        "stirling_first": [[stirling_first(k, m) for m in range(k + 1)] for k in range(n + 1)],
        "stirling_second": [[stirling_second(k, m) for m in range(k + 1)] for k in range(n + 1)],
        "summary": f"Gregory coefficients and Stirling numbers up to n = {n}",
    }
    return EXIT_OK, report


# -- argument parsing -----------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermite-gregory",
        description="Exact analysis of two-dimensional Hermite subdivision schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scheme_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scheme", help="scheme file (bundled names such as h1.scheme also work)")
        p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
        p.add_argument("--json", metavar="FILE", help="write the structured report ('-' for stdout)")
        return p

    p = scheme_command("spectral", "solve the spectral condition")
    p.add_argument("--order", type=_non_negative, required=True)
    p.set_defaults(func=cmd_spectral)

    p = scheme_command("factorize", "Gregory factorization of a given order")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--normalization", choices=("gregory", "taylor"), default="gregory")
    p.add_argument("--out", metavar="FILE", help="save the factored mask as a scheme file")
    p.set_defaults(func=cmd_factorize)

    p = scheme_command("certify", "certify C^d convergence")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--max-iter", type=_positive, default=12)
    p.add_argument("--scale", default="1/2", help="factor applied to the factored mask")
    p.add_argument("--sweep", metavar="NAME=START:STOP:STEP")
    p.add_argument("--jobs", type=_positive, default=None)
    p.set_defaults(func=cmd_certify)

    p = scheme_command("contractivity", "contractivity of the scheme's own mask")
    p.add_argument("--max-iter", type=_positive, default=12)
    p.add_argument("--scale", default="1")
    p.set_defaults(func=cmd_contractivity)

    p = scheme_command("reproduce", "check polynomial reproduction")
    p.add_argument("--degree", type=_non_negative, required=True)
    p.set_defaults(func=cmd_reproduce)

    p = scheme_command("refine", "refine Hermite data and export samples")
    p.add_argument("--levels", type=_non_negative, required=True)
    p.add_argument("--data", required=True, metavar="CSV", help="rows j,f,df")
    p.add_argument("--out", required=True, metavar="CSV")
    p.add_argument("--digits", type=_positive, default=17)
    p.add_argument("--exact", action="store_true", help="write p/q fractions instead of decimals")
    p.add_argument("--all", action="store_true", help="include samples outside the valid window")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("coeffs", help="print Gregory coefficients and Stirling numbers")
    p.add_argument("--max", type=_non_negative, default=10)
    p.add_argument("--json", metavar="FILE")
    p.set_defaults(func=cmd_coeffs)
    return parser


def _execute(argv: Sequence[str] | None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), None, None
    try:
        status, report = args.func(args)
    except (UsageError, SchemeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None, args
    except SupportLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL, None, args
    return status, report, args


def run_command(argv: Sequence[str] | None = None) -> tuple[int, dict | None]:
    """Parse ``argv`` and run it; returns the exit status and the report."""
    status, report, _ = _execute(argv)
    return status, report


def main(argv: Sequence[str] | None = None) -> int:
    status, report, args = _execute(argv)
    if report is None:
        return status
    target = args.json
    if target != "-":
        sys.stdout.write(render_text(report))
    if target:
        text = json.dumps(report, indent=2) + "\n"
        if target == "-":
            sys.stdout.write(text)
        else:
            Path(target).write_text(text, encoding="utf-8")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
