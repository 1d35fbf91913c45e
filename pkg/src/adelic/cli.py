"""Command-line interface: one binary, one subcommand per invariant engine.

Reports are JSON (optionally CSV or Markdown for tabular commands) with a
fixed "schema": "v1" envelope.  Every exact value travels next to its
float64 rendering, never alone.  Rationals are serialized as strings; log
values as prime -> exponent maps.

Exit codes: 0 success, 2 validation error, 3 resource/budget exhaustion
(a partial report is still written), 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .asymptotics import (
    default_max_n,
    defect_estimates,
    slope_sequence,
    transference_check,
    zeta_sandwich,
)
from .exactlog import ExactScalar, LogValue
from .ffbundles import (
    MatrixDivisor,
    SplittingType,
    minima_ff,
    reduce_to_splitting,
    slopes_ff,
)
from .lattices import (
    DEFAULT_DIM_CAP,
    DEFAULT_NODE_BUDGET,
    EuclideanLattice,
    LatticeError,
    ResourceError,
    degree,
    dual,
    hn_polygon,
    slope,
    successive_minima,
)
from .okounkov import (
    MonomialSeries,
    OkounkovError,
    RoofFunction,
    okounkov_body,
    zhang_check,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_INTERNAL = 4

SCHEMA = "v1"
FLOAT_BITS = 128


class ValidationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rendering helpers


def render_exact(value) -> object:
    """Exact value -> JSON: rational string, prime->exponent map, or both."""
    if isinstance(value, LogValue):
        return {str(p): str(c) for p, c in value.terms.items()}
    if isinstance(value, ExactScalar):
        if value.log.is_zero():
            return str(value.rat)
        if value.rat == 0:
            return render_exact(value.log)
        return {"rational": str(value.rat), "log": render_exact(value.log)}
    if isinstance(value, (Fraction, int)):
        return str(value)
    raise TypeError(f"cannot render {type(value).__name__} exactly")


def to_float(value) -> float:
    if isinstance(value, (LogValue, ExactScalar)):
        return value.to_float(FLOAT_BITS)
    return float(value)


def entry(name: str, value, certified: bool | None = None, witness=None) -> dict:
    out = {"name": name, "exact": render_exact(value), "float64": to_float(value)}
    if certified is not None:
        out["certified"] = certified
    if witness is not None:
        out["witness"] = witness
    return out


def report_envelope(command: str, params: dict, input_bytes: bytes | None) -> dict:
    provenance = {"version": __version__, "parameters": params}
    if input_bytes is not None:
        provenance["input_sha256"] = hashlib.sha256(input_bytes).hexdigest()
    return {"schema": SCHEMA, "command": command, "provenance": provenance}


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".adelic-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_input(path: str) -> tuple[dict, bytes]:
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ValidationError(f"cannot read input file {path}: {exc}") from exc
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"input file {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValidationError(f"input file {path} must hold a JSON object")
    schema = obj.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ValidationError(f"unsupported schema {schema!r}")
    return obj, raw


def load_lattice(path: str) -> tuple[EuclideanLattice, bytes]:
    obj, raw = read_input(path)
    try:
        return EuclideanLattice.from_json(obj), raw
    except (LatticeError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"invalid lattice input: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_invariants(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    params = {"cap": args.cap, "budget": args.budget}
    report = report_envelope("invariants", params, raw)
    poly = hn_polygon(lat, cap=args.cap, budget=args.budget)
    minima = successive_minima(lat, cap=args.cap, budget=args.budget)
    results = [
        entry("degree", degree(lat)),
        entry("slope", slope(lat)),
        entry("dual_degree", degree(dual(lat))),
    ]
    for i, mu in enumerate(poly.slopes, 1):
        results.append(entry(f"mu_hat_{i}", mu, certified=poly.certified))
    for i, (lam, wit) in enumerate(zip(minima.values, minima.witnesses), 1):
        results.append(entry(f"lambda_{i}", lam, certified=True, witness=list(wit)))
    report["results"] = results
    return report, EXIT_OK


def cmd_minima(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    params = {"cap": args.cap, "budget": args.budget}
    report = report_envelope("minima", params, raw)
    minima = successive_minima(lat, cap=args.cap, budget=args.budget)
    report["results"] = [
        {
            "name": f"lambda_{i}",
            "exact": render_exact(lam),
            "float64": to_float(lam),
            "norm_sq": str(norm),
            "witness": list(wit),
        }
        for i, (lam, norm, wit) in enumerate(
            zip(minima.values, minima.norms, minima.witnesses), 1
        )
    ]
    return report, EXIT_OK


def cmd_slopes(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    params = {"cap": args.cap, "budget": args.budget}
    report = report_envelope("slopes", params, raw)
    poly = hn_polygon(lat, cap=args.cap, budget=args.budget)
    report["results"] = [
        entry(f"mu_hat_{i}", mu, certified=poly.certified)
        for i, mu in enumerate(poly.slopes, 1)
    ]
    return report, EXIT_OK


def cmd_hn_polygon(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    params = {"cap": args.cap, "budget": args.budget}
    report = report_envelope("hn-polygon", params, raw)
    poly = hn_polygon(lat, cap=args.cap, budget=args.budget)
    report["results"] = {
        "certified": poly.certified,
        "vertices": [
            {"rank": r, "degree": render_exact(p), "float64": to_float(p)}
            for r, p in poly.vertices
        ],
        "slopes": [
            entry(f"mu_hat_{i}", mu, certified=poly.certified)
            for i, mu in enumerate(poly.slopes, 1)
        ],
        "witnesses": {
            str(r): [list(v) for v in vecs] for r, vecs in poly.witnesses.items()
        },
    }
    return report, EXIT_OK


def cmd_sym_sequence(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    max_n = args.max_n if args.max_n is not None else default_max_n(lat.dim)
    params = {"max_n": max_n, "cap": args.cap, "budget": args.budget}
    report = report_envelope("sym-sequence", params, raw)
    seq = slope_sequence(lat, max_n=max_n, sym_cap=args.cap, budget=args.budget)
    report["results"] = [
        {
            "n": e.n,
            "pmax_over_n": render_exact(e.pmax_over_n),
            "pmax_over_n_float64": to_float(e.pmax_over_n),
            "pmin_over_n": render_exact(e.pmin_over_n),
            "pmin_over_n_float64": to_float(e.pmin_over_n),
            "certified": e.certified,
        }
        for e in seq.entries
    ]
    report["truncated"] = seq.truncated
    return report, EXIT_RESOURCE if seq.truncated else EXIT_OK


def cmd_defects(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    max_n = args.max_n if args.max_n is not None else default_max_n(lat.dim)
    params = {"max_n": max_n, "cap": args.cap, "budget": args.budget}
    report = report_envelope("defects", params, raw)
    estimates = defect_estimates(lat, max_n=max_n, sym_cap=args.cap, budget=args.budget)
    blocks = {}
    truncated = False
    for est in estimates:
        truncated = truncated or est.truncated
        blocks[est.kind] = {
            "entries": [
                {
                    "n": e.n,
                    "value": render_exact(e.value),
                    "float64": to_float(e.value),
                    "certified": e.certified,
                    "vs_zero": e.vs_zero,
                    "vs_harmonic": e.vs_harmonic,
                }
                for e in est.entries
            ],
            "lower_limit": entry("half_ln_d", est.lower_limit),
            "upper_limit": entry("harmonic_d_minus_1", est.upper_limit),
            "truncated": est.truncated,
        }
    report["results"] = blocks
    report["truncated"] = truncated
    return report, EXIT_RESOURCE if truncated else EXIT_OK


def cmd_transference(args) -> tuple[dict, int]:
    lat, raw = load_lattice(args.infile)
    params = {"cap": args.cap, "budget": args.budget}
    report = report_envelope("transference", params, raw)
    rows = transference_check(lat, cap=args.cap, budget=args.budget)
    sandwiches = zeta_sandwich(lat, cap=args.cap, budget=args.budget)
    report["results"] = {
        "transference": [
            {
                "index": r.index,
                "minima_sum": render_exact(r.minima_sum),
                "float64": to_float(r.minima_sum),
                "nonnegative": r.nonnegative,
                "banaszczyk_ok": r.banaszczyk_ok,
                "harmonic_bound": str(r.harmonic_bound),
                "slope_sum_vs_harmonic": r.slope_sum_vs_harmonic,
                "minima_sum_vs_harmonic": r.minima_sum_vs_harmonic,
            }
            for r in rows
        ],
        "zeta_sandwich": [
            {
                "index": s.index,
                "lower": render_exact(s.lower),
                "lower_float64": to_float(s.lower),
                "upper": render_exact(s.upper),
                "upper_float64": to_float(s.upper),
                "tight": s.tight,
                "status": s.status,
            }
            for s in sandwiches
        ],
    }
    return report, EXIT_OK


def cmd_zhang_check(args) -> tuple[dict, int]:
    path = args.roof or args.infile
    if path is None:
        raise ValidationError("zhang-check needs --roof (or --in)")
    obj, raw = read_input(path)
    try:
        roof = RoofFunction.from_json(obj)
    except (OkounkovError, ValueError, KeyError, TypeError) as exc:
        raise ValidationError(f"invalid roof input: {exc}") from exc
    deg = Fraction(args.deg)
    params = {"deg": str(deg)}
    report = report_envelope("zhang-check", params, raw)
    try:
        verdict = zhang_check(roof, deg)
    except OkounkovError as exc:
        raise ValidationError(str(exc)) from exc
    report["results"] = {
        "dim": verdict.dim,
        "degree": str(verdict.degree),
        "zeta_ess": render_exact(verdict.zeta_ess),
        "zeta_ess_float64": to_float(verdict.zeta_ess),
        "h": render_exact(verdict.h),
        "h_float64": to_float(verdict.h),
        "bound": render_exact(verdict.bound),
        "bound_float64": to_float(verdict.bound),
        "equality": verdict.equality,
        "constant_roof": verdict.constant_roof,
    }
    return report, EXIT_OK


def cmd_okounkov_body(args) -> tuple[dict, int]:
    obj, raw = read_input(args.infile)
    try:
        series = MonomialSeries.from_json(obj)
        body = okounkov_body(series)
    except (OkounkovError, ValueError, KeyError, TypeError) as exc:
        raise ValidationError(f"invalid monomial series: {exc}") from exc
    report = report_envelope("okounkov-body", {}, raw)
    volume = body.volume()
    scaled = volume
    for k in range(2, body.dim + 1):
        scaled *= k
    report["results"] = {
        "dim": body.dim,
        "degenerate": body.degenerate,
        "vertices": [[str(x) for x in v] for v in body.vertices],
        "volume": str(volume),
        "volume_float64": float(volume),
        "d_factorial_volume": str(scaled),
    }
    return report, EXIT_OK


def cmd_ff_reduce(args) -> tuple[dict, int]:
    obj, raw = read_input(args.infile)
    try:
        md = MatrixDivisor.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise ValidationError(f"invalid matrix divisor: {exc}") from exc
    splitting = reduce_to_splitting(md)
    report = report_envelope("ff-reduce", {}, raw)
    report["results"] = {
        "splitting_type": list(splitting.degrees),
        "total_degree": splitting.total_degree,
        "slopes": slopes_ff(splitting),
        "zeta_minima": minima_ff(splitting),
    }
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# generators


def _generate_gram(rng: random.Random, dim: int) -> dict:
    a = [[rng.randint(-3, 3) for _ in range(dim)] for _ in range(dim)]
    gram = [
        [
            sum(a[i][k] * a[j][k] for k in range(dim)) + (1 if i == j else 0)
            for j in range(dim)
        ]
        for i in range(dim)
    ]
    lat = EuclideanLattice(tuple(tuple(Fraction(x) for x in row) for row in gram))
    obj = lat.to_json()
    obj["schema"] = SCHEMA
    return obj


def _generate_splitting(rng: random.Random, dim: int) -> dict:
    degrees = sorted((rng.randint(-10, 10) for _ in range(dim)), reverse=True)
    splitting = SplittingType(tuple(degrees))
    obj = splitting.to_json()
    obj["schema"] = SCHEMA
    obj["metadata"] = {"total_degree": splitting.total_degree}
    return obj


def _generate_roof(rng: random.Random, dim: int, pieces: int) -> dict:
    def small() -> str:
        return str(Fraction(rng.randint(-8, 8), rng.randint(1, 4)))

    piece_objs = [
        {"gradient": [small() for _ in range(dim)], "offset": small()}
        for _ in range(pieces)
    ]
    zero = ["0"] * dim
    units = [["1" if j == i else "0" for j in range(dim)] for i in range(dim)]
    return {
        "schema": SCHEMA,
        "domain": {"vertices": [zero] + units},
        "pieces": piece_objs,
    }


def cmd_generate(args) -> tuple[dict, int]:
    rng = random.Random(args.seed)
    if args.kind == "random-gram":
        obj = _generate_gram(rng, args.dim)
    elif args.kind == "random-splitting":
        obj = _generate_splitting(rng, args.dim)
    elif args.kind == "random-roof":
        obj = _generate_roof(rng, args.dim, args.pieces)
    else:
        raise ValidationError(f"unknown generator kind {args.kind!r}")
    return obj, EXIT_OK


# ---------------------------------------------------------------------------
# tabular output


def _tabular_rows(report: dict) -> tuple[list[str], list[list]] | None:
    results = report.get("results")
    if isinstance(results, list) and results and isinstance(results[0], dict):
        header = sorted({k for row in results for k in row})
        rows = [
            [json.dumps(row.get(k), sort_keys=True) if isinstance(row.get(k), (dict, list)) else row.get(k, "") for k in header]
            for row in results
        ]
        return header, rows
    return None


def render_csv(report: dict) -> str:
    tab = _tabular_rows(report)
    if tab is None:
        raise ValidationError("csv output needs a tabular report")
    header, rows = tab
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_md(report: dict) -> str:
    tab = _tabular_rows(report)
    if tab is None:
        raise ValidationError("markdown output needs a tabular report")
    header, rows = tab
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(str(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adelic",
        description="Exact invariants of euclidean lattices, function-field "
        "bundles and roof functions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--out", dest="outfile")
        p.add_argument("--format", choices=["json", "csv", "md"], default="json")
        p.add_argument("--cap", type=int, default=None)
        p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)

    for name, func in [
        ("invariants", cmd_invariants),
        ("minima", cmd_minima),
        ("slopes", cmd_slopes),
        ("hn-polygon", cmd_hn_polygon),
        ("transference", cmd_transference),
    ]:
        p = sub.add_parser(name)
        add_common(p)
        p.set_defaults(func=func, default_cap=DEFAULT_DIM_CAP)

    for name, func in [("sym-sequence", cmd_sym_sequence), ("defects", cmd_defects)]:
        p = sub.add_parser(name)
        add_common(p)
        p.add_argument("--max-n", dest="max_n", type=int, default=None)
        p.set_defaults(func=func, default_cap=256)

    p = sub.add_parser("zhang-check")
    p.add_argument("--roof")
    p.add_argument("--in", dest="infile")
    p.add_argument("--deg", default="1")
    p.add_argument("--out", dest="outfile")
    p.add_argument("--format", choices=["json", "csv", "md"], default="json")
    p.set_defaults(func=cmd_zhang_check, default_cap=None, cap=None)

    for name, func in [("okounkov-body", cmd_okounkov_body), ("ff-reduce", cmd_ff_reduce)]:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--out", dest="outfile")
        p.add_argument("--format", choices=["json", "csv", "md"], default="json")
        p.set_defaults(func=func, default_cap=None, cap=None)

    p = sub.add_parser("generate")
    p.add_argument("kind", choices=["random-gram", "random-splitting", "random-roof"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--pieces", type=int, default=1)
    p.add_argument("--out", dest="outfile")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_generate, default_cap=None, cap=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    if getattr(args, "cap", None) is None:
        args.cap = getattr(args, "default_cap", None)
    if getattr(args, "dim", None) is not None and args.dim < 1:
        print("error: --dim must be at least 1", file=sys.stderr)
        return EXIT_VALIDATION
    if getattr(args, "pieces", None) is not None and args.pieces < 1:
        print("error: --pieces must be at least 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        report, code = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (LatticeError, OkounkovError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceError as exc:
        partial = report_envelope(args.command, {}, None)
        partial["error"] = str(exc)
        partial["partial"] = True
        try:
            write_output(dump_json(partial), getattr(args, "outfile", None))
        except OSError:
            pass
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:  # anything else is a broken invariant
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        text = dump_json(report)
    elif fmt == "csv":
        try:
            text = render_csv(report)
        except ValidationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    else:
        try:
            text = render_md(report)
        except ValidationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        write_output(text, getattr(args, "outfile", None))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return code


if __name__ == "__main__":
    sys.exit(main())
