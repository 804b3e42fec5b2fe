"""Command-line front end.

Every output starts with a header carrying the package version and the run
configuration, and is byte-identical for identical arguments.  Exit status:
0 success, 1 verification mismatch, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from math import comb, factorial

from . import __version__
from .asymptotics import partial_sum, row_value, wright_polynomials
from .errors import GdseriesError, GradeTooHigh
from .families import FAMILY_NAMES, build_family
from .field import FieldSpec, format_fraction, parse_rational
from .marked import MarkedScalar, alg_to_text
from .oracle import LIMITS, ORACLE_FAMILIES, calibrate_sat_model, oracle_counts
from .verify import SCOPES, run

FORMATS = ("json", "csv", "bfile", "table")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: str = "2"
    root_degree: int = 24
    family: str | None = None
    marks: list | None = None
    params: dict = field(default_factory=dict)
    format: str = "table"

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec(parse_rational(self.alpha), self.root_degree)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        return cls(**data)


# ---------------------------------------------------------------------------
# output


class Output:
    """Collects one command's payload and renders it in the chosen format."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.buf = io.StringIO()

    def header_lines(self) -> list[str]:
        return [f"# gdseries {__version__}", "# config " + json.dumps(self.cfg.to_json(), sort_keys=True)]

    def json(self, payload):
        doc = {"version": __version__, "config": self.cfg.to_json(), "result": payload}
        self.buf.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    def text(self, lines):
        for line in self.header_lines() + list(lines):
            self.buf.write(line + "\n")

    def csv(self, head, rows):
        for line in self.header_lines():
            self.buf.write(line + "\n")
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(rows)

    def emit(self, path):
        data = self.buf.getvalue()
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _approx(v) -> str:
    return repr(float(v.to_float() if hasattr(v, "to_float") else v))


def _family(args, cfg):
    marks = args.marks
    fam = build_family(args.family, cfg.spec)
    if marks is None:
        return fam
    keep = [m for m in marks if m]
    unknown = set(keep) - set(fam.variables)
    if unknown:
        raise UsageError(f"family {fam.name} has marks {list(fam.variables) or 'none'}, not {sorted(unknown)}")
    return build_family(args.family, cfg.spec, {v: 1 for v in fam.variables if v not in keep})


def _marks_arg(text):
    if text is None:
        return None
    text = text.strip()
    if text in ("", "none"):
        return []
    return [m.strip() for m in text.split(",")]


def _count_rows(scalar: MarkedScalar, variables):
    """(mark text, exact count) rows of one marked count."""
    if not variables:
        return [("", alg_to_text(scalar.constant_term()))]
    rows = []
    for k, v in scalar.terms():
        mono = "*".join(f"{x}^{e}" if e > 1 else x for x, e in zip(variables, k) if e) or "1"
        rows.append((mono, alg_to_text(v)))
    return rows


def _integer(scalar: MarkedScalar, n: int) -> int:
    if not scalar.is_constant():
        raise UsageError("b-file output needs unmarked counts; pass --marks none")
    v = scalar.constant_term()
    q = v.as_fraction() if v.is_rational() else None
    if q is None or q.denominator != 1:
        raise UsageError(f"b-file output needs integer counts; a({n}) = {alg_to_text(v)}")
    return q.numerator


def _emit_counts(out: Output, cfg: RunConfig, counts: list, variables, approx=False):
    fmt = cfg.format
    if fmt == "bfile":
        lines = [f"{n} {_integer(c, n)}" for n, c in enumerate(counts)]
        out.text(lines)
    elif fmt == "json":
        payload = []
        for n, c in enumerate(counts):
            if variables:
                payload.append({"n": n, "count": [{"marks": t["marks"], "value": t["value"]} for t in c.to_json()]})
            else:
                payload.append({"n": n, "count": alg_to_text(c.constant_term())})
        out.json(payload)
    elif fmt == "csv":
        rows = [(n, mono, val) for n, c in enumerate(counts) for mono, val in _count_rows(c, variables)]
        out.csv(["n", "marks", "count"] if variables else ["n", "count"],
                rows if variables else [(n, v) for n, _, v in rows])
    else:
        lines = []
        for n, c in enumerate(counts):
            text = str(c) if variables else alg_to_text(c.constant_term())
            if approx and not variables:
                text += f"  ~ {_approx(c.constant_term())}"
            lines.append(f"{n:>3}  {text}")
        out.text(lines)


# ---------------------------------------------------------------------------
# commands


def cmd_seq(args, cfg, out) -> int:
    fam = _family(args, cfg)
    counts = fam.evaluate(args.n).counts(args.n)
    _emit_counts(out, cfg, counts, fam.marks, args.approx)
    return 0


def cmd_oracle(args, cfg, out) -> int:
    if args.family not in ORACLE_FAMILIES:
        raise UsageError(f"no brute-force counterpart for {args.family!r}; choose from {', '.join(ORACLE_FAMILIES)}")
    if cfg.spec.alpha != 2:
        raise UsageError("brute-force counts exist only for alpha = 2")
    unsafe = args.unsafe_n is not None
    n_max = args.unsafe_n if unsafe else args.n
    fam = build_family(args.family, cfg.spec)
    keep = fam.variables if args.marks is None else [m for m in args.marks if m]
    unknown = set(keep) - set(fam.variables)
    if unknown:
        raise UsageError(f"family {fam.name} has marks {list(fam.variables) or 'none'}, not {sorted(unknown)}")
    kept = tuple(v for v in fam.variables if v in keep)
    universe = args.universe or "full"
    counts = []
    for n in range(n_max + 1):
        hist = oracle_counts(args.family, n, universe, unsafe)
        terms = {}
        for k, c in hist.items():
            key = tuple(e for v, e in zip(fam.variables, k) if v in keep)
            terms[key] = terms.get(key, 0) + c
        counts.append(MarkedScalar(cfg.spec, terms, kept))
    _emit_counts(out, cfg, counts, kept)
    return 0


def cmd_coeffs(args, cfg, out) -> int:
    fam = _family(args, cfg)
    beta = fam.grade if args.beta is None else args.beta
    try:
        c = fam.transfer(beta, args.order)
    except GradeTooHigh as e:
        raise UsageError(
            f"{fam.name} counts grow like alpha^({fam.grade} C(n,2)), faster than beta={beta} allows; "
            f"use --beta {fam.grade} or larger ({e})"
        ) from e
    if cfg.format == "json":
        out.json(c.to_json())
    elif cfg.format == "csv":
        rows = []
        for (m, l), v in sorted(c.table.items()):
            for mono, val in _count_rows(v, c.variables):
                rows.append((m, l, mono, val) if c.variables else (m, l, val))
        out.csv(["m", "l", "marks", "value"] if c.variables else ["m", "l", "value"], rows)
    elif cfg.format == "bfile":
        raise UsageError("b-file output applies to counting sequences only")
    else:
        lines = [f"# {fam.description}; coefficients a(m,l) at beta={beta}, alpha={format_fraction(cfg.spec.alpha)}"]
        if not c.table:
            lines.append(f"# every entry is zero to z-order {args.order}")
        lines.append(c.format_table())
        if args.approx:
            lines += [f"a({m},{l}) ~ {_approx(v.constant_term())}" for (m, l), v in sorted(c.table.items())
                      if v.is_constant()]
        out.text(lines)
    return 0


def cmd_wright(args, cfg, out) -> int:
    fam = _family(args, cfg)
    if fam.marks:
        raise UsageError("polynomials need an unmarked family; pass --marks none")
    beta = fam.grade if args.beta is None else args.beta
    polys = wright_polynomials(fam.transfer(beta, args.order), args.order)
    if cfg.format == "json":
        out.json([w.to_json() for w in polys])
    elif cfg.format == "csv":
        out.csv(["m", "deg", "coeff"], [(p["m"], t["deg"], t["coeff"]) for p in (w.to_json() for w in polys)
                                        for t in p["monomials"]])
    elif cfg.format == "bfile":
        raise UsageError("b-file output applies to counting sequences only")
    else:
        out.text([f"w_{w.m}(n) = {w}" for w in polys])
    return 0


def _parse_ns(text: str) -> list[int]:
    """'25', '20,30,40' or '20:40' (inclusive range)."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def cmd_expand(args, cfg, out) -> int:
    fam = _family(args, cfg)
    if fam.marks:
        raise UsageError("expansions need an unmarked family; pass --marks none")
    ns = _parse_ns(args.n)
    beta = fam.grade if args.beta is None else args.beta
    z = max(args.terms, 0)
    c = fam.transfer(beta, z)
    series = fam.evaluate(max(ns))
    alpha = cfg.spec.alpha
    records = []
    for n in ns:
        truth = series.coeffs[n].constant_term() * factorial(n)
        per_m = []
        for M in range(args.terms + 1):
            est = partial_sum(c, n, M, truth)
            lg = est.rel_error_log2
            row = row_value(c, n, M) * alpha ** (-M * n)
            per_m.append((M, row, est.rel_error, lg))
        records.append((n, truth, per_m))
    if cfg.format == "csv":
        out.csv(["n", "M", "rel_error_log2"],
                [(n, M, "-inf" if lg == float("-inf") else repr(lg)) for n, _, per_m in records
                 for M, _, _, lg in per_m])
    elif cfg.format == "json":
        out.json([
            {
                "n": n,
                "exact": alg_to_text(truth),
                "lead_factor": f"{format_fraction(alpha)}^{beta * comb(n, 2)}",
                "terms": [
                    {"M": M, "term": alg_to_text(t),
                     "rel_error": None if e is None else format_fraction(e),
                     "rel_error_log2": None if lg is None or lg == float("-inf") else lg}
                    for M, t, e, lg in per_m
                ],
            }
            for n, truth, per_m in records
        ])
    elif cfg.format == "bfile":
        raise UsageError("b-file output applies to counting sequences only")
    else:
        lines = []
        for n, truth, per_m in records:
            lines.append(f"n={n}: exact count = {format_fraction(alpha)}^{beta * comb(n, 2)} * "
                         f"{_approx(truth / alpha ** (beta * comb(n, 2)))}")
            lines.append("  M  term w_M(n)/alpha^(M n)             rel_error (log2)")
            for M, t, e, lg in per_m:
                term = alg_to_text(t) if args.exact else _approx(t)
                err = "exact" if e == 0 else f"{lg:.4f}"
                lines.append(f"  {M:<2} {term:<34} {err}")
        out.text(lines)
    return 0


def cmd_verify(args, cfg, out) -> int:
    results = run(args.scope, args.max_n, cfg.spec)
    failed = [r for r in results if not r.ok]
    if cfg.format == "json":
        out.json({"passed": len(results) - len(failed), "failed": len(failed), "checks": [r.to_json() for r in results]})
    elif cfg.format == "csv":
        out.csv(["scope", "name", "ok", "detail"], [(r.scope, r.name, int(r.ok), r.detail) for r in results])
    elif cfg.format == "bfile":
        raise UsageError("b-file output applies to counting sequences only")
    else:
        out.text([r.line() for r in results] + [f"{len(results) - len(failed)} passed, {len(failed)} failed"])
    return 1 if failed else 0


def cmd_calibrate(args, cfg, out) -> int:
    report = calibrate_sat_model(n_max=args.max_n or LIMITS["2cnf"])
    if cfg.format == "json":
        out.json({"chosen": report.chosen, "series": report.series, "oracle": report.oracle})
    elif cfg.format in ("csv", "bfile"):
        raise UsageError("calibration reports are json or table")
    else:
        out.text(report.lines())
    return 0


COMMANDS = {
    "seq": cmd_seq,
    "coeffs": cmd_coeffs,
    "wright": cmd_wright,
    "expand": cmd_expand,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "calibrate-sat": cmd_calibrate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", default="2", help="base alpha as p/q (default 2)")
    common.add_argument("--root-degree", type=int, default=24, help="root degree D of the coefficient field")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--out", help="write to FILE instead of stdout")
    common.add_argument("--approx", action="store_true", help="add floating-point approximations")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("family", choices=FAMILY_NAMES)
    fam.add_argument("--marks", type=_marks_arg, default=None,
                     help="marks to keep, comma separated (others are set to 1); 'none' drops all")

    p = argparse.ArgumentParser(prog="gdseries", description="Exact counts and asymptotic coefficient tables "
                                "for graph, digraph and 2-SAT families.")
    p.add_argument("--version", action="version", version=f"gdseries {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seq", parents=[common, fam], help="counts a_n for n = 0..N")
    s.add_argument("--n", type=int, default=10)

    s = sub.add_parser("coeffs", parents=[common, fam], help="coefficient table a(m,l)")
    s.add_argument("--beta", type=int)
    s.add_argument("--order", type=int, default=6, help="largest row m")

    s = sub.add_parser("wright", parents=[common], help="polynomials w_m(n) = sum_l n^(l falling) a(m,l)")
    s.add_argument("family", nargs="?", default="scd", choices=FAMILY_NAMES)
    s.add_argument("--marks", type=_marks_arg, default=None)
    s.add_argument("--beta", type=int)
    s.add_argument("--order", type=int, default=6, help="largest m")

    s = sub.add_parser("expand", parents=[common, fam], help="truncated expansion against the exact count")
    s.add_argument("--n", required=True, help="size: 25, a list 20,30,40 or a range 20:40")
    s.add_argument("--terms", type=int, default=3, help="largest row M kept")
    s.add_argument("--beta", type=int)
    s.add_argument("--exact", action="store_true", help="print terms as exact values")

    s = sub.add_parser("verify", parents=[common], help="self-checks")
    s.add_argument("--scope", choices=SCOPES, default="all")
    s.add_argument("--max-n", type=int, help="cap brute-force sizes")

    s = sub.add_parser("oracle", parents=[common, fam], help="brute-force counts n = 0..N")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--universe", choices=("full", "half"), help="2-CNF clause universe (default full)")
    s.add_argument("--unsafe-n", type=int, metavar="N", help="enumerate up to N beyond the built-in caps")

    s = sub.add_parser("calibrate-sat", parents=[common], help="choose the 2-CNF clause universe")
    s.add_argument("--max-n", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "alpha", "root_degree", "format", "out", "family", "marks") and v is not None}
    cfg = RunConfig(args.command, args.alpha, args.root_degree, getattr(args, "family", None),
                    getattr(args, "marks", None), params, args.format)
    try:
        cfg.spec
        out = Output(cfg)
        code = COMMANDS[args.command](args, cfg, out)
    except (UsageError, GdseriesError, ValueError) as e:
        print(f"gdseries: error: {e}", file=sys.stderr)
        return 2
    out.emit(args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
