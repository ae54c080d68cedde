"""Command-line front end.

Each subcommand streams one record per prime (or per class) as JSON lines or
CSV and exits 0 on success, 1 if any prediction disagreed with its oracle, 2
on usage errors and 3 on internal failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass

from sympy import primerange

from .arith import PolyFp, roots_mod_p
from .classpoly import HilbertCache, compute_hilbert_poly, set_default_cache
from .curve import CurveQ, reduce_mod, trace_of
from .errors import (
    BadReduction,
    ExcludedPrime,
    FrobDivError,
    InvalidArgument,
    PrecisionFailure,
    Unsupported,
)
from .frobenius import (
    CLASS_TABLE_MODULI,
    density_count,
    endo_data,
    frob_matrix,
    frob_report,
    reduce_mod_q,
    splits_completely_Lq_plus,
)
from .quadform import as_discriminant, represent_principal
from .quintic import (
    check_prime_for_quintic,
    parse_quintic,
    predict_split_at,
    quintic_roots_mod_p,
    resolve_quintic,
    split_symbols,
    verify_split,
)

log = logging.getLogger("frobdiv")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
MAX_BOUND = 10**6

GAUSS_CURVE = "0,0,0,-15,22"

FROB_FIELDS = ["p", "ap", "delta", "bp", "matrix", "matrix_mod_q", "class_index",
               "orbit_degrees", "ddf_degrees", "agree"]
QUINTIC_FIELDS = ["p", "rho", "sigma", "predicted", "observed", "agree", "roots"]
DENSITY_FIELDS = ["class_index", "representative", "size", "count", "expected", "rel_dev"]
CM_FIELDS = ["p", "p_mod_3", "x3_minus_2_splits", "x2_27y2", "frobenius_prediction", "agree"]
HILBERT_FIELDS = ["disc", "degree", "coeffs", "rounding_error", "digits"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    curve: str | None = None
    poly: str | None = None
    p: int | None = None
    pmax: int | None = None
    q: int | None = None
    disc: int | None = None
    digits: int | None = None
    fmt: str = "json"
    out: str | None = None
    cache_dir: str | None = None
    show_roots: bool = False
    full: bool = False
    allow_large: bool = False

    def primes(self, start: int = 2):
        if self.p is not None:
            return [self.p]
        if self.pmax is None:
            raise UsageError("give --p or --pmax")
        if self.pmax > MAX_BOUND and not self.allow_large:
            raise UsageError(f"--pmax above {MAX_BOUND} needs --allow-large")
        return list(primerange(start, self.pmax + 1))


class Writer:
    """Writes records as JSON lines or as CSV with a fixed column order."""

    def __init__(self, stream, fmt: str, fields: list[str]):
        self.fmt = fmt
        self.fields = fields
        self.stream = stream
        if fmt == "csv":
            self._csv = csv.DictWriter(stream, fieldnames=fields, extrasaction="ignore")
            self._csv.writeheader()

    def write(self, row: dict) -> None:
        row = {k: row.get(k) for k in self.fields}
        if self.fmt == "json":
            self.stream.write(json.dumps(row) + "\n")
        else:
            self._csv.writerow({k: _cell(v) for k, v in row.items()})


def _cell(v):
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v)
    return "" if v is None else v


@contextmanager
def _output(cfg: RunConfig, fields: list[str]):
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            yield Writer(fh, cfg.fmt, fields)
    else:
        yield Writer(sys.stdout, cfg.fmt, fields)


def _summary(**kw) -> None:
    print(json.dumps({"summary": kw}), file=sys.stderr)


def _curve(cfg: RunConfig) -> CurveQ:
    if not cfg.curve:
        raise UsageError("--curve is required")
    try:
        return CurveQ.parse(cfg.curve)
    except (InvalidArgument, FrobDivError) as exc:
        raise UsageError(str(exc)) from None


def cmd_frob(cfg: RunConfig) -> int:
    E = _curve(cfg)
    q = cfg.q
    if q is None or q < 2:
        raise UsageError("--q must be an integer >= 2")
    mismatches = rows = 0
    with _output(cfg, FROB_FIELDS) as out:
        for p in cfg.primes():
            try:
                row = frob_report(E, p, q)
            except (BadReduction, ExcludedPrime) as exc:
                log.info("skip p=%d: %s", p, exc)
                continue
            except FrobDivError as exc:
                log.warning("p=%d failed: %s", p, exc)
                continue
            rows += 1
            mismatches += not row["agree"]
            out.write(row)
    _summary(command="frob", rows=rows, mismatches=mismatches)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_quintic(cfg: RunConfig) -> int:
    if not cfg.poly:
        raise UsageError("--poly is required")
    try:
        coeffs = parse_quintic(cfg.poly)
        setup = resolve_quintic(coeffs)
    except (InvalidArgument, Unsupported, FrobDivError) as exc:
        print(f"frobdiv quintic: inapplicable quintic: {exc}", file=sys.stderr)
        return EXIT_USAGE
    E = _curve(cfg) if cfg.curve else setup.curve
    mismatches = rows = 0
    with _output(cfg, QUINTIC_FIELDS) as out:
        for p in cfg.primes(start=7):
            try:
                check_prime_for_quintic(setup, E, p)
                predicted = predict_split_at(E, p)
                observed = verify_split(coeffs, p)
            except ExcludedPrime as exc:
                log.info("skip p=%d: %s", p, exc)
                continue
            except FrobDivError as exc:
                log.warning("p=%d failed: %s", p, exc)
                continue
            rho, sigma = split_symbols(trace_of(E, p).a_p, p)
            row = {
                "p": p, "rho": rho, "sigma": sigma,
                "predicted": str(predicted), "observed": str(observed),
                "agree": predicted == observed,
            }
            if cfg.show_roots:
                row["roots"] = sorted(quintic_roots_mod_p(coeffs, p))
            rows += 1
            mismatches += not row["agree"]
            out.write(row)
    _summary(command="quintic", kind=setup.kind, t=str(setup.t), curve=str(E),
             rows=rows, mismatches=mismatches)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_density(cfg: RunConfig) -> int:
    E = _curve(cfg)
    if cfg.q not in CLASS_TABLE_MODULI:
        raise UsageError(f"--q must be one of {CLASS_TABLE_MODULI}")
    if cfg.pmax is None:
        raise UsageError("--pmax is required")
    if cfg.pmax > MAX_BOUND and not cfg.allow_large:
        raise UsageError(f"--pmax above {MAX_BOUND} needs --allow-large")
    res = density_count(E, cfg.q, cfg.pmax, full=cfg.full)
    with _output(cfg, DENSITY_FIELDS) as out:
        for row in res.rows():
            out.write(row)
    _summary(command="density", q=cfg.q, X=cfg.pmax, counted=res.total,
             group_order=res.table.order, skipped=len(res.skipped))
    return EXIT_OK


def gauss_row(p: int, E: CurveQ | None = None) -> dict:
    """Three views of complete splitting of ``x^3 - 2`` mod ``p > 3``."""
    E = E or CurveQ.parse(GAUSS_CURVE)
    splits = len(roots_mod_p(PolyFp(p, (-2, 0, 0, 1)))) == 3
    representable = bool(represent_principal(-108, p))  # x^2 + 27 y^2
    e = endo_data(E, p)
    M = reduce_mod_q(frob_matrix(e), 3)
    predicted = splits_completely_Lq_plus(M, disc=e.disc, j=E.j)
    return {
        "p": p, "p_mod_3": p % 3,
        "x3_minus_2_splits": splits, "x2_27y2": representable,
        "frobenius_prediction": predicted,
        "agree": splits == representable == predicted,
    }


def cmd_cm_demo(cfg: RunConfig) -> int:
    E = CurveQ.parse(GAUSS_CURVE)
    mismatches = rows = 0
    with _output(cfg, CM_FIELDS) as out:
        for p in cfg.primes(start=5):
            try:
                reduce_mod(E, p)
            except BadReduction:
                continue
            row = gauss_row(p, E)
            rows += 1
            mismatches += not row["agree"]
            out.write(row)
    _summary(command="cm-demo", rows=rows, mismatches=mismatches)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_hilbert(cfg: RunConfig) -> int:
    if cfg.disc is None:
        raise UsageError("--disc is required")
    try:
        D = as_discriminant(cfg.disc)
    except InvalidArgument as exc:
        raise UsageError(str(exc)) from None
    H = compute_hilbert_poly(D, cfg.digits)
    with _output(cfg, HILBERT_FIELDS) as out:
        out.write({
            "disc": D.value, "degree": H.degree,
            "coeffs": [str(c) for c in reversed(H.coeffs)],
            "rounding_error": H.rounding_error, "digits": H.digits,
        })
    return EXIT_OK


COMMANDS = {
    "frob": cmd_frob,
    "quintic": cmd_quintic,
    "density": cmd_density,
    "cm-demo": cmd_cm_demo,
    "hilbert": cmd_hilbert,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobdiv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write records here instead of stdout")
        sp.add_argument("--cache-dir", help="Hilbert polynomial cache (FROBDIV_CACHE wins)")
        sp.add_argument("--digits", type=int, help="starting decimal precision for H_D")

    def primes(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--p", type=int, help="a single prime")
        g.add_argument("--pmax", type=int, help="all primes up to this bound")
        sp.add_argument("--allow-large", action="store_true",
                        help=f"permit bounds above {MAX_BOUND}")

    sp = sub.add_parser("frob", help="Frobenius matrices and the division-polynomial oracle")
    sp.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6 or a4,a6")
    sp.add_argument("--q", type=int, required=True)
    primes(sp)
    common(sp)

    sp = sub.add_parser("quintic", help="predicted vs observed quintic splitting types")
    sp.add_argument("--poly", required=True, help="c4,c3,c2,c1,c0 for x^5 + c4 x^4 + ... + c0")
    sp.add_argument("--curve", help="uniformizing curve (default: the Kiepert curve E_t)")
    sp.add_argument("--show-roots", action="store_true")
    primes(sp)
    common(sp)

    sp = sub.add_parser("density", help="class frequencies of Frobenius mod q")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--full", action="store_true", help="compute full invariants at every prime")
    sp.add_argument("--allow-large", action="store_true")
    common(sp)

    sp = sub.add_parser("cm-demo", help="x^3 - 2 against p = x^2 + 27y^2 and Frobenius")
    primes(sp)
    common(sp)

    sp = sub.add_parser("hilbert", help="dump a Hilbert class polynomial")
    sp.add_argument("--disc", type=int, required=True)
    common(sp)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    fields = set(RunConfig.__dataclass_fields__)
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = _config(ns)
    cache_dir = os.environ.get("FROBDIV_CACHE") or cfg.cache_dir
    previous = set_default_cache(HilbertCache(cache_dir, maxsize=4096, digits=cfg.digits))
    try:
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"frobdiv {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionFailure as exc:
        print(f"frobdiv {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FrobDivError as exc:
        print(f"frobdiv {cfg.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        set_default_cache(previous)


if __name__ == "__main__":
    sys.exit(main())
