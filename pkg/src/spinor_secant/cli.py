"""Command-line surface.

Four subcommands: `dim` runs one secant dimension estimate, `table`
reproduces a whole table of them, `certify` runs one of the
deterministic certificates, and `selftest` runs a condensed invariant
suite.  Output formats are text (default), json (one object per
report, NDJSON for tables), and csv with the fixed column order
h, p, N, expected, dimension, defective.

Exit codes: 0 on success, 1 on usage errors, 2 when a certificate or
the selftest fails.  Identical invocations print identical bytes; the
SPINOR_SECANT_THREADS variable (0 = one thread per core) only changes
timing, never output order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import exact
from . import spinor
from . import terracini
from . import orthogonal

__all__ = ["build_parser", "main", "console_main"]


class _Parser(argparse.ArgumentParser):
    """argparse with exit code 1 on usage errors instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _thread_count() -> int:
    raw = os.environ.get("SPINOR_SECANT_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def _add_common(sub, trials=True):
    sub.add_argument("--seed", type=int, default=0,
                     help="base seed for the random point draws")
    if trials:
        sub.add_argument("--trials", type=int, default=1,
                         help="independent redraws; the max rank is kept")
    sub.add_argument("--prime", type=int, default=exact.DEFAULT_PRIME,
                     help="odd prime modulus (default 2^61 - 1)")
    sub.add_argument("--format", choices=("text", "json", "csv"),
                     default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spinor-secant",
        description="Dimensions and defectivity certificates for higher "
                    "secant varieties of even spinor varieties, in exact "
                    "prime-field arithmetic.")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_dim = subs.add_parser(
        "dim", help="estimate dim of the k-th secant at one (h, k)")
    p_dim.add_argument("--h", type=int, required=True, dest="h")
    p_dim.add_argument("--k", type=int, required=True, dest="k")
    _add_common(p_dim)
    p_dim.add_argument(
        "--rational", action="store_true",
        help="also run fraction-free elimination over the integers on the "
             "symmetric lift of the first trial's stack (slow for large h)")

    p_table = subs.add_parser(
        "table", help="one report per h over a range, fixed k")
    p_table.add_argument("--k", type=int, required=True, dest="k")
    p_table.add_argument("--h-min", type=int, default=None)
    p_table.add_argument("--h-max", type=int, default=None)
    _add_common(p_table)

    p_cert = subs.add_parser(
        "certify", help="run a deterministic certificate")
    p_cert.add_argument("target",
                        choices=("rnc", "s7", "base12", "orbit", "stability"))
    p_cert.add_argument("--h", type=int, default=None, dest="h",
                        help="size for rnc (default 8) or a single orbit size")
    p_cert.add_argument("--k", type=int, default=3, dest="k",
                        help="secant index for rnc (default 3)")
    p_cert.add_argument("--s", type=int, default=None, dest="s",
                        help="single size for stability (default 12..14)")
    _add_common(p_cert, trials=False)

    subs.add_parser("selftest", help="run the condensed invariant suite")
    return parser


def _check_prime(parser: argparse.ArgumentParser, p: int) -> int:
    p = int(p)
    if p >= exact.MAX_PRIME:
        parser.error("prime %d is too large (must be below 2^62)" % p)
    if p == 2 or not exact.is_prime(p):
        parser.error("modulus %d is not an odd prime" % p)
    if p < (1 << 40):
        print("warning: modulus below 2^40 weakens the random-rank "
              "guarantees", file=sys.stderr)
    return p


def _verdict_dict(v: orthogonal.CertificateVerdict | None):
    if v is None:
        return None
    return {
        "name": v.name,
        "verdict": v.verdict,
        "passed": v.passed,
        "details": dict(v.details),
        "notes": v.notes,
        "dimension": v.dimension,
        "defect": v.defect,
    }


def _report_dict(rep: terracini.SecantReport) -> dict:
    return {
        "h": rep.h,
        "k": rep.k,
        "p": rep.n_pairs,
        "N": rep.ambient,
        "prime": rep.prime,
        "seed": rep.seed,
        "trials": rep.trials,
        "rank": rep.affine_rank,
        "dimension": rep.dimension,
        "expected": rep.expected,
        "defect_lower_bound": rep.defect_lower_bound,
        "status": rep.status.value,
        "certificate": _verdict_dict(rep.certificate),
    }


def _defective_cell(rep: terracini.SecantReport) -> str:
    if rep.status is terracini.SecantStatus.CERTIFIED_DEFECTIVE:
        return "YES"
    if rep.status is terracini.SecantStatus.LOWER_BOUND_ONLY \
            and rep.defect_lower_bound > 0:
        return "MAYBE"
    return "NO"


_CSV_HEADER = "h,p,N,expected,dimension,defective"


def _csv_row(rep: terracini.SecantReport) -> str:
    return "%d,%d,%d,%d,%d,%s" % (rep.h, rep.n_pairs, rep.ambient,
                                  rep.expected, rep.dimension,
                                  _defective_cell(rep))


def _print_report_text(rep: terracini.SecantReport, extra=()):
    print("h %d  k %d  p %d  N %d" % (rep.h, rep.k, rep.n_pairs, rep.ambient))
    print("prime %d  seed %d  trials %d" % (rep.prime, rep.seed, rep.trials))
    print("rank %d  dimension %d  expected %d  defect_lower_bound %d"
          % (rep.affine_rank, rep.dimension, rep.expected,
             rep.defect_lower_bound))
    print("status %s" % rep.status.value)
    for line in extra:
        print(line)
    if rep.certificate is not None:
        _print_verdict_text(rep.certificate, indent="  ")


def _print_verdict_text(v: orthogonal.CertificateVerdict, indent=""):
    head = "certificate %s: %s" % (v.name, v.verdict)
    if v.dimension is not None:
        head += "  dimension %d  defect %d" % (v.dimension, v.defect)
    print(indent + head)
    for key, val in v.details.items():
        print("%s  %s = %s" % (indent, key, val))
    if v.notes:
        print("%s  note: %s" % (indent, v.notes))


def _cmd_dim(args, parser) -> int:
    prime = _check_prime(parser, args.prime)
    try:
        rep = terracini.secant_dimension_estimate(
            args.h, args.k, seed=args.seed, trials=args.trials, prime=prime)
    except ValueError as e:
        parser.error(str(e))
    rep = orthogonal.upgrade_report(rep)
    extra = []
    rational_rank = None
    if args.rational:
        stack = terracini.trial_stack(args.h, args.k, args.seed, 0, prime)
        rational_rank = exact.rank_rational(exact.symmetric_lift(stack, prime))
        extra.append("rational rank (trial 0, symmetric lift) %d"
                     % rational_rank)
    if args.format == "json":
        d = _report_dict(rep)
        if rational_rank is not None:
            d["rational_rank"] = rational_rank
        print(json.dumps(d))
    elif args.format == "csv":
        print(_CSV_HEADER)
        print(_csv_row(rep))
    else:
        _print_report_text(rep, extra)
    return 0


def _cmd_table(args, parser) -> int:
    prime = _check_prime(parser, args.prime)
    try:
        reports = terracini.reproduce_tables(
            args.k, args.h_min, args.h_max, seed=args.seed,
            trials=args.trials, prime=prime, certify=True,
            max_workers=_thread_count())
    except ValueError as e:
        parser.error(str(e))
    if args.format == "json":
        for rep in reports:
            print(json.dumps(_report_dict(rep)))
    elif args.format == "csv":
        print(_CSV_HEADER)
        for rep in reports:
            print(_csv_row(rep))
    else:
        print("%3s %5s %6s %9s %10s  %s"
              % ("h", "p", "N", "expected", "dimension", "defective"))
        for rep in reports:
            print("%3d %5d %6d %9d %10d  %s"
                  % (rep.h, rep.n_pairs, rep.ambient, rep.expected,
                     rep.dimension, _defective_cell(rep)))
    return 0


def _failure_verdict(name: str, kind: str, message: str, details=None):
    return orthogonal.CertificateVerdict(
        name=name, verdict=kind, passed=False,
        details=dict(details or {}), notes=message)


def _run_certificate(args, prime) -> orthogonal.CertificateVerdict:
    if args.target == "rnc":
        h = 8 if args.h is None else args.h
        try:
            return orthogonal.rnc_certificate(h, args.k, p=prime)
        except orthogonal.HypothesisFailed as e:
            return _failure_verdict(
                "rnc", "HYPOTHESIS_FAILED", str(e),
                {"condition": e.condition, "h": h, "k": args.k})
    if args.target == "s7":
        try:
            return orthogonal.s7_certificate(seed=args.seed, p=prime)
        except orthogonal.UnluckySampleError as e:
            return _failure_verdict("s7", "UNLUCKY_SAMPLE", str(e),
                                    {"seed": args.seed})
    if args.target == "base12":
        return orthogonal.base12_certificate(p=prime)
    if args.target == "orbit":
        h_values = (2, 4, 6, 8) if args.h is None else (args.h,)
        return orthogonal.orbit_certificate(h_values, p=prime)
    h_values = (12, 13, 14) if args.s is None else (args.s,)
    return orthogonal.stability_certificate(h_values, p=prime)


def _cmd_certify(args, parser) -> int:
    prime = _check_prime(parser, args.prime)
    try:
        verdict = _run_certificate(args, prime)
    except (ValueError, orthogonal.OddSizeError) as e:
        parser.error(str(e))
    if args.format == "json":
        print(json.dumps(_verdict_dict(verdict)))
    else:
        # csv has no natural shape here; fall through to text
        if verdict.name == "base12":
            print("rank %d/%d %s"
                  % (verdict.details.get("rank", 0),
                     verdict.details.get("rows", 0),
                     "OK" if verdict.passed else "FAIL"))
        _print_verdict_text(verdict)
    return 0 if verdict.passed else 2


def _selftest_checks():
    p = exact.DEFAULT_PRIME

    def prime_field():
        rng = np.random.default_rng(11)
        a = rng.integers(0, p, size=(6, 6), dtype=np.uint64)
        assert exact.rank(a, p) == 6
        inv = exact.inverse(a, p)
        assert np.array_equal(exact.mat_mul(a, inv, p),
                              np.eye(6, dtype=np.uint64))
        for h in (3, 5, 7):
            u = spinor.SkewMatrix.random(h, rng, p)
            assert exact.determinant(u.full(p), p) == 0

    def pf_squares():
        rng = np.random.default_rng(12)
        for h in (2, 4, 6, 8):
            for _ in range(10):
                u = spinor.SkewMatrix.random(h, rng, p)
                pf = spinor.pfaffian(u, p)
                assert pf * pf % p == exact.determinant(u.full(p), p)

    def pf_partials():
        rng = np.random.default_rng(13)
        masks = spinor.enumerate_even_subsets(6)
        for _ in range(10):
            u = spinor.SkewMatrix.random(6, rng, p)
            mask = int(masks[rng.integers(0, len(masks))])
            i = int(rng.integers(0, 5))
            j = int(rng.integers(i + 1, 6))
            up = u.upper.copy()
            idx = spinor.pair_index(6, i, j)
            up[idx] = (up[idx] + np.uint64(1)) % np.uint64(p)
            fd = (spinor.sub_pfaffian(spinor.SkewMatrix(6, up), mask, p)
                  - spinor.sub_pfaffian(u, mask, p)) % p
            assert fd == spinor.pfaffian_partial(u, mask, i, j, p)

    def subset_order():
        masks = spinor.enumerate_even_subsets(6)
        assert len(masks) == 32
        cards = [int(m).bit_count() for m in masks]
        assert cards == sorted(cards)
        assert masks[0] == 0 and masks[-1] == 63

    def one_point_rank():
        rep = terracini.secant_dimension_estimate(7, 1)
        assert rep.affine_rank == 22

    def chart_action():
        rng = np.random.default_rng(14)
        g = orthogonal.random_orthogonal(4, rng, p)
        u = spinor.SkewMatrix.random(4, rng, p)
        back = orthogonal.act_on_chart(
            orthogonal.element_inverse(g, p),
            orthogonal.act_on_chart(g, u, p), p)
        assert np.array_equal(back.upper, u.upper)

    def orbit_kernels():
        for h in (2, 4, 6):
            assert orthogonal.orbit_kernel_dimension(h, p) == h * (h + 1) // 2

    def sigma2_s6():
        rep = terracini.secant_dimension_estimate(6, 2)
        assert rep.dimension == 31
        assert rep.status is terracini.SecantStatus.CERTIFIED_NONDEFECTIVE

    def rnc_passes():
        v = orthogonal.rnc_certificate(8, 3)
        assert v.passed and v.details["curve_span_rank"] == 5

    def rnc_fails_d():
        try:
            orthogonal.rnc_certificate(8, 2)
        except orthogonal.HypothesisFailed as e:
            assert e.condition == "d"
        else:
            raise AssertionError("rnc(8,2) unexpectedly passed")

    def s7():
        v = orthogonal.s7_certificate(seed=0)
        assert v.dimension == 58 and v.defect == 5

    def base12():
        v = orthogonal.base12_certificate()
        assert v.passed and v.details["rank"] == 201

    def stability():
        assert orthogonal.stability_rank_check(12)

    return [
        ("prime field arithmetic", prime_field),
        ("pfaffian squares to determinant", pf_squares),
        ("pfaffian partials match finite differences", pf_partials),
        ("canonical subset order", subset_order),
        ("single-point tangent rank", one_point_rank),
        ("orthogonal chart action invertible", chart_action),
        ("orbit kernel dimensions", orbit_kernels),
        ("sigma_2(S_6) non-defective", sigma2_s6),
        ("rnc certificate (8,3)", rnc_passes),
        ("rnc hypothesis failure (8,2)", rnc_fails_d),
        ("s7 certificate", s7),
        ("base12 certificate", base12),
        ("stability rank s=12", stability),
    ]


def _cmd_selftest(_args, _parser) -> int:
    failures = 0
    checks = _selftest_checks()
    for label, fn in checks:
        try:
            fn()
        except Exception as e:  # report and keep going
            failures += 1
            print("FAIL -- %s: %s" % (label, e))
        else:
            print("ok -- %s" % label)
    if failures:
        print("selftest FAILED (%d of %d checks)" % (failures, len(checks)))
        return 2
    print("selftest passed (%d checks)" % len(checks))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    if args.command == "dim":
        return _cmd_dim(args, parser)
    if args.command == "table":
        return _cmd_table(args, parser)
    if args.command == "certify":
        return _cmd_certify(args, parser)
    return _cmd_selftest(args, parser)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
