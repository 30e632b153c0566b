"""Command-line surface of the lab.

Exit codes are a contract: 0 success, 1 identity mismatch / certificate
not established, 2 inconclusive detection, 3 parse error, 4 solver
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import certificates as certs
from . import solver as vis
from .families import gap_negativity_threshold, sawtooth, scaled_hat, SequenceSpec
from .piecewise import (
    PiecewiseLinearFn,
    PolynomialTest,
    derivative,
    dyadic_indicators,
    pow_norm,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INCONCLUSIVE = 2
EXIT_PARSE = 3
EXIT_NO_CONVERGENCE = 4

# exact constants of the sawtooth family (independent of the index)
SAWTOOTH_ENERGY = Fraction(45)
HAT_PAIRING_SLOPE = Fraction(3)


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from exc


def _emit(doc, out: Optional[str]) -> None:
    payload = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def cmd_reproduce(kmax: int, alpha: Fraction, out: Optional[str], fmt: str) -> int:
    """Tabulate the derivative cubed-norm and the equilibrium gap per index."""
    v = scaled_hat(alpha)
    expected_gap = SAWTOOTH_ENERGY - HAT_PAIRING_SLOPE * alpha
    rows = []
    bad_k = None
    for k in range(1, kmax + 1):
        u = sawtooth(k)
        norm3 = pow_norm(derivative(u), 3).value
        gap = certs.equilibrium_gap(u, v).value
        rows.append((k, norm3, gap))
        if bad_k is None and (norm3 != SAWTOOTH_ENERGY or gap != expected_gap):
            bad_k = k
    if fmt == "csv":
        lines = ["k,grad_norm_cubed,gap"]
        lines += [f"{k},{_frac_str(n)},{_frac_str(g)}" for k, n, g in rows]
        payload = "\n".join(lines) + "\n"
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    else:
        _emit(
            {
                "alpha": _frac_str(alpha),
                "expected": {
                    "grad_norm_cubed": _frac_str(SAWTOOTH_ENERGY),
                    "gap": _frac_str(expected_gap),
                },
                "rows": [
                    {"k": k, "grad_norm_cubed": _frac_str(n), "gap": _frac_str(g)}
                    for k, n, g in rows
                ],
                "all_match": bad_k is None,
            },
            out,
        )
    if bad_k is not None:
        print(f"identity mismatch at k={bad_k}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_certify(kmax: int, alpha: Fraction, out: Optional[str]) -> int:
    """Emit the lower-semicontinuity violation and premise-failure certificates."""
    seq = SequenceSpec("sawtooth")
    limit = PiecewiseLinearFn.zero()
    y = scaled_hat(alpha)
    kyfan = certs.ky_fan_violation_certificate(seq, limit, y, k_max=kmax)
    premise = certs.pseudomonotone_premise_audit(seq, limit, k_max=kmax)
    _emit(
        {
            "alpha": _frac_str(alpha),
            "negativity_threshold": _frac_str(gap_negativity_threshold()),
            "ky_fan_violation": kyfan.to_json_dict(),
            "premise_audit": premise.to_json_dict(),
        },
        out,
    )
    if "inconclusive" in (kyfan.verdict, premise.verdict):
        return EXIT_INCONCLUSIVE
    if kyfan.verdict == "established" and premise.verdict == "established":
        return EXIT_OK
    return EXIT_MISMATCH


def cmd_weak_evidence(
    kmax: int, degree_max: int, indicator_level: int, out: Optional[str]
) -> int:
    """Exact test-integral sweep of the sawtooth derivatives."""
    family: List[PolynomialTest] = [
        PolynomialTest.monomial(d) for d in range(degree_max + 1)
    ]
    for level in range(1, indicator_level + 1):
        family += dyadic_indicators(level)
    report = certs.weak_convergence_evidence(SequenceSpec("sawtooth"), family, kmax)
    _emit(report.to_json_dict(), out)
    return EXIT_OK


def cmd_figure(k: int, out: str) -> int:
    """Write plot data: nodal values of u_k and step data of its derivative."""
    u = sawtooth(k)
    du = derivative(u)
    with open(f"{out}_nodes.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value"])
        for t, v in zip(u.breakpoints, u.values):
            writer.writerow([_frac_str(t), _frac_str(v)])
    with open(f"{out}_steps.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_left", "t_right", "t_mid", "value"])
        for i, c in enumerate(du.interval_values):
            a, b = du.breakpoints[i], du.breakpoints[i + 1]
            writer.writerow(
                [_frac_str(a), _frac_str(b), _frac_str((a + b) / 2), _frac_str(c)]
            )
    return EXIT_OK


def cmd_remark32(kmax: int) -> int:
    """Identity operator on the sequence space, paired along unit vectors."""
    cert = certs.l2_unit_limit_certificate(kmax)
    report = certs.pairing_sequence(SequenceSpec("l2unit"), None, max(kmax, 8))
    for k, v in zip(report.indices, report.values):
        if k > kmax:
            break
        print(f"k={k}: <F(e_k), e_k - 0> = {_frac_str(v.value)}")
    tail = cert.witness["tail_constant"]
    print(f"detected limit: {_frac_str(tail.value)}")
    print(
        "verdict: limit not zero"
        if cert.verdict == "established"
        else "verdict: limit zero"
    )
    return EXIT_OK


def cmd_solve(problem_path: str, out: Optional[str]) -> int:
    try:
        vi = vis.load_problem(problem_path)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"cannot parse problem file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    result = vis.extragradient_solve(vi)
    _emit(result.to_json_dict(), out)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viproplab",
        description="Verification lab for variational-inequality operator properties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="check the exact norm and gap identities")
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--alpha", type=_parse_rational, default=Fraction(16))
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("certify", help="emit property certificates along the sawtooth sequence")
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--alpha", type=_parse_rational, default=Fraction(16))
    p.add_argument("--out", default=None)

    p = sub.add_parser("weak-evidence", help="exact test-integral decay sweep")
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--degree-max", type=int, default=5)
    p.add_argument("--indicator-level", type=int, default=3)
    p.add_argument("--out", default=None)

    p = sub.add_parser("figure", help="write plot data files for one sawtooth index")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--out", required=True, help="output path prefix")

    p = sub.add_parser("remark32", help="unit-vector sequence check in the sequence space")
    p.add_argument("--kmax", type=int, default=64)

    p = sub.add_parser("solve", help="solve a discretized VI problem file")
    p.add_argument("problem", help="problem JSON path")
    p.add_argument("--out", default=None)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "reproduce":
        return cmd_reproduce(args.kmax, args.alpha, args.out, args.format)
    if args.command == "certify":
        return cmd_certify(args.kmax, args.alpha, args.out)
    if args.command == "weak-evidence":
        return cmd_weak_evidence(args.kmax, args.degree_max, args.indicator_level, args.out)
    if args.command == "figure":
        return cmd_figure(args.k, args.out)
    if args.command == "remark32":
        return cmd_remark32(args.kmax)
    return cmd_solve(args.problem, args.out)


if __name__ == "__main__":
    sys.exit(main())
