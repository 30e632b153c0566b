"""Executable certificates for operator properties along explicit sequences.

A certificate never claims more than it checked: limits of infinite
sequences are only accepted when the computed tail is exactly constant
(or, in approximate mode, Cauchy below 1e-12), and anything else is
reported as inconclusive.  All verdicts carry concrete witness data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union

from .families import L2SeqVector, SequenceSpec, l2_pairing
from .piecewise import (
    ExactReal,
    PiecewiseLinearFn,
    PolynomialTest,
    _frac_pair,
    common_refinement,
    derivative,
    plap_pairing,
    pow_norm,
    test_integral,
)

CAUCHY_TAIL_TOL = 1e-12
HOLDER_REL_TOL = 1e-9

PROP_KY_FAN_VIOLATION = "ky_fan_violation"
PROP_PREMISE_FAILS = "pseudomonotone_premise_fails"
PROP_MONOTONE_GAP = "monotone_gap_nonneg"
PROP_BOUNDED_HOLDER = "bounded_holder"
PROP_L2_UNIT_LIMIT = "l2_unit_limit"

# duck-typed: anything with .at(k) works, SequenceSpec in particular
FunctionSequence = Union[SequenceSpec, "ExplicitSequence"]


@dataclass(frozen=True)
class ExplicitSequence:
    """Ad-hoc sequence defined by a callable k -> PiecewiseLinearFn."""

    fn: Callable[[int], PiecewiseLinearFn]

    def at(self, k: int) -> PiecewiseLinearFn:
        return self.fn(k)


def equilibrium_gap(x: PiecewiseLinearFn, y: PiecewiseLinearFn) -> ExactReal:
    """Gap functional <F(x), x - y> of the equilibrium reformulation.

    Computed as <F(x), x> - <F(x), y>; the pairing is linear in its second
    argument, so this equals pairing x against x - y, exactly, while
    skipping the grid merge that forming x - y would need.
    """
    return plap_pairing(x, x) - plap_pairing(x, y)


def monotone_gap_check(u: PiecewiseLinearFn, w: PiecewiseLinearFn) -> ExactReal:
    """<F(u) - F(w), u - w>, exact; nonnegative for this operator."""
    du, dw = common_refinement(derivative(u), derivative(w))
    total = 0
    for i, (c, d) in enumerate(zip(du.interval_values, dw.interval_values)):
        total += (abs(c) * c - abs(d) * d) * (c - d) * (
            du.breakpoints[i + 1] - du.breakpoints[i]
        )
    return ExactReal(total)


@dataclass
class PairingSequenceReport:
    """The sequence <F(x_k), x_k - y> for k = 1..k_max, with tail analysis."""

    indices: List[int]
    values: List[ExactReal]
    limit_candidate: Optional[ExactReal]
    detection: str  # "eventually-constant" | "cauchy-tail" | "none"
    tail_window: int

    def to_json_dict(self) -> dict:
        return {
            "indices": self.indices,
            "values": [_serialize_exact(v) for v in self.values],
            "limit_candidate": (
                None
                if self.limit_candidate is None
                else _serialize_exact(self.limit_candidate)
            ),
            "detection": self.detection,
            "tail_window": self.tail_window,
        }


def _serialize_exact(v: ExactReal):
    if v.exact:
        return _frac_pair(v.value)
    return {"approx": True, "value": float(v.value)}


def _detect_tail(values: Sequence[ExactReal], tail_window: int):
    tail = values[-tail_window:]
    if all(v.exact for v in tail) and all(v.value == tail[0].value for v in tail):
        return tail[0], "eventually-constant"
    floats = [float(v) for v in tail]
    if all(abs(a - b) < CAUCHY_TAIL_TOL for a, b in zip(floats, floats[1:])):
        return ExactReal.approx(floats[-1]), "cauchy-tail"
    return None, "none"


def pairing_sequence(
    seq: FunctionSequence,
    y: Optional[PiecewiseLinearFn],
    k_max: int,
    tail_window: Optional[int] = None,
) -> PairingSequenceReport:
    """Evaluate <F(x_k), x_k - y> exactly for k = 1..k_max.

    For the unit-vector sequence the operator is the identity and y must
    be the zero element (pass None) or another unit vector.
    """
    if k_max < 8:
        raise ValueError("k_max must be >= 8")
    if tail_window is None:
        tail_window = k_max // 2
    values: List[ExactReal] = []
    for k in range(1, k_max + 1):
        x_k = seq.at(k)
        if isinstance(x_k, L2SeqVector):
            if y is None:
                values.append(l2_pairing(x_k, x_k))
            elif isinstance(y, L2SeqVector):
                values.append(l2_pairing(x_k, x_k) - l2_pairing(x_k, y))
            else:
                raise TypeError("unit-vector sequences pair only with unit vectors")
        else:
            y_fn = PiecewiseLinearFn.zero() if y is None else y
            values.append(equilibrium_gap(x_k, y_fn))
    limit, detection = _detect_tail(values, tail_window)
    return PairingSequenceReport(
        indices=list(range(1, k_max + 1)),
        values=values,
        limit_candidate=limit,
        detection=detection,
        tail_window=tail_window,
    )


@dataclass
class Certificate:
    """Outcome of a property check: verdict plus concrete witness data."""

    property: str
    verdict: str  # "established" | "refuted" | "inconclusive"
    witness: dict = field(default_factory=dict)
    exactness: str = "exact"  # "exact" | "approximate"

    def to_json_dict(self) -> dict:
        witness = {}
        for key, val in self.witness.items():
            if isinstance(val, ExactReal):
                witness[key] = _serialize_exact(val)
            elif isinstance(val, Fraction):
                witness[key] = _frac_pair(val)
            elif isinstance(val, PiecewiseLinearFn):
                witness[key] = val.to_json_dict()
            else:
                witness[key] = val
        return {
            "property": self.property,
            "verdict": self.verdict,
            "witness": witness,
            "exactness": self.exactness,
        }


def ky_fan_violation_certificate(
    seq: FunctionSequence,
    limit: PiecewiseLinearFn,
    y: PiecewiseLinearFn,
    k_max: int = 64,
) -> Certificate:
    """Check whether x -> <F(x), x - y> fails to be lower semicontinuous
    along the given sequence (whose weak limit is asserted externally).

    Established means: the pairing sequence has a detected limit L and the
    gap at the limit point strictly exceeds L, with exact margin.
    """
    report = pairing_sequence(seq, y, k_max)
    window = [k_max - report.tail_window + 1, k_max]
    if report.limit_candidate is None:
        return Certificate(
            PROP_KY_FAN_VIOLATION,
            "inconclusive",
            witness={
                "y": y,
                "k_window": window,
                "note": "no tail limit detected for <F(x_k), x_k - y>; "
                "the sequence limit could not be finitely determined",
            },
        )
    gap_at_limit = equilibrium_gap(limit, y)
    margin = gap_at_limit - report.limit_candidate
    exact = margin.exact
    verdict = "established" if margin > 0 else "refuted"
    return Certificate(
        PROP_KY_FAN_VIOLATION,
        verdict,
        witness={
            "y": y,
            "k_window": window,
            "tail_constant": report.limit_candidate,
            "gap_at_limit": gap_at_limit,
            "margin": margin,
        },
        exactness="exact" if exact else "approximate",
    )


def pseudomonotone_premise_audit(
    seq: FunctionSequence,
    limit: Optional[PiecewiseLinearFn],
    k_max: int = 64,
) -> Certificate:
    """Audit the limsup premise <F(x_k), x_k - x> <= 0 along a sequence.

    Established means the premise FAILS: the detected tail constant is
    strictly positive, so the pseudomonotonicity implication is vacuous
    along this sequence.
    """
    report = pairing_sequence(seq, limit, k_max)
    window = [k_max - report.tail_window + 1, k_max]
    if report.limit_candidate is None:
        return Certificate(
            PROP_PREMISE_FAILS,
            "inconclusive",
            witness={
                "k_window": window,
                "note": "no tail limit detected for <F(x_k), x_k - x>; "
                "the limsup could not be finitely determined",
            },
        )
    tail = report.limit_candidate
    verdict = "established" if tail > 0 else "refuted"
    return Certificate(
        PROP_PREMISE_FAILS,
        verdict,
        witness={"k_window": window, "tail_constant": tail},
        exactness="exact" if tail.exact else "approximate",
    )


def l2_unit_limit_certificate(k_max: int = 64) -> Certificate:
    """Pairings <e_k, e_k - 0> under the identity operator: constant 1.

    The sequence converges (it is constant), but its limit is 1, not 0 --
    so vanishing of the pairing sequence cannot be taken for granted for
    weakly null sequences.
    """
    seq = SequenceSpec("l2unit")
    report = pairing_sequence(seq, None, max(k_max, 8))
    tail = report.limit_candidate
    established = tail is not None and tail.exact and tail.value != 0
    return Certificate(
        PROP_L2_UNIT_LIMIT,
        "established" if established else "refuted",
        witness={
            "tail_constant": tail,
            "k_window": [report.tail_window + 1, report.indices[-1]],
            "conclusion": "limit != 0" if established else "limit = 0",
        },
    )


def holder_boundedness_check(
    u: PiecewiseLinearFn, w: PiecewiseLinearFn
) -> Certificate:
    """Check |<F(u), w>| <= ||u'||^2 * ||w'|| in the cubic-mean norms.

    The norms involve cube roots, so this check is approximate with
    relative tolerance 1e-9; a breach would indicate an implementation
    bug, not a property failure.
    """
    lhs = abs(float(plap_pairing(u, w)))
    nu = float(pow_norm(derivative(u), 3))
    nw = float(pow_norm(derivative(w), 3))
    rhs = nu ** (2.0 / 3.0) * nw ** (1.0 / 3.0)
    ok = lhs <= rhs * (1.0 + HOLDER_REL_TOL) + 1e-300
    return Certificate(
        PROP_BOUNDED_HOLDER,
        "established" if ok else "refuted",
        witness={"lhs": lhs, "rhs": rhs},
        exactness="approximate",
    )


@dataclass
class WeakConvergenceEntry:
    phi: PolynomialTest
    integrals: List[ExactReal]
    bound_constant: Fraction  # smallest C with |integral_k| <= C/k on the sweep
    all_zero: bool


@dataclass
class WeakConvergenceReport:
    """Exact test integrals of the sequence's derivatives: decay evidence.

    This is EVIDENCE for weak null convergence of the derivatives, not a
    proof; weak convergence quantifies over all dual elements and is not
    finitely certifiable.
    """

    entries: List[WeakConvergenceEntry]
    k_max: int
    verdict: str

    disclaimer: str = (
        "evidence only: finitely many test integrals cannot prove weak convergence"
    )

    def to_json_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "verdict": self.verdict,
            "disclaimer": self.disclaimer,
            "entries": [
                {
                    "phi": e.phi.describe(),
                    "bound_constant": _frac_pair(e.bound_constant),
                    "all_zero": e.all_zero,
                    "integrals": [_serialize_exact(v) for v in e.integrals],
                }
                for e in self.entries
            ],
        }


def weak_convergence_evidence(
    seq: FunctionSequence,
    test_family: Sequence[PolynomialTest],
    k_max: int = 64,
) -> WeakConvergenceReport:
    """Sweep ∫ x_k'(t) φ(t) dt exactly for every φ and k = 1..k_max.

    For each φ the report carries the sharp sweep constant
    C_φ = max_k k * |integral_k|, so |integral_k| <= C_φ/k on the sweep.
    """
    if not test_family:
        raise ValueError("test family must be nonempty")
    gradients = [derivative(seq.at(k)) for k in range(1, k_max + 1)]
    entries = []
    for phi in test_family:
        integrals = [test_integral(g, phi) for g in gradients]
        c = max(Fraction(k) * abs(v.value) for k, v in enumerate(integrals, start=1))
        entries.append(
            WeakConvergenceEntry(
                phi=phi,
                integrals=integrals,
                bound_constant=c,
                all_zero=all(v.value == 0 for v in integrals),
            )
        )
    consistent = all(math.isfinite(float(e.bound_constant)) for e in entries)
    verdict = (
        "consistent with weak null convergence" if consistent else "inconsistent"
    )
    return WeakConvergenceReport(entries=entries, k_max=k_max, verdict=verdict)
