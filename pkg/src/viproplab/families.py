"""Constructors for the lab's function families.

Three families are built in: the sawtooth sequence whose derivative
cubed-norm is the same constant for every index, the scaled hat function
used as a test direction, and the unit-vector sequence of the
square-summable sequence space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .piecewise import (
    ExactReal,
    rational,
    PiecewiseLinearFn,
    RationalLike,
    as_fraction,
    derivative,
    plap_pairing,
    pow_norm,
)

SEQUENCE_KINDS = ("sawtooth", "hat", "l2unit")


def sawtooth(k: int) -> PiecewiseLinearFn:
    """k-tooth sawtooth on [0, 1/2], zero on [1/2, 1].

    Tooth i rises from 0 at i/(2k) to 1/k at (3i+1)/(6k), then falls back
    to 0 at (i+1)/(2k); slopes are 6 and -3 independently of k.
    """
    if k < 1:
        raise ValueError("index k must be >= 1")
    bps = []
    vals = []
    zero, peak = rational(0), rational(1, k)
    for i in range(k):
        bps.append(rational(i, 2 * k))
        vals.append(zero)
        bps.append(rational(3 * i + 1, 6 * k))
        vals.append(peak)
    bps += [rational(1, 2), rational(1)]
    vals += [zero, zero]
    return PiecewiseLinearFn(tuple(bps), tuple(vals))


def scaled_hat(alpha: RationalLike) -> PiecewiseLinearFn:
    """Hat function alpha * min(t, 1-t): peak alpha/2 at the midpoint."""
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    return PiecewiseLinearFn(
        (Fraction(0), Fraction(1, 2), Fraction(1)),
        (Fraction(0), alpha / 2, Fraction(0)),
    )


def gap_negativity_threshold() -> Fraction:
    """Smallest hat scale beyond which the sawtooth equilibrium gap is negative.

    The gap against the hat with scale alpha is N - S*alpha with N the
    constant derivative cubed-norm and S the pairing slope in alpha; both
    are computed here rather than hard-coded.
    """
    norm_const = pow_norm(derivative(sawtooth(1)), 3)
    slope = plap_pairing(sawtooth(1), scaled_hat(1))
    return norm_const.value / slope.value


@dataclass(frozen=True)
class L2SeqVector:
    """k-th standard unit vector of the square-summable sequence space.

    Represented symbolically by its index; pairings are closed-form, so
    no truncation to finite arrays ever happens.
    """

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("index must be >= 1")


def l2_pairing(a: L2SeqVector, b: L2SeqVector) -> ExactReal:
    """Inner product of two unit vectors: 1 if same index, else 0."""
    return ExactReal(1 if a.index == b.index else 0)


@dataclass(frozen=True)
class SequenceSpec:
    """A symbolic function family evaluable at any index k >= 1.

    kind "sawtooth": the sawtooth sequence; "hat": the constant sequence
    equal to one scaled hat (parameter alpha); "l2unit": the unit-vector
    sequence in the sequence space.
    """

    kind: str
    parameters: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in SEQUENCE_KINDS:
            raise ValueError(f"unknown sequence kind: {self.kind!r}")
        object.__setattr__(
            self, "parameters", tuple(as_fraction(p) for p in self.parameters)
        )
        if self.kind == "hat" and len(self.parameters) != 1:
            raise ValueError("hat sequence takes exactly one parameter (alpha)")

    def at(self, k: int):
        if k < 1:
            raise ValueError("index k must be >= 1")
        if self.kind == "sawtooth":
            return sawtooth(k)
        if self.kind == "hat":
            return scaled_hat(self.parameters[0])
        return L2SeqVector(k)
