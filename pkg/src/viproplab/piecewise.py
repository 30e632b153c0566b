"""Exact calculus for piecewise-linear functions on [0,1].

Functions are stored with rational breakpoints and rational nodal values;
their weak derivatives are piecewise constant on the same grid.  All
operations on rational data stay rational (arbitrary-precision via
``fractions.Fraction``), so identities like a constant cubed-norm can be
checked with zero tolerance.
"""

from __future__ import annotations

import numbers
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:  # gmpy2 rationals are drop-in and much faster than Fraction
    from gmpy2 import mpq as _make_rational

    _RATIONAL_TYPES = (Fraction, type(_make_rational(0)))
except ImportError:  # pragma: no cover
    _make_rational = Fraction
    _RATIONAL_TYPES = (Fraction,)

RationalLike = Union[int, Fraction, str]

MAX_POLY_DEGREE = 8


def rational(num: int, den: int = 1):
    """Exact rational num/den in the fast backing representation."""
    return _make_rational(num, den)


def as_fraction(x: RationalLike):
    """Coerce ints, rationals and 'p/q' strings to an exact rational (never floats)."""
    if isinstance(x, _RATIONAL_TYPES):
        return x if type(x) is not Fraction else _make_rational(x)
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return _make_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


class ExactReal:
    """A number tagged with its provenance: exact rational or float.

    Arithmetic between two exact values stays exact; any operation that
    touches an approximate value yields an approximate value.
    """

    __slots__ = ("value", "exact")

    def __init__(self, value, exact: bool | None = None):
        if exact is None:
            exact = not isinstance(value, float)
        if exact:
            self.value = as_fraction(value)
        else:
            self.value = float(value)
        self.exact = exact

    @classmethod
    def approx(cls, value: float) -> "ExactReal":
        return cls(float(value), exact=False)

    def _coerce(self, other) -> "ExactReal":
        if isinstance(other, ExactReal):
            return other
        if isinstance(other, float):
            return ExactReal.approx(other)
        if isinstance(other, (int, Fraction)):
            return ExactReal(other)
        return NotImplemented  # type: ignore[return-value]

    def _combine(self, other, op) -> "ExactReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.exact and other.exact:
            return ExactReal(op(self.value, other.value))
        return ExactReal.approx(op(float(self.value), float(other.value)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b)

    def __neg__(self):
        return ExactReal(-self.value, exact=self.exact)

    def __abs__(self):
        return ExactReal(abs(self.value), exact=self.exact)

    def root(self, n: int) -> "ExactReal":
        """n-th root; irrational in general, so always approximate."""
        return ExactReal.approx(float(self.value) ** (1.0 / n))

    def __float__(self) -> float:
        return float(self.value)

    def _cmp_value(self, other):
        if isinstance(other, ExactReal):
            return other.value
        if isinstance(other, numbers.Real):
            return other
        return NotImplemented

    def __eq__(self, other):
        v = self._cmp_value(other)
        return NotImplemented if v is NotImplemented else self.value == v

    def __lt__(self, other):
        v = self._cmp_value(other)
        return NotImplemented if v is NotImplemented else self.value < v

    def __le__(self, other):
        v = self._cmp_value(other)
        return NotImplemented if v is NotImplemented else self.value <= v

    def __gt__(self, other):
        v = self._cmp_value(other)
        return NotImplemented if v is NotImplemented else self.value > v

    def __ge__(self, other):
        v = self._cmp_value(other)
        return NotImplemented if v is NotImplemented else self.value >= v

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        tag = "exact" if self.exact else "approx"
        return f"ExactReal({self.value!r}, {tag})"


def _frac_pair(q: Fraction) -> list:
    # canonical serialization: reduced fraction, sign on the numerator
    return [str(q.numerator), str(q.denominator)]


def _pair_frac(pair) -> Fraction:
    num, den = pair
    return Fraction(int(num), int(den))


def _check_breakpoints(bps: Sequence[Fraction]) -> None:
    if len(bps) < 2:
        raise ValueError("need at least the two endpoint breakpoints")
    if bps[0] != 0 or bps[-1] != 1:
        raise ValueError("breakpoints must start at 0 and end at 1")
    for a, b in zip(bps, bps[1:]):
        if not a < b:
            raise ValueError("breakpoints must be strictly increasing")


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Continuous piecewise-linear function on [0,1] vanishing at 0 and 1.

    The zero boundary values model membership in the zero-trace Sobolev
    space the lab works in.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(as_fraction(t) for t in self.breakpoints)
        vals = tuple(as_fraction(v) for v in self.values)
        _check_breakpoints(bps)
        if len(vals) != len(bps):
            raise ValueError("one value per breakpoint required")
        if vals[0] != 0 or vals[-1] != 0:
            raise ValueError("boundary values must be zero")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    def __call__(self, t: RationalLike) -> Fraction:
        t = as_fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("evaluation point outside [0,1]")
        i = bisect_right(self.breakpoints, t) - 1
        if i == len(self.breakpoints) - 1:
            return self.values[-1]
        a, b = self.breakpoints[i], self.breakpoints[i + 1]
        ya, yb = self.values[i], self.values[i + 1]
        return ya + (yb - ya) * (t - a) / (b - a)

    def to_json_dict(self) -> dict:
        return {
            "breakpoints": [_frac_pair(t) for t in self.breakpoints],
            "values": [_frac_pair(v) for v in self.values],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PiecewiseLinearFn":
        return cls(
            tuple(_pair_frac(p) for p in d["breakpoints"]),
            tuple(_pair_frac(p) for p in d["values"]),
        )

    @classmethod
    def zero(cls) -> "PiecewiseLinearFn":
        return cls((Fraction(0), Fraction(1)), (Fraction(0), Fraction(0)))


@dataclass(frozen=True)
class PiecewiseConstFn:
    """Piecewise-constant function on [0,1]: one value per open interval."""

    breakpoints: tuple
    interval_values: tuple

    def __post_init__(self):
        bps = tuple(as_fraction(t) for t in self.breakpoints)
        vals = tuple(as_fraction(v) for v in self.interval_values)
        _check_breakpoints(bps)
        if len(vals) != len(bps) - 1:
            raise ValueError("one value per interval required")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "interval_values", vals)

    def value_at(self, t: RationalLike) -> Fraction:
        """Value on the interval containing t (left-closed convention)."""
        t = as_fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("evaluation point outside [0,1]")
        i = min(bisect_right(self.breakpoints, t) - 1, len(self.interval_values) - 1)
        return self.interval_values[i]

    def to_json_dict(self) -> dict:
        return {
            "breakpoints": [_frac_pair(t) for t in self.breakpoints],
            "values": [_frac_pair(v) for v in self.interval_values],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PiecewiseConstFn":
        return cls(
            tuple(_pair_frac(p) for p in d["breakpoints"]),
            tuple(_pair_frac(p) for p in d["values"]),
        )


def derivative(u: PiecewiseLinearFn) -> PiecewiseConstFn:
    """Weak derivative of a piecewise-linear function: exact slopes."""
    vals = tuple(
        (u.values[i + 1] - u.values[i]) / (u.breakpoints[i + 1] - u.breakpoints[i])
        for i in range(len(u.breakpoints) - 1)
    )
    return PiecewiseConstFn(u.breakpoints, vals)


def common_refinement(
    f: PiecewiseConstFn, g: PiecewiseConstFn
) -> tuple:
    """Re-express both functions on the union breakpoint grid."""
    merged = tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))

    def resample(h: PiecewiseConstFn) -> PiecewiseConstFn:
        vals = []
        j = 0
        for a in merged[:-1]:
            while j + 1 < len(h.breakpoints) - 1 and h.breakpoints[j + 1] <= a:
                j += 1
            vals.append(h.interval_values[j])
        return PiecewiseConstFn(merged, tuple(vals))

    return resample(f), resample(g)


def pow_norm(f: PiecewiseConstFn, p: int) -> ExactReal:
    """Integral of |f|^p over [0,1], exact.

    This is the p-th power of the L^p norm; take ``.root(p)`` for the
    (approximate) norm itself.
    """
    if p < 1:
        raise ValueError("p must be a positive integer")
    total = _make_rational(0)
    for i, c in enumerate(f.interval_values):
        total += abs(c) ** p * (f.breakpoints[i + 1] - f.breakpoints[i])
    return ExactReal(total)


def plap_pairing(u: PiecewiseLinearFn, w: PiecewiseLinearFn) -> ExactReal:
    """Degenerate third-power duality pairing ∫ |u'| u' w' dt, exact.

    The integrand is piecewise constant on the common refinement of the
    two derivative grids, so the integral is a finite rational sum.
    """
    du, dw = common_refinement(derivative(u), derivative(w))
    total = _make_rational(0)
    for i, (c, d) in enumerate(zip(du.interval_values, dw.interval_values)):
        total += abs(c) * c * d * (du.breakpoints[i + 1] - du.breakpoints[i])
    return ExactReal(total)


def lin_comb(
    a: RationalLike,
    u: PiecewiseLinearFn,
    b: RationalLike,
    w: PiecewiseLinearFn,
) -> PiecewiseLinearFn:
    """Pointwise a*u + b*w on the union breakpoint grid (a, b exact)."""
    if isinstance(a, ExactReal):
        if not a.exact:
            raise ValueError("coefficients must be exact")
        a = a.value
    if isinstance(b, ExactReal):
        if not b.exact:
            raise ValueError("coefficients must be exact")
        b = b.value
    a, b = as_fraction(a), as_fraction(b)
    merged = tuple(sorted(set(u.breakpoints) | set(w.breakpoints)))
    vals = tuple(a * u(t) + b * w(t) for t in merged)
    return PiecewiseLinearFn(merged, vals)


@dataclass(frozen=True)
class PolynomialTest:
    """Test function for exact integration against piecewise-constant data.

    Either a polynomial with rational coefficients (degree <= 8) or the
    indicator of a rational sub-interval of [0,1].
    """

    kind: str  # "poly" | "indicator"
    coeffs: tuple = ()  # low degree first, for kind == "poly"
    support: tuple = ()  # (lo, hi), for kind == "indicator"

    def __post_init__(self):
        if self.kind == "poly":
            coeffs = tuple(as_fraction(c) for c in self.coeffs)
            if not coeffs:
                raise ValueError("polynomial needs at least one coefficient")
            if len(coeffs) - 1 > MAX_POLY_DEGREE:
                raise ValueError(f"degree capped at {MAX_POLY_DEGREE}")
            object.__setattr__(self, "coeffs", coeffs)
        elif self.kind == "indicator":
            lo, hi = (as_fraction(x) for x in self.support)
            if not (0 <= lo < hi <= 1):
                raise ValueError("indicator support must be a sub-interval of [0,1]")
            object.__setattr__(self, "support", (lo, hi))
        else:
            raise ValueError(f"unsupported test-function kind: {self.kind!r}")

    @classmethod
    def polynomial(cls, coeffs: Iterable[RationalLike]) -> "PolynomialTest":
        return cls("poly", coeffs=tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int) -> "PolynomialTest":
        return cls("poly", coeffs=(0,) * degree + (1,))

    @classmethod
    def indicator(cls, lo: RationalLike, hi: RationalLike) -> "PolynomialTest":
        return cls("indicator", support=(lo, hi))

    def describe(self) -> str:
        if self.kind == "poly":
            return "poly[" + ",".join(str(c) for c in self.coeffs) + "]"
        lo, hi = self.support
        return f"indicator({lo},{hi})"

    def __call__(self, t: RationalLike) -> Fraction:
        t = as_fraction(t)
        if self.kind == "poly":
            acc = _make_rational(0)
            for c in reversed(self.coeffs):
                acc = acc * t + c
            return acc
        lo, hi = self.support
        return _make_rational(1) if lo < t < hi else _make_rational(0)


def dyadic_indicators(level: int) -> list:
    """All indicators of dyadic intervals (j/2^L, (j+1)/2^L) at one level."""
    if not 1 <= level <= 8:
        raise ValueError("dyadic level must be in 1..8")
    n = 2**level
    return [PolynomialTest.indicator(Fraction(j, n), Fraction(j + 1, n)) for j in range(n)]


def test_integral(f: PiecewiseConstFn, phi: PolynomialTest) -> ExactReal:
    """Exact integral ∫ f(t) φ(t) dt over [0,1]."""
    if phi.kind == "indicator":
        lo, hi = phi.support
        total = _make_rational(0)
        i = max(bisect_right(f.breakpoints, lo) - 1, 0)
        while i < len(f.interval_values) and f.breakpoints[i] < hi:
            a = max(f.breakpoints[i], lo)
            b = min(f.breakpoints[i + 1], hi)
            if b > a:
                total += f.interval_values[i] * (b - a)
            i += 1
        return ExactReal(total)

    anti = tuple(c / (i + 1) for i, c in enumerate(phi.coeffs))

    def big_phi(t: Fraction) -> Fraction:
        # antiderivative with zero constant term, evaluated by Horner
        acc = _make_rational(0)
        for c in reversed(anti):
            acc = acc * t + c
        return acc * t

    total = _make_rational(0)
    right = big_phi(f.breakpoints[0])
    for i, c in enumerate(f.interval_values):
        left = right
        right = big_phi(f.breakpoints[i + 1])
        total += c * (right - left)
    return ExactReal(total)


def abs_pow_integral(u: PiecewiseLinearFn, p: int) -> ExactReal:
    """Integral of |u|^p for piecewise-linear u, exact.

    Each interval contributes a polynomial integral; intervals where u
    changes sign are split at the (rational) root first.
    """
    if p < 1:
        raise ValueError("p must be a positive integer")

    def seg(z0: Fraction, z1: Fraction, length: Fraction) -> Fraction:
        # |u| linear from z0 to z1 >= 0 over an interval of given length
        if z0 == z1:
            return z0**p * length
        return length * (z1 ** (p + 1) - z0 ** (p + 1)) / ((p + 1) * (z1 - z0))

    total = _make_rational(0)
    for i in range(len(u.breakpoints) - 1):
        a, b = u.breakpoints[i], u.breakpoints[i + 1]
        y0, y1 = u.values[i], u.values[i + 1]
        if y0 * y1 < 0:
            r = a + (b - a) * y0 / (y0 - y1)
            total += seg(abs(y0), _make_rational(0), r - a)
            total += seg(_make_rational(0), abs(y1), b - r)
        else:
            total += seg(abs(y0), abs(y1), b - a)
    return ExactReal(total)
