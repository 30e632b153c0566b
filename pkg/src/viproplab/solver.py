"""Desk-scale variational inequality solver for the discretized operator.

The continuous operator is Galerkin-discretized on the uniform hat basis
of [0,1]; the resulting finite-dimensional operator is monotone and
continuous, so an extragradient method with a backtracking step rule
converges on compact convex feasible sets without a known Lipschitz
constant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np

from .piecewise import PiecewiseLinearFn, plap_pairing

DEFAULT_EPS = 1e-8
DEFAULT_MAX_ITER = 100_000
DEFAULT_STEP = 0.1
BACKTRACK_FACTOR = 0.5
STEP_GROWTH = 1.2  # recover after backtracking, up to 10x the initial step
MIN_STEP = 1e-16


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with componentwise clamp projection."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("box bounds must satisfy lower <= upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class Ball:
    """Euclidean ball; projection rescales radially when outside."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")
        object.__setattr__(self, "center", c)

    def project(self, x: np.ndarray) -> np.ndarray:
        d = x - self.center
        norm = float(np.linalg.norm(d))
        if norm <= self.radius:
            return x.copy()
        return self.center + d * (self.radius / norm)


FeasibleSet = Union[Box, Ball]


def project(feasible_set: FeasibleSet, x: np.ndarray) -> np.ndarray:
    return feasible_set.project(np.asarray(x, dtype=float))


class GalerkinOperator:
    """Nodal operator G(x)_j = <F(u_x), phi_j> - f_j on a uniform grid.

    u_x is the piecewise-linear function with interior nodal values x and
    zero boundary values; phi_j is the hat basis function at node j.  The
    pairing integrand is piecewise constant, so the assembled formula
    G(x)_j = |s_j| s_j - |s_{j+1}| s_{j+1} (s = slopes of u_x) is the
    exact Galerkin integral, not a quadrature approximation.
    """

    def __init__(self, n: int, forcing: Optional[Sequence[float]] = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        self.h = 1.0 / (n + 1)
        if forcing is None:
            self.forcing = np.zeros(n)
        else:
            self.forcing = np.asarray([float(f) for f in forcing], dtype=float)
            if self.forcing.shape != (n,):
                raise ValueError("forcing must have length n")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        padded = np.concatenate(([0.0], np.asarray(x, dtype=float), [0.0]))
        s = np.diff(padded) / self.h
        a = np.abs(s) * s
        return a[:-1] - a[1:] - self.forcing

    def apply_exact(self, x: Sequence[Fraction]) -> List[Fraction]:
        """Same operator over exact rationals, assembled from pairings.

        Used to validate the fast evaluator: at rational points both
        routes must agree exactly (forcing excluded here unless rational).
        """
        if len(x) != self.n:
            raise ValueError("x must have length n")
        u = self._nodal_function([Fraction(v) for v in x])
        out = []
        for j in range(1, self.n + 1):
            phi = self._hat_basis(j)
            out.append(plap_pairing(u, phi).value)
        return out

    def _grid(self) -> List[Fraction]:
        return [Fraction(i, self.n + 1) for i in range(self.n + 2)]

    def _nodal_function(self, x: List[Fraction]) -> PiecewiseLinearFn:
        return PiecewiseLinearFn(
            tuple(self._grid()), (Fraction(0), *x, Fraction(0))
        )

    def _hat_basis(self, j: int) -> PiecewiseLinearFn:
        vals = [Fraction(0)] * (self.n + 2)
        vals[j] = Fraction(1)
        return PiecewiseLinearFn(tuple(self._grid()), tuple(vals))


@dataclass
class DiscreteVI:
    """Finite-dimensional VI: find x in A with <G(x), y - x> >= 0 for y in A."""

    n: int
    operator: GalerkinOperator
    feasible_set: FeasibleSet
    eps: float = DEFAULT_EPS
    max_iter: int = DEFAULT_MAX_ITER


def assemble_vi(
    n: int,
    forcing: Optional[Sequence[float]] = None,
    feasible_set: Optional[FeasibleSet] = None,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
) -> DiscreteVI:
    if feasible_set is None:
        feasible_set = Box(-np.ones(n), np.ones(n))
    return DiscreteVI(
        n=n,
        operator=GalerkinOperator(n, forcing),
        feasible_set=feasible_set,
        eps=eps,
        max_iter=max_iter,
    )


def residual(vi: DiscreteVI, x: np.ndarray) -> float:
    """Natural-map residual ||x - P_A(x - G(x))||; zero exactly at solutions."""
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(x - vi.feasible_set.project(x - vi.operator(x))))


@dataclass
class SolveResult:
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "x": [float(v) for v in self.x],
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def extragradient_solve(
    vi: DiscreteVI,
    x0: Optional[np.ndarray] = None,
    step: float = DEFAULT_STEP,
) -> SolveResult:
    """Two-projection extragradient iteration with monotone-safe backtracking.

    The step is halved whenever <G(x)-G(y), x-y> exceeds ||x-y||^2/(2*step),
    which restores the contraction estimate without a Lipschitz constant.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    P = vi.feasible_set.project
    x = P(np.zeros(vi.n) if x0 is None else np.asarray(x0, dtype=float))
    lam = step
    best_x, best_r = x, residual(vi, x)
    for m in range(vi.max_iter):
        g = vi.operator(x)
        r = float(np.linalg.norm(x - P(x - g)))
        if r < best_r:
            best_x, best_r = x, r
        if r <= vi.eps:
            return SolveResult(x=x, residual=r, iterations=m, converged=True)
        y = P(x - lam * g)
        gy = vi.operator(y)
        d = x - y
        while (
            lam > MIN_STEP
            and float(np.dot(g - gy, d)) > float(np.dot(d, d)) / (2.0 * lam)
        ):
            lam *= BACKTRACK_FACTOR
            y = P(x - lam * g)
            gy = vi.operator(y)
            d = x - y
        x = P(x - lam * gy)
        lam = min(lam * STEP_GROWTH, 10.0 * step)
    r = residual(vi, x)
    if r < best_r:
        best_x, best_r = x, r
    return SolveResult(x=best_x, residual=best_r, iterations=vi.max_iter, converged=False)


def _number(v) -> float:
    # accept JSON numbers and exact "p/q" strings
    if isinstance(v, str):
        return float(Fraction(v))
    return float(v)


def load_problem(source: Union[str, dict]) -> DiscreteVI:
    """Parse a problem description, from a JSON file path or a dict.

    Schema: {"n": int, "forcing": [...], "set": {"kind": "box"|"ball", ...},
    "eps": float, "max_iter": int}; numbers may be given as "p/q" strings.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source
    n = int(doc["n"])
    forcing = doc.get("forcing")
    if forcing is not None:
        forcing = [_number(v) for v in forcing]
    spec = doc.get("set", {"kind": "box", "lower": [-1.0] * n, "upper": [1.0] * n})
    kind = spec.get("kind")
    if kind == "box":
        feasible: FeasibleSet = Box(
            np.array([_number(v) for v in spec["lower"]]),
            np.array([_number(v) for v in spec["upper"]]),
        )
    elif kind == "ball":
        feasible = Ball(
            np.array([_number(v) for v in spec["center"]]),
            _number(spec["radius"]),
        )
    else:
        raise ValueError(f"unknown feasible-set kind: {kind!r}")
    return assemble_vi(
        n,
        forcing=forcing,
        feasible_set=feasible,
        eps=float(doc.get("eps", DEFAULT_EPS)),
        max_iter=int(doc.get("max_iter", DEFAULT_MAX_ITER)),
    )
