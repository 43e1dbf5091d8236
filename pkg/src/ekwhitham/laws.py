"""Pressure laws, energy potentials and capillarity coefficients.

A pressure law is a smooth map p : (b, inf) -> R together with the energy
potential f defined by f' = -p.  Two closed-form families are provided:

* shallow water      p(v) = 1/v**2,                f(v) = 1/v          (b = 0)
* van der Waals      p(v) = g/(v-1) - 1/v**2,      f(v) = -g*ln(v-1) - 1/v
  (nondimensional form, covolume b = 1)

The van der Waals family changes character with gamma: above 81/256 the
pressure is monotone decreasing and convex, between 8/27 and 81/256 it is
monotone with two inflection points, and below 8/27 it loses monotonicity
(a spinodal interval with p' > 0 appears).

Each law also carries a *divided difference* of f,

    f_dd(a, b) = (f(b) - f(a)) / (b - a),

evaluated in closed form.  Several downstream quadratures need this
quantity where b - a is tiny and the naive quotient would suffer
catastrophic cancellation; the closed forms stay accurate to machine
precision for all argument separations.

A capillarity coefficient is a positive function kappa(v) weighting the
gradient energy; the constant case is the common choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, InvalidParameterError

# Regime boundaries of the nondimensional van der Waals family.
GAMMA_UPPER = 81.0 / 256.0   # above: monotone and convex
GAMMA_LOWER = 8.0 / 27.0     # below: non-monotone (spinodal present)


def _log1p_over_x(x):
    """Return log(1+x)/x, accurate through x = 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-5
    # 4-term alternating series; truncation below 1e-25 for |x| < 1e-5.
    series = 1.0 - x/2.0 + x*x/3.0 - x*x*x/4.0
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log1p(x) / np.where(small, 1.0, x)
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PressureLaw:
    """Equation of state on (b, inf) with derivatives and potential.

    Attributes
    ----------
    kind : str
        One of "shallow_water", "van_der_waals", "custom".
    b : float
        Covolume; the domain of every evaluator is (b, inf).
    gamma : float or None
        Dimensionless parameter (van der Waals only).
    p, dp, d2p, d3p : callables
        Pressure and its first three derivatives.
    f : callable
        Energy potential with f' = -p.
    f_dd : callable
        Stable divided difference (f(b)-f(a))/(b-a).
    """

    kind: str
    b: float
    p: Callable = field(repr=False)
    dp: Callable = field(repr=False)
    d2p: Callable = field(repr=False)
    d3p: Callable = field(repr=False)
    f: Callable = field(repr=False)
    f_dd: Callable = field(repr=False)
    gamma: Optional[float] = None

    def require_domain(self, v):
        """Raise DomainError unless every entry of v lies in (b, inf)."""
        if np.any(np.asarray(v) <= self.b):
            raise DomainError(
                f"specific volume must exceed the covolume b={self.b}")


def shallow_water() -> PressureLaw:
    """Shallow-water law p = 1/v**2, f = 1/v on (0, inf)."""
    return PressureLaw(
        kind="shallow_water",
        b=0.0,
        p=lambda v: v**-2.0,
        dp=lambda v: -2.0 * v**-3.0,
        d2p=lambda v: 6.0 * v**-4.0,
        d3p=lambda v: -24.0 * v**-5.0,
        f=lambda v: 1.0 / v,
        # (1/b - 1/a)/(b - a) = -1/(a b), exact for any separation
        f_dd=lambda a, b: -1.0 / (a * b),
    )


def van_der_waals(gamma: float) -> PressureLaw:
    """Nondimensional van der Waals law on (1, inf).

    p(v) = gamma/(v-1) - 1/v**2 and f(v) = -gamma*ln(v-1) - 1/v.
    """
    if not (gamma > 0.0):
        raise InvalidParameterError("van der Waals gamma must be positive")
    g = float(gamma)

    def f_dd(a, b):
        # -g*[ln(b-1) - ln(a-1)]/(b-a) + (1/a - 1/b)/(b-a)
        # = -g*log1p(x)/x / (a-1) + 1/(a b) with x = (b-a)/(a-1)
        x = (b - a) / (a - 1.0)
        return -g * _log1p_over_x(x) / (a - 1.0) + 1.0 / (a * b)

    return PressureLaw(
        kind="van_der_waals",
        b=1.0,
        gamma=g,
        p=lambda v: g / (v - 1.0) - v**-2.0,
        dp=lambda v: -g / (v - 1.0)**2 + 2.0 * v**-3.0,
        d2p=lambda v: 2.0 * g / (v - 1.0)**3 - 6.0 * v**-4.0,
        d3p=lambda v: -6.0 * g / (v - 1.0)**4 + 24.0 * v**-5.0,
        f=lambda v: -g * np.log(v - 1.0) - 1.0 / v,
        f_dd=f_dd,
    )


def custom_law(p: Callable, dp: Callable, f: Callable, b: float = 0.0,
               d2p: Optional[Callable] = None,
               d3p: Optional[Callable] = None,
               f_dd: Optional[Callable] = None) -> PressureLaw:
    """Build a law from user callables.

    Missing higher derivatives fall back to central differences of the
    next-lower one with relative step 1e-6; a missing divided difference
    falls back to the naive quotient (accurate except at very small
    separations).
    """
    def _fd(fun):
        def deriv(v):
            h = 1e-6 * np.maximum(np.abs(v), 1.0)
            return (fun(v + h) - fun(v - h)) / (2.0 * h)
        return deriv

    d2p = d2p if d2p is not None else _fd(dp)
    d3p = d3p if d3p is not None else _fd(d2p)
    f_dd = f_dd if f_dd is not None else (lambda a, b_: (f(b_) - f(a)) / (b_ - a))
    return PressureLaw(kind="custom", b=float(b), p=p, dp=dp, d2p=d2p,
                       d3p=d3p, f=f, f_dd=f_dd)


def classify_vdw(gamma: float) -> str:
    """Classify a van der Waals gamma into its qualitative regime.

    Returns "monotone_convex" for gamma >= 81/256, "monotone_inflected"
    for 8/27 <= gamma < 81/256 and "non_monotone" below 8/27 (ties are
    assigned to the smoother regime).
    """
    if not (gamma > 0.0):
        raise InvalidParameterError("gamma must be positive")
    if gamma >= GAMMA_UPPER:
        return "monotone_convex"
    if gamma >= GAMMA_LOWER:
        return "monotone_inflected"
    return "non_monotone"


def eval_pressure(law: PressureLaw, v):
    """Return (p, p', p'') at v, with domain checking."""
    law.require_domain(v)
    return law.p(v), law.dp(v), law.d2p(v)


def potential_f(law: PressureLaw, v):
    """Return the energy potential f(v), with domain checking."""
    law.require_domain(v)
    return law.f(v)


def calibrate_vdw_gamma(j: float, v_a: float, v_b: float) -> float:
    """Solve p(v_a) + j**2 v_a = p(v_b) + j**2 v_b for gamma.

    Two points on the same Rayleigh line determine the van der Waals
    parameter uniquely, because the condition is linear in gamma:

        gamma * [1/(v_b-1) - 1/(v_a-1)] = 1/v_b**2 - 1/v_a**2 - j**2 (v_b - v_a)

    Used to pin gamma from a pair of reported critical volumes.
    """
    if v_a <= 1.0 or v_b <= 1.0 or v_a == v_b:
        raise InvalidParameterError("need two distinct volumes above the covolume")
    rhs = v_b**-2.0 - v_a**-2.0 - j * j * (v_b - v_a)
    lhs = 1.0 / (v_b - 1.0) - 1.0 / (v_a - 1.0)
    gamma = rhs / lhs
    if not (gamma > 0.0):
        raise InvalidParameterError("calibration produced a non-positive gamma")
    return gamma


@dataclass(frozen=True)
class Capillarity:
    """Positive gradient-energy coefficient kappa(v) on (b, inf)."""

    kind: str
    evaluator: Callable = field(repr=False)
    kappa0: Optional[float] = None

    def __call__(self, v):
        return self.evaluator(v)


def constant_capillarity(value: float = 1.0) -> Capillarity:
    """kappa(v) = value everywhere."""
    if not (value > 0.0):
        raise InvalidParameterError("capillarity must be positive")
    val = float(value)
    return Capillarity(kind="constant", kappa0=val,
                       evaluator=lambda v: np.full_like(np.asarray(v, dtype=float), val)
                       if np.ndim(v) else val)


def custom_capillarity(fn: Callable) -> Capillarity:
    """Capillarity from a user callable; positivity is checked downstream
    on every quadrature grid."""
    return Capillarity(kind="custom", evaluator=fn)
