"""Small-amplitude dispersion of scalar dispersive conservation laws.

The scalar model

    d_t v + d_x p(v) = -d^3_x v,        p = -f'

has periodic traveling waves v = U(k x + omega t) of small amplitude a
around a mean M, with frequency expanding as

    omega(k, M, a) = omega0(k, M) + a**2 omega2(k, M) + o(a**2).

A Lindstedt expansion U = M + a U1 + a**2 U2 + a**3 U3 with 1-periodic
zero-mean corrections and U1 = cos(2 pi theta) gives, mode by mode,

    omega0 = k (f''(M) + (2 pi k)**2),
    U2     = B cos(4 pi theta),   B = -f'''(M) / (12 K**2),  K = 2 pi k,
    omega2 = k (f'''(M) B / 2 + f''''(M) / 8)
           = k (f''''(M)/8 - f'''(M)**2 / (24 K**2)),

where the second-harmonic amplitude is fixed by the non-resonant divisor
D(n) = n (n**2 - 1) K**2 k of the n-th harmonic, evaluated at n = 2; it
never vanishes for k > 0 here but is guarded anyway.

Modulating k and the squared amplitude a**2 around such a wave yields a
2x2 quasilinear system whose hyperbolicity — hence sideband stability of
the wave — requires omega2 * d^2 omega0 / dk^2 > 0.  For the full
fluid system the same limit also requires the underlying first-order
(Euler) part to be hyperbolic at the mean volume, i.e. p'(M) < 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidParameterError, ResonanceError
from .laws import PressureLaw


@dataclass(frozen=True)
class GKdVLaw:
    """Derivatives of the energy f at play in the scalar model.

    f2, f3, f4 are the second, third and fourth derivatives of f; the
    pressure is p = -f'.
    """

    f2: Callable
    f3: Callable
    f4: Callable
    label: str = "custom"


def cubic_law(c0: float) -> GKdVLaw:
    """f(v) = c0 (v**2/2 + v**3/4), the classical quadratic-flux case."""
    return GKdVLaw(f2=lambda v: c0 * (1.0 + 1.5 * v),
                   f3=lambda v: 1.5 * c0 + 0.0 * np.asarray(v),
                   f4=lambda v: 0.0 * np.asarray(v),
                   label=f"cubic(c0={c0})")


def quartic_law(sigma: float) -> GKdVLaw:
    """f(v) = v**2/2 + sigma v**4, the odd-flux case."""
    return GKdVLaw(f2=lambda v: 1.0 + 12.0 * sigma * np.asarray(v)**2,
                   f3=lambda v: 24.0 * sigma * np.asarray(v),
                   f4=lambda v: 24.0 * sigma + 0.0 * np.asarray(v),
                   label=f"quartic(sigma={sigma})")


def from_pressure_law(law: PressureLaw) -> GKdVLaw:
    """The scalar model sharing p with a fluid pressure law (f' = -p)."""
    return GKdVLaw(f2=lambda v: -law.dp(v),
                   f3=lambda v: -law.d2p(v),
                   f4=lambda v: -law.d3p(v),
                   label=law.kind)


@dataclass(frozen=True)
class DispersionData:
    """Harmonic and first nonlinear dispersion at (k, M)."""

    k: float
    m: float
    omega0: float
    omega0_k: float
    omega0_kk: float
    omega2: float
    u2_amplitude: float      # coefficient of cos(4 pi theta) in U2


def gkdv_omega0(glaw: GKdVLaw, m: float, k: float) -> float:
    """Harmonic frequency omega0 = k (f''(M) + (2 pi k)**2)."""
    if k <= 0.0:
        raise InvalidParameterError("wavenumber k must be positive")
    return k * (float(glaw.f2(m)) + (2.0 * np.pi * k)**2)


def gkdv_omega2(glaw: GKdVLaw, m: float, k: float) -> float:
    """First amplitude correction of the frequency, by the mode algebra.

    Carries out the second and third order of the Lindstedt hierarchy
    explicitly: the second-harmonic divisor fixes U2, and removing the
    secular first harmonic at third order fixes omega2.
    """
    if k <= 0.0:
        raise InvalidParameterError("wavenumber k must be positive")
    f3 = float(glaw.f3(m))
    f4 = float(glaw.f4(m))
    bigk = 2.0 * np.pi * k
    # Non-resonance divisor of the n-th harmonic: the linearized profile
    # operator acts on cos(2 pi n theta) with factor n (n**2 - 1) K**2 * k.
    div2 = 2.0 * (2.0**2 - 1.0) * bigk**2 * k
    if abs(div2) < 1e-300:
        raise ResonanceError("resonance: second-harmonic divisor vanishes; "
                             "the expansion breaks down at this wavenumber")
    # U2 = B cos(4 pi theta): the quadratic forcing -k d_theta (p''/2 U1^2)
    # projected on the second harmonic, divided by the divisor.
    b = -f3 / (12.0 * bigk**2)
    # Secular (first-harmonic) balance at third order.
    return k * (0.5 * f3 * b + f4 / 8.0)


def dispersion_data(glaw: GKdVLaw, m: float, k: float) -> DispersionData:
    """omega0 with its k-derivatives, omega2 and the U2 amplitude."""
    f2 = float(glaw.f2(m))
    f3 = float(glaw.f3(m))
    w0 = gkdv_omega0(glaw, m, k)
    w0k = f2 + 12.0 * np.pi**2 * k * k
    w0kk = 24.0 * np.pi**2 * k
    w2 = gkdv_omega2(glaw, m, k)
    b = -f3 / (12.0 * (2.0 * np.pi * k)**2)
    return DispersionData(k=k, m=m, omega0=w0, omega0_k=w0k, omega0_kk=w0kk,
                          omega2=w2, u2_amplitude=b)


def sideband_condition(glaw: GKdVLaw, m: float, k: float):
    """(omega2 * omega0_kk, satisfied) at (k, M).

    The 2x2 modulation system for (k, a**2) around the small-amplitude
    wave is hyperbolic exactly when the product is positive.
    """
    data = dispersion_data(glaw, m, k)
    product = data.omega2 * data.omega0_kk
    return product, bool(product > 0.0)


def euler_hyperbolic_at_mean(law: PressureLaw, v_mean: float) -> bool:
    """Whether the first-order fluid system is hyperbolic at v_mean.

    In mass-Lagrangian variables the characteristic speeds of the
    dispersionless system are +-sqrt(-p'(v)), real exactly when the
    pressure is strictly decreasing.  Small-amplitude waves around a mean
    where this fails are unstable regardless of dispersion.
    """
    law.require_domain(v_mean)
    return bool(law.dp(v_mean) < 0.0)
