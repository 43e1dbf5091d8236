"""Periodic traveling-wave orbits of the capillary profile equation.

A traveling wave with mass flux j and integration constants (lambda, mu)
satisfies the planar Hamiltonian ODE

    (1/2) kappa(V) V_zeta**2 = N(V),
    N(v) = f(v) - (1/2) j**2 v**2 - lambda v - mu,

so a periodic orbit oscillates between a trough v_star and a peak v_peak,
the two simple roots of N that bracket a center of the potential.  The
constants come from the wave parameters: lambda is pinned by the solitary
endpoint v_inf (a saddle of N), and mu by requiring N(v_star) = 0.

Wavenumber and profile averages reduce to integrals over one oscillation.
Writing N(v) = (v_peak - v)(v - v_star) * phi(v) removes the square-root
endpoint singularities, and the substitution

    V(theta) = (v_peak + v_star)/2 + (v_peak - v_star)/2 * sin(theta)

turns them into smooth integrals over theta in [-pi/2, pi/2]:

    1/(2k)  = int sqrt(kappa(V)/(2 phi(V))) dtheta,
    <h(V)>  = 2k int h(V) sqrt(kappa(V)/(2 phi(V))) dtheta.

The even periodic extension of the integrand is smooth, so the trapezoid
rule converges spectrally.

Evaluating phi by dividing N is numerically treacherous: N is a difference
of O(1) terms, so near the zero-amplitude limit the quotient loses all
significant digits at nodes adjacent to the endpoints.  We instead factor
one root analytically,

    N(v) = (v - v_star) * G(v),
    G(v) = f_dd(v_star, v) - (1/2) j**2 (v + v_star) - lambda,

with f_dd the closed-form divided difference carried by the law, and
divide only by the peak distance, phi = G(v)/(v_peak - v), switching to a
Taylor expansion of G about the peak inside a small window.  Endpoint
distances come from exact half-angle identities,

    v - v_star   = span * cos(pi/4 - theta/2)**2,
    v_peak - v   = span * sin(pi/4 - theta/2)**2,

so every factor is computed without cancellation and the quadrature stays
accurate down to amplitudes near the resolution floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (BracketError, ConsistencyError, DegenerateOrbitError,
                     InvalidParameterError)
from .laws import Capillarity, PressureLaw

# Orbits with (v_peak - v_star) below this fraction of the volume scale are
# refused: quadrature noise dominates the signal there.
AMPLITUDE_FLOOR = 1e-8

# Fraction of the span below the peak inside which phi switches to the
# Taylor form (bias scales like window**1.5 and is negligible here).
PEAK_WINDOW = 1e-3

DEFAULT_QUAD_POINTS = 10000


@dataclass(frozen=True)
class OrbitSpec:
    """Parameters selecting one periodic wave.

    j is the mass flux (the wave moves with speed -j in the material
    frame), sigma the velocity offset, v_inf the solitary endpoint pinning
    lambda, and v_star the trough pinning mu.
    """

    j: float
    sigma: float
    v_inf: float
    v_star: float
    law: PressureLaw
    kappa: Capillarity


@dataclass
class Orbit:
    """A constructed periodic wave with its quadrature nodes cached."""

    spec: OrbitSpec
    lam: float
    mu: float
    v_peak: float
    k: float
    xi: float
    quad_points: int
    _theta: np.ndarray = field(repr=False, default=None)
    _v: np.ndarray = field(repr=False, default=None)
    _w: np.ndarray = field(repr=False, default=None)
    _w_integral: float = field(repr=False, default=0.0)


@dataclass(frozen=True)
class CriticalPoint:
    """A zero of N' with its type and potential level.

    n_value is the mu-free level f(v) - j**2 v**2 / 2 - lambda v; level
    differences between critical points decide the phase-portrait
    topology, so the arbitrary mu offset is irrelevant.
    """

    v: float
    kind: str          # "center" or "saddle"
    n_value: float


@dataclass(frozen=True)
class PhasePortrait:
    """Critical points of the profile potential and their topology."""

    critical_points: tuple
    topology: str      # single_loop | two_fish | eyes_and_guitar | degenerate
    j: float
    v_inf: float
    lam: float
    law: PressureLaw = field(repr=False, default=None)

    def family_of(self, v_star: float) -> str:
        """Name the loop containing the orbit with the given trough.

        Returns "main" for single-loop portraits; otherwise the orbit is
        labeled by the centers it encloses: "inner_around_<v0>" when it
        surrounds one center, "outer" when it surrounds two.
        """
        vpk = find_peak(self.law, self.j, self.lam, v_star)
        centers = [c.v for c in self.critical_points if c.kind == "center"
                   and v_star < c.v < vpk]
        if self.topology == "single_loop":
            return "main"
        if len(centers) == 1:
            return f"inner_around_{centers[0]:.6g}"
        return "outer"


def integration_constants(law: PressureLaw, j: float, v_inf: float,
                          v_star: float):
    """Return (lambda, mu) for the wave family through (j, v_inf, v_star).

    lambda = -j**2 v_inf - p(v_inf) makes v_inf a zero of N', and mu
    makes N(v_star) = 0 exactly.
    """
    law.require_domain(v_inf)
    law.require_domain(v_star)
    lam = -j * j * v_inf - law.p(v_inf)
    mu = law.f(v_star) - 0.5 * j * j * v_star**2 - lam * v_star
    return lam, mu


def potential(law: PressureLaw, j: float, lam: float, mu: float, v):
    """Evaluate (N, N', N'') at v.

    N = f - j**2 v**2/2 - lambda v - mu, N' = -p - j**2 v - lambda,
    N'' = -p' - j**2.
    """
    law.require_domain(v)
    n0 = law.f(v) - 0.5 * j * j * np.asarray(v)**2 - lam * np.asarray(v) - mu
    n1 = -law.p(v) - j * j * np.asarray(v) - lam
    n2 = -law.dp(v) - j * j
    return n0, n1, n2


def _g_value(law, j, lam, v_star, v):
    """G(v) = N(v)/(v - v_star) through the stable divided difference."""
    return law.f_dd(v_star, v) - 0.5 * j * j * (np.asarray(v) + v_star) - lam


def _g_derivatives(law, j, lam, v_star, v):
    """G and its first four derivatives at scalar v.

    Uses the recursion d_m = (f^(m)(v) - m d_{m-1})/(v - v_star) for the
    derivatives of the divided difference, with f' = -p and onward.
    """
    dv = v - v_star
    d0 = float(law.f_dd(v_star, v))
    d1 = (-law.p(v) - d0) / dv
    d2 = (-law.dp(v) - 2.0 * d1) / dv
    d3 = (-law.d2p(v) - 3.0 * d2) / dv
    d4 = (-law.d3p(v) - 4.0 * d3) / dv
    g0 = d0 - 0.5 * j * j * (v + v_star) - lam
    g1 = d1 - 0.5 * j * j
    return g0, g1, d2, d3, d4


def find_peak(law: PressureLaw, j: float, lam: float, v_star: float,
              step_hint: Optional[float] = None) -> float:
    """Smallest root of N above the trough v_star.

    Marches upward with geometrically growing steps until G changes sign,
    brackets with bisection and polishes with a few Newton steps.  Fails
    with BracketError when no sign change appears (the trough is outside
    any admissible loop) and with InvalidParameterError when N is not
    increasing at the trough.
    """
    g = lambda v: float(_g_value(law, j, lam, v_star, v))
    lo = v_star * (1.0 + 1e-12) + 1e-300
    if g(lo) <= 0.0:
        raise InvalidParameterError(
            "v_star is not a valid trough: N not increasing there")
    step = step_hint if step_hint else 0.05 * max(v_star - law.b, 0.1)
    hi = v_star + step
    for _ in range(400):
        if g(hi) < 0.0:
            break
        lo, hi = hi, hi + step
        step *= 1.25
    else:
        raise BracketError("no peak found above v_star before the search "
                           "limit; trough outside any closed loop")
    vpk = brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16)
    for _ in range(4):
        g0, g1, _, _, _ = _g_derivatives(law, j, lam, v_star, vpk)
        if g1 == 0.0:
            break
        nxt = vpk - g0 / g1
        if lo <= nxt <= hi:
            vpk = nxt
    return vpk


def regularized_phi(law: PressureLaw, j: float, lam: float, v_star: float,
                    v_peak: float, v):
    """phi(v) = N(v) / ((v_peak - v)(v - v_star)) without cancellation.

    The endpoint values are the analytic limits N'(v_star)/(v_peak-v_star)
    and -N'(v_peak)/(v_peak-v_star); interior values use the factored
    G-form, with a Taylor expansion of G inside a small window below the
    peak.  mu is implied by N(v_star) = 0 and does not appear.
    """
    v = np.asarray(v, dtype=float)
    scalar = v.ndim == 0
    v = np.atleast_1d(v)
    span = v_peak - v_star
    dvp = v_peak - v
    phi = np.empty_like(v)
    far = dvp >= PEAK_WINDOW * span
    gfar = _g_value(law, j, lam, v_star, v[far])
    phi[far] = gfar / dvp[far]
    if not far.all():
        _, g1, g2, g3, g4 = _g_derivatives(law, j, lam, v_star, v_peak)
        x = -dvp[~far]
        # phi(v_peak + x) = -(G1 + x(G2/2 + x(G3/6 + x G4/24)))
        phi[~far] = -(g1 + x * (g2 / 2.0 + x * (g3 / 6.0 + x * g4 / 24.0)))
    return float(phi[0]) if scalar else phi


def _quadrature_nodes(law, kappa, j, lam, v_star, v_peak, n):
    """Return (theta, v, w) with w = sqrt(kappa/(2 phi)) at each node.

    Endpoint distances come from half-angle identities so that phi keeps
    full precision arbitrarily close to the trough and peak.
    """
    span = v_peak - v_star
    theta = np.linspace(-0.5 * np.pi, 0.5 * np.pi, n)
    u = 0.25 * np.pi - 0.5 * theta
    dvm = span * np.cos(u)**2           # v - v_star, exact at theta=-pi/2
    dvp = span * np.sin(u)**2           # v_peak - v, exact at theta=+pi/2
    v = np.where(dvm <= dvp, v_star + dvm, v_peak - dvp)
    phi = np.empty_like(v)
    far = dvp >= PEAK_WINDOW * span
    phi[far] = _g_value(law, j, lam, v_star, v[far]) / dvp[far]
    if not far.all():
        _, g1, g2, g3, g4 = _g_derivatives(law, j, lam, v_star, v_peak)
        x = -dvp[~far]
        phi[~far] = -(g1 + x * (g2 / 2.0 + x * (g3 / 6.0 + x * g4 / 24.0)))
    if not np.all(phi > 0.0):
        raise DegenerateOrbitError(
            "phi not positive on the orbit: a root of N lies inside "
            "(v_star, v_peak)")
    kap = np.asarray(kappa(v), dtype=float)
    if kap.ndim == 0:
        kap = np.full_like(v, float(kap))
    if not np.all(kap > 0.0):
        raise InvalidParameterError("capillarity must be positive on the orbit")
    w = np.sqrt(kap / (2.0 * phi))
    return theta, v, w


def build_orbit(spec: OrbitSpec, quad_points: int = DEFAULT_QUAD_POINTS) -> Orbit:
    """Construct the periodic wave selected by spec.

    Validates the saddle condition j**2 < -p'(v_inf), locates the peak,
    enforces the amplitude floor, and precomputes the quadrature nodes
    used by wavenumber and moments.
    """
    law, j = spec.law, spec.j
    if j == 0.0:
        raise InvalidParameterError("mass flux j must be nonzero")
    law.require_domain(spec.v_inf)
    law.require_domain(spec.v_star)
    if not (j * j < -law.dp(spec.v_inf)):
        raise InvalidParameterError(
            "saddle condition j**2 < -p'(v_inf) fails at v_inf")
    lam, mu = integration_constants(law, j, spec.v_inf, spec.v_star)
    scale = max(abs(spec.v_star), abs(spec.v_inf), 1e-12)
    if abs(spec.v_star - spec.v_inf) < 1e-12 * scale:
        raise DegenerateOrbitError(
            "degenerate: solitary limit (v_star equals v_inf)")
    v_peak = find_peak(law, j, lam, spec.v_star)
    if v_peak - spec.v_star < AMPLITUDE_FLOOR * max(v_peak, spec.v_star):
        raise DegenerateOrbitError(
            "amplitude below the resolvable floor (zero-amplitude limit)")
    theta, v, w = _quadrature_nodes(law, spec.kappa, j, lam, spec.v_star,
                                    v_peak, quad_points)
    w_int = float(np.trapezoid(w, theta))
    k = 0.5 / w_int
    return Orbit(spec=spec, lam=lam, mu=mu, v_peak=v_peak, k=k, xi=1.0 / k,
                 quad_points=quad_points, _theta=theta, _v=v, _w=w,
                 _w_integral=w_int)


def wavenumber(spec: OrbitSpec, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """Wavenumber of the wave selected by spec (see build_orbit)."""
    return build_orbit(spec, quad_points).k


def moment(orbit: Orbit, h: Callable) -> float:
    """Profile average <h(V)> over one period.

    The weight sqrt(kappa/(2 phi)) is the Jacobian of the phase variable,
    so averages are ratios of theta-integrals; <1> = 1 holds exactly.
    """
    vals = h(orbit._v)
    return float(np.trapezoid(vals * orbit._w, orbit._theta)) / orbit._w_integral


def profile_arrays(orbit: Orbit):
    """Return (theta, v, w) quadrature arrays of the constructed orbit.

    w = sqrt(kappa/(2 phi)) is d zeta/d theta along the profile, so
    cumulative integrals of w and v*w give the material and physical
    coordinates of the wave shape.
    """
    return orbit._theta, orbit._v, orbit._w


def critical_points(law: PressureLaw, j: float, lam: float,
                    search_window: Optional[Sequence[float]] = None):
    """All simple roots of N' in the window, classified and sorted.

    N'(v) = -p(v) - j**2 v - lambda.  The default window is
    (b + 1e-6, 1e4).  Each root carries the mu-free potential level
    f(v) - j**2 v**2/2 - lambda v used for topology decisions.
    """
    if search_window is None:
        search_window = (law.b + 1e-6, 1e4)
    lo, hi = search_window
    if not (law.b < lo < hi):
        raise InvalidParameterError("search window must lie inside (b, inf)")
    n1 = lambda v: -law.p(v) - j * j * v - lam
    grid = law.b + np.geomspace(lo - law.b, hi - law.b, 4000)
    vals = n1(grid)
    roots = []
    for i in range(len(grid) - 1):
        a, bb = vals[i], vals[i + 1]
        if np.isfinite(a) and np.isfinite(bb) and a * bb < 0.0:
            roots.append(brentq(n1, grid[i], grid[i + 1],
                                xtol=1e-14, rtol=8.9e-16))
        elif a == 0.0 and (not roots or abs(grid[i] - roots[-1]) > 1e-9 * grid[i]):
            roots.append(grid[i])
    if law.kind == "van_der_waals" and len(roots) > 4:
        raise ConsistencyError(f"{len(roots)} critical points for a van der "
                               "Waals law; expected at most 4")
    if law.kind == "shallow_water" and len(roots) > 2:
        raise ConsistencyError(f"{len(roots)} critical points for a convex "
                               "law; expected at most 2")
    out = []
    for r in roots:
        n2 = -law.dp(r) - j * j
        kind = "center" if n2 < 0.0 else "saddle"
        level = float(law.f(r) - 0.5 * j * j * r * r - lam * r)
        out.append(CriticalPoint(v=float(r), kind=kind, n_value=level))
    return out


def enclosing_center(law: PressureLaw, j: float, v_inf: float) -> float:
    """First zero of N' above v_inf (the center of the loop at v_inf).

    For a convex law this is the unique center of the single loop; for
    multi-well laws it is the nearest center above the given saddle.
    """
    lam = -j * j * v_inf - law.p(v_inf)
    n1 = lambda v: -law.p(v) - j * j * v - lam
    step = 0.05 * max(v_inf - law.b, 0.1)
    lo = v_inf * (1.0 + 1e-12)
    if n1(lo) <= 0.0:
        raise InvalidParameterError("N' not positive just above v_inf; "
                                    "not a saddle of the potential")
    hi = v_inf + step
    for _ in range(400):
        if n1(hi) < 0.0:
            break
        lo, hi = hi, hi + step
        step *= 1.25
    else:
        raise BracketError("no center found above v_inf")
    return brentq(n1, lo, hi, xtol=1e-14, rtol=8.9e-16)


def classify_portrait(law: PressureLaw, j: float, v_inf: float,
                      search_window: Optional[Sequence[float]] = None) -> PhasePortrait:
    """Classify the phase portrait of the profile ODE at (j, v_inf).

    One saddle plus one center is a single loop.  With two saddles the
    levels decide: when the lower saddle sits at the higher potential
    level its homoclinic loop closes before the second saddle and the two
    loops are disjoint ("two_fish"); when it sits lower, its loop encloses
    the other saddle and both centers ("eyes_and_guitar").
    """
    law.require_domain(v_inf)
    lam = -j * j * v_inf - law.p(v_inf)
    cps = critical_points(law, j, lam, search_window)
    saddles = [c for c in cps if c.kind == "saddle"]
    centers = [c for c in cps if c.kind == "center"]
    if len(saddles) < 1 or len(centers) < 1:
        topology = "degenerate"
    elif len(saddles) == 1 and len(centers) == 1:
        topology = "single_loop"
    elif len(saddles) == 2 and len(centers) == 2:
        s1, s2 = saddles[0], saddles[1]
        scale = max(abs(s1.n_value), abs(s2.n_value), 1e-300)
        if abs(s1.n_value - s2.n_value) < 1e-12 * scale:
            topology = "degenerate"
        elif s1.n_value > s2.n_value:
            topology = "two_fish"
        else:
            topology = "eyes_and_guitar"
    else:
        topology = "degenerate"
    return PhasePortrait(critical_points=tuple(cps), topology=topology,
                         j=j, v_inf=v_inf, lam=lam, law=law)
