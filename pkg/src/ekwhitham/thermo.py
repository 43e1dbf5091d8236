"""Averaged thermodynamics of a periodic wave and its convexity.

Averaging over one period of a wave family produces an effective
thermodynamic description.  With <.> the mean over the material period,
the wave energy per unit mass is

    e = <f(V) + N(V)> + (1/2) j Delta,       Delta = j (<V**2> - <V>**2),

where the gradient energy (1/2) kappa V_zeta**2 equals N(V) on the orbit
and (1/2) j Delta is the kinetic-energy excess of the velocity field
w = sigma + j V over its mean.  The wave 'temperature' conjugate to the
wavenumber is twice the mean gradient energy per wavelength,

    Theta = (2/k) <N(V)>,

and the mean pressure is p = -lambda - j**2 <V>.  Along the three-
parameter family these satisfy the generalized Gibbs relation

    de = -p d<V> + Theta dk + j dDelta,

and its volumetric counterpart in terms of the mean density rho = 1/<V>,
the spatial wavenumber K = k rho, D = rho**2 Delta and E = rho e:

    dE = g drho + Theta dK + (j/rho) dD,
    g  = e + p <V> - k Theta - 2 j Delta.

Strict convexity of e as a function of (<V>, k, Delta/k) is a sufficient
condition for hyperbolicity of the modulation system, checked here by
finite differences through the wave parameters (j, v_inf, v_star) with a
chain-rule change of variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import ConsistencyError, InvalidParameterError
from .orbit import Orbit, OrbitSpec, build_orbit, moment


@dataclass(frozen=True)
class ThermoState:
    """Averaged quantities of one wave in the material description."""

    v_mean: float
    v2_mean: float
    delta: float
    e: float
    theta: float
    p_bar: float
    k: float


@dataclass(frozen=True)
class EulerianState:
    """The same wave averaged per unit volume."""

    rho_bar: float
    K: float
    D: float
    E: float
    g: float
    theta: float


@dataclass(frozen=True)
class ConvexityReport:
    """Hessian of e(<V>, k, Delta/k) and the resulting verdict."""

    verdict: str               # StrictlyConvex | NotConvex | Indeterminate
    hessian: np.ndarray
    eigenvalues: np.ndarray
    minors: np.ndarray


def _mean_n(orbit: Orbit) -> float:
    """<N(V)> through the factored form N = (V - v_star) G(V).

    Direct evaluation of N cancels catastrophically for small-amplitude
    waves; the trough distance is reproduced from the quadrature angle by
    the exact half-angle identity instead.
    """
    # Local import: orbit exposes the G helper as a private function on
    # purpose -- it is meaningless without the orbit's own constants.
    from .orbit import _g_value
    spec = orbit.spec
    theta, v, w = orbit._theta, orbit._v, orbit._w
    span = orbit.v_peak - spec.v_star
    u = 0.25 * np.pi - 0.5 * theta
    dvm = span * np.cos(u)**2
    nvals = dvm * _g_value(spec.law, spec.j, orbit.lam, spec.v_star, v)
    return float(np.trapezoid(nvals * w, theta)) / orbit._w_integral


def lagrangian_thermo(orbit: Orbit) -> ThermoState:
    """Averaged energy, temperature and mean pressure of the wave."""
    spec = orbit.spec
    v1 = moment(orbit, lambda v: v)
    v2 = moment(orbit, lambda v: v * v)
    f_mean = moment(orbit, spec.law.f)
    n_mean = _mean_n(orbit)
    delta = spec.j * (v2 - v1 * v1)
    e = f_mean + n_mean + 0.5 * spec.j * delta
    theta = 2.0 * n_mean / orbit.k
    p_bar = -orbit.lam - spec.j**2 * v1
    return ThermoState(v_mean=v1, v2_mean=v2, delta=delta, e=e, theta=theta,
                       p_bar=p_bar, k=orbit.k)


def to_eulerian(orbit: Orbit, thermo: Optional[ThermoState] = None) -> EulerianState:
    """Volumetric averages (rho, K, D, E) and the chemical potential g.

    Volume averages are mass-weighted material averages, which collapses
    them to closed forms: rho = 1/<V>, K = k rho, D = rho**2 Delta,
    E = rho e, and g comes from matching the two Gibbs relations.
    """
    th = thermo if thermo is not None else lagrangian_thermo(orbit)
    if th.v_mean <= 0.0:
        raise InvalidParameterError("mean specific volume must be positive")
    rho = 1.0 / th.v_mean
    g = th.e + th.p_bar * th.v_mean - th.k * th.theta - 2.0 * orbit.spec.j * th.delta
    return EulerianState(rho_bar=rho, K=th.k * rho, D=rho * rho * th.delta,
                         E=rho * th.e, g=g, theta=th.theta)


def eulerian_theta(orbit: Orbit) -> float:
    """Wave temperature from the spatial profile, without using N.

    Reconstructs the physical coordinate xi by integrating d xi = V d zeta
    along the quadrature nodes, differentiates the density profile
    rho(xi) = 1/V numerically, and integrates the volumetric gradient
    energy K_E(rho) rho_xi**2 with K_E(rho) = kappa(1/rho) rho**-5 over
    one wavelength.  Agreement with (2/k)<N> is a strong end-to-end check
    of the quadrature since no algebraic identity is shared.
    """
    spec = orbit.spec
    theta, v, w = orbit._theta, orbit._v, orbit._w
    xi = cumulative_trapezoid(v * w, theta, initial=0.0)
    rho = 1.0 / v
    rho_x = np.gradient(rho, xi)
    kap_e = np.asarray(spec.kappa(v), dtype=float)
    if kap_e.ndim == 0:
        kap_e = np.full_like(v, float(kap_e))
    kap_e = kap_e * v**5
    integrand = kap_e * rho_x**2
    # The quadrature grid spans the rising half of the period (trough to
    # peak); the other half contributes the same by symmetry.
    return 2.0 * float(np.trapezoid(integrand * v * w, theta))


def _wave_scalars(law, kappa, j, v_inf, v_star, quad_points):
    """(e, <V>, k, Delta/k, E, rho, K, D) of the wave at raw parameters."""
    orb = build_orbit(OrbitSpec(j=j, sigma=0.0, v_inf=v_inf, v_star=v_star,
                                law=law, kappa=kappa), quad_points)
    th = lagrangian_thermo(orb)
    eu = to_eulerian(orb, th)
    return np.array([th.e, th.v_mean, th.k, th.delta / th.k,
                     eu.E, eu.rho_bar, eu.K, eu.D])


def gibbs_residual(spec: OrbitSpec, direction: Sequence[float] = (0.0, 0.0, 1.0),
                   step: float = 4e-4, relation: str = "lagrangian",
                   quad_points: int = 2000):
    """Finite-difference residual of a Gibbs relation along a direction.

    Differentiates both sides of de = -p d<V> + Theta dk + j dDelta (or of
    dE = g drho + Theta dK + (j/rho) dD) along the given direction in
    (j, v_inf, v_star) with central differences at steps h and h/2.
    The step is taken relative to the parameter magnitude along the
    direction, otherwise large orbits leave the truncation-dominated
    regime and the order estimate reads rounding noise.  Returns
    (residual, order): the relative residual at h and the Richardson
    convergence order log2(r(h)/r(h/2)), which is near 2 when the
    relation holds exactly.
    """
    if relation not in ("lagrangian", "eulerian"):
        raise InvalidParameterError(f"unknown relation {relation!r}")
    law, kappa = spec.law, spec.kappa
    p0 = np.array([spec.j, spec.v_inf, spec.v_star])
    d = np.asarray(direction, dtype=float)
    nd = np.linalg.norm(d)
    if nd == 0.0:
        raise InvalidParameterError("direction must be nonzero")
    d = d / nd
    step = step * max(1.0, abs(float(d @ p0)))

    orb0 = build_orbit(spec, quad_points)
    th0 = lagrangian_thermo(orb0)
    eu0 = to_eulerian(orb0, th0)

    def residual(h):
        sp = p0 + h * d
        sm = p0 - h * d
        fp = _wave_scalars(law, kappa, sp[0], sp[1], sp[2], quad_points)
        fm = _wave_scalars(law, kappa, sm[0], sm[1], sm[2], quad_points)
        dv = (fp - fm) / (2.0 * h)
        if relation == "lagrangian":
            lhs = dv[0]
            rhs = -th0.p_bar * dv[1] + th0.theta * dv[2] \
                + spec.j * (dv[3] * th0.k + (th0.delta / th0.k) * dv[2])
            scale = max(abs(lhs), abs(th0.e) * 1e-3, 1e-300)
        else:
            lhs = dv[4]
            rhs = eu0.g * dv[5] + eu0.theta * dv[6] \
                + (spec.j / eu0.rho_bar) * dv[7]
            scale = max(abs(lhs), abs(eu0.E) * 1e-3, 1e-300)
        return abs(lhs - rhs) / scale

    r1 = residual(step)
    r2 = residual(0.5 * step)
    if r2 == 0.0:
        return r1, np.inf
    return r1, float(np.log2(r1 / r2))


def convexity_check(spec: OrbitSpec, quad_points: int = 2000,
                    rel_step: float = 1e-5) -> ConvexityReport:
    """Test strict convexity of e as a function of (<V>, k, Delta/k).

    e and the coordinates q = (<V>, k, Delta/k) are smooth functions of
    the raw parameters x = (j, v_inf, v_star); the Hessian in q follows
    from the chain rule,

        H_q = J^-T (Hess_x e - sum_i g_i Hess_x q_i) J^-1,
        g = J^-T grad_x e,    J = dq/dx,

    with all derivatives by central differences.  The verdict uses the
    leading principal minors of the symmetrized Hessian, normalized by
    the scale of the matrix; minors within tolerance of zero (or an
    ill-conditioned coordinate Jacobian) give Indeterminate rather than a
    definite answer.
    """
    law, kappa = spec.law, spec.kappa
    x0 = np.array([spec.j, spec.v_inf, spec.v_star])
    h = np.array([rel_step * max(1.0, abs(v)) for v in x0])
    h = np.maximum(h, 1e-7)

    def scalars(x):
        return _wave_scalars(law, kappa, x[0], x[1], x[2], quad_points)[:4]

    f0 = scalars(x0)
    n = 3
    fp = np.empty((n, 4))
    fm = np.empty((n, 4))
    for i in range(n):
        xp, xm = x0.copy(), x0.copy()
        xp[i] += h[i]
        xm[i] -= h[i]
        fp[i] = scalars(xp)
        fm[i] = scalars(xm)
    grad = (fp - fm) / (2.0 * h[:, None])          # grad[i, m] = d f_m / d x_i
    hess = np.empty((4, n, n))
    for i in range(n):
        hess[:, i, i] = (fp[i] + fm[i] - 2.0 * f0) / h[i]**2
    for i in range(n):
        for jj in range(i + 1, n):
            xpp, xpm, xmp, xmm = (x0.copy() for _ in range(4))
            xpp[[i, jj]] += [h[i], h[jj]]
            xpm[i] += h[i]; xpm[jj] -= h[jj]
            xmp[i] -= h[i]; xmp[jj] += h[jj]
            xmm[[i, jj]] -= [h[i], h[jj]]
            mixed = (scalars(xpp) - scalars(xpm) - scalars(xmp) + scalars(xmm)) \
                / (4.0 * h[i] * h[jj])
            hess[:, i, jj] = mixed
            hess[:, jj, i] = mixed

    jac = grad[:, 1:4]                              # d q_m / d x_i
    cond = np.linalg.cond(jac)
    if not np.isfinite(cond) or cond > 1e10:
        return ConvexityReport(verdict="Indeterminate",
                               hessian=np.full((3, 3), np.nan),
                               eigenvalues=np.full(3, np.nan),
                               minors=np.full(3, np.nan))
    grad_e = grad[:, 0]
    # grad_x e = (dq/dx) grad_q e with jac[i, m] = d q_m / d x_i
    g_q = np.linalg.solve(jac, grad_e)
    rem = hess[0] - np.tensordot(g_q, hess[1:4], axes=(0, 0))
    jinv = np.linalg.inv(jac.T)                     # rows map x to q
    h_q = jinv.T @ rem @ jinv
    h_q = 0.5 * (h_q + h_q.T)

    eig = np.linalg.eigvalsh(h_q)
    minors = np.array([h_q[0, 0],
                       np.linalg.det(h_q[:2, :2]),
                       np.linalg.det(h_q)])
    scale = np.abs(h_q).max()
    if scale == 0.0 or not np.all(np.isfinite(h_q)):
        verdict = "Indeterminate"
    else:
        tol = np.array([1e-6 * scale, 1e-6 * scale**2, 1e-6 * scale**3])
        if np.all(minors > tol):
            verdict = "StrictlyConvex"
        elif np.any(minors < -tol):
            verdict = "NotConvex"
        else:
            verdict = "Indeterminate"
    return ConvexityReport(verdict=verdict, hessian=h_q, eigenvalues=eig,
                           minors=minors)
