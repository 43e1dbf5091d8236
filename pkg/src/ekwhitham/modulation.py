"""Quasilinear modulation system of a periodic wave family and its type.

Slow modulations of the four wave parameters P = (j, sigma, v_inf,
v_star) obey a system of averaged conservation laws.  In the rescaled
material frame it reads

    M0(P) (d_S - j d_Y) P + M1(P) d_Y P = 0,

where M0 = dW/dP is the Jacobian of the conserved averages

    W(P) = (k, <V>, sigma + j<V>, j<V**2> + sigma<V>)

(wavenumber, mean volume, mean velocity, mean momentum-like average) and
M1 = dF/dP + j M0 collects the fluxes

    F(P) = (-jk, -sigma - j<V>, -lambda - j**2 <V>,
            mu - sigma**2/2 - j sigma <V> - j**2 <V**2>).

Cancellations against the derivatives of the averages make M1 explicit:
its entries involve only k, <V>, <V**2> and the law at v_inf and v_star,
with no parameter derivatives.  The characteristic speeds s solve
det(M1 - s M0) = 0; the system is hyperbolic when all four are real with
distinct real parts, so the wave is modulationally stable.  A singular
M0 (or a characteristic speed escaping to infinity) means the averages
fail to parametrize the family there and the system is not evolutionary
in these variables.

M0 requires derivatives of quadrature averages and is assembled by
central differences in (j, v_inf, v_star); the sigma column is exact.
The explicit M1 is cross-checked against the finite-difference flux
Jacobian on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eig

from .errors import (BoundaryError, ConsistencyError, EKWhithamError,
                     InvalidParameterError)
from .laws import Capillarity, PressureLaw
from .orbit import OrbitSpec, build_orbit, moment

TOL_IM = 1e-7       # relative imaginary-part threshold for real speeds
TOL_SEP = 1e-9      # relative real-part gap required for strictness
TOL_DET = 1e-10     # relative det(M0) threshold for evolutionarity
SPEED_CAP = 1e8     # speeds beyond this are treated as escaped to infinity
DEFAULT_FD_STEP = 1e-6


@dataclass(frozen=True)
class Verdict:
    """Classification of the modulation system at one wave."""

    tag: str                   # Hyperbolic | NonHyperbolic | NonEvolutionary
    #                          # | Indeterminate
    max_imag: float            # largest |Im s| relative to the speed scale
    min_gap: float             # smallest real-part separation, same scale
    n_complex_pairs: int


@dataclass
class ModulationReport:
    """Everything the classification of one wave produced."""

    p: tuple
    k: float
    xi: float
    det_m0: float
    speeds: np.ndarray
    verdict: Verdict
    m0: np.ndarray = field(repr=False, default=None)
    m1: np.ndarray = field(repr=False, default=None)


def _averages(law, kappa, p, quad_points):
    """(k, <V>, <V**2>, lambda, mu) of the wave at parameters p."""
    j, sigma, v_inf, v_star = p
    orb = build_orbit(OrbitSpec(j=j, sigma=sigma, v_inf=v_inf, v_star=v_star,
                                law=law, kappa=kappa), quad_points)
    mv = moment(orb, lambda v: v)
    mv2 = moment(orb, lambda v: v * v)
    return orb.k, mv, mv2, orb.lam, orb.mu


def state_vector(law: PressureLaw, kappa: Capillarity, p: Sequence[float],
                 quad_points: int = 10000) -> np.ndarray:
    """Conserved averages W(P) = (k, <V>, sigma + j<V>, j<V**2> + sigma<V>)."""
    j, sigma, _, _ = p
    k, mv, mv2, _, _ = _averages(law, kappa, p, quad_points)
    return np.array([k, mv, sigma + j * mv, j * mv2 + sigma * mv])


def flux_vector(law: PressureLaw, kappa: Capillarity, p: Sequence[float],
                quad_points: int = 10000) -> np.ndarray:
    """Fluxes F(P) conjugate to W(P) in the material frame."""
    j, sigma, _, _ = p
    k, mv, mv2, lam, mu = _averages(law, kappa, p, quad_points)
    return np.array([-j * k,
                     -sigma - j * mv,
                     -lam - j * j * mv,
                     mu - 0.5 * sigma**2 - j * sigma * mv - j * j * mv2])


def _fd_jacobian(fun, p, fd_step):
    """Central-difference Jacobian in (j, v_inf, v_star); exact in sigma.

    A column whose stencil leaves the wave family (an orbit construction
    fails on either side) is retried once with a tenfold smaller step and
    then reported as a family boundary.
    """
    p = np.asarray(p, dtype=float)
    cols = {}
    for i in (0, 2, 3):
        h = fd_step * max(1.0, abs(p[i]))
        for attempt in range(2):
            pp, pm = p.copy(), p.copy()
            pp[i] += h
            pm[i] -= h
            try:
                cols[i] = (fun(pp) - fun(pm)) / (2.0 * h)
                break
            except EKWhithamError:
                h *= 0.1
        else:
            raise BoundaryError(
                f"finite-difference stencil in parameter {i} leaves the "
                "wave family; the point sits on a family boundary")
    return cols


def jacobian_m0(law: PressureLaw, kappa: Capillarity, p: Sequence[float],
                quad_points: int = 10000,
                fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """M0 = dW/dP by central differences (sigma column analytic)."""
    j, sigma, _, _ = p
    fun = lambda q: state_vector(law, kappa, q, quad_points)
    cols = _fd_jacobian(fun, p, fd_step)
    _, mv, _, _, _ = _averages(law, kappa, p, quad_points)
    m0 = np.empty((4, 4))
    m0[:, 0] = cols[0]
    m0[:, 1] = [0.0, 0.0, 1.0, mv]
    m0[:, 2] = cols[2]
    m0[:, 3] = cols[3]
    return m0


def matrix_m1(law: PressureLaw, kappa: Capillarity, p: Sequence[float],
              quad_points: int = 10000) -> np.ndarray:
    """Explicit M1; only averages at p and the law at v_inf, v_star enter."""
    j, sigma, v_inf, v_star = p
    k, mv, mv2, _, _ = _averages(law, kappa, p, quad_points)
    p_inf, p_st = law.p(v_inf), law.p(v_star)
    dp_inf = law.dp(v_inf)
    return np.array([
        [-k, 0.0, 0.0, 0.0],
        [-mv, -1.0, 0.0, 0.0],
        [-j * mv + 2.0 * j * v_inf, j, j * j + dp_inf, 0.0],
        [-(sigma * mv + j * mv2) + 2.0 * j * v_inf * v_star - j * v_star**2,
         -sigma,
         (j * j + dp_inf) * v_star,
         p_inf - p_st + j * j * (v_inf - v_star)],
    ])


def m1_from_flux_jacobian(law: PressureLaw, kappa: Capillarity,
                          p: Sequence[float], quad_points: int = 10000,
                          fd_step: float = DEFAULT_FD_STEP,
                          m0: Optional[np.ndarray] = None) -> np.ndarray:
    """M1 = dF/dP + j M0 by finite differences, for cross-checking."""
    j, sigma, _, _ = p
    fun = lambda q: flux_vector(law, kappa, q, quad_points)
    cols = _fd_jacobian(fun, p, fd_step)
    _, mv, _, _, _ = _averages(law, kappa, p, quad_points)
    jf = np.empty((4, 4))
    jf[:, 0] = cols[0]
    jf[:, 1] = [0.0, -1.0, 0.0, -sigma - j * mv]
    jf[:, 2] = cols[2]
    jf[:, 3] = cols[3]
    if m0 is None:
        m0 = jacobian_m0(law, kappa, p, quad_points, fd_step)
    return jf + j * m0


def characteristic_speeds(m0: np.ndarray, m1: np.ndarray) -> np.ndarray:
    """The four roots of det(M1 - s M0) = 0, sorted; inf where M0 drops rank.

    Solved as a generalized eigenvalue problem in homogeneous form so
    that speeds escaping to infinity come out as inf instead of noise.
    """
    alpha, beta = eig(m1, m0, right=False, homogeneous_eigvals=True)
    speeds = np.empty(4, dtype=complex)
    for i in range(4):
        if abs(beta[i]) <= 1e-14 * max(1.0, abs(alpha[i])):
            speeds[i] = complex(np.inf, 0.0)
        else:
            speeds[i] = alpha[i] / beta[i]
    return np.sort_complex(speeds)


def classify(m0: np.ndarray, m1: np.ndarray, tol_im: float = TOL_IM,
             tol_det: float = TOL_DET, tol_sep: float = TOL_SEP,
             speed_cap: float = SPEED_CAP) -> Verdict:
    """Type of the modulation system from its matrices.

    NonEvolutionary when M0 is singular relative to its row scales or a
    speed exceeds the cap; NonHyperbolic when a genuinely complex pair
    remains; Hyperbolic when all speeds are real with strictly separated
    real parts; Indeterminate in the borderline band where separations
    sit below tolerance.
    """
    speeds = characteristic_speeds(m0, m1)
    row_scale = np.prod(np.linalg.norm(m0, axis=1))
    det0 = float(np.linalg.det(m0))
    det_rel = abs(det0) / row_scale if row_scale > 0.0 else np.inf
    finite = speeds[np.isfinite(speeds)]
    scale = max(1.0, np.max(np.abs(finite)) if finite.size else 0.0)
    max_im = float(np.max(np.abs(speeds.imag[np.isfinite(speeds)])) / scale) \
        if finite.size else np.inf
    re = np.sort(finite.real)
    min_gap = float(np.min(np.diff(re)) / scale) if re.size > 1 else np.inf
    n_complex = int(np.sum(np.abs(finite.imag) > tol_im * scale)) // 2

    if det_rel <= tol_det or finite.size < 4 or scale >= speed_cap:
        tag = "NonEvolutionary"
    elif max_im > tol_im:
        tag = "NonHyperbolic"
    elif min_gap > tol_sep:
        tag = "Hyperbolic"
    else:
        tag = "Indeterminate"
    return Verdict(tag=tag, max_imag=max_im, min_gap=min_gap,
                   n_complex_pairs=n_complex)


def modulation_report(law: PressureLaw, kappa: Capillarity,
                      p: Sequence[float], quad_points: int = 10000,
                      fd_step: float = DEFAULT_FD_STEP,
                      tol_im: float = TOL_IM, tol_det: float = TOL_DET,
                      tol_sep: float = TOL_SEP,
                      speed_cap: float = SPEED_CAP) -> ModulationReport:
    """Assemble both matrices at p, classify, and bundle the results."""
    k, _, _, _, _ = _averages(law, kappa, p, quad_points)
    m0 = jacobian_m0(law, kappa, p, quad_points, fd_step)
    m1 = matrix_m1(law, kappa, p, quad_points)
    verdict = classify(m0, m1, tol_im, tol_det, tol_sep, speed_cap)
    return ModulationReport(p=tuple(p), k=k, xi=1.0 / k,
                            det_m0=float(np.linalg.det(m0)),
                            speeds=characteristic_speeds(m0, m1),
                            verdict=verdict, m0=m0, m1=m1)
