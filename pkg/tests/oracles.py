"""Independent reference computations used to cross-check the package.

Everything here deliberately avoids the package's numerical paths: the
orbit oracle evaluates the integrand by direct division of the potential
(with analytic endpoint limits) and Richardson-extrapolates two node
counts; the speed oracle reconstructs the quartic characteristic
polynomial from determinant samples and calls the companion-matrix root
finder; the scalar-model oracle solves the nonlinear profile equation by
Fourier collocation and differences the measured frequency.
"""

import numpy as np
from scipy.optimize import brentq, fsolve


def orbit_averages(law, kappa, j, v_inf, v_star, n=8001):
    """(k, <V>, <V**2>) by direct-division trapezoid plus Richardson."""
    lam = -j * j * v_inf - law.p(v_inf)
    mu = law.f(v_star) - 0.5 * j * j * v_star**2 - lam * v_star

    def big_n(v):
        return law.f(v) - 0.5 * j * j * v * v - lam * v - mu

    def nprime(v):
        return -law.p(v) - j * j * v - lam

    # peak: march upward in plain v until N turns negative, then bracket
    step = 1e-6 * max(1.0, v_star)
    v = v_star + step
    for _ in range(2000):
        if big_n(v) < 0.0:
            break
        step *= 1.6
        v += step
    else:
        raise RuntimeError("oracle found no peak")
    v_peak = brentq(big_n, v - step, v, xtol=1e-15, rtol=8.9e-16)
    span = v_peak - v_star

    def averages(m):
        theta = np.linspace(-0.5 * np.pi, 0.5 * np.pi, m)
        vv = 0.5 * (v_peak + v_star) + 0.5 * span * np.sin(theta)
        phi = np.empty(m)
        phi[0] = nprime(v_star) / span
        phi[-1] = -nprime(v_peak) / span
        inner = vv[1:-1]
        phi[1:-1] = big_n(inner) / ((v_peak - inner) * (inner - v_star))
        w = np.sqrt(kappa(vv) / (2.0 * phi))
        iw = np.trapezoid(w, theta)
        return np.array([0.5 / iw,
                         np.trapezoid(vv * w, theta) / iw,
                         np.trapezoid(vv * vv * w, theta) / iw])

    coarse = averages(n)
    fine = averages(2 * n - 1)
    return fine + (fine - coarse) / 3.0


def quartic_speeds(m0, m1):
    """Roots of det(M1 - s M0) = 0 by polynomial reconstruction.

    The determinant is a quartic in s; five samples determine it exactly
    and the companion-matrix roots give the generalized speeds without
    any eigenvalue machinery.
    """
    scale = np.linalg.norm(m1) / max(np.linalg.norm(m0), 1e-300)
    nodes = scale * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    vals = [np.linalg.det(m1 - s * m0) for s in nodes]
    coeffs = np.polyfit(nodes, vals, 4)
    return np.sort_complex(np.roots(coeffs))


def harmonic_wavelength(law, kappa, j, v0):
    """Period of infinitesimal profile oscillations about a center v0."""
    return 2.0 * np.pi * np.sqrt(kappa(v0) / (law.dp(v0) + j * j))


def scalar_profile_frequency(glaw_f1, m, k, a, nf=32):
    """omega of the scalar-model wave with first cosine coefficient a.

    Solves the once-integrated profile equation
        omega U + k p(U) + k**3 U_theta_theta = A,    p = -f',
    for U = M + sum b_n cos(2 pi n theta) by projecting the residual on
    the first nf+1 cosine modes, with b_1 pinned to a.
    """
    ng = 8 * nf
    theta = (np.arange(ng) + 0.5) / ng
    modes = np.arange(1, nf + 1)
    cosmat = np.cos(2.0 * np.pi * np.outer(theta, modes))

    def unpack(x):
        b = np.empty(nf)
        b[0] = a
        b[1:] = x[:nf - 1]
        return b, x[nf - 1], x[nf]

    def residual(x):
        b, omega, const = unpack(x)
        u = m + cosmat @ b
        upp = cosmat @ (-(2.0 * np.pi * modes)**2 * b)
        r = omega * u + k * (-glaw_f1(u)) + k**3 * upp - const
        proj = np.empty(nf + 1)
        proj[0] = r.mean()
        proj[1:] = 2.0 * (cosmat.T @ r) / ng
        return proj

    x0 = np.zeros(nf + 1)
    x0[nf - 1] = k * (1.0 + (2.0 * np.pi * k)**2)   # rough harmonic guess
    sol, info, ier, msg = fsolve(residual, x0, full_output=True, xtol=1e-13)
    if ier != 1:
        raise RuntimeError(f"collocation did not converge: {msg}")
    _, omega, _ = unpack(sol)
    return omega


def scalar_omega2_oracle(glaw_f1, glaw_f2, m, k, a=0.02, nf=32):
    """First frequency correction from two finite amplitudes.

    omega(a) = omega0 + a**2 omega2 + O(a**4); combining amplitudes a and
    a/2 removes the a**4 term.
    """
    omega0 = k * (glaw_f2(m) + (2.0 * np.pi * k)**2)
    w_full = scalar_profile_frequency(glaw_f1, m, k, a, nf)
    w_half = scalar_profile_frequency(glaw_f1, m, k, 0.5 * a, nf)
    d_full = (w_full - omega0) / a**2
    d_half = (w_half - omega0) / (0.5 * a)**2
    return (4.0 * d_half - d_full) / 3.0
