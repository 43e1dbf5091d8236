"""Sweeps of wave families and location of classification thresholds.

A wave family is a one-parameter slice of the four-parameter manifold:
j, sigma and v_inf are held fixed while the trough v_star runs over an
interval determined by the phase portrait.  Sweeping the trough while
classifying the modulation system locates the wavelength thresholds
where hyperbolicity is gained or lost and where the system stops being
evolutionary (det M0 changes sign through zero).

Rows that cannot be classified are kept in the output rather than
dropped: waves below the amplitude floor or beyond the wavelength cap
are marked skipped (their linear/solitary limits are better handled by
dedicated asymptotics), and construction failures are marked with the
error kind so a scan across a family boundary stays aligned with its
input grid.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, EKWhithamError, InvalidParameterError
from .laws import Capillarity, PressureLaw
from .modulation import ModulationReport, modulation_report
from .orbit import OrbitSpec, PhasePortrait, build_orbit, classify_portrait

THREADS_ENV = "EKWHITHAM_THREADS"


@dataclass(frozen=True)
class Numerics:
    """Discretization and tolerance knobs shared across a computation."""

    quad_points: int = 10000
    fd_step: float = 1e-6
    tol_im: float = 1e-7
    tol_det: float = 1e-10
    tol_sep: float = 1e-9
    speed_cap: float = 1e8
    xi_cap: float = math.inf
    amplitude_floor: float = 1e-8

    def validate(self):
        if self.quad_points < 100:
            raise InvalidParameterError("quad_points must be at least 100")
        for name in ("fd_step", "tol_im", "tol_det", "tol_sep", "speed_cap"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"{name} must be positive")
        if self.xi_cap <= 0.0 or self.amplitude_floor < 0.0:
            raise InvalidParameterError("xi_cap must be positive and "
                                        "amplitude_floor nonnegative")
        return self


@dataclass(frozen=True)
class SweepRow:
    """Classification of one trough value; unset fields mean not computed."""

    v_star: float
    verdict: str
    v_peak: Optional[float] = None
    xi: Optional[float] = None
    k: Optional[float] = None
    det_m0: Optional[float] = None
    speeds: Optional[tuple] = None


@dataclass(frozen=True)
class ThresholdPoint:
    """A refined location where the classification changes."""

    v_star: float
    xi: float
    kind: str


@dataclass(frozen=True)
class Thresholds:
    """Coarse rows plus refined boundaries of a family sweep."""

    rows: tuple
    boundaries: tuple
    det_crossings: tuple
    bands: tuple          # (xi_lo, xi_hi) per maximal non-hyperbolic run


def _report_at(law, kappa, j, sigma, v_inf, v_star, num: Numerics):
    """ModulationReport at one trough, with floor and cap enforced."""
    orb = build_orbit(OrbitSpec(j=j, sigma=sigma, v_inf=v_inf, v_star=v_star,
                                law=law, kappa=kappa), num.quad_points)
    amp = orb.v_peak - v_star
    if amp < num.amplitude_floor * max(abs(orb.v_peak), abs(v_star)):
        return orb, None, "skipped:amplitude_floor"
    if orb.xi > num.xi_cap:
        return orb, None, "skipped:xi_cap"
    rep = modulation_report(law, kappa, (j, sigma, v_inf, v_star),
                            quad_points=num.quad_points, fd_step=num.fd_step,
                            tol_im=num.tol_im, tol_det=num.tol_det,
                            tol_sep=num.tol_sep, speed_cap=num.speed_cap)
    return orb, rep, rep.verdict.tag


def evaluate_point(law: PressureLaw, kappa: Capillarity, j: float,
                   sigma: float, v_inf: float, v_star: float,
                   num: Numerics = Numerics()) -> SweepRow:
    """One sweep row; failures are encoded in the verdict, not raised."""
    try:
        orb, rep, verdict = _report_at(law, kappa, j, sigma, v_inf, v_star, num)
    except EKWhithamError as exc:
        return SweepRow(v_star=v_star, verdict=f"error:{type(exc).__name__}")
    if rep is None:
        return SweepRow(v_star=v_star, verdict=verdict, v_peak=orb.v_peak,
                        xi=orb.xi, k=orb.k)
    return SweepRow(v_star=v_star, verdict=verdict, v_peak=orb.v_peak,
                    xi=rep.xi, k=rep.k, det_m0=rep.det_m0,
                    speeds=tuple(complex(s) for s in rep.speeds))


def run_sweep(law: PressureLaw, kappa: Capillarity, j: float, sigma: float,
              v_inf: float, v_star_values: Sequence[float],
              num: Numerics = Numerics()) -> list:
    """Classify every trough in the grid, in input order.

    Points are independent and run on a thread pool; set the
    EKWHITHAM_THREADS environment variable to cap the worker count.
    """
    num.validate()
    values = list(v_star_values)
    env = os.environ.get(THREADS_ENV)
    workers = int(env) if env else min(8, os.cpu_count() or 1)
    workers = max(1, min(workers, len(values) or 1))
    if workers == 1:
        return [evaluate_point(law, kappa, j, sigma, v_inf, v, num)
                for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(
            lambda v: evaluate_point(law, kappa, j, sigma, v_inf, v, num),
            values))


def _verdict_at(law, kappa, j, sigma, v_inf, v_star, num):
    row = evaluate_point(law, kappa, j, sigma, v_inf, v_star, num)
    return row


def _bisect_change(law, kappa, j, sigma, v_inf, lo, hi, is_left, num,
                   rel_width):
    """Shrink [lo, hi] until the change is localized to rel_width."""
    while hi - lo > rel_width * max(abs(lo), abs(hi), 1e-12):
        mid = 0.5 * (lo + hi)
        row = _verdict_at(law, kappa, j, sigma, v_inf, mid, num)
        if is_left(row):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_thresholds(law: PressureLaw, kappa: Capillarity, j: float,
                    sigma: float, v_inf: float,
                    v_star_values: Sequence[float],
                    num: Numerics = Numerics(),
                    rel_width: float = 1e-4) -> Thresholds:
    """Sweep a family and refine every classification change.

    Adjacent classified rows with different hyperbolicity verdicts are
    bisected in v_star down to the requested relative width, as are sign
    changes of det M0 (candidate loss-of-evolutionarity points).  Bands
    collect the wavelength intervals of the maximal non-hyperbolic runs.
    """
    rows = run_sweep(law, kappa, j, sigma, v_inf, v_star_values, num)
    classified = [(i, r) for i, r in enumerate(rows)
                  if not r.verdict.startswith(("error:", "skipped:"))]
    boundaries = []
    crossings = []
    for (i1, r1), (i2, r2) in zip(classified, classified[1:]):
        if i2 != i1 + 1:
            continue
        lo, hi = sorted((r1.v_star, r2.v_star))
        if (r1.verdict == "Hyperbolic") != (r2.verdict == "Hyperbolic"):
            left_tag = r1.verdict
            vb = _bisect_change(
                law, kappa, j, sigma, v_inf, lo, hi,
                lambda row: row.verdict == left_tag, num, rel_width)
            row_b = evaluate_point(law, kappa, j, sigma, v_inf, vb, num)
            xi_b = row_b.xi if row_b.xi is not None else float("nan")
            boundaries.append(ThresholdPoint(
                v_star=vb, xi=xi_b, kind=f"{r1.verdict}->{r2.verdict}"))
        if (r1.det_m0 is not None and r2.det_m0 is not None
                and r1.det_m0 * r2.det_m0 < 0.0):
            sign_left = math.copysign(1.0, r1.det_m0)
            vb = _bisect_change(
                law, kappa, j, sigma, v_inf, lo, hi,
                lambda row: (row.det_m0 is not None
                             and math.copysign(1.0, row.det_m0) == sign_left),
                num, rel_width)
            row_b = evaluate_point(law, kappa, j, sigma, v_inf, vb, num)
            xi_b = row_b.xi if row_b.xi is not None else float("nan")
            crossings.append(ThresholdPoint(
                v_star=vb, xi=xi_b, kind="det_m0_sign_change"))
    bands = []
    run = []
    for _, r in classified:
        if r.verdict == "NonHyperbolic":
            run.append(r)
        else:
            if run:
                xis = [q.xi for q in run if q.xi is not None]
                if xis:
                    bands.append((min(xis), max(xis)))
                run = []
    if run:
        xis = [q.xi for q in run if q.xi is not None]
        if xis:
            bands.append((min(xis), max(xis)))
    return Thresholds(rows=tuple(rows), boundaries=tuple(boundaries),
                      det_crossings=tuple(crossings), bands=tuple(bands))


def find_verdict_boundary(law: PressureLaw, kappa: Capillarity, j: float,
                          sigma: float, v_inf: float, v_lo: float,
                          v_hi: float, predicate: Callable[[ModulationReport], bool],
                          num: Numerics = Numerics(),
                          rel_width: float = 1e-3):
    """Bisect for the trough where a report predicate changes truth value.

    Evaluates the predicate on full modulation reports at both ends;
    raises BracketError when it does not differ, since then there is
    nothing to localize.  Returns (v_star, xi) at the refined boundary.
    """
    _, rep_lo, tag_lo = _report_at(law, kappa, j, sigma, v_inf, v_lo, num)
    _, rep_hi, tag_hi = _report_at(law, kappa, j, sigma, v_inf, v_hi, num)
    if rep_lo is None or rep_hi is None:
        raise BracketError(f"cannot bracket: endpoint not classifiable "
                           f"({tag_lo}, {tag_hi})")
    p_lo, p_hi = bool(predicate(rep_lo)), bool(predicate(rep_hi))
    if p_lo == p_hi:
        raise BracketError("predicate takes the same value at both ends; "
                           "no boundary to localize in the interval")
    lo, hi = v_lo, v_hi
    while abs(hi - lo) > rel_width * max(abs(lo), abs(hi), 1e-12):
        mid = 0.5 * (lo + hi)
        _, rep_mid, _ = _report_at(law, kappa, j, sigma, v_inf, mid, num)
        if rep_mid is None:
            raise BracketError("midpoint fell below the amplitude floor or "
                               "beyond the wavelength cap during bisection")
        if bool(predicate(rep_mid)) == p_lo:
            lo = mid
        else:
            hi = mid
    v_b = 0.5 * (lo + hi)
    _, rep_b, _ = _report_at(law, kappa, j, sigma, v_inf, v_b, num)
    xi_b = rep_b.xi if rep_b is not None else float("nan")
    return v_b, xi_b


def has_nonhyperbolic_row(law: PressureLaw, kappa: Capillarity, j: float,
                          sigma: float, v_inf: float, n_points: int = 40,
                          num: Numerics = Numerics(),
                          margin: float = 5e-3) -> bool:
    """Whether the single-loop family at (j, v_inf) has a NonHyperbolic wave.

    Sweeps a trough grid spanning the family between its saddle and
    center, staying a relative margin away from both degenerate ends.
    """
    portrait = classify_portrait(law, j, v_inf)
    if portrait.topology != "single_loop":
        raise InvalidParameterError(
            "the non-hyperbolic-band predicate is defined for single-loop "
            f"portraits; this one is {portrait.topology}")
    grid = family_grid(portrait, "main", n_points, margin)
    rows = run_sweep(law, kappa, j, sigma, v_inf, grid, num)
    return any(r.verdict == "NonHyperbolic" for r in rows)


def find_family_boundary(law: PressureLaw, kappa: Capillarity, j: float,
                         sigma: float, v_inf_lo: float, v_inf_hi: float,
                         n_points: int = 40, num: Numerics = Numerics(),
                         width: float = 1e-3) -> float:
    """Bisect in v_inf for the onset of a non-hyperbolic band.

    The predicate is "the family sweep at this v_inf contains at least
    one NonHyperbolic row"; the returned v_inf localizes its change of
    truth value to the requested absolute width.  Raises BracketError
    when the predicate is constant over the range.
    """
    exists_lo = has_nonhyperbolic_row(law, kappa, j, sigma, v_inf_lo,
                                      n_points, num)
    exists_hi = has_nonhyperbolic_row(law, kappa, j, sigma, v_inf_hi,
                                      n_points, num)
    if exists_lo == exists_hi:
        raise BracketError(
            "the non-hyperbolic-band predicate takes the same value at both "
            "ends of the v_inf range; no family boundary to localize")
    lo, hi = v_inf_lo, v_inf_hi
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if has_nonhyperbolic_row(law, kappa, j, sigma, mid,
                                 n_points, num) == exists_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _level(law, j, lam, v):
    """mu-free potential level used to delimit multi-well families."""
    return law.f(v) - 0.5 * j * j * v * v - lam * v


def family_grid(portrait: PhasePortrait, family: str, n_points: int,
                margin: float = 1e-3) -> np.ndarray:
    """Trough grid spanning one family of the portrait.

    Families are named by position: "main" for the single loop of a
    one-well portrait, "inner_lower"/"inner_upper" for the loops around
    the lower/upper center, and "outer" for the orbits enclosing both
    wells of an eyes-and-guitar portrait.  The grid stays a relative
    margin away from the degenerate endpoints (saddle and center).
    """
    law, j, lam = portrait.law, portrait.j, portrait.lam
    saddles = [c.v for c in portrait.critical_points if c.kind == "saddle"]
    centers = [c.v for c in portrait.critical_points if c.kind == "center"]
    topo = portrait.topology
    if topo == "single_loop" and family == "main":
        lo, hi = portrait.v_inf, centers[0]
    elif topo == "two_fish" and family == "inner_lower":
        lo, hi = saddles[0], centers[0]
    elif topo in ("two_fish", "eyes_and_guitar") and family == "inner_upper":
        lo, hi = saddles[1], centers[1]
    elif topo == "eyes_and_guitar" and family in ("inner_lower", "outer"):
        s1, s2 = saddles[0], saddles[1]
        target = _level(law, j, lam, s2)
        fn = lambda v: _level(law, j, lam, v) - target
        v8 = brentq(fn, s1 * (1.0 + 1e-10), centers[0], xtol=1e-14)
        lo, hi = (v8, centers[0]) if family == "inner_lower" else (s1, v8)
    else:
        raise InvalidParameterError(
            f"no family {family!r} in a {topo} portrait")
    t = np.linspace(margin, 1.0 - margin, n_points)
    return lo + t * (hi - lo)
