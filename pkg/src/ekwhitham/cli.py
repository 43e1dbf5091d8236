"""Command-line front end.

Subcommands construct single waves, classify their modulation systems,
sweep families, classify phase portraits, and evaluate small-amplitude
dispersion, all driven by a JSON configuration file:

    {
      "pressure": {"type": "shallow_water" | "van_der_waals", "gamma": ...},
      "kappa":    {"type": "constant", "value": 1.0},
      "wave":     {"j": ..., "sigma": ..., "v_inf": ..., "v_star": ...},
      "sweep":    {"v_star_min": ..., "v_star_max": ..., "n_points": ...},
      "numerics": {"quad_points": 10000, "fd_step": 1e-6, "tol_im": ...,
                   "tol_det": ..., "tol_sep": ..., "xi_cap": ...},
      "small_amplitude": {"f": "cubic" | "quartic" | "pressure",
                          "c0": ..., "sigma": ..., "m": ..., "k": ...}
    }

Unknown keys anywhere are rejected.  Exit codes: 0 success, 1 invalid
parameters, 2 numerical failure, 3 configuration error.  Output files
are written to a temporary name and renamed into place so failures never
leave partial files; floats are serialized with 17 significant digits so
parsing the output reproduces the doubles bit for bit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import tempfile

import numpy as np

from .errors import (ConfigError, EKWhithamError, InvalidParameterError,
                     NumericalError)
from .laws import (Capillarity, PressureLaw, constant_capillarity,
                   shallow_water, van_der_waals)
from .modulation import modulation_report
from .orbit import OrbitSpec, build_orbit, classify_portrait
from .smallamp import (cubic_law, dispersion_data, from_pressure_law,
                       quartic_law)
from .sweep import Numerics, find_thresholds
from .thermo import lagrangian_thermo, to_eulerian

_VERDICT_OUT = {
    "Hyperbolic": "hyperbolic",
    "NonHyperbolic": "non_hyperbolic",
    "NonEvolutionary": "non_evolutionary",
    "Indeterminate": "indeterminate",
}

CSV_HEADER = ("v_star,v_peak,xi,k,det_m0,s1_re,s1_im,s2_re,s2_im,"
              "s3_re,s3_im,s4_re,s4_im,verdict")


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped onto the config-error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(3)


# ---------------------------------------------------------------------------
# serialization


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return f"{x:.17g}"


def to_json_text(obj, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits (exact double round-trip)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json_text(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{to_json_text(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise ConfigError(f"cannot serialize object of type {type(obj).__name__}")


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-ekw-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(obj, out_path):
    text = to_json_text(obj) + "\n"
    if out_path:
        _write_atomic(out_path, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# configuration


def _check_keys(block: dict, allowed, where: str):
    unknown = set(block) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _require(block: dict, key: str, where: str):
    if key not in block:
        raise ConfigError(f"missing key {key!r} in {where}")
    return block[key]


def _number(block: dict, key: str, where: str, default=None):
    if key not in block:
        if default is None:
            raise ConfigError(f"missing key {key!r} in {where}")
        return default
    val = block[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    if not math.isfinite(float(val)):
        raise ConfigError(f"{where}.{key} must be finite")
    return float(val)


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in config: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(cfg, ("pressure", "kappa", "wave", "sweep", "numerics",
                      "small_amplitude"), "config")
    return cfg


def _build_law(cfg: dict) -> PressureLaw:
    block = _require(cfg, "pressure", "config")
    _check_keys(block, ("type", "gamma"), "pressure")
    kind = _require(block, "type", "pressure")
    if kind == "shallow_water":
        if "gamma" in block:
            raise ConfigError("pressure.gamma is only valid with "
                              "type van_der_waals")
        return shallow_water()
    if kind == "van_der_waals":
        if "gamma" not in block:
            raise ConfigError("pressure.gamma is required with "
                              "type van_der_waals")
        return van_der_waals(_number(block, "gamma", "pressure"))
    raise ConfigError(f"unknown pressure type {kind!r}")


def _build_kappa(cfg: dict) -> Capillarity:
    block = cfg.get("kappa", {"type": "constant", "value": 1.0})
    _check_keys(block, ("type", "value"), "kappa")
    if block.get("type", "constant") != "constant":
        raise ConfigError(f"unknown kappa type {block.get('type')!r}")
    return constant_capillarity(_number(block, "value", "kappa", default=1.0))


def _build_numerics(cfg: dict, args) -> Numerics:
    block = cfg.get("numerics", {})
    _check_keys(block, ("quad_points", "fd_step", "tol_im", "tol_det",
                        "tol_sep", "xi_cap"), "numerics")
    base = Numerics()
    quad = int(_number(block, "quad_points", "numerics",
                       default=float(base.quad_points)))
    fd = _number(block, "fd_step", "numerics", default=base.fd_step)
    if getattr(args, "quad_points", None) is not None:
        quad = args.quad_points
    if getattr(args, "fd_step", None) is not None:
        fd = args.fd_step
    num = Numerics(
        quad_points=quad,
        fd_step=fd,
        tol_im=_number(block, "tol_im", "numerics", default=base.tol_im),
        tol_det=_number(block, "tol_det", "numerics", default=base.tol_det),
        tol_sep=_number(block, "tol_sep", "numerics", default=base.tol_sep),
        xi_cap=_number(block, "xi_cap", "numerics", default=base.xi_cap),
    )
    return num.validate()


def _wave_params(cfg: dict, need_v_star: bool):
    block = _require(cfg, "wave", "config")
    _check_keys(block, ("j", "sigma", "v_inf", "v_star"), "wave")
    j = _number(block, "j", "wave")
    sigma = _number(block, "sigma", "wave", default=0.0)
    v_inf = _number(block, "v_inf", "wave")
    if j <= 0.0:
        raise InvalidParameterError(
            "wave.j must be positive here; negative mass flux is the "
            "mirror-symmetric wave (handled by the library, not the CLI)")
    if need_v_star:
        v_star = _number(block, "v_star", "wave")
        return j, sigma, v_inf, v_star
    return j, sigma, v_inf, None


# ---------------------------------------------------------------------------
# subcommands


def cmd_wave(cfg, args):
    law = _build_law(cfg)
    kappa = _build_kappa(cfg)
    num = _build_numerics(cfg, args)
    j, sigma, v_inf, v_star = _wave_params(cfg, need_v_star=True)
    orb = build_orbit(OrbitSpec(j=j, sigma=sigma, v_inf=v_inf, v_star=v_star,
                                law=law, kappa=kappa), num.quad_points)
    th = lagrangian_thermo(orb)
    eu = to_eulerian(orb, th)
    record = {
        "j": j, "sigma": sigma, "v_inf": v_inf, "v_star": v_star,
        "lambda": orb.lam, "mu": orb.mu, "v_peak": orb.v_peak,
        "k": orb.k, "xi": orb.xi,
        "v_mean": th.v_mean, "v2_mean": th.v2_mean, "theta": th.theta,
        "delta": th.delta, "e": th.e, "p_bar": th.p_bar,
        "rho_bar": eu.rho_bar, "K": eu.K, "D": eu.D, "E": eu.E, "g": eu.g,
    }
    _emit(record, args.out)
    return 0


def cmd_modulation(cfg, args):
    law = _build_law(cfg)
    kappa = _build_kappa(cfg)
    num = _build_numerics(cfg, args)
    j, sigma, v_inf, v_star = _wave_params(cfg, need_v_star=True)
    rep = modulation_report(law, kappa, (j, sigma, v_inf, v_star),
                            quad_points=num.quad_points, fd_step=num.fd_step,
                            tol_im=num.tol_im, tol_det=num.tol_det,
                            tol_sep=num.tol_sep, speed_cap=num.speed_cap)
    record = {
        "j": j, "sigma": sigma, "v_inf": v_inf, "v_star": v_star,
        "k": rep.k, "xi": rep.xi, "det_m0": rep.det_m0,
        "m0": [[float(x) for x in row] for row in rep.m0],
        "m1": [[float(x) for x in row] for row in rep.m1],
        "speeds": [[float(s.real), float(s.imag)] for s in rep.speeds],
        "verdict": _VERDICT_OUT[rep.verdict.tag],
        "max_imag": rep.verdict.max_imag,
        "min_gap": rep.verdict.min_gap,
        "n_complex_pairs": rep.verdict.n_complex_pairs,
    }
    _emit(record, args.out)
    return 0


def _snake_kind(name: str) -> str:
    name = re.sub(r"Error$", "", name)
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


def _csv_verdict(verdict: str) -> str:
    if verdict in _VERDICT_OUT:
        return _VERDICT_OUT[verdict]
    if verdict.startswith("error:"):
        return "error:" + _snake_kind(verdict.split(":", 1)[1])
    return verdict


def _csv_cell(x) -> str:
    return "" if x is None else _fmt_float(float(x))


def cmd_sweep(cfg, args):
    if not args.out:
        raise ConfigError("sweep requires --out <file.csv>")
    law = _build_law(cfg)
    kappa = _build_kappa(cfg)
    num = _build_numerics(cfg, args)
    j, sigma, v_inf, _ = _wave_params(cfg, need_v_star=False)
    block = _require(cfg, "sweep", "config")
    _check_keys(block, ("v_star_min", "v_star_max", "n_points"), "sweep")
    v_lo = _number(block, "v_star_min", "sweep")
    v_hi = _number(block, "v_star_max", "sweep")
    n = int(_number(block, "n_points", "sweep"))
    if not (v_lo < v_hi) or n < 2:
        raise ConfigError("sweep requires v_star_min < v_star_max and "
                          "n_points >= 2")
    grid = np.linspace(v_lo, v_hi, n)
    th = find_thresholds(law, kappa, j, sigma, v_inf, grid, num)

    lines = [CSV_HEADER]
    for row in th.rows:
        speeds = row.speeds if row.speeds is not None else (None,) * 4
        cells = [
            _fmt_float(row.v_star),
            _csv_cell(row.v_peak),
            _csv_cell(row.xi),
            _csv_cell(row.k),
            _csv_cell(row.det_m0),
        ]
        for s in speeds:
            if s is None:
                cells.extend(["", ""])
            else:
                cells.extend([_fmt_float(s.real), _fmt_float(s.imag)])
        cells.append(_csv_verdict(row.verdict))
        lines.append(",".join(cells))
    _write_atomic(args.out, "\n".join(lines) + "\n")

    band_los = [b[0] for b in th.bands]
    band_his = [b[1] for b in th.bands]
    sidecar = {
        "xi_m": min(band_los) if band_los else None,
        "xi_M": max(band_his) if band_his else None,
        "bands": [[lo, hi] for lo, hi in th.bands],
        "boundaries": [{"v_star": b.v_star, "xi": b.xi, "kind": b.kind}
                       for b in th.boundaries],
        "det_crossings": [{"v_star": b.v_star, "xi": b.xi, "kind": b.kind}
                          for b in th.det_crossings],
    }
    root, _ = os.path.splitext(args.out)
    _write_atomic(root + ".thresholds.json", to_json_text(sidecar) + "\n")
    return 0


def cmd_portrait(cfg, args):
    law = _build_law(cfg)
    _build_kappa(cfg)       # validated for schema symmetry; portraits are
    #                       # capillarity-independent
    j, _, v_inf, _ = _wave_params(cfg, need_v_star=False)
    por = classify_portrait(law, j, v_inf)
    record = {
        "j": j, "v_inf": v_inf, "lambda": por.lam,
        "topology": por.topology,
        "critical_points": [{"v": c.v, "kind": c.kind, "level": c.n_value}
                            for c in por.critical_points],
    }
    _emit(record, args.out)
    return 0


def cmd_small_amplitude(cfg, args):
    block = _require(cfg, "small_amplitude", "config")
    _check_keys(block, ("f", "c0", "sigma", "m", "k"), "small_amplitude")
    shape = _require(block, "f", "small_amplitude")
    m = _number(block, "m", "small_amplitude")
    k = _number(block, "k", "small_amplitude")
    closed_form = None
    bigk = 2.0 * math.pi * k
    if shape == "cubic":
        c0 = _number(block, "c0", "small_amplitude")
        glaw = cubic_law(c0)
        closed_form = -3.0 * c0**2 / (32.0 * bigk) / (2.0 * math.pi)
    elif shape == "quartic":
        sig = _number(block, "sigma", "small_amplitude")
        glaw = quartic_law(sig)
        closed_form = (-3.0 * sig * bigk + 24.0 * sig**2 * m * m / bigk) \
            / (2.0 * math.pi)
    elif shape == "pressure":
        glaw = from_pressure_law(_build_law(cfg))
    else:
        raise ConfigError(f"unknown small_amplitude.f {shape!r}")
    data = dispersion_data(glaw, m, k)
    product = data.omega2 * data.omega0_kk
    if product > 0.0:
        verdict = "stable"
    elif product < 0.0:
        verdict = "unstable"
    else:
        verdict = "marginal"
    record = {
        "f": shape, "m": m, "k": k,
        "omega0": data.omega0, "omega0_k": data.omega0_k,
        "omega0_kk": data.omega0_kk, "omega2": data.omega2,
        "u2_amplitude": data.u2_amplitude,
        "whitham_closed_form": closed_form,
        "sideband_product": product,
        "verdict": verdict,
    }
    _emit(record, args.out)
    return 0


def cmd_seed_fixtures(cfg, args):
    """Regenerate the frozen quadrature fixtures at high precision.

    Uses node counts n and 2n with Richardson extrapolation on the
    trapezoid result, which removes the leading error term and leaves
    values good to ~1e-12.  Intended for maintenance when the standard
    fixture set changes; tests carry their own frozen copies.
    """
    from .orbit import build_orbit as _build
    from .orbit import moment as _moment
    law = shallow_water()
    kappa = constant_capillarity(1.0)
    fixtures = []
    for (j, v_inf, v_star) in ((1.0, 0.9, 1.0), (1.0, 0.9, 1.2),
                               (1.0, 0.9, 1.5)):
        vals = {}
        for n in (20001, 40001):
            orb = _build(OrbitSpec(j=j, sigma=0.0, v_inf=v_inf,
                                   v_star=v_star, law=law, kappa=kappa), n)
            vals[n] = (orb.k, _moment(orb, lambda v: v),
                       _moment(orb, lambda v: v * v))
        coarse, fine = np.array(vals[20001]), np.array(vals[40001])
        extrap = fine + (fine - coarse) / 3.0
        fixtures.append({
            "j": j, "v_inf": v_inf, "v_star": v_star,
            "k": extrap[0], "v_mean": extrap[1], "v2_mean": extrap[2],
        })
    record = {
        "_method": ("Richardson-extrapolated trapezoid quadrature, "
                    "nodes 20001 and 40001, shallow-water law, "
                    "constant capillarity 1"),
        "fixtures": fixtures,
    }
    _emit(record, args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> _Parser:
    parser = _Parser(prog="ekwhitham",
                     description="Periodic traveling waves of capillary "
                                 "fluids and their modulation systems")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_config in (
            ("wave", cmd_wave, True),
            ("modulation", cmd_modulation, True),
            ("sweep", cmd_sweep, True),
            ("portrait", cmd_portrait, True),
            ("small-amplitude", cmd_small_amplitude, True),
            ("seed-fixtures", cmd_seed_fixtures, False)):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=needs_config)
        sp.add_argument("--out", default=None)
        sp.add_argument("--quad-points", type=int, default=None)
        sp.add_argument("--fd-step", type=float, default=None)
        sp.set_defaults(handler=fn, needs_config=needs_config)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.needs_config else {}
        return args.handler(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except InvalidParameterError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except EKWhithamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
