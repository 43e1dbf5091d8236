"""Modulation matrices, characteristic speeds and wave classification."""

import numpy as np
import pytest

from ekwhitham import (
    BoundaryError,
    characteristic_speeds,
    classify,
    flux_vector,
    jacobian_m0,
    m1_from_flux_jacobian,
    matrix_m1,
    modulation_report,
    state_vector,
)
import oracles

SW_P = (1.0, 0.0, 0.9, 1.2)
VDW_P = (0.0258, 0.0, 1.90285, 2.5)


def test_state_and_flux_vectors(sw_law, kappa1):
    w = state_vector(sw_law, kappa1, SW_P, quad_points=4000)
    f = flux_vector(sw_law, kappa1, SW_P, quad_points=4000)
    j, sigma = SW_P[0], SW_P[1]
    assert w.shape == f.shape == (4,)
    # momentum average is sigma + j <V> and its flux is -(sigma + j <V>) - ...
    assert abs(w[2] - (sigma + j * w[1])) < 1e-14
    assert abs(f[0] + j * w[0]) < 1e-14
    assert abs(f[1] + w[2]) < 1e-14


def test_m1_explicit_matches_flux_jacobian(sw_law, vdw_law, kappa1):
    for law, p in ((sw_law, SW_P), (vdw_law, VDW_P)):
        m1 = matrix_m1(law, kappa1, p, quad_points=6000)
        m1_fd = m1_from_flux_jacobian(law, kappa1, p, quad_points=6000)
        scale = np.max(np.abs(m1))
        assert np.max(np.abs(m1 - m1_fd)) < 1e-5 * scale


def test_speeds_match_quartic_oracle(sw_law, kappa1):
    m0 = jacobian_m0(sw_law, kappa1, SW_P, quad_points=8000)
    m1 = matrix_m1(sw_law, kappa1, SW_P, quad_points=8000)
    s = characteristic_speeds(m0, m1)
    s_oracle = oracles.quartic_speeds(m0, m1)
    assert np.all(np.isfinite(s.real))
    scale = np.max(np.abs(s))
    assert np.max(np.abs(np.sort_complex(s) - s_oracle)) < 1e-8 * scale


def test_sw_wave_is_hyperbolic(sw_law, kappa1):
    rep = modulation_report(sw_law, kappa1, SW_P)
    assert rep.verdict.tag == "Hyperbolic"
    assert rep.verdict.n_complex_pairs == 0
    assert np.all(np.abs(rep.speeds.imag) <= 1e-7 * np.max(np.abs(rep.speeds)))
    assert rep.m0.shape == rep.m1.shape == (4, 4)
    assert abs(rep.xi * rep.k - 1.0) < 1e-12
    assert rep.det_m0 != 0.0


def test_galilean_invariance_in_sigma(sw_law, kappa1):
    # sigma translates the frame without touching the material-frame
    # speeds: the spectrum is identical across sigma
    base = modulation_report(sw_law, kappa1, SW_P)
    for sigma in (1.0, 5.0):
        p = (SW_P[0], sigma, SW_P[2], SW_P[3])
        rep = modulation_report(sw_law, kappa1, p)
        diff = np.sort(rep.speeds.real) - np.sort(base.speeds.real)
        assert np.max(np.abs(diff)) < 1e-6
        assert rep.verdict.tag == base.verdict.tag


def test_classification_tags_on_synthetic_matrices():
    ident = np.eye(4)
    real_mix = np.diag([1.0, 2.0, 3.0, 4.0])
    assert classify(ident, real_mix).tag == "Hyperbolic"

    rot = np.eye(4)
    rot[2:, 2:] = [[0.0, -1.0], [1.0, 0.0]]   # complex pair i, -i
    assert classify(ident, rot).tag == "NonHyperbolic"

    singular = np.diag([1.0, 1.0, 1.0, 0.0])
    assert classify(singular, real_mix).tag == "NonEvolutionary"

    degenerate = np.diag([1.0, 1.0, 2.0, 2.0])  # coincident speeds
    assert classify(ident, degenerate).tag == "Indeterminate"


def test_fd_stencil_at_family_boundary(sw_law, kappa1):
    # trough so close to the saddle that no finite-difference step fits
    p = (1.0, 0.0, 0.9, 0.9 + 1e-7)
    with pytest.raises(BoundaryError):
        jacobian_m0(sw_law, kappa1, p, quad_points=2000)


def test_nonhyperbolic_vdw_wave(vdw_law, kappa1):
    rep = modulation_report(vdw_law, kappa1, VDW_P)
    assert rep.verdict.tag == "NonHyperbolic"
    assert rep.verdict.n_complex_pairs >= 1
