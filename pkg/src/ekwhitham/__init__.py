"""Periodic traveling waves of capillary fluids and their modulation systems.

The package constructs periodic traveling-wave solutions of the
Euler-Korteweg system in mass-Lagrangian form by quadrature, averages
them into an effective thermodynamic description, assembles the
quasilinear system governing slow modulations of the wave parameters,
and classifies each wave by the type of that system (hyperbolic waves
are modulationally stable).  A small-amplitude module covers the scalar
dispersive model sharing the same pressure law.
"""

from .errors import (BoundaryError, BracketError, ConfigError,
                     ConsistencyError, DegenerateOrbitError, DomainError,
                     EKWhithamError, InvalidParameterError, NumericalError,
                     ResonanceError, VacuumError)
from .laws import (Capillarity, PressureLaw, calibrate_vdw_gamma,
                   classify_vdw, constant_capillarity, custom_capillarity,
                   custom_law, eval_pressure, potential_f, shallow_water,
                   van_der_waals)
from .modulation import (ModulationReport, Verdict, characteristic_speeds,
                         classify, flux_vector, jacobian_m0,
                         m1_from_flux_jacobian, matrix_m1, modulation_report,
                         state_vector)
from .orbit import (CriticalPoint, Orbit, OrbitSpec, PhasePortrait,
                    build_orbit, classify_portrait, critical_points,
                    enclosing_center, find_peak, integration_constants,
                    moment, potential, profile_arrays, regularized_phi,
                    wavenumber)
from .smallamp import (DispersionData, GKdVLaw, cubic_law, dispersion_data,
                       euler_hyperbolic_at_mean, from_pressure_law,
                       gkdv_omega0, gkdv_omega2, quartic_law,
                       sideband_condition)
from .sweep import (Numerics, SweepRow, ThresholdPoint, Thresholds,
                    evaluate_point, family_grid, find_family_boundary,
                    find_thresholds, find_verdict_boundary,
                    has_nonhyperbolic_row, run_sweep)
from .thermo import (ConvexityReport, EulerianState, ThermoState,
                     convexity_check, eulerian_theta, gibbs_residual,
                     lagrangian_thermo, to_eulerian)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
