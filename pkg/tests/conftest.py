"""Shared fixtures: pressure laws, capillarities and standard wave parameters."""

import pytest

from ekwhitham import (
    OrbitSpec,
    constant_capillarity,
    shallow_water,
    van_der_waals,
)

# Calibrated so that at j = 0.0258 the profile potential has critical
# points at v = 1.90285 and v = 32.49447 on the same level structure.
# Frozen from calibrate_vdw_gamma(0.0258, 1.90285, 32.49447).
GAMMA_HAT = 0.27475439355576564

# Shallow-water orbit averages (k, <V>, <V**2>) at j = 1, v_inf = 0.9,
# frozen from Richardson-extrapolated quadrature at 20001/40001 nodes.
SW_FIXTURES = {
    1.0: (0.10364448809052663, 1.6218133376579593, 2.8999481191795424),
    1.2: (0.11988086930877148, 1.7450506430958008, 3.216066003716576),
    1.5: (0.12851971360663483, 1.8165393841783715, 3.352492661702656),
}


@pytest.fixture(scope="session")
def sw_law():
    return shallow_water()


@pytest.fixture(scope="session")
def vdw_law():
    return van_der_waals(GAMMA_HAT)


@pytest.fixture(scope="session")
def kappa1():
    return constant_capillarity(1.0)


@pytest.fixture(scope="session")
def sw_specs(sw_law, kappa1):
    return [OrbitSpec(j=1.0, sigma=0.0, v_inf=0.9, v_star=v_star,
                      law=sw_law, kappa=kappa1)
            for v_star in sorted(SW_FIXTURES)]
