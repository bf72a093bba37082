import numpy as np
import pytest
from hypothesis import given, strategies as st

from ringshaper.errors import ConfigurationError
from ringshaper.grids import (DesignParams, OmegaGrid, SGrid, build_grids,
                              omega_of_z, z_of_omega)

positive = st.floats(1e-3, 1e7, allow_nan=False, allow_infinity=False)


def test_omega_of_z_example():
    assert omega_of_z(1000.0, 9.5e6) == 4750.0
    assert z_of_omega(4750.0, 9.5e6) == 1000.0


@given(z=positive, k=positive)
def test_roundtrip(z, k):
    assert z_of_omega(omega_of_z(z, k), k) == pytest.approx(z, rel=1e-14)


@given(z=positive, k=positive, factor=st.floats(1.001, 100))
def test_omega_decreases_with_z(z, k, factor):
    assert omega_of_z(factor * z, k) < omega_of_z(z, k)


@pytest.mark.parametrize("z", [0.0, -1.0])
def test_nonpositive_z_rejected(z):
    with pytest.raises(ValueError):
        omega_of_z(z, 1.0)


def test_grids_cover_supports():
    params = DesignParams(k=9.5e6, r0=0.3, W0=0.42, zd=1000.0, WT=263.21)
    sgrid, ogrid = build_grids(params, 64, 32)
    assert sgrid.s_min == pytest.approx(0.0081, rel=1e-13)
    assert sgrid.s_max == pytest.approx(0.2601, rel=1e-13)
    assert ogrid.omega_min == pytest.approx(9.5e6 / (2000 + 263.21), rel=1e-15)
    assert ogrid.omega_max == pytest.approx(9.5e6 / (2000 - 263.21), rel=1e-15)
    assert sgrid.s[-1] == pytest.approx(sgrid.s_max, rel=1e-15)
    assert ogrid.omega[-1] == pytest.approx(ogrid.omega_max, rel=1e-15)
    assert sgrid.weights.sum() == pytest.approx(sgrid.s_max - sgrid.s_min, rel=1e-14)


@pytest.mark.parametrize("kwargs", [
    dict(W0=0.6),          # W0 = 2 r0
    dict(WT=2000.0),       # WT = 2 zd
    dict(k=0.0),
    dict(E0=-1.0),
    dict(zd=float("inf")),
])
def test_invalid_params(kwargs):
    base = dict(k=9.5e6, r0=0.3, W0=0.42, zd=1000.0, WT=263.21)
    with pytest.raises(ConfigurationError):
        DesignParams(**{**base, **kwargs})


def test_too_few_samples():
    params = DesignParams(k=9.5e6, r0=0.3, W0=0.42, zd=1000.0, WT=263.21)
    with pytest.raises(ConfigurationError):
        build_grids(params, 8, 64)


def test_k_bar():
    params = DesignParams(k=9.5e6, r0=0.3, W0=0.42, zd=1000.0, WT=263.21)
    assert params.k_bar == pytest.approx(855.0, rel=1e-14)


def test_full_band_period():
    sgrid = SGrid(0.01, 0.02, 101)
    band = OmegaGrid.full_band(sgrid, 500.0)
    assert band.periodic and band.n == 101
    assert band.d_omega * sgrid.ds * band.n == pytest.approx(2 * np.pi, rel=1e-14)
    assert band.weights.sum() == pytest.approx(2 * np.pi / sgrid.ds, rel=1e-14)


def test_widened_stays_positive():
    grid = OmegaGrid(1.0, 3.0, 64).widened(10.0)
    assert grid.omega_min > 0
    assert grid.omega_max == pytest.approx(12.0)
