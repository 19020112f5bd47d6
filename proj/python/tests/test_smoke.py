import math

import numpy as np
import pytest

import dyadic


def test_version():
    assert dyadic.__version__.count(".") == 2


def test_chi_and_spectrum_of_a0():
    assert dyadic.char_poly_A0(1.0) == 0.5
    kappa, w = dyadic.eig_A0()
    assert 0.75 < kappa < 1.0
    assert 0.0 < w.real < 0.125 and w.imag > 0.0
    assert abs(kappa + 2.0 * w.real - 1.0) <= 1e-12


def test_flux_vanishes():
    rng = np.random.default_rng(5)
    u = rng.normal(size=9)
    assert abs(dyadic.nonlinear_energy_flux(list(u))) <= 1e-12 * 2.0 ** (2.5 * 10) * np.sum(np.abs(u)) ** 3


def test_single_shell_closed_form():
    t, u, err = dyadic.solve([0.0], forcing=[1.0], t_end=1.0)
    assert u.shape == (t.size, 1)
    assert np.max(np.abs(u[:, 0] - 0.25 * (1.0 - np.exp(-4.0 * t)))) <= 1e-9
    assert err >= 0.0


def test_callable_forcing():
    t, u, _ = dyadic.solve([0.0, 0.0], forcing=lambda n, s: 1.0 if n == 1 else 0.0, t_end=0.5, beta=2.0)
    t2, u2, _ = dyadic.solve([0.0, 0.0], forcing=[1.0, 0.0], t_end=0.5, beta=2.0)
    assert np.array_equal(t, t2)
    assert np.max(np.abs(u - u2)) == 0.0


def test_spectrum_search():
    r = dyadic.spectrum()
    assert r["pass"] is True
    assert math.isclose(r["q"], 1.25**17, rel_tol=1e-14)


def test_certificate_passes():
    c = dyadic.certify(shells=6)
    assert c["pass"] is True
    assert c["distinctness"]["value"] > 0.0
    assert c["distinctness"]["value"] == pytest.approx(4.0 * c["distinctness"]["g_sup_sq"], rel=1e-15)


def test_uniqueness_regime():
    r = dyadic.uniqueness(shells=[6, 8])
    assert r["max_pair_distance"] <= 1e-5


def test_errors_carry_their_kind():
    with pytest.raises(dyadic.DyadicError) as info:
        dyadic.certify(beta=2.0)
    assert dyadic.error_kind(info.value) == "domain"
    with pytest.raises(dyadic.DyadicError) as info:
        dyadic.eig_A0(lambda_=0.5)
    assert dyadic.error_kind(info.value) == "domain"
