from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vring._spectral import grid
from vring.errors import ConstraintViolation, DomainError, ResolutionError
from vring.modes import (
    ModeSpectrum,
    coupling_residual,
    enforce_coupling,
    modes_from_samples,
    random_spectrum,
    samples_from_modes,
)


def test_single_negative_mode():
    xi = grid(16)
    spec = modes_from_samples(np.exp(-1j * xi))
    assert spec[-1] == pytest.approx(1.0, abs=1e-14)
    others = np.delete(spec.coeff, spec.n_max - 1)
    assert np.max(np.abs(others)) < 1e-14


def test_zero_samples():
    spec = modes_from_samples(np.zeros(16))
    assert np.all(spec.coeff == 0)


def test_cosine_in_z():
    xi = grid(32)
    spec = modes_from_samples(1j * np.cos(xi), n_max=4)
    assert spec[-1] == pytest.approx(0.5j, abs=1e-14)
    assert spec[1] == pytest.approx(0.5j, abs=1e-14)


def test_synthesis_single_mode():
    spec = ModeSpectrum.from_dict({-1: 1.0})
    np.testing.assert_allclose(samples_from_modes(spec, 8), np.exp(-1j * grid(8)), atol=1e-15)


def test_synthesis_empty():
    assert np.all(samples_from_modes(ModeSpectrum.zeros(3), 16) == 0)


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
def test_round_trip(n_max, seed):
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal(2 * n_max + 1) + 1j * rng.standard_normal(2 * n_max + 1)
    spec = ModeSpectrum(coeff)
    back = modes_from_samples(samples_from_modes(spec, 4 * n_max + 4), n_max)
    np.testing.assert_allclose(back.coeff, spec.coeff, atol=1e-12)


def test_resolution_guard():
    with pytest.raises(ResolutionError):
        modes_from_samples(np.zeros(8), n_max=4)


def test_coupling_examples():
    spec = enforce_coupling(ModeSpectrum.from_dict({-1: 1.0}))
    assert spec[1] == -1.0
    spec = enforce_coupling(ModeSpectrum.from_dict({-2: 1.0}))
    assert spec[2] == pytest.approx(-13.9282032, abs=1e-7)
    spec = enforce_coupling(ModeSpectrum.from_dict({0: 2.5}))
    assert spec[0] == 2.5


def test_complex_mean_rejected():
    with pytest.raises(ConstraintViolation):
        enforce_coupling(ModeSpectrum.from_dict({0: 1 + 1e-6j}))


def test_coupling_overwrites_positive_modes():
    spec = ModeSpectrum.from_dict({-2: 1.0, 2: 5.0})
    assert coupling_residual(spec) > 0.1
    assert coupling_residual(enforce_coupling(spec)) == 0.0


@given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=2**32 - 1))
def test_random_spectrum_is_coupled(n_max, seed):
    spec = random_spectrum(np.random.default_rng(seed), n_max)
    assert spec.n_max == n_max
    assert coupling_residual(spec) <= 1e-15
    assert spec[0].imag == 0.0


def test_independent_round_trip():
    spec = ModeSpectrum.from_independent(0.3, [1j, 2.0])
    j0, neg = spec.independent()
    assert j0 == 0.3
    np.testing.assert_array_equal(neg, [1j, 2.0])


def test_immutable_and_padding():
    spec = ModeSpectrum.from_dict({-1: 1.0})
    with pytest.raises(ValueError):
        spec.coeff[0] = 1.0
    assert spec[5] == 0
    assert spec.padded(3)[-1] == 1.0


def test_even_length_rejected():
    with pytest.raises(DomainError):
        ModeSpectrum(np.zeros(4))
