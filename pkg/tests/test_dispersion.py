from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vring.dispersion import coupling_coefficient, dispersion, dispersion_table, inverse_coupling
from vring.errors import DomainError


def test_examples():
    assert dispersion(1) == 0.0
    assert dispersion(2) == pytest.approx(3.4641016, abs=1e-7)
    assert dispersion(-3) == pytest.approx(-8.4852814, abs=1e-7)
    assert coupling_coefficient(0) == 1.0
    assert coupling_coefficient(1) == -1.0
    assert coupling_coefficient(2) == pytest.approx(4 * np.sqrt(3) - 7, rel=1e-14)


def test_zero_modes():
    assert dispersion(0) == 0.0
    assert dispersion(-1) == 0.0


def test_vectorized():
    n = np.arange(-5, 6)
    w = dispersion(n)
    assert w.shape == n.shape
    np.testing.assert_allclose(w, -w[::-1])


def test_negative_coupling_index_rejected():
    with pytest.raises(DomainError):
        coupling_coefficient(-2)


@given(st.integers(min_value=2, max_value=10_000))
def test_coupling_matches_expanded_form(n):
    # c(n) = 2[omega - n^2 + 1/2], checked through the well-conditioned identity c * (1/c) = 1
    c = coupling_coefficient(n)
    assert -1.0 < c < 0.0
    assert c * inverse_coupling(n) == pytest.approx(1.0, rel=1e-14)


@given(st.integers(min_value=2, max_value=200))
def test_dispersion_oddness_and_growth(n):
    assert dispersion(-n) == -dispersion(n)
    assert n * n - 1 < dispersion(n) < n * n


def test_table():
    t = dispersion_table(3)
    assert t.shape == (4, 3)
    np.testing.assert_array_equal(t[:, 0], [0, 1, 2, 3])
    assert t[2, 2] == pytest.approx(-0.0717968, abs=1e-7)
