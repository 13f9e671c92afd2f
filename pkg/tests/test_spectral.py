import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abelmix.families import corpus
from abelmix.group_core import make_group, make_walk, transition_matrix
from abelmix.spectral import eigenvalue, spectral_gap, spectrum

from conftest import cyclic


def dense_eigs(walk):
    return np.sort(np.linalg.eigvalsh(transition_matrix(walk)))


def test_eigenvalue_examples(z4, klein):
    assert eigenvalue(z4, 0) == 1.0
    assert eigenvalue(z4, 2) == pytest.approx(-1 / 3, abs=1e-15)
    assert eigenvalue(klein, (1, 1)) == pytest.approx(-3 / 5, abs=1e-15)
    # cross-check against the explicit matrices
    assert np.isclose(dense_eigs(z4), -1 / 3, atol=1e-12).any()
    assert min(dense_eigs(klein)) == pytest.approx(-3 / 5, abs=1e-12)


def test_spectrum_z4(z4):
    spec = spectrum(z4)
    assert spec.values == pytest.approx([1, 1 / 3, -1 / 3, 1 / 3], abs=1e-15)
    assert spec.dominant_index == (1,)
    assert spec.dominant_value == pytest.approx(1 / 3, abs=1e-15)
    assert spectral_gap(spec) == pytest.approx(2 / 3, abs=1e-15)
    assert np.sort(spec.values) == pytest.approx(dense_eigs(z4), abs=1e-12)


def test_spectrum_z8(z8):
    spec = spectrum(z8)
    assert spec.dominant_index == (1,)
    assert spec.dominant_value == pytest.approx((1 + math.sqrt(2)) / 3, abs=1e-15)
    assert spectral_gap(spec) == pytest.approx(1 - (1 + math.sqrt(2)) / 3, abs=1e-15)
    assert spectral_gap(spec) == pytest.approx(0.19526, abs=1e-5)


def test_spectral_gap_klein(klein):
    spec = spectrum(klein)
    assert abs(spec.dominant_value) == pytest.approx(3 / 5)
    assert spectral_gap(spec) == pytest.approx(2 / 5, abs=1e-15)


def test_negative_dominant_is_signed_but_gap_uses_modulus():
    spec = spectrum(make_walk(make_group([2, 2, 2]), [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert spec.dominant_value == pytest.approx(-5 / 7)
    assert spec.gap == pytest.approx(2 / 7)


SMALL = [w for w in corpus(128)]


@pytest.mark.parametrize("walk", SMALL, ids=lambda w: w.label())
def test_spectrum_matches_dense_eigendecomposition(walk):
    spec = spectrum(walk)
    assert np.abs(np.sort(spec.values) - dense_eigs(walk)).max() <= 1e-10


@pytest.mark.parametrize("walk", corpus(4096), ids=lambda w: w.label())
def test_spectrum_invariants(walk):
    spec = spectrum(walk)
    r = walk.r
    assert spec.values[0] == 1.0
    assert spec.values.min() >= (1 - 2 * r) / (2 * r + 1) - 1e-12
    assert spec.gap > 0
    assert np.abs(spec.values[1:]).max() < 1
    neg = [(-walk.group.from_index(i)).index for i in range(walk.group.order)]
    assert np.array_equal(spec.values, spec.values[neg])  # bitwise


def test_dominant_tie_break_is_deterministic():
    w = cyclic(12, 1, 5, 7)
    first = spectrum(w).dominant_flat
    assert all(spectrum(w).dominant_flat == first for _ in range(5))
    mags = np.abs(spectrum(w).values[1:])
    tied = np.flatnonzero(np.isclose(mags, mags.max(), rtol=1e-14)) + 1
    assert first == tied.min()


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 60), st.lists(st.integers(1, 59), min_size=1, max_size=3))
def test_eigenvalue_scalar_matches_spectrum(n, gens):
    gens = [1] + [g % n for g in gens]
    w = cyclic(n, *gens)
    spec = spectrum(w)
    for k in range(n):
        assert eigenvalue(w, k) == spec.values[k] or k == 0
