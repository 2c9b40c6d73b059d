import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blipfield import Lattice, RepresentationError
from blipfield import transforms
from blipfield.transforms import ChannelAmplitude


def _rand(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@pytest.mark.parametrize("s", [1, -1])
def test_forward_matches_direct_sum(small, rng, s):
    psi = _rand(rng, small.n)
    x, k = small.xs, small.ks
    direct = small.dx / np.sqrt(2 * np.pi) * np.exp(-1j * s * np.outer(k, x)) @ psi
    np.testing.assert_allclose(transforms.forward(psi, s, small), direct, atol=1e-12)
    np.testing.assert_allclose(transforms.brute_force_forward(psi, s, small), direct, atol=1e-12)


@pytest.mark.parametrize("s", [1, -1])
def test_inverse_matches_direct_sum(small, rng, s):
    phi = _rand(rng, small.n)
    x, k = small.xs, small.ks
    direct = small.dk / np.sqrt(2 * np.pi) * np.exp(1j * s * np.outer(x, k)) @ phi
    np.testing.assert_allclose(transforms.inverse(phi, s, small), direct, atol=1e-12)


def test_single_site_has_flat_spectrum(small):
    psi = np.zeros(small.n, complex)
    j = small.n // 2  # x = 0
    psi[j] = 1.0
    spec = transforms.forward(psi, 1, small)
    np.testing.assert_allclose(spec, small.dx / np.sqrt(2 * np.pi), atol=1e-15)


def test_plane_wave_maps_to_single_mode(small):
    m = 5
    k0 = small.ks[small.zero_index() + m]
    for s in (1, -1):
        psi = np.exp(1j * s * k0 * small.xs)
        spec = transforms.forward(psi, s, small)
        peak = np.argmax(np.abs(spec))
        assert small.ks[peak] == pytest.approx(k0)
        others = np.delete(spec, peak)
        assert np.abs(others).max() < 1e-12


def test_direction_conjugacy(small, rng):
    psi = _rand(rng, small.n)
    plus = transforms.forward(psi, 1, small)
    minus = transforms.forward(psi, -1, small)
    np.testing.assert_allclose(minus, transforms.reverse_k(plus), atol=1e-14)
    np.testing.assert_allclose(transforms.forward(np.conj(psi), -1, small),
                               np.conj(plus), atol=1e-14)


def test_reverse_k_is_involution(small):
    v = np.arange(small.n, dtype=float)
    r = transforms.reverse_k(v)
    assert r[0] == v[0]
    assert r[small.zero_index()] == v[small.zero_index()]
    np.testing.assert_array_equal(transforms.reverse_k(r), v)


def test_rep_mismatch_raises(small):
    amp = ChannelAmplitude("momentum", np.zeros(small.n))
    with pytest.raises(RepresentationError):
        transforms.to_momentum(amp, 1, small)
    with pytest.raises(RepresentationError):
        transforms.to_position(ChannelAmplitude("position", np.zeros(small.n)), 1, small)
    with pytest.raises(ValueError):
        transforms.forward(np.zeros(small.n), 0, small)


def test_evaluate_spectrum_on_grid_matches_forward(small, rng):
    psi = _rand(rng, small.n)
    for s in (1, -1):
        got = transforms.evaluate_spectrum(psi, s, small, small.ks[0], small.dk)
        np.testing.assert_allclose(got, transforms.forward(psi, s, small), atol=1e-11)


def test_evaluate_spectrum_off_grid_matches_direct_sum(small, rng):
    psi = _rand(rng, small.n)
    q = 0.37 + 0.11 * np.arange(small.n)
    for s in (1, -1):
        direct = small.dx / np.sqrt(2 * np.pi) * np.exp(-1j * s * np.outer(q, small.xs)) @ psi
        got = transforms.evaluate_spectrum(psi, s, small, q[0], q[1] - q[0])
        np.testing.assert_allclose(got, direct, atol=1e-10)


def test_evaluate_position_on_grid_matches_inverse(small, rng):
    phi = _rand(rng, small.n)
    for s in (1, -1):
        got = transforms.evaluate_position(phi, s, small, small.xs[0], small.dx)
        np.testing.assert_allclose(got, transforms.inverse(phi, s, small), atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=4, max_value=10), st.floats(min_value=0.5, max_value=500.0),
       st.integers(min_value=0, max_value=2**31 - 1), st.sampled_from([1, -1]))
def test_round_trip_and_parseval_property(log2n, length, seed, s):
    lat = Lattice(2 ** log2n, length)
    rng = np.random.default_rng(seed)
    psi = _rand(rng, lat.n)
    spec = transforms.forward(psi, s, lat)
    back = transforms.inverse(spec, s, lat)
    scale = np.abs(psi).max()
    assert np.abs(back - psi).max() <= 1e-12 * scale
    nx = lat.dx * np.sum(np.abs(psi) ** 2)
    nk = lat.dk * np.sum(np.abs(spec) ** 2)
    assert abs(nx - nk) <= 1e-12 * nx
