"""State parameterization: generators, unitaries, densities, derivatives."""

import numpy as np
import pytest
from numpy.random import Generator, Philox
from scipy.linalg import expm

from bures.errors import DegenerateSpectrum, NonFiniteInput, OutOfDomain
from bures.state_space import (
    COORD_NAMES,
    DOMAIN_BOUNDS,
    ZETA1_MAX,
    ZETA2_MAX,
    ParameterPoint,
    bloch_density2,
    bloch_spectral_frame,
    check_spectrum_guard,
    density,
    density_partials,
    eigenvalues_from_spherical,
    euler_unitary,
    gell_mann_basis,
    spectral_frame,
    spectrum_from_spherical,
    spherical_from_eigenvalues,
)


def _random_points(n, seed, margin=0.05):
    gen = Generator(Philox(key=seed))
    lo = np.array([DOMAIN_BOUNDS[name][0] for name in COORD_NAMES])
    hi = np.array([DOMAIN_BOUNDS[name][1] for name in COORD_NAMES])
    u = gen.random((n, 8))
    return lo + (margin + (1 - 2 * margin) * u) * (hi - lo)


def test_gell_mann_algebra():
    L = gell_mann_basis()
    assert L.shape == (8, 3, 3)
    for i in range(8):
        assert np.allclose(L[i], L[i].conj().T)
        assert abs(np.trace(L[i])) < 1e-15
        for j in range(8):
            expect = 2.0 if i == j else 0.0
            assert abs(np.trace(L[i] @ L[j]) - expect) < 1e-14


def test_euler_unitary_matches_exponential_product():
    L = gell_mann_basis()
    for row in _random_points(5, 11):
        p = ParameterPoint.from_array(row)
        factors = (
            expm(1j * L[2] * p.alpha),
            expm(1j * L[1] * p.beta),
            expm(1j * L[2] * (p.tau - p.a)),
            expm(1j * L[4] * p.theta),
            expm(1j * L[2] * p.a),
            expm(1j * L[1] * p.b),
        )
        expected = np.linalg.multi_dot(factors)
        got = euler_unitary(p)
        assert np.max(np.abs(got - expected)) < 1e-13
        assert np.max(np.abs(got @ got.conj().T - np.eye(3))) < 1e-14
        assert abs(np.linalg.det(got) - 1.0) < 1e-13


def test_density_properties():
    for row in _random_points(5, 12):
        p = ParameterPoint.from_array(row)
        state = density(p)
        rho = state.rho
        assert abs(np.trace(rho).real - 1.0) < 1e-14
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-15
        eig = np.sort(np.linalg.eigvalsh(rho))[::-1]
        expect = np.sort(state.spectrum.as_array())[::-1]
        assert np.max(np.abs(eig - expect)) < 1e-14


def test_density_partials_match_finite_differences():
    h = 1e-6
    for row in _random_points(3, 13):
        p = ParameterPoint.from_array(row)
        analytic = density_partials(p)
        for k in range(8):
            plus = row.copy()
            minus = row.copy()
            plus[k] += h
            minus[k] -= h
            num = (
                density(ParameterPoint.from_array(plus)).rho
                - density(ParameterPoint.from_array(minus)).rho
            ) / (2 * h)
            assert np.max(np.abs(analytic[k] - num)) < 5e-9
            assert np.max(np.abs(analytic[k] - analytic[k].conj().T)) < 1e-14
            assert abs(np.trace(analytic[k])) < 1e-14


def test_spectral_frame_consistency():
    pts = _random_points(6, 14)
    lam, W, U = spectral_frame(pts)
    assert lam.shape == (6, 3) and W.shape == (6, 8, 3, 3)
    assert np.allclose(lam.sum(axis=1), 1.0)
    # W_x is U* (d rho/dx) U, so it must be Hermitian and traceless.
    assert np.max(np.abs(W - np.conj(np.swapaxes(W, -1, -2)))) < 1e-13
    assert np.max(np.abs(np.trace(W, axis1=-2, axis2=-1))) < 1e-13
    for i, row in enumerate(pts):
        p = ParameterPoint.from_array(row)
        partials = density_partials(p)
        back = np.einsum("ij,xjk,kl->xil", U[i], W[i], np.conj(U[i].T))
        assert np.max(np.abs(back - partials)) < 1e-13


def test_eigenvalue_map_and_ordering():
    gen = Generator(Philox(key=15))
    z = gen.random((200, 2)) * np.array([ZETA1_MAX, ZETA2_MAX])
    lam = eigenvalues_from_spherical(z)
    assert np.allclose(lam.sum(axis=1), 1.0)
    # On the spectral box the first eigenvalue stays at or above the mixed
    # value and the last two keep their order (zeta2 <= pi/4).
    assert np.all(lam[:, 0] >= 1.0 / 3.0 - 1e-15)
    assert np.all(lam[:, 1] >= lam[:, 2] - 1e-15)


def test_spherical_inverse_roundtrip():
    s = spectrum_from_spherical(0.4, 0.3)
    z1, z2 = spherical_from_eigenvalues(s.lambda1, s.lambda2, s.lambda3)
    assert abs(z1 - 0.4) < 1e-12 and abs(z2 - 0.3) < 1e-12
    with pytest.raises(OutOfDomain):
        spherical_from_eigenvalues(0.2, 0.3, 0.5)


def test_domain_errors_name_coordinate():
    with pytest.raises(OutOfDomain, match="zeta1"):
        spectrum_from_spherical(2.0, 0.3)
    with pytest.raises(OutOfDomain, match="beta"):
        density(ParameterPoint(0.1, 0.1, 0.1, 3.0, 0.1, 0.1, 0.3, 0.3))
    with pytest.raises(NonFiniteInput, match="tau"):
        ParameterPoint(0.1, float("nan"), 0.1, 0.1, 0.1, 0.1, 0.3, 0.3)


def test_spectrum_guard():
    check_spectrum_guard(np.array([0.5, 0.3, 0.2]))
    with pytest.raises(DegenerateSpectrum):
        check_spectrum_guard(np.array([0.5, 0.25, 0.25]))
    with pytest.raises(DegenerateSpectrum):
        check_spectrum_guard(np.array([1.0 - 1e-10, 1e-10, 0.0]))


def test_bloch_density_and_frame():
    rho, partials = bloch_density2(0.5, 0.7, 1.1)
    assert abs(np.trace(rho).real - 1.0) < 1e-15
    h = 1e-7
    rp, _ = bloch_density2(0.5 + h, 0.7, 1.1)
    rm, _ = bloch_density2(0.5 - h, 0.7, 1.1)
    assert np.max(np.abs((rp - rm) / (2 * h) - partials[0])) < 1e-8

    pts = np.array([[0.5, 0.7, 1.1], [0.3, 1.9, 4.0]])
    lam, W = bloch_spectral_frame(pts)
    assert np.allclose(lam, np.stack([(1 + pts[:, 0]) / 2, (1 - pts[:, 0]) / 2], axis=1))
    assert np.max(np.abs(W - np.conj(np.swapaxes(W, -1, -2)))) < 1e-14
    with pytest.raises(OutOfDomain):
        bloch_density2(1.5, 0.7, 1.1)
