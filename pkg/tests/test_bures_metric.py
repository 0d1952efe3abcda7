"""Metric assembly against the closed-form oracles."""

import numpy as np
import pytest
from numpy.random import Generator, Philox

import bures.bures_metric as bm
from bures.errors import SingularMetric
from bures.bures_metric import (
    bloch_metric_batch,
    closed_form_AB,
    closed_form_entries,
    closed_form_volume_batch,
    metric,
    metric_batch,
    volume_element,
    volume_element_batch,
)
from bures.state_space import (
    COORD_NAMES,
    DOMAIN_BOUNDS,
    ParameterPoint,
    Spectrum,
    eigenvalues_from_spherical,
    spectrum_gaps,
)

_LO = np.array([DOMAIN_BOUNDS[n][0] for n in COORD_NAMES])
_HI = np.array([DOMAIN_BOUNDS[n][1] for n in COORD_NAMES])


def _points(n, seed, margin=0.05, floor=0.02):
    gen = Generator(Philox(key=seed))
    rows = []
    have = 0
    while have < n:
        u = gen.random((2 * n, 8))
        pts = _LO + (margin + (1 - 2 * margin) * u) * (_HI - _LO)
        lam = eigenvalues_from_spherical(pts[:, 6:8])
        keep = (lam.min(axis=-1) >= floor) & (spectrum_gaps(lam) >= floor)
        rows.append(pts[keep])
        have += int(keep.sum())
    return np.concatenate(rows)[:n]


def test_positive_definite_at_many_points():
    pts = _points(10000, 21, margin=0.01, floor=1e-4)
    g = metric_batch(pts, min_eigenvalue=0.0, min_gap=0.0)
    eig = np.linalg.eigvalsh(g)
    assert float(eig[:, 0].min()) > 0.0
    assert np.max(np.abs(g - np.swapaxes(g, 1, 2))) < 1e-15


def test_exact_block_orthogonality():
    g = metric_batch(_points(50, 22))
    assert np.max(np.abs(g[:, :6, 6:])) == 0.0


def test_closed_form_entries_match_assembly():
    for row in _points(50, 23):
        p = ParameterPoint.from_array(row)
        m = metric(p)
        cf = closed_form_entries(p)
        assert abs(m.g[5, 5] - cf.g_theta_theta) < 1e-10 * abs(cf.g_theta_theta)
        assert abs(m.g_inv[3, 3] - cf.ginv_beta_beta) < 1e-8 * abs(cf.ginv_beta_beta)
        assert abs(m.g_inv[0, 0] - cf.ginv_alpha_alpha) < 1e-8 * abs(cf.ginv_alpha_alpha)
        # The alpha entry is tied to the beta entry by an exact trig factor.
        factor = 1.0 / (np.sin(p.beta) ** 2 * np.cos(p.beta) ** 2) / 4.0
        assert abs(cf.ginv_alpha_alpha - cf.ginv_beta_beta * factor) < 1e-12 * abs(
            cf.ginv_alpha_alpha
        )


def test_closed_form_AB_values():
    mixed = Spectrum.from_lambdas(1 / 3, 1 / 3, 1 / 3)
    a0, b0 = closed_form_AB(mixed)
    assert abs(a0) < 1e-15 and abs(b0) < 1e-15

    s = Spectrum.from_lambdas(0.5, 0.3, 0.2)
    a, b = closed_form_AB(s)
    l1, l2 = 0.5, 0.3
    a_direct = 3 - 7 * l1 + 4 * l1 * l1 + 7 * (l1 - 1) * l2 + 4 * l2 * l2
    b_direct = (
        4 * l1**3
        + l1 * l1 * (5 * l2 - 9)
        + l1 * (l2 - 1) * (5 * l2 - 7)
        + (l2 - 1) * (2 + l2 * (4 * l2 - 5))
    )
    assert abs(a - a_direct) < 1e-15
    assert abs(b - b_direct) < 1e-15

    swapped = Spectrum.from_lambdas(0.3, 0.5, 0.2)
    a_s, b_s = closed_form_AB(swapped)
    assert abs(a - a_s) < 1e-15 and abs(b - b_s) < 1e-15


def test_volume_element_matches_closed_form():
    pts = _points(100, 24)
    assembled = volume_element_batch(pts)
    closed = closed_form_volume_batch(pts)
    assert np.max(np.abs(assembled - closed) / closed) < 1e-10


def test_volume_vanishes_toward_degeneracy():
    base = _points(1, 25)[0]
    values = []
    for gap_scale in (1e-2, 1e-3, 1e-4):
        row = base.copy()
        row[6] = 0.9553  # near the fully mixed corner
        row[7] = DOMAIN_BOUNDS["zeta2"][1] - gap_scale
        values.append(float(closed_form_volume_batch(row[None, :])[0]))
    assert values[0] > values[1] > values[2]
    assert values[2] < 1e-4 * values[0]


def test_calibration_mutation_breaks_volume_oracle(monkeypatch):
    p = ParameterPoint.from_array(_points(1, 26)[0])
    baseline = abs(volume_element(p) - bm.closed_form_volume(p))
    assert baseline < 1e-12
    monkeypatch.setattr(bm, "CALIBRATION", 2.0 * bm.CALIBRATION)
    mutated = volume_element(p)
    assert abs(mutated - bm.closed_form_volume(p)) > 1.0e1 * max(baseline, 1e-12)
    # Doubling the calibration scales sqrt(det g) by 2**4 in eight dimensions.
    assert abs(mutated / bm.closed_form_volume(p) - 16.0) < 1e-9


def test_blockwise_inverse_and_conditioning():
    p = ParameterPoint.from_array(_points(1, 27)[0])
    m = metric(p)
    assert np.max(np.abs(m.g @ m.g_inv - np.eye(8))) < 1e-10 * np.linalg.cond(m.g)
    assert np.max(np.abs(m.g_inv[:6, 6:])) == 0.0
    with pytest.raises(SingularMetric):
        metric(p, cond_limit=1.0)


def test_bloch_metric_closed_form():
    pts = np.array([[0.4, 0.9, 2.0], [0.7, 1.3, 5.1]])
    g = bloch_metric_batch(pts)
    for row, (r, th, _) in zip(g, pts):
        expect = np.diag([
            1.0 / (4.0 * (1.0 - r * r)),
            r * r / 4.0,
            r * r * np.sin(th) ** 2 / 4.0,
        ])
        assert np.max(np.abs(row - expect)) < 1e-14
