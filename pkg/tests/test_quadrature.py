"""Integration layer: sampling determinism, estimator exactness, CSV shape."""

import numpy as np
import pytest

from bures.errors import DegenerateSpectrum, RetryExhausted
from bures.quadrature import (
    A_FIXED,
    ACTIVE_COORDS,
    ALPHA_FIXED,
    FIELD_NAMES,
    QuadratureSpec,
    V8,
    admissible_point,
    integrate,
    invariant_table,
    lattice_points,
    sample_point,
    table_csv,
    ym_actions,
)
from bures.state_space import COORD_NAMES, DOMAIN_BOUNDS


def test_box_volume_constant():
    closed = np.pi**7 / 32.0 * np.arccos(3.0**-0.5)
    assert V8 == pytest.approx(closed, rel=1e-14)
    assert 90.16 < V8 < 90.17


def test_sample_point_determinism_and_bounds():
    a = sample_point(42, 7, 0).as_array()
    b = sample_point(42, 7, 0).as_array()
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_point(42, 7, 1).as_array())
    assert not np.array_equal(a, sample_point(42, 8, 0).as_array())
    assert not np.array_equal(a, sample_point(43, 7, 0).as_array())
    for index in range(200):
        p = sample_point(0, index)
        assert p.alpha == ALPHA_FIXED
        assert p.a == A_FIXED
        for name in ACTIVE_COORDS:
            lo, hi = DOMAIN_BOUNDS[name]
            assert lo <= getattr(p, name) <= hi


def test_lattice_points_are_midpoints():
    pts = lattice_points(2)
    assert pts.shape == (64, 8)
    assert np.all(pts[:, COORD_NAMES.index("alpha")] == ALPHA_FIXED)
    assert np.all(pts[:, COORD_NAMES.index("a")] == A_FIXED)
    for name in ACTIVE_COORDS:
        lo, hi = DOMAIN_BOUNDS[name]
        col = np.unique(pts[:, COORD_NAMES.index(name)])
        expected = np.array([lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)])
        assert np.allclose(col, expected, rtol=0.0, atol=1e-15)


def test_constant_integrand_gives_exact_volume():
    mc, = integrate(QuadratureSpec(method="mc", n_samples=500, seed=3),
                    lambda p: [1.0])
    assert mc.value == V8
    assert mc.stderr == 0.0
    assert mc.n_evaluated == 500
    lat, = integrate(QuadratureSpec(method="lattice", nodes_per_dim=2, seed=0),
                     lambda p: [1.0])
    assert lat.value == V8
    assert lat.stderr == 0.0
    assert lat.n_evaluated == 64
    assert lat.n_rejected == 0


def test_linear_integrand_within_five_sigma():
    est, = integrate(QuadratureSpec(method="mc", n_samples=4000, seed=2),
                     lambda p: [p.tau])
    target = V8 * np.pi / 2.0
    assert est.stderr > 0.0
    assert abs(est.value - target) < 5.0 * est.stderr


def test_mc_redraws_on_numerical_domain_errors():
    def flaky(p):
        if p.tau < 0.3:
            raise DegenerateSpectrum("synthetic rejection")
        return [1.0]

    est, = integrate(QuadratureSpec(method="mc", n_samples=300, seed=9), flaky)
    assert est.n_evaluated == 300
    assert est.n_rejected > 0
    assert est.value == V8  # redraws refill every index with an accepted 1.0


def test_retry_exhausted_on_infeasible_guard():
    # lambda_min >= 0.2 plus both gaps >= 0.2 forces the eigenvalue sum
    # above one, so every draw fails the screen and the retries run out.
    spec = QuadratureSpec(method="mc", n_samples=2, seed=0, threshold=0.2)
    with pytest.raises(RetryExhausted):
        integrate(spec, lambda p: [1.0])
    with pytest.raises(RetryExhausted):
        admissible_point(0, 0, threshold=0.2)


def test_admissible_point_matches_first_clear_draw():
    assert np.array_equal(admissible_point(5, 0).as_array(),
                          sample_point(5, 0, 0).as_array())


def test_spec_validation_and_hashability():
    with pytest.raises(ValueError):
        QuadratureSpec(method="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(n_samples=0)
    with pytest.raises(ValueError):
        QuadratureSpec(nodes_per_dim=1)
    with pytest.raises(ValueError):
        QuadratureSpec(threshold=0.0)
    cache = {QuadratureSpec(seed=1): "ok"}
    assert cache[QuadratureSpec(seed=1)] == "ok"


def test_invariant_table_rows_and_determinism():
    spec = QuadratureSpec(method="mc", n_samples=32, seed=5)
    rows = invariant_table(spec)
    again = invariant_table(spec)
    assert [r.field for r in rows] == list(FIELD_NAMES)
    assert table_csv(rows) == table_csv(again)
    for row in rows:
        assert row.n_evaluated == 32
        assert np.isfinite(row.row.as_array()).all()
        assert np.all(row.stderr.as_array() >= 0.0)
    by_name = {r.field: r for r in rows}
    # (F,F) is quadratic, so its integral splits exactly over the
    # orthogonal self-dual / anti-self-dual decomposition.
    assert by_name["bures"].row.ff == pytest.approx(
        by_name["asd"].row.ff + by_name["sd"].row.ff, rel=1e-10)


def test_table_csv_format():
    spec = QuadratureSpec(method="lattice", nodes_per_dim=2, seed=0)
    text = table_csv(invariant_table(spec))
    lines = text.split("\r\n")
    assert lines[-1] == ""  # trailing CRLF
    lines = lines[:-1]
    assert lines[0] == ("field,ff2,f2f2,trf2,f3f3_23,f4f4_12,"
                        "stderr_ff2,stderr_f2f2,stderr_trf2,"
                        "stderr_f3f3_23,stderr_f4f4_12")
    assert [line.split(",")[0] for line in lines[1:]] == list(FIELD_NAMES)
    for line in lines[1:]:
        cells = line.split(",")[1:]
        assert len(cells) == 10
        for cell in cells:
            assert "." in cell or "e" in cell or cell == "0"
            assert format(float(cell), ".17g") == cell  # 17 significant digits


def test_ym_actions_additivity():
    full, plus, minus = ym_actions(QuadratureSpec(method="mc", n_samples=64, seed=11))
    assert full.value > 0.0 and plus.value > 0.0 and minus.value > 0.0
    assert full.value == pytest.approx(plus.value + minus.value, rel=1e-12)
    assert full.n_evaluated == 64


def test_lattice_bookkeeping():
    full, plus, minus = ym_actions(QuadratureSpec(method="lattice", nodes_per_dim=2, seed=0))
    assert full.n_evaluated + full.n_rejected == 64
    assert full.stderr == 0.0
    assert full.value == pytest.approx(plus.value + minus.value, rel=1e-12)
