"""Riemann curvature of the Bures metric via finite differences of the
analytic metric.

The metric itself is machine precision (analytic derivatives of rho), so a
single layer of Richardson-extrapolated central differences on g suffices for
curvature at ~1e-7 noise.  All tensors below use the fixed coordinate order
(alpha, tau, a, beta, b, theta, zeta1, zeta2).

Conventions:

    Gamma^i_jk = (1/2) g^il (d_j g_lk + d_k g_lj - d_l g_jk)
    R^i_jkl    = d_k Gamma^i_lj - d_l Gamma^i_kj
                 + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj
    R_ijkl     = g_im R^m_jkl,   Ric_jl = R^i_jil,   scalar = g^jl Ric_jl

With these signs the scalar curvature is positive for round spheres (+24 for
the two-level system) and +164 at the fully mixed three-level state.

The same engine runs on any chart (a batched metric function plus coordinate
box lengths used to scale steps); the two-level Bloch chart is the built-in
constant-curvature validation target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .bures_metric import bloch_metric_batch, metric_batch
from .errors import DegenerateSpectrum
from .state_space import DOMAIN_BOUNDS, COORD_NAMES, ParameterPoint, Spectrum

__all__ = [
    "Chart",
    "BURES_CHART",
    "BLOCH_CHART",
    "MetricJet",
    "RiemannAtPoint",
    "CurvatureTwoForm",
    "FRAME_PAIRS",
    "metric_jet",
    "christoffels",
    "riemann_from_jet",
    "riemann",
    "riemann_at",
    "bloch_riemann",
    "scalar_curvature_closed_form",
    "codazzi_residual",
    "codazzi_residual_at",
    "bloch_codazzi_residual",
    "frame_curvature",
    "frame_curvature_at",
    "frame_curvature_batch",
]

#: Ordered pairs (a < b) indexing the 28 frame two-form components,
#: lexicographic, zero-based.
FRAME_PAIRS = tuple(combinations(range(8), 2))


@dataclass(frozen=True)
class Chart:
    """A coordinate chart: batched metric function plus box lengths.

    ``metric_fn`` maps an (N, dim) array of points to (N, dim, dim) metric
    components; ``box_lengths`` scale the per-coordinate difference steps.
    """

    dim: int
    metric_fn: Callable[[np.ndarray], np.ndarray]
    box_lengths: tuple[float, ...]


BURES_CHART = Chart(
    dim=8,
    metric_fn=metric_batch,
    box_lengths=tuple(hi - lo for name in COORD_NAMES
                      for lo, hi in (DOMAIN_BOUNDS[name],)),
)

BLOCH_CHART = Chart(
    dim=3,
    metric_fn=bloch_metric_batch,
    box_lengths=(1.0, float(np.pi), 2.0 * float(np.pi)),
)


@dataclass
class MetricJet:
    """Metric with first and second derivatives at a point.

    dg[k] = d_k g and ddg[k, l] = d_k d_l g, both from Richardson-refined
    central differences.
    """

    x: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    steps: np.ndarray


def _stencil_offsets(steps: np.ndarray) -> np.ndarray:
    """Displacement table for one jet: center, per-coordinate singles at
    +-h and +-h/2, and per-pair corners at +-h and +-h/2.

    Row count is 1 + 4 d + 8 C(d, 2); for d = 8 that is 257.
    """
    d = steps.shape[0]
    rows = [np.zeros(d)]
    for k in range(d):
        for scale in (1.0, 0.5):
            for sign in (1.0, -1.0):
                off = np.zeros(d)
                off[k] = sign * scale * steps[k]
                rows.append(off)
    for k, l in combinations(range(d), 2):
        for scale in (1.0, 0.5):
            for sk in (1.0, -1.0):
                for sl in (1.0, -1.0):
                    off = np.zeros(d)
                    off[k] = sk * scale * steps[k]
                    off[l] = sl * scale * steps[l]
                    rows.append(off)
    return np.array(rows)


def _assemble_jet(x: np.ndarray, steps: np.ndarray, G: np.ndarray) -> MetricJet:
    """Build a MetricJet from stencil evaluations G ordered as in
    _stencil_offsets.  Uses one Richardson step: D = (4 D_{h/2} - D_h) / 3."""
    d = steps.shape[0]
    g0 = G[0]
    dg = np.empty((d, d, d))
    ddg = np.empty((d, d, d, d))

    pos = 1
    for k in range(d):
        gp, gm, gp2, gm2 = G[pos], G[pos + 1], G[pos + 2], G[pos + 3]
        pos += 4
        h = steps[k]
        d1 = (gp - gm) / (2.0 * h)
        d1_half = (gp2 - gm2) / h
        dg[k] = (4.0 * d1_half - d1) / 3.0
        s1 = (gp - 2.0 * g0 + gm) / (h * h)
        s1_half = (gp2 - 2.0 * g0 + gm2) / (0.25 * h * h)
        ddg[k, k] = (4.0 * s1_half - s1) / 3.0

    for k, l in combinations(range(d), 2):
        gpp, gpm, gmp, gmm = G[pos], G[pos + 1], G[pos + 2], G[pos + 3]
        hpp, hpm, hmp, hmm = G[pos + 4], G[pos + 5], G[pos + 6], G[pos + 7]
        pos += 8
        denom = 4.0 * steps[k] * steps[l]
        m1 = (gpp - gpm - gmp + gmm) / denom
        m1_half = (hpp - hpm - hmp + hmm) / (0.25 * denom)
        mixed = (4.0 * m1_half - m1) / 3.0
        ddg[k, l] = mixed
        ddg[l, k] = mixed

    return MetricJet(x=x.copy(), g=g0, dg=dg, ddg=ddg, steps=steps.copy())


def _jet_batch(chart: Chart, centers: np.ndarray, steps: np.ndarray) -> list[MetricJet]:
    """Evaluate one metric jet per center in a single batched metric call."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    offsets = _stencil_offsets(steps)
    n_st = offsets.shape[0]
    pts = (centers[:, None, :] + offsets[None, :, :]).reshape(-1, chart.dim)
    G = chart.metric_fn(pts).reshape(centers.shape[0], n_st,
                                     chart.dim, chart.dim)
    return [_assemble_jet(c, steps, Gi) for c, Gi in zip(centers, G)]


def jet_at(chart: Chart, x: np.ndarray, step_scale: float = 1e-3) -> MetricJet:
    """Metric jet on an arbitrary chart.

    Steps are step_scale times each coordinate's box length.  If a stencil
    point trips the degeneracy guard the step is shrunk fourfold and the jet
    retried once before the error propagates.
    """
    x = np.asarray(x, dtype=float)
    steps = step_scale * np.asarray(chart.box_lengths)
    try:
        return _jet_batch(chart, x[None, :], steps)[0]
    except DegenerateSpectrum:
        return _jet_batch(chart, x[None, :], steps / 4.0)[0]


def metric_jet(p: ParameterPoint, step_scale: float = 1e-3) -> MetricJet:
    """Metric jet of the Bures chart at p."""
    return jet_at(BURES_CHART, p.as_array(), step_scale)


def _bracket(dg: np.ndarray) -> np.ndarray:
    """bracket[l, j, k] = d_j g_lk + d_k g_lj - d_l g_jk from dg[m] = d_m g."""
    return np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg


def christoffels(jet: MetricJet) -> np.ndarray:
    """Connection coefficients Gamma[i, j, k] = Gamma^i_jk from a jet."""
    g_inv = np.linalg.inv(jet.g)
    return 0.5 * np.einsum("il,ljk->ijk", g_inv, _bracket(jet.dg))


@dataclass
class RiemannAtPoint:
    """Fully covariant curvature at a point, with the data used to build it."""

    x: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    gamma: np.ndarray
    riemann_0_4: np.ndarray
    ricci: np.ndarray
    scalar: float


def riemann_from_jet(jet: MetricJet) -> RiemannAtPoint:
    """Riemann (0,4), Ricci, and scalar curvature from a metric jet."""
    g = jet.g
    g_inv = np.linalg.inv(g)
    dg = jet.dg
    ddg = jet.ddg
    gamma = christoffels(jet)

    # d_m Gamma^i_jk, from d(g^-1) = -g^-1 dg g^-1 and the second derivatives.
    # dbracket[m, l, j, k] = d_m d_j g_lk + d_m d_k g_lj - d_m d_l g_jk.
    bracket = _bracket(dg)
    dbracket = (np.transpose(ddg, (0, 2, 1, 3))
                + np.transpose(ddg, (0, 2, 3, 1))
                - ddg)
    dginv = -np.einsum("ia,mab,bl->mil", g_inv, dg, g_inv)
    dgamma = 0.5 * (np.einsum("mil,ljk->mijk", dginv, bracket)
                    + np.einsum("il,mljk->mijk", g_inv, dbracket))

    # R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj
    r_up = (np.einsum("kilj->ijkl", dgamma)
            - np.einsum("likj->ijkl", dgamma)
            + np.einsum("ikm,mlj->ijkl", gamma, gamma)
            - np.einsum("ilm,mkj->ijkl", gamma, gamma))

    r04 = np.einsum("im,mjkl->ijkl", g, r_up)
    ricci = np.einsum("ijil->jl", r_up)
    ricci = 0.5 * (ricci + ricci.T)
    scalar = float(np.einsum("jl,jl->", g_inv, ricci))
    return RiemannAtPoint(x=jet.x, g=g, g_inv=g_inv, gamma=gamma,
                          riemann_0_4=r04, ricci=ricci, scalar=scalar)


def riemann_at(chart: Chart, x: np.ndarray,
               step_scale: float = 1e-3) -> RiemannAtPoint:
    """Curvature on an arbitrary chart."""
    return riemann_from_jet(jet_at(chart, x, step_scale))


def riemann(p: ParameterPoint, step_scale: float = 1e-3) -> RiemannAtPoint:
    """Curvature of the Bures metric at p."""
    return riemann_at(BURES_CHART, p.as_array(), step_scale)


def bloch_riemann(point3, step_scale: float = 1e-3) -> RiemannAtPoint:
    """Curvature of the two-level Bures metric at (r, theta_s, phi_s)."""
    return riemann_at(BLOCH_CHART, np.asarray(point3, dtype=float), step_scale)


def scalar_curvature_closed_form(s: Spectrum) -> float:
    """Scalar curvature as a rational symmetric function of the eigenvalues:

        s.c. = 2 (28 e3 - 49 e2 - 9) / (e3 - e2),

    with e2, e3 the elementary symmetric polynomials.  Equals 164 (= 1312/8)
    at the fully mixed spectrum.
    """
    if s.e3 == s.e2:
        raise DegenerateSpectrum(f"e3 == e2 == {s.e2!r}")
    return float(2.0 * (28.0 * s.e3 - 49.0 * s.e2 - 9.0) / (s.e3 - s.e2))


# ---------------------------------------------------------------------------
# Codazzi residual.
# ---------------------------------------------------------------------------

def codazzi_residual_at(chart: Chart, x: np.ndarray,
                        step_scale: float = 1e-3,
                        outer_scale: float = 1e-2) -> float:
    """Asymmetry of the covariant derivative of Ricci in its first two slots.

    Computes C_ijk = nabla_i Ric_jk - nabla_j Ric_ik with
    nabla_i Ric_jk = d_i Ric_jk - Gamma^m_ij Ric_mk - Gamma^m_ik Ric_jm,
    where d Ric comes from Richardson-refined central differences of the
    Ricci tensor with outer steps outer_scale x box length.

    Returns max_ijk |C_ijk| normalized by max(|nabla Ric|_F, |Ric|_F).  The
    norm of Ric enters the guard because on constant-curvature charts Ricci
    is parallel and |nabla Ric|_F is pure noise; there the residual must
    report ~0 rather than noise/noise.
    """
    x = np.asarray(x, dtype=float)
    d = chart.dim
    H = outer_scale * np.asarray(chart.box_lengths)

    centers = [x]
    for k in range(d):
        for scale in (1.0, 0.5):
            for sign in (1.0, -1.0):
                c = x.copy()
                c[k] += sign * scale * H[k]
                centers.append(c)
    steps = step_scale * np.asarray(chart.box_lengths)
    jets = _jet_batch(chart, np.array(centers), steps)

    base = riemann_from_jet(jets[0])
    ric = base.ricci
    gamma = base.gamma

    dric = np.empty((d, d, d))
    pos = 1
    for k in range(d):
        rp = riemann_from_jet(jets[pos]).ricci
        rm = riemann_from_jet(jets[pos + 1]).ricci
        rp2 = riemann_from_jet(jets[pos + 2]).ricci
        rm2 = riemann_from_jet(jets[pos + 3]).ricci
        pos += 4
        d1 = (rp - rm) / (2.0 * H[k])
        d1_half = (rp2 - rm2) / H[k]
        dric[k] = (4.0 * d1_half - d1) / 3.0

    nabla = (dric
             - np.einsum("mij,mk->ijk", gamma, ric)
             - np.einsum("mik,jm->ijk", gamma, ric))
    asym = nabla - np.transpose(nabla, (1, 0, 2))
    denom = max(float(np.linalg.norm(nabla)), float(np.linalg.norm(ric)))
    return float(np.max(np.abs(asym))) / denom


def codazzi_residual(p: ParameterPoint, step_scale: float = 1e-3,
                     outer_scale: float = 1e-2) -> float:
    """Normalized Codazzi asymmetry of the Bures metric at p."""
    return codazzi_residual_at(BURES_CHART, p.as_array(), step_scale,
                               outer_scale)


def bloch_codazzi_residual(point3, step_scale: float = 1e-3,
                           outer_scale: float = 1e-2) -> float:
    """Normalized Codazzi asymmetry of the two-level chart (parallel Ricci,
    so the value is finite-difference noise over the Ricci norm)."""
    return codazzi_residual_at(BLOCH_CHART, np.asarray(point3, dtype=float),
                               step_scale, outer_scale)


# ---------------------------------------------------------------------------
# Orthonormal-frame curvature two-form.
# ---------------------------------------------------------------------------

@dataclass
class CurvatureTwoForm:
    """Curvature in a g-orthonormal frame, read as 28 skew matrices.

    f[p] is the 8x8 skew-symmetric matrix F_ab for the p-th pair (a, b) in
    FRAME_PAIRS order: F_ab[i, j] = R_frame[i, j, a, b].  frame holds the
    vielbein E (columns are the frame vectors in coordinate components),
    satisfying E^T g E = I.
    """

    f: np.ndarray
    frame: np.ndarray
    pairs: tuple[tuple[int, int], ...] = field(default=FRAME_PAIRS)


def frame_curvature_from(r: RiemannAtPoint) -> CurvatureTwoForm:
    """Convert coordinate curvature to the Cholesky orthonormal frame."""
    L = np.linalg.cholesky(r.g)
    E = np.linalg.inv(L.T)
    r_frame = np.einsum("ia,jb,kc,ld,ijkl->abcd", E, E, E, E, r.riemann_0_4,
                        optimize=True)
    d = r.g.shape[0]
    pairs = tuple(combinations(range(d), 2))
    f = np.empty((len(pairs), d, d))
    for idx, (a, b) in enumerate(pairs):
        m = r_frame[:, :, a, b]
        f[idx] = 0.5 * (m - m.T)
    return CurvatureTwoForm(f=f, frame=E, pairs=pairs)


def frame_curvature_at(chart: Chart, x: np.ndarray,
                       step_scale: float = 1e-3) -> CurvatureTwoForm:
    """Frame curvature two-form on an arbitrary chart."""
    return frame_curvature_from(riemann_at(chart, x, step_scale))


def frame_curvature(p: ParameterPoint,
                    step_scale: float = 1e-3) -> CurvatureTwoForm:
    """Frame curvature two-form of the Bures metric at p."""
    return frame_curvature_at(BURES_CHART, p.as_array(), step_scale)


# ---------------------------------------------------------------------------
# Vectorized many-point evaluation (quadrature backend).
# ---------------------------------------------------------------------------

def _assemble_jet_arrays(steps: np.ndarray, G: np.ndarray):
    """Vectorized jet assembly for stencil buffers G of shape (N, S, d, d).

    Returns (g0, dg, ddg) with leading batch axis, matching _assemble_jet.
    """
    d = steps.shape[0]
    n = G.shape[0]
    g0 = G[:, 0]
    dg = np.empty((n, d, d, d))
    ddg = np.empty((n, d, d, d, d))

    pos = 1
    for k in range(d):
        gp, gm, gp2, gm2 = (G[:, pos], G[:, pos + 1], G[:, pos + 2],
                            G[:, pos + 3])
        pos += 4
        h = steps[k]
        d1 = (gp - gm) / (2.0 * h)
        d1_half = (gp2 - gm2) / h
        dg[:, k] = (4.0 * d1_half - d1) / 3.0
        s1 = (gp - 2.0 * g0 + gm) / (h * h)
        s1_half = (gp2 - 2.0 * g0 + gm2) / (0.25 * h * h)
        ddg[:, k, k] = (4.0 * s1_half - s1) / 3.0

    for k, l in combinations(range(d), 2):
        gpp, gpm, gmp, gmm = (G[:, pos], G[:, pos + 1], G[:, pos + 2],
                              G[:, pos + 3])
        hpp, hpm, hmp, hmm = (G[:, pos + 4], G[:, pos + 5], G[:, pos + 6],
                              G[:, pos + 7])
        pos += 8
        denom = 4.0 * steps[k] * steps[l]
        m1 = (gpp - gpm - gmp + gmm) / denom
        m1_half = (hpp - hpm - hmp + hmm) / (0.25 * denom)
        mixed = (4.0 * m1_half - m1) / 3.0
        ddg[:, k, l] = mixed
        ddg[:, l, k] = mixed

    return g0, dg, ddg


def frame_curvature_batch(chart: Chart, xs: np.ndarray,
                          step_scale: float = 1e-3,
                          cond_limit: float = 1e12,
                          sym_tol: float = 1e-3):
    """Frame curvature two-forms at many points in one vectorized pass.

    Parameters
    ----------
    xs : ndarray, shape (N, dim)
        Chart coordinates of the evaluation points.
    sym_tol : float
        Noise guard: the exact curvature tensor is symmetric under exchange
        of its two index pairs, so the relative size of the antisymmetric
        part measures finite-difference error.  Points violating the bound
        are flagged bad; this catches the ill-conditioned neighborhoods of
        the chart's coordinate singularities, where the metric collapses and
        difference quotients lose all significance.

    Returns
    -------
    f : ndarray, shape (N, P, dim, dim)
        Skew component matrices over the lexicographic frame pairs.
    sqrt_det : ndarray, shape (N,)
        Volume weights sqrt(det g) at the centers.
    ok : ndarray of bool, shape (N,)
        False where the metric was non-positive, ill-conditioned beyond
        ``cond_limit``, past ``sym_tol``, or any output was non-finite; the
        corresponding rows of ``f`` and ``sqrt_det`` are zeroed.

    Unlike the single-point path this applies no degeneracy guard and never
    raises on bad points; callers filter with ``ok``.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    d = chart.dim
    steps = step_scale * np.asarray(chart.box_lengths)
    offsets = _stencil_offsets(steps)
    n_st = offsets.shape[0]
    pts = (xs[:, None, :] + offsets[None, :, :]).reshape(-1, d)
    G = chart.metric_fn(pts).reshape(xs.shape[0], n_st, d, d)
    g, dg, ddg = _assemble_jet_arrays(steps, G)

    eig = np.linalg.eigvalsh(g)
    ok = np.isfinite(eig).all(axis=1) & (eig[:, 0] > 0.0)
    ok &= eig[:, -1] <= cond_limit * np.where(ok, eig[:, 0], 1.0)
    g_safe = np.where(ok[:, None, None], g, np.eye(d)[None])

    g_inv = np.linalg.inv(g_safe)
    bracket = (np.transpose(dg, (0, 2, 1, 3))
               + np.transpose(dg, (0, 2, 3, 1))
               - dg)
    gamma = 0.5 * np.einsum("nil,nljk->nijk", g_inv, bracket)
    dbracket = (np.transpose(ddg, (0, 1, 3, 2, 4))
                + np.transpose(ddg, (0, 1, 3, 4, 2))
                - ddg)
    dginv = -np.einsum("nia,nmab,nbl->nmil", g_inv, dg, g_inv)
    dgamma = 0.5 * (np.einsum("nmil,nljk->nmijk", dginv, bracket)
                    + np.einsum("nil,nmljk->nmijk", g_inv, dbracket))
    r_up = (np.einsum("nkilj->nijkl", dgamma)
            - np.einsum("nlikj->nijkl", dgamma)
            + np.einsum("nikm,nmlj->nijkl", gamma, gamma)
            - np.einsum("nilm,nmkj->nijkl", gamma, gamma))
    r04 = np.einsum("nim,nmjkl->nijkl", g_safe, r_up)

    L = np.linalg.cholesky(g_safe)
    E = np.linalg.inv(np.transpose(L, (0, 2, 1)))
    r_frame = np.einsum("nia,njb,nkc,nld,nijkl->nabcd", E, E, E, E, r04,
                        optimize=True)

    swap = np.transpose(r_frame, (0, 3, 4, 1, 2))
    norm = np.sqrt(np.einsum("nabcd,nabcd->n", r_frame, r_frame))
    asym = np.sqrt(np.einsum("nabcd,nabcd->n", r_frame - swap, r_frame - swap))
    ok &= asym <= sym_tol * np.maximum(norm, 1e-300)

    pairs = tuple(combinations(range(d), 2))
    a_idx = np.array([a for a, _ in pairs])
    b_idx = np.array([b for _, b in pairs])
    rf = np.transpose(r_frame, (0, 3, 4, 1, 2))
    f = rf[:, a_idx, b_idx]
    f = 0.5 * (f - np.transpose(f, (0, 1, 3, 2)))

    sqrt_det = np.sqrt(np.abs(np.linalg.det(g_safe)))
    ok &= np.isfinite(f).all(axis=(1, 2, 3)) & np.isfinite(sqrt_det)
    f = np.where(ok[:, None, None, None], f, 0.0)
    sqrt_det = np.where(ok, sqrt_det, 0.0)
    return f, sqrt_det, ok
