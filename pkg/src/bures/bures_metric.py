"""Bures metric on the eight-dimensional manifold of 3x3 density matrices.

In the eigenbasis of rho the metric takes the spectral form

    g_xy = c sum_{k,l} Re( W_x[k,l] W_y[l,k] ) / (l_k + l_l),   c = 1/2,

with W_x = U* (d rho/dx) U.  Because the six angle matrices W are purely
off-diagonal and the two spectral ones purely diagonal, the metric is exactly
block diagonal: a 6x6 angle block and a 2x2 spectral block.

The module also carries closed-form expressions for the two auxiliary
eigenvalue polynomials A and B, three metric entries (g_theta_theta and the
inverse-metric entries g^beta_beta, g^alpha_alpha), and the Riemannian volume
density, all serving as independent cross-checks on the numerically
assembled tensor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMetric
from .state_space import (
    ParameterPoint,
    Spectrum,
    bloch_spectral_frame,
    check_spectrum_guard,
    eigenvalues_from_spherical,
    require_in_domain,
    spectral_frame,
)

__all__ = [
    "CALIBRATION",
    "MetricAtPoint",
    "ClosedFormEntries",
    "metric",
    "metric_batch",
    "metric_from_frames",
    "bloch_metric_batch",
    "closed_form_AB",
    "closed_form_entries",
    "volume_element",
    "volume_element_batch",
    "closed_form_volume",
    "closed_form_volume_batch",
]

#: Overall normalization of the Bures line element.  This value makes the
#: two-level metric the round 3-sphere of radius 1/2 and reproduces the
#: closed-form entries and volume density below.
CALIBRATION = 0.5


def metric_from_frames(lam: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Assemble metric components from eigenvalues and eigenframe derivatives.

    Parameters
    ----------
    lam : (..., n) eigenvalues.
    W : (..., d, n, n) Hermitian matrices U* (d rho/dx) U.

    Returns
    -------
    (..., d, d) real symmetric metric components.
    """
    lam = np.asarray(lam, dtype=float)
    W = np.asarray(W)
    denom = lam[..., :, None] + lam[..., None, :]       # l_k + l_l
    weighted = W / denom[..., None, :, :]
    g = CALIBRATION * np.real(
        np.einsum("...xkl,...ykl->...xy", weighted, np.conj(W))
    )
    return 0.5 * (g + np.swapaxes(g, -1, -2))


def metric_batch(points: np.ndarray, *, min_eigenvalue: float = 1e-8,
                 min_gap: float = 1e-8) -> np.ndarray:
    """Bures metric components at each of a batch of coordinate points.

    Parameters
    ----------
    points : (N, 8) array in canonical coordinate order.

    Returns
    -------
    (N, 8, 8) symmetric matrices.
    """
    lam, W, _ = spectral_frame(points)
    check_spectrum_guard(lam, min_eigenvalue, min_gap)
    return metric_from_frames(lam, W)


def bloch_metric_batch(points: np.ndarray) -> np.ndarray:
    """Bures metric of the two-level system at batched (r, theta_s, phi_s).

    Isometric to the round 3-sphere of radius 1/2:
    diag(1/(4(1-r^2)), r^2/4, r^2 sin(theta_s)^2 / 4).
    """
    lam, W = bloch_spectral_frame(points)
    return metric_from_frames(lam, W)


@dataclass
class MetricAtPoint:
    """Metric, blockwise inverse, and volume density at one point.

    Coordinate order is (alpha, tau, a, beta, b, theta, zeta1, zeta2).
    """

    point: ParameterPoint
    g: np.ndarray
    g_inv: np.ndarray
    sqrt_det: float
    cond: float


def _blockwise_inverse(g: np.ndarray, cond_limit: float) -> tuple[np.ndarray, float]:
    """Invert the 6 + 2 block-diagonal metric block by block, preserving the
    exact zeros of the off-blocks."""
    g_inv = np.zeros_like(g)
    cond = 0.0
    for sl in (slice(0, 6), slice(6, 8)):
        block = g[sl, sl]
        c = float(np.linalg.cond(block))
        cond = max(cond, c)
        if not np.isfinite(c) or c > cond_limit:
            raise SingularMetric(
                f"metric block {sl} has condition number {c:.3e} "
                f"(limit {cond_limit:.3e})"
            )
        g_inv[sl, sl] = np.linalg.inv(block)
    return g_inv, cond


def metric(p: ParameterPoint, *, cond_limit: float = 1e12) -> MetricAtPoint:
    """Metric with blockwise inverse and sqrt-determinant at one point.

    Raises SingularMetric if either diagonal block is ill conditioned.
    """
    require_in_domain(p)
    g = metric_batch(p.as_array()[None, :])[0]
    g_inv, cond = _blockwise_inverse(g, cond_limit)
    det = float(np.linalg.det(g[:6, :6]) * np.linalg.det(g[6:, 6:]))
    return MetricAtPoint(
        point=p, g=g, g_inv=g_inv, sqrt_det=float(np.sqrt(max(det, 0.0))),
        cond=cond,
    )


# ---------------------------------------------------------------------------
# Closed forms in the eigenvalues.
# ---------------------------------------------------------------------------

def _ab_values(l1, l2):
    """A and B as array-friendly expressions of the two top eigenvalues."""
    A = 3.0 - 7.0 * l1 + 4.0 * l1 * l1 + 7.0 * (-1.0 + l1) * l2 + 4.0 * l2 * l2
    B = (
        4.0 * l1 ** 3
        + l1 * l1 * (-9.0 + 5.0 * l2)
        + l1 * (-1.0 + l2) * (-7.0 + 5.0 * l2)
        + (-1.0 + l2) * (2.0 + l2 * (-5.0 + 4.0 * l2))
    )
    return A, B


def closed_form_AB(s: Spectrum) -> tuple[float, float]:
    """The two symmetric eigenvalue polynomials A and B.

    A(l1, l2) = 3 - 7 l1 + 4 l1^2 + 7 (l1 - 1) l2 + 4 l2^2
    B(l1, l2) = 4 l1^3 + l1^2 (5 l2 - 9) + l1 (l2 - 1)(5 l2 - 7)
                + (l2 - 1)(2 + l2 (4 l2 - 5))

    Both vanish at the fully mixed spectrum l1 = l2 = 1/3 and are symmetric
    under l1 <-> l2.
    """
    A, B = _ab_values(s.lambda1, s.lambda2)
    return float(A), float(B)


@dataclass(frozen=True)
class ClosedFormEntries:
    """The three closed-form tensor entries used as assembly oracles."""

    g_theta_theta: float
    ginv_beta_beta: float
    ginv_alpha_alpha: float


def closed_form_entries(p: ParameterPoint) -> ClosedFormEntries:
    """Closed forms for g_theta_theta and the inverse entries g^beta_beta,
    g^alpha_alpha at a point, expressed through A, B and the eigenvalues.

    With core := B + A (l1 - l2) cos(2b):

        g_theta_theta    = -core / (2 (l1 - 1)(l2 - 1))
        g^beta_beta      = -core csc(theta)^2
                           / (2 (-1 + 2 l1 + l2)^2 (-1 + l1 + 2 l2)^2)
        g^alpha_alpha    = g^beta_beta csc(beta)^2 sec(beta)^2 / 4

    Note (-1 + 2 l1 + l2) = l1 - l3 and (-1 + l1 + 2 l2) = l2 - l3.  The
    leading coefficient 2 in g^beta_beta is fixed by consistency with
    g_theta_theta, the volume density, and the two-level round-sphere limit;
    a published variant of this expression carries an 8 here, which is too
    small by an exact factor of four against the rest of the tensor.
    """
    require_in_domain(p)
    lam = eigenvalues_from_spherical(np.array([p.zeta1, p.zeta2]))
    l1, l2 = float(lam[0]), float(lam[1])
    A, B = _ab_values(l1, l2)
    core = B + A * (l1 - l2) * np.cos(2.0 * p.b)
    g_tt = -core / (2.0 * (l1 - 1.0) * (l2 - 1.0))
    ginv_bb = (
        -core
        / (np.sin(p.theta) ** 2)
        / (2.0 * (-1.0 + 2.0 * l1 + l2) ** 2 * (-1.0 + l1 + 2.0 * l2) ** 2)
    )
    ginv_aa = ginv_bb / (np.sin(p.beta) ** 2 * np.cos(p.beta) ** 2) / 4.0
    return ClosedFormEntries(float(g_tt), float(ginv_bb), float(ginv_aa))


def volume_element_batch(points: np.ndarray) -> np.ndarray:
    """sqrt(det g) per point of an (N, 8) batch, via the metric assembly."""
    g = metric_batch(points)
    det = np.linalg.det(g[:, :6, :6]) * np.linalg.det(g[:, 6:, 6:])
    return np.sqrt(np.maximum(det, 0.0))


def volume_element(p: ParameterPoint) -> float:
    """sqrt(det g) at one point, from the assembled metric."""
    require_in_domain(p)
    return float(volume_element_batch(p.as_array()[None, :])[0])


def closed_form_volume_batch(points: np.ndarray) -> np.ndarray:
    """Closed-form sqrt(det g) per point: an eigenvalue expression times the
    trigonometric angle factor and the spectral-coordinate Jacobian.

    In eigenvalue coordinates the density reads

        sin(2b) sin(2 beta) sin^2(theta) sin(2 theta)
        / (8 sqrt(l1 l2 l3)) * prod_{i<j} (l_i - l_j)^2 / (l_i + l_j);

    passing to (zeta1, zeta2) multiplies by the Jacobian
    |d(l1, l2)/d(zeta1, zeta2)| = sin(2 zeta1) sin^2(zeta1) sin(2 zeta2).
    """
    pts = np.asarray(points, dtype=float)
    be, b, th = pts[:, 3], pts[:, 4], pts[:, 5]
    z1, z2 = pts[:, 6], pts[:, 7]
    lam = eigenvalues_from_spherical(pts[:, 6:8])
    l1, l2, l3 = lam[:, 0], lam[:, 1], lam[:, 2]

    angle = np.sin(2 * b) * np.sin(2 * be) * np.sin(th) ** 2 * np.sin(2 * th)
    pair = (
        (l1 - l2) ** 2 * (l1 - l3) ** 2 * (l2 - l3) ** 2
        / ((l1 + l2) * (l1 + l3) * (l2 + l3))
    )
    jac = np.abs(np.sin(2 * z1) * np.sin(z1) ** 2 * np.sin(2 * z2))
    return np.abs(angle) * pair / (8.0 * np.sqrt(l1 * l2 * l3)) * jac


def closed_form_volume(p: ParameterPoint) -> float:
    """Closed-form sqrt(det g) at one point."""
    require_in_domain(p)
    return float(closed_form_volume_batch(p.as_array()[None, :])[0])
