"""Euler-angle and spectral parameterization of 3x3 density matrices.

A state is factored as ``rho = U diag(l1, l2, l3) U*`` where the special
unitary U is a product of six one-parameter exponentials of Gell-Mann
generators and the eigenvalues are expressed through two spherical angles
(zeta1, zeta2):

    l1 = cos(zeta1)^2,  l2 = sin(zeta1)^2 cos(zeta2)^2,  l3 = 1 - l1 - l2.

The eight manifold coordinates, in the fixed order used everywhere in this
package, are (alpha, tau, a, beta, b, theta, zeta1, zeta2), with the third
Euler angle recovered as gamma = tau - a.  The two trailing torus factors of
the full SU(3) decomposition commute with the diagonal spectrum and cancel
under conjugation, so they are omitted.

The module also provides analytic first derivatives of rho with respect to
all eight coordinates (consumed by the metric assembly) and the Bloch-ball
parameterization of 2x2 states used as a constant-curvature validation
target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, NonFiniteInput, OutOfDomain

__all__ = [
    "COORD_NAMES",
    "DOMAIN_BOUNDS",
    "ZETA1_MAX",
    "ZETA2_MAX",
    "ParameterPoint",
    "Spectrum",
    "HermitianState",
    "gell_mann_basis",
    "spectrum_from_spherical",
    "euler_unitary",
    "density",
    "density_partials",
    "bloch_density2",
    "bloch_spectral_frame",
    "spectral_frame",
    "eigenvalues_from_spherical",
    "require_in_domain",
    "check_spectrum_guard",
    "spectrum_gaps",
]

#: Largest zeta1: arccos(3^{-1/2}), the corner where the spectrum is fully mixed.
ZETA1_MAX = float(np.arccos(1.0 / np.sqrt(3.0)))
ZETA2_MAX = float(np.pi / 4.0)

COORD_NAMES = ("alpha", "tau", "a", "beta", "b", "theta", "zeta1", "zeta2")

DOMAIN_BOUNDS = {
    "alpha": (0.0, float(np.pi)),
    "tau": (0.0, float(np.pi)),
    "a": (0.0, float(np.pi)),
    "beta": (0.0, float(np.pi / 2)),
    "b": (0.0, float(np.pi / 2)),
    "theta": (0.0, float(np.pi / 2)),
    "zeta1": (0.0, ZETA1_MAX),
    "zeta2": (0.0, ZETA2_MAX),
}


def _build_gell_mann() -> np.ndarray:
    L = np.zeros((8, 3, 3), dtype=complex)
    L[0, 0, 1] = L[0, 1, 0] = 1.0
    L[1, 0, 1] = -1.0j
    L[1, 1, 0] = 1.0j
    L[2, 0, 0] = 1.0
    L[2, 1, 1] = -1.0
    L[3, 0, 2] = L[3, 2, 0] = 1.0
    L[4, 0, 2] = -1.0j
    L[4, 2, 0] = 1.0j
    L[5, 1, 2] = L[5, 2, 1] = 1.0
    L[6, 1, 2] = -1.0j
    L[6, 2, 1] = 1.0j
    L[7] = np.diag([1.0, 1.0, -2.0]) / np.sqrt(3.0)
    return L


_GELL_MANN = _build_gell_mann()
_GELL_MANN.setflags(write=False)


def gell_mann_basis() -> np.ndarray:
    """Return the eight Gell-Mann matrices as an (8, 3, 3) complex array.

    Each is Hermitian and traceless with tr(L_i L_j) = 2 delta_ij.
    """
    return _GELL_MANN.copy()


@dataclass(frozen=True)
class ParameterPoint:
    """One point of the eight-dimensional coordinate chart."""

    alpha: float
    tau: float
    a: float
    beta: float
    b: float
    theta: float
    zeta1: float
    zeta2: float

    def __post_init__(self):
        for name in COORD_NAMES:
            v = getattr(self, name)
            if not np.isfinite(v):
                raise NonFiniteInput(f"coordinate {name} is not finite: {v!r}")

    @property
    def gamma(self) -> float:
        return self.tau - self.a

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in COORD_NAMES], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "ParameterPoint":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (8,):
            raise ValueError(f"expected 8 coordinates, got shape {arr.shape}")
        return cls(*(float(x) for x in arr))


def require_in_domain(p: ParameterPoint) -> None:
    """Raise OutOfDomain naming the first coordinate outside its range."""
    for name in COORD_NAMES:
        lo, hi = DOMAIN_BOUNDS[name]
        v = getattr(p, name)
        if not (lo <= v <= hi):
            raise OutOfDomain(
                f"coordinate {name}={v!r} outside [{lo:.6g}, {hi:.6g}]"
            )


@dataclass(frozen=True)
class Spectrum:
    """Ordered density-matrix eigenvalues and their symmetric polynomials."""

    lambda1: float
    lambda2: float
    lambda3: float
    e2: float
    e3: float

    @classmethod
    def from_lambdas(cls, l1: float, l2: float, l3: float) -> "Spectrum":
        e3 = l1 * l2 * l3
        e2 = l1 * l2 + l1 * l3 + l2 * l3
        return cls(l1, l2, l3, e2, e3)

    def as_array(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda2, self.lambda3])


@dataclass
class HermitianState:
    """A density matrix together with its diagonalizing unitary and spectrum."""

    rho: np.ndarray
    unitary: np.ndarray
    spectrum: Spectrum


def eigenvalues_from_spherical(zeta: np.ndarray) -> np.ndarray:
    """Eigenvalue triple for spherical spectral angles, batched.

    Parameters
    ----------
    zeta : (..., 2) array of (zeta1, zeta2).

    Returns
    -------
    (..., 3) array (l1, l2, l3), summing to one.
    """
    zeta = np.asarray(zeta, dtype=float)
    z1, z2 = zeta[..., 0], zeta[..., 1]
    s1sq = np.sin(z1) ** 2
    l1 = np.cos(z1) ** 2
    l2 = s1sq * np.cos(z2) ** 2
    l3 = s1sq * np.sin(z2) ** 2
    return np.stack([l1, l2, l3], axis=-1)


def _eigenvalue_derivatives(zeta: np.ndarray) -> np.ndarray:
    """d(l1,l2,l3)/d(zeta1,zeta2), batched: (..., 2, 3)."""
    z1, z2 = zeta[..., 0], zeta[..., 1]
    s2z1 = np.sin(2 * z1)
    s1sq = np.sin(z1) ** 2
    s2z2 = np.sin(2 * z2)
    d1 = np.stack([-s2z1, s2z1 * np.cos(z2) ** 2, s2z1 * np.sin(z2) ** 2], axis=-1)
    d2 = np.stack([np.zeros_like(z1), -s1sq * s2z2, s1sq * s2z2], axis=-1)
    return np.stack([d1, d2], axis=-2)


def spectrum_from_spherical(zeta1: float, zeta2: float) -> Spectrum:
    """Spectrum at the spherical spectral angles (zeta1, zeta2)."""
    if not (0.0 <= zeta1 <= ZETA1_MAX):
        raise OutOfDomain(f"zeta1={zeta1!r} outside [0, {ZETA1_MAX:.6g}]")
    if not (0.0 <= zeta2 <= ZETA2_MAX):
        raise OutOfDomain(f"zeta2={zeta2!r} outside [0, {ZETA2_MAX:.6g}]")
    l1, l2, l3 = eigenvalues_from_spherical(np.array([zeta1, zeta2]))
    return Spectrum.from_lambdas(float(l1), float(l2), float(l3))


def spherical_from_eigenvalues(l1: float, l2: float, l3: float) -> tuple[float, float]:
    """Invert the spectral map: (zeta1, zeta2) with l1 = cos(zeta1)^2 etc.

    Requires a descending probability triple (l1 >= l2 >= l3, summing to 1),
    which is the image of the spectral-angle box.
    """
    lam = np.array([l1, l2, l3], dtype=float)
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
        raise OutOfDomain(f"not a probability triple: {lam}")
    if not (l1 >= l2 >= l3):
        raise OutOfDomain(f"eigenvalues not sorted descending: {lam}")
    zeta1 = float(np.arccos(np.sqrt(np.clip(l1, 0.0, 1.0))))
    s1sq = l2 + l3
    if s1sq <= 0.0:
        return zeta1, 0.0
    zeta2 = float(np.arctan2(np.sqrt(l3), np.sqrt(l2)))
    return zeta1, zeta2


def spectrum_gaps(lam: np.ndarray) -> np.ndarray:
    """Minimum pairwise |l_i - l_j| per row of an (..., 3) eigenvalue array."""
    lam = np.asarray(lam)
    g01 = np.abs(lam[..., 0] - lam[..., 1])
    g02 = np.abs(lam[..., 0] - lam[..., 2])
    g12 = np.abs(lam[..., 1] - lam[..., 2])
    return np.minimum(np.minimum(g01, g02), g12)


def check_spectrum_guard(lam: np.ndarray, min_eigenvalue: float = 1e-8,
                         min_gap: float = 1e-8) -> None:
    """Reject spectra whose eigenvalues are too small or too close.

    Downstream metric and curvature formulas divide by eigenvalue gaps, so
    points failing this guard are not usable.
    """
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    bad_small = lam.min(axis=-1) < min_eigenvalue
    bad_gap = spectrum_gaps(lam) < min_gap
    bad = bad_small | bad_gap
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise DegenerateSpectrum(
            f"spectrum {lam[idx]} violates guard "
            f"(min eigenvalue {min_eigenvalue:g}, min gap {min_gap:g})"
        )


# ---------------------------------------------------------------------------
# SU(3) Euler factors.  Closed forms avoid matrix exponentials:
#   exp(i L3 t) = diag(e^{it}, e^{-it}, 1)
#   exp(i L2 t) = rotation by t in the (1,2) plane
#   exp(i L5 t) = rotation by t in the (1,3) plane
# ---------------------------------------------------------------------------

def _phase_l3(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (3, 3), dtype=complex)
    out[..., 0, 0] = np.exp(1j * t)
    out[..., 1, 1] = np.exp(-1j * t)
    out[..., 2, 2] = 1.0
    return out


def _rot_12(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    out = np.zeros(t.shape + (3, 3), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


def _rot_13(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    out = np.zeros(t.shape + (3, 3), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 2] = s
    out[..., 2, 0] = -s
    out[..., 2, 2] = c
    out[..., 1, 1] = 1.0
    return out


_I_GEN = tuple(1j * _GELL_MANN[k] for k in (2, 1, 2, 4, 2, 1))


def _unitary_and_angle_frames(points: np.ndarray):
    """Batched U and the six conjugated generators V_x = U* dU/dx.

    For factor k with generator G_k, dU/dx_k = prefix . (i G_k) . suffix and
    therefore U* dU/dx_k = S_k* (i G_k) S_k with S_k the suffix product that
    includes factor k.  The chain rule for gamma = tau - a gives
    V_tau = V_gamma and V_a = V_{a-factor} - V_gamma.

    Returns (U, V) with U of shape (N, 3, 3) and V of shape (N, 6, 3, 3) in
    coordinate order (alpha, tau, a, beta, b, theta).  Each V is
    anti-Hermitian.
    """
    pts = np.asarray(points, dtype=float)
    al, ta, av, be, bv, th = (pts[:, i] for i in range(6))
    factors = (
        _phase_l3(al),
        _rot_12(be),
        _phase_l3(ta - av),
        _rot_13(th),
        _phase_l3(av),
        _rot_12(bv),
    )
    suffix = [None] * 6
    suffix[5] = factors[5]
    for k in range(4, -1, -1):
        suffix[k] = factors[k] @ suffix[k + 1]
    U = suffix[0]

    n = pts.shape[0]
    vfac = np.empty((n, 6, 3, 3), dtype=complex)
    for k in range(6):
        Sk = suffix[k]
        vfac[:, k] = np.conj(np.swapaxes(Sk, -1, -2)) @ _I_GEN[k] @ Sk

    V = np.empty_like(vfac)
    V[:, 0] = vfac[:, 0]                 # alpha
    V[:, 1] = vfac[:, 2]                 # tau, through gamma = tau - a
    V[:, 2] = vfac[:, 4] - vfac[:, 2]    # a, direct factor minus gamma term
    V[:, 3] = vfac[:, 1]                 # beta
    V[:, 4] = vfac[:, 5]                 # b
    V[:, 5] = vfac[:, 3]                 # theta
    return U, V


def spectral_frame(points: np.ndarray):
    """Eigenvalues and eigenbasis derivative matrices W_x, batched.

    W_x = U* (d rho / dx) U.  For the six angle coordinates this is the
    commutator [V_x, diag(lam)], i.e. W_x[k,l] = V_x[k,l] (l_l - l_k); for
    the two spectral coordinates it is diag(d lam / d zeta).  Every W_x is
    Hermitian and traceless.

    Parameters
    ----------
    points : (N, 8) array in canonical coordinate order.

    Returns
    -------
    lam : (N, 3) eigenvalues.
    W : (N, 8, 3, 3) complex, coordinate-ordered derivative matrices.
    U : (N, 3, 3) the diagonalizing unitaries.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 8:
        raise ValueError(f"expected (N, 8) points, got {pts.shape}")
    U, V = _unitary_and_angle_frames(pts)
    lam = eigenvalues_from_spherical(pts[:, 6:8])
    dlam = _eigenvalue_derivatives(pts[:, 6:8])

    gap = lam[:, None, :] - lam[:, :, None]          # gap[k, l] = l_l - l_k
    n = pts.shape[0]
    W = np.zeros((n, 8, 3, 3), dtype=complex)
    W[:, :6] = V * gap[:, None, :, :]
    for j in range(3):
        W[:, 6, j, j] = dlam[:, 0, j]
        W[:, 7, j, j] = dlam[:, 1, j]
    return lam, W, U


def euler_unitary(p: ParameterPoint) -> np.ndarray:
    """The SU(3) element U(p), unitary with unit determinant."""
    U, _ = _unitary_and_angle_frames(p.as_array()[None, :])
    return U[0]


def density(p: ParameterPoint) -> HermitianState:
    """Density matrix rho = U diag(lam) U* at p."""
    require_in_domain(p)
    U = euler_unitary(p)
    spec = spectrum_from_spherical(p.zeta1, p.zeta2)
    rho = (U * spec.as_array()) @ np.conj(U.T)
    return HermitianState(rho=rho, unitary=U, spectrum=spec)


def density_partials(p: ParameterPoint) -> np.ndarray:
    """Analytic first derivatives of rho, one 3x3 Hermitian traceless matrix
    per coordinate, in canonical coordinate order: (8, 3, 3) complex."""
    require_in_domain(p)
    lam, W, U = spectral_frame(p.as_array()[None, :])
    Uh = np.conj(U[0].T)
    return np.einsum("ij,xjk,kl->xil", U[0], W[0], Uh)


# ---------------------------------------------------------------------------
# Two-level (Bloch ball) analogue, the constant-curvature validation target.
# ---------------------------------------------------------------------------

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

BLOCH_COORD_NAMES = ("r", "theta_s", "phi_s")


def bloch_density2(r: float, theta_s: float, phi_s: float):
    """2x2 state rho = (I + r n.sigma)/2 and its three analytic partials.

    Returns (rho, partials) with partials of shape (3, 2, 2) ordered as
    (d/dr, d/dtheta_s, d/dphi_s).  Requires 0 < r < 1.
    """
    if not (0.0 < r < 1.0):
        raise OutOfDomain(f"Bloch radius r={r!r} outside (0, 1)")
    st, ct = np.sin(theta_s), np.cos(theta_s)
    sp, cp = np.sin(phi_s), np.cos(phi_s)
    n = np.array([st * cp, st * sp, ct])
    dn_dt = np.array([ct * cp, ct * sp, -st])
    dn_dp = np.array([-st * sp, st * cp, 0.0])
    nsig = np.einsum("k,kij->ij", n, _PAULI)
    rho = 0.5 * (np.eye(2, dtype=complex) + r * nsig)
    partials = np.stack(
        [
            0.5 * nsig,
            0.5 * r * np.einsum("k,kij->ij", dn_dt, _PAULI),
            0.5 * r * np.einsum("k,kij->ij", dn_dp, _PAULI),
        ]
    )
    return rho, partials


def bloch_spectral_frame(points: np.ndarray):
    """Eigenvalues and W_x matrices for batched Bloch coordinates.

    Parameters
    ----------
    points : (N, 3) array of (r, theta_s, phi_s).

    Returns
    -------
    lam : (N, 2) eigenvalues ((1+r)/2, (1-r)/2).
    W : (N, 3, 2, 2) complex Hermitian matrices U* (d rho/dx) U.
    """
    pts = np.asarray(points, dtype=float)
    r, th, ph = pts[:, 0], pts[:, 1], pts[:, 2]
    if np.any((r <= 0.0) | (r >= 1.0)):
        raise OutOfDomain("Bloch radius outside (0, 1)")
    lam = 0.5 * np.stack([1.0 + r, 1.0 - r], axis=-1)

    half = 0.5 * th
    c, s = np.cos(half), np.sin(half)
    eip = np.exp(1j * ph)
    n = pts.shape[0]
    # Columns are the +r and -r eigenvectors of n.sigma.
    U = np.empty((n, 2, 2), dtype=complex)
    U[:, 0, 0] = c
    U[:, 1, 0] = s * eip
    U[:, 0, 1] = -s * np.conj(eip)
    U[:, 1, 1] = c

    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    nvec = np.stack([st * cp, st * sp, ct], axis=-1)
    dn_dt = np.stack([ct * cp, ct * sp, -st], axis=-1)
    dn_dp = np.stack([-st * sp, st * cp, np.zeros_like(th)], axis=-1)
    drho = np.empty((n, 3, 2, 2), dtype=complex)
    drho[:, 0] = 0.5 * np.einsum("nk,kij->nij", nvec, _PAULI)
    drho[:, 1] = 0.5 * r[:, None, None] * np.einsum("nk,kij->nij", dn_dt, _PAULI)
    drho[:, 2] = 0.5 * r[:, None, None] * np.einsum("nk,kij->nij", dn_dp, _PAULI)

    Uh = np.conj(np.swapaxes(U, -1, -2))
    W = np.einsum("nij,nxjk,nkl->nxil", Uh, drho, U)
    return lam, W
