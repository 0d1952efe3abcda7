"""Deterministic Monte-Carlo and lattice quadrature over the Bures manifold.

Integration runs over the six active coordinates (tau, beta, b, theta, zeta1,
zeta2); the two isometry angles alpha and a are fixed at constants and
accounted for analytically by using the full eight-dimensional box volume

    V8 = pi^7 / 32 * arccos(3^(-1/2))  ~  90.1668.

Determinism contract: points come from a counter-based generator (Philox)
keyed by the seed with the counter holding (retry, sample index), so the
point for a given (seed, index, retry) never depends on execution order or
worker count.  All reductions are pairwise sums over index-ordered buffers
with a fixed binary tree, so estimates are bitwise reproducible.

Rejection: a draw (or lattice node) is rejected when the spectrum guard
trips at the center, or the curvature pipeline reports a non-finite,
ill-conditioned, or noise-dominated result (pair-exchange symmetry guard;
see QuadratureSpec.sym_tol).  Monte-Carlo redraws a rejected index with an
incremented retry counter, up to a cap; the lattice skips the node and keeps
the midpoint weight of the full grid, so a skipped node contributes zero.
In both modes ``n_evaluated + n_rejected`` equals the total number of draws
or nodes attempted.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.random import Generator, Philox

from .bures_metric import metric_batch
from .curvature import BURES_CHART, Chart, frame_curvature_batch
from .errors import BuresError, RetryExhausted
from .invariants import INVARIANT_NAMES, InvariantRow, invariant_entries_batch
from .spin7 import decompose_components
from .state_space import (
    COORD_NAMES,
    DOMAIN_BOUNDS,
    ParameterPoint,
    eigenvalues_from_spherical,
    spectrum_gaps,
)

__all__ = [
    "QuadratureSpec",
    "Estimate",
    "TableRow",
    "ACTIVE_COORDS",
    "ALPHA_FIXED",
    "A_FIXED",
    "V8",
    "FIELD_NAMES",
    "sample_point",
    "admissible_point",
    "lattice_points",
    "integrate",
    "invariant_table",
    "ym_actions",
    "table_csv",
]

#: Coordinates actually integrated over; the remaining two are isometries.
ACTIVE_COORDS: Tuple[str, ...] = ("tau", "beta", "b", "theta", "zeta1", "zeta2")

#: Fixed values of the two isometry angles during integration.
ALPHA_FIXED = 0.7
A_FIXED = 0.3

_ACTIVE_SLOTS = tuple(COORD_NAMES.index(name) for name in ACTIVE_COORDS)
_ACTIVE_LO = np.array([DOMAIN_BOUNDS[name][0] for name in ACTIVE_COORDS])
_ACTIVE_HI = np.array([DOMAIN_BOUNDS[name][1] for name in ACTIVE_COORDS])

#: Full eight-dimensional box volume (product of all coordinate ranges).
V8 = float(np.prod([hi - lo for lo, hi in DOMAIN_BOUNDS.values()]))

#: Row order of the invariant table: full field, anti-self-dual part,
#: self-dual part, and the duality-flipped recombination F+ minus F-.
FIELD_NAMES: Tuple[str, ...] = ("bures", "asd", "sd", "diff")

#: Chart used for quadrature evaluations: identical to the Bures chart but
#: with the spectrum guard disabled, since rejection is handled by masks.
QUAD_CHART = Chart(
    dim=8,
    metric_fn=partial(metric_batch, min_eigenvalue=0.0, min_gap=0.0),
    box_lengths=BURES_CHART.box_lengths,
)

_EVAL_CHUNK = 256


@dataclass(frozen=True)
class QuadratureSpec:
    """Configuration of one integration run.

    Attributes
    ----------
    method : str
        "mc" for Monte-Carlo, "lattice" for the midpoint rule.
    n_samples : int
        Sample count (Monte-Carlo only).
    nodes_per_dim : int
        Nodes per active coordinate (lattice only); the grid has
        nodes_per_dim**6 midpoints.
    seed : int
        64-bit key of the counter-based generator.
    threshold : float
        Degeneracy guard: centers whose spectrum has an eigenvalue or a gap
        below this are rejected before evaluation.  The sub-threshold set
        has measure O(sqrt(threshold)), so the default keeps the rejection
        fraction well below 1e-3.
    step_scale : float
        Finite-difference step override passed to the curvature engine.
    sym_tol : float
        Noise guard forwarded to the curvature engine: points where the
        pair-exchange symmetry of the curvature tensor is violated beyond
        this relative bound are rejected as finite-difference garbage
        (these cluster at the chart's coordinate singularities, where the
        volume weight collapses and the true contribution is negligible).
    retry_cap : int
        Maximum redraws per Monte-Carlo index before RetryExhausted.
    """

    method: str = "mc"
    n_samples: int = 1000
    nodes_per_dim: int = 2
    seed: int = 0
    threshold: float = 1e-8
    step_scale: float = 1e-3
    sym_tol: float = 1e-3
    retry_cap: int = 8

    def __post_init__(self) -> None:
        if self.method not in ("mc", "lattice"):
            raise ValueError(f"method must be 'mc' or 'lattice', got {self.method!r}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.nodes_per_dim < 2:
            raise ValueError(f"nodes_per_dim must be >= 2, got {self.nodes_per_dim}")
        if not self.threshold > 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class Estimate:
    """One integral estimate with its bookkeeping.

    ``stderr`` is the Monte-Carlo standard error of the mean (zero for the
    deterministic lattice rule).  ``n_evaluated + n_rejected`` equals the
    total number of draws or nodes attempted.
    """

    value: float
    stderr: float
    n_evaluated: int
    n_rejected: int


@dataclass(frozen=True)
class TableRow:
    """Integrated invariant row for one field, with standard errors."""

    field: str
    row: InvariantRow
    stderr: InvariantRow
    n_evaluated: int
    n_rejected: int


def _pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Sum along axis 0 with a fixed binary tree (index-ordered pairing).

    The reduction order depends only on the buffer length, never on any
    chunking or scheduling, so results are bitwise stable.
    """
    arr = np.asarray(values, dtype=float)
    if arr.shape[0] == 0:
        return np.zeros(arr.shape[1:])
    while arr.shape[0] > 1:
        even = (arr.shape[0] // 2) * 2
        head = arr[0:even:2] + arr[1:even:2]
        if arr.shape[0] % 2:
            arr = np.concatenate([head, arr[even:]], axis=0)
        else:
            arr = head
    return arr[0]


def sample_point(seed: int, index: int, retry: int = 0) -> ParameterPoint:
    """Uniform draw in the active box for one (seed, index, retry) triple.

    The generator is Philox with key ``seed`` and 256-bit counter
    (0, 0, retry, index); six uniforms fill the active coordinates in the
    order tau, beta, b, theta, zeta1, zeta2, while alpha and a sit at the
    fixed constants.  Identical arguments always give the identical point.
    """
    gen = Generator(Philox(key=seed, counter=[0, 0, retry, index]))
    u = gen.random(6)
    return _point_from_uniforms(u)


def admissible_point(seed: int, index: int, threshold: float = 1e-8,
                     retry_cap: int = 8) -> ParameterPoint:
    """The first draw for ``index`` whose spectrum clears the guard.

    Walks the retry counter exactly as the Monte-Carlo integrator does, so
    pointwise drivers (per-point diagnostics) see the same points as the
    integral estimators when no curvature-level rejection occurs.
    """
    for retry in range(retry_cap + 1):
        p = sample_point(seed, index, retry)
        if _screen(p.as_array()[None, :], threshold)[0]:
            return p
    raise RetryExhausted(f"sample {index} exhausted {retry_cap} retries")


def _point_from_uniforms(u: np.ndarray) -> ParameterPoint:
    coords = np.empty(8)
    coords[COORD_NAMES.index("alpha")] = ALPHA_FIXED
    coords[COORD_NAMES.index("a")] = A_FIXED
    coords[list(_ACTIVE_SLOTS)] = _ACTIVE_LO + u * (_ACTIVE_HI - _ACTIVE_LO)
    return ParameterPoint.from_array(coords)


def _sample_batch(seed: int, indices: np.ndarray, retries: np.ndarray) -> np.ndarray:
    """Coordinate array (N, 8) for many (index, retry) draws."""
    out = np.empty((indices.size, 8))
    out[:, COORD_NAMES.index("alpha")] = ALPHA_FIXED
    out[:, COORD_NAMES.index("a")] = A_FIXED
    for row, (idx, retry) in enumerate(zip(indices, retries)):
        gen = Generator(Philox(key=int(seed), counter=[0, 0, int(retry), int(idx)]))
        u = gen.random(6)
        out[row, list(_ACTIVE_SLOTS)] = _ACTIVE_LO + u * (_ACTIVE_HI - _ACTIVE_LO)
    return out


def lattice_points(nodes_per_dim: int) -> np.ndarray:
    """Midpoint-rule nodes (k^6, 8) over the active box, C-order over the
    active coordinates in their fixed order."""
    k = nodes_per_dim
    mids = [(lo + (np.arange(k) + 0.5) * (hi - lo) / k)
            for lo, hi in zip(_ACTIVE_LO, _ACTIVE_HI)]
    grid = np.meshgrid(*mids, indexing="ij")
    active = np.stack([g.reshape(-1) for g in grid], axis=1)
    out = np.empty((active.shape[0], 8))
    out[:, COORD_NAMES.index("alpha")] = ALPHA_FIXED
    out[:, COORD_NAMES.index("a")] = A_FIXED
    out[:, list(_ACTIVE_SLOTS)] = active
    return out


def _screen(points: np.ndarray, threshold: float) -> np.ndarray:
    """Vector of booleans: True where the center spectrum clears the guard."""
    zeta = points[:, [COORD_NAMES.index("zeta1"), COORD_NAMES.index("zeta2")]]
    lam = eigenvalues_from_spherical(zeta)
    return (lam.min(axis=-1) >= threshold) & (spectrum_gaps(lam) >= threshold)


def _finish(values: np.ndarray, n_planned: int, n_evaluated: int,
            n_rejected: int, mc: bool) -> Tuple[Estimate, ...]:
    """Turn an index-ordered (N, width) value buffer into Estimates."""
    width = values.shape[1]
    total = _pairwise_sum(values)
    mean = total / n_planned
    if mc:
        dev = values - mean[None, :]
        ssq = _pairwise_sum(dev * dev)
        stderr = V8 * np.sqrt(ssq / (n_planned - 1.0) / n_planned) if n_planned > 1 else np.zeros(width)
    else:
        stderr = np.zeros(width)
    value = V8 * mean
    return tuple(
        Estimate(value=float(value[j]), stderr=float(stderr[j]),
                 n_evaluated=n_evaluated, n_rejected=n_rejected)
        for j in range(width)
    )


def _integrate_pointwise(spec: QuadratureSpec,
                         integrand: Callable[[ParameterPoint], Sequence[float]]
                         ) -> Tuple[Estimate, ...]:
    def _try(point: ParameterPoint):
        try:
            vec = np.asarray(integrand(point), dtype=float).reshape(-1)
        except BuresError:
            return None
        if not np.isfinite(vec).all():
            return None
        return vec

    if spec.method == "mc":
        n = spec.n_samples
        buffer = None
        n_rejected = 0
        for index in range(n):
            for retry in range(spec.retry_cap + 1):
                point = sample_point(spec.seed, index, retry)
                coords = point.as_array()[None, :]
                vec = _try(point) if _screen(coords, spec.threshold)[0] else None
                if vec is not None:
                    break
                n_rejected += 1
            else:
                raise RetryExhausted(
                    f"sample {index} exhausted {spec.retry_cap} retries")
            if buffer is None:
                buffer = np.zeros((n, vec.size))
            buffer[index] = vec
        return _finish(buffer, n, n, n_rejected, mc=True)

    nodes = lattice_points(spec.nodes_per_dim)
    keep = _screen(nodes, spec.threshold)
    buffer = None
    n_rejected = 0
    for row in range(nodes.shape[0]):
        vec = _try(ParameterPoint.from_array(nodes[row])) if keep[row] else None
        if vec is None:
            n_rejected += 1
            vec = None
        if buffer is None and vec is not None:
            buffer = np.zeros((nodes.shape[0], vec.size))
        if buffer is not None and vec is not None:
            buffer[row] = vec
    if buffer is None:
        raise RetryExhausted("every lattice node was rejected")
    return _finish(buffer, nodes.shape[0], nodes.shape[0] - n_rejected,
                   n_rejected, mc=False)


def integrate(spec: QuadratureSpec,
              integrand: Callable[[ParameterPoint], Sequence[float]]
              ) -> Tuple[Estimate, ...]:
    """Integrate a vector-valued integrand over the manifold box.

    The integrand receives a :class:`ParameterPoint` and must return a real
    vector; if the integral should carry the Riemannian volume the integrand
    itself must include the sqrt(det g) weight.  The estimate is the sample
    mean (midpoint mean for the lattice) times the full box volume V8.
    Draws rejected by the spectrum guard, by a raised numerical-domain
    error, or by non-finite output are redrawn (mc) or skipped (lattice).
    """
    return _integrate_pointwise(spec, integrand)


# ---------------------------------------------------------------------------
# Vectorized field-row evaluation shared by the table and action drivers.
# ---------------------------------------------------------------------------

def _field_values_batch(points: np.ndarray, spec: QuadratureSpec
                        ) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted invariant entries for all four fields at many points.

    Returns (values (N, 24), ok (N,)).  values[:, 6*r : 6*r+6] holds the six
    invariant entries of FIELD_NAMES[r], each multiplied by sqrt(det g).
    """
    n = points.shape[0]
    values = np.zeros((n, 4 * len(INVARIANT_NAMES)))
    ok = np.zeros(n, dtype=bool)
    for start in range(0, n, _EVAL_CHUNK):
        stop = min(start + _EVAL_CHUNK, n)
        chunk = points[start:stop]
        f, sqrt_det, good = frame_curvature_batch(
            QUAD_CHART, chunk, step_scale=spec.step_scale,
            sym_tol=spec.sym_tol)
        plus, minus = decompose_components(f, axis=1)
        fields = (f, minus, plus, plus - minus)
        entries = np.concatenate(
            [invariant_entries_batch(field) for field in fields], axis=1)
        entries *= sqrt_det[:, None]
        good &= np.isfinite(entries).all(axis=1)
        entries[~good] = 0.0
        values[start:stop] = entries
        ok[start:stop] = good
    return values, ok


def _mc_field_values(spec: QuadratureSpec) -> Tuple[np.ndarray, int]:
    """Index-ordered weighted rows for all Monte-Carlo samples."""
    n = spec.n_samples
    values = np.zeros((n, 4 * len(INVARIANT_NAMES)))
    retries = np.zeros(n, dtype=np.int64)
    pending = np.arange(n)
    n_rejected = 0
    while pending.size:
        pts = _sample_batch(spec.seed, pending, retries[pending])
        good = _screen(pts, spec.threshold)
        vals = np.zeros((pending.size, values.shape[1]))
        if good.any():
            v, ok = _field_values_batch(pts[good], spec)
            accept = np.zeros(pending.size, dtype=bool)
            accept[np.flatnonzero(good)] = ok
            vals[np.flatnonzero(good)] = v
        else:
            accept = np.zeros(pending.size, dtype=bool)
        values[pending[accept]] = vals[accept]
        rejected = pending[~accept]
        n_rejected += rejected.size
        retries[rejected] += 1
        over = retries[rejected] > spec.retry_cap
        if over.any():
            raise RetryExhausted(
                f"sample {int(rejected[over][0])} exhausted {spec.retry_cap} retries")
        pending = rejected
    return values, n_rejected


def _lattice_field_values(spec: QuadratureSpec) -> Tuple[np.ndarray, int]:
    """Node-ordered weighted rows over the midpoint grid (zeros at skips)."""
    nodes = lattice_points(spec.nodes_per_dim)
    keep = _screen(nodes, spec.threshold)
    values = np.zeros((nodes.shape[0], 4 * len(INVARIANT_NAMES)))
    if keep.any():
        v, ok = _field_values_batch(nodes[keep], spec)
        slots = np.flatnonzero(keep)
        values[slots[ok]] = v[ok]
        n_rejected = int(nodes.shape[0] - slots[ok].size)
    else:
        n_rejected = nodes.shape[0]
    return values, n_rejected


def _field_values(spec: QuadratureSpec) -> Tuple[np.ndarray, int, int]:
    if spec.method == "mc":
        values, n_rejected = _mc_field_values(spec)
        return values, spec.n_samples, n_rejected
    values, n_rejected = _lattice_field_values(spec)
    return values, values.shape[0], n_rejected


def invariant_table(spec: QuadratureSpec) -> Tuple[TableRow, ...]:
    """Integrated invariant rows for the fields F, F-, F+, and F+ minus F-.

    Each row integrates the six invariant entries with the sqrt(det g)
    volume weight over the active box; Monte-Carlo rows carry per-entry
    standard errors, lattice rows report zero stderr.
    """
    values, n_planned, n_rejected = _field_values(spec)
    mc = spec.method == "mc"
    n_evaluated = n_planned if mc else n_planned - n_rejected
    estimates = _finish(values, n_planned, n_evaluated, n_rejected, mc=mc)
    rows = []
    width = len(INVARIANT_NAMES)
    for r, name in enumerate(FIELD_NAMES):
        block = estimates[r * width:(r + 1) * width]
        rows.append(TableRow(
            field=name,
            row=InvariantRow(*(e.value for e in block)),
            stderr=InvariantRow(*(e.stderr for e in block)),
            n_evaluated=n_evaluated,
            n_rejected=n_rejected,
        ))
    return tuple(rows)


def table_csv(rows: Sequence[TableRow]) -> str:
    """Serialize integrated invariant rows as CSV text.

    Header is ``field`` followed by the five integrated entries past (F, F)
    and then their standard errors (``stderr_`` prefixed).  Values carry 17
    significant digits and lines end with CRLF, so identical rows always
    give identical bytes.
    """
    names = INVARIANT_NAMES[1:]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["field", *names, *(f"stderr_{n}" for n in names)])
    for row in rows:
        vals = row.row.as_array()[1:]
        errs = row.stderr.as_array()[1:]
        writer.writerow([row.field,
                         *(format(v, ".17g") for v in vals),
                         *(format(e, ".17g") for e in errs)])
    return buf.getvalue()


def ym_actions(spec: QuadratureSpec) -> Tuple[Estimate, Estimate, Estimate]:
    """The squared curvature norms: integrals of (F,F), (F+,F+), (F-,F-).

    All three come from the same sample set, so the orthogonal-decomposition
    identity (the first equals the sum of the other two) holds to rounding.
    """
    values, n_planned, n_rejected = _field_values(spec)
    mc = spec.method == "mc"
    n_evaluated = n_planned if mc else n_planned - n_rejected
    width = len(INVARIANT_NAMES)
    ff_cols = values[:, [0 * width, 2 * width, 1 * width]]  # F, F+, F-
    return _finish(ff_cols, n_planned, n_evaluated, n_rejected, mc=mc)
