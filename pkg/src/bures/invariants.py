"""Exterior algebra of matrix-valued forms in eight dimensions.

A matrix-valued p-form assigns an 8x8 real matrix to every strictly
increasing p-multi-index over 1..8.  Wedge products combine the form indices
with shuffle signs and the matrix slots with matrix multiplication, so wedge
powers of a curvature two-form reproduce the usual gauge-theoretic F^2, F^3
and F^4.  The module also evaluates the pointwise curvature invariants
(F,F), (F,F)^2, (F^2,F^2), (tr F^2, tr F^2), (F^3,F^3)^(2/3), (F^4,F^4)^(1/2)
and the sigma_k trivialization invariants obtained from det(I + tF) in the
commutative ring of even-degree scalar forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Tuple

import numpy as np

from .curvature import CurvatureTwoForm
from .errors import DegreeMismatch, DegreeOverflow

__all__ = [
    "MatrixForm",
    "ScalarForm",
    "InvariantRow",
    "INVARIANT_NAMES",
    "wedge",
    "inner",
    "trace_form_square",
    "invariant_row",
    "invariant_entries_batch",
    "sigma_invariants",
]

_DIM = 8
_ALLOWED_DEGREES = (0, 2, 4, 6, 8)


@lru_cache(maxsize=None)
def _index_tuples(degree: int) -> Tuple[Tuple[int, ...], ...]:
    """All strictly increasing ``degree``-multi-indices over 0..7."""
    return tuple(combinations(range(_DIM), degree))


@lru_cache(maxsize=None)
def _index_lookup(degree: int) -> Dict[Tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(_index_tuples(degree))}


def _shuffle_sign(left: Tuple[int, ...], right: Tuple[int, ...]) -> int:
    """Sign of the permutation sorting the concatenation of two tuples."""
    merged = left + right
    sign = 1
    for i in range(len(merged)):
        for j in range(i + 1, len(merged)):
            if merged[i] > merged[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _wedge_table(p: int, q: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Gather/scatter table for the wedge of a p-form with a q-form.

    Returns index arrays (j_idx, k_idx, signs) grouped by output multi-index
    (every output index has exactly C(p+q, p) splits, in a fixed order) and
    the group size, so a wedge reduces to gather, multiply, reshape, sum.
    """
    lookup_p = _index_lookup(p)
    lookup_q = _index_lookup(q)
    j_idx, k_idx, signs = [], [], []
    for out in _index_tuples(p + q):
        out_set = set(out)
        for left in combinations(out, p):
            right = tuple(x for x in out if x not in set(left))
            assert set(left) | set(right) == out_set
            j_idx.append(lookup_p[left])
            k_idx.append(lookup_q[right])
            signs.append(_shuffle_sign(left, right))
    group = comb(p + q, p)
    return (
        np.asarray(j_idx, dtype=np.intp),
        np.asarray(k_idx, dtype=np.intp),
        np.asarray(signs, dtype=float),
        group,
    )


@dataclass(frozen=True)
class MatrixForm:
    """A matrix-valued form of even degree on an 8-dimensional frame.

    Attributes
    ----------
    degree : int
        One of 0, 2, 4, 6, 8.
    data : ndarray, shape (C(8, degree), 8, 8)
        Component matrices, ordered by the lexicographic enumeration of
        strictly increasing multi-indices.
    """

    degree: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.degree not in _ALLOWED_DEGREES:
            raise DegreeMismatch(f"degree must be one of {_ALLOWED_DEGREES}, got {self.degree}")
        expected = (comb(_DIM, self.degree), _DIM, _DIM)
        data = np.asarray(self.data, dtype=float)
        if data.shape != expected:
            raise DegreeMismatch(f"data shape {data.shape} does not match degree {self.degree} (expected {expected})")
        object.__setattr__(self, "data", data)

    @classmethod
    def zero(cls, degree: int) -> "MatrixForm":
        return cls(degree=degree, data=np.zeros((comb(_DIM, degree), _DIM, _DIM)))

    @classmethod
    def from_components(cls, degree: int, mapping: Dict[Tuple[int, ...], np.ndarray]) -> "MatrixForm":
        """Build a form from a map of 1-indexed increasing multi-indices."""
        data = np.zeros((comb(_DIM, degree), _DIM, _DIM))
        lookup = _index_lookup(degree)
        for key, matrix in mapping.items():
            zero_based = tuple(sorted(i - 1 for i in key))
            if len(set(zero_based)) != len(key) or zero_based != tuple(i - 1 for i in key):
                raise ValueError(f"multi-index {key} must be strictly increasing")
            data[lookup[zero_based]] = np.asarray(matrix, dtype=float)
        return cls(degree=degree, data=data)

    @classmethod
    def from_curvature(cls, form: CurvatureTwoForm) -> "MatrixForm":
        """View a curvature two-form as a degree-2 matrix-valued form."""
        return cls(degree=2, data=np.asarray(form.f, dtype=float))

    @property
    def components(self) -> Dict[Tuple[int, ...], np.ndarray]:
        """Map from 1-indexed increasing multi-indices to component matrices."""
        return {
            tuple(i + 1 for i in idx): self.data[pos].copy()
            for pos, idx in enumerate(_index_tuples(self.degree))
        }


@dataclass(frozen=True)
class ScalarForm:
    """A scalar-coefficient form of even degree (zero above degree 8).

    Attributes
    ----------
    degree : int
        Any even nonnegative integer; degrees above 8 carry no components.
    coeffs : ndarray, shape (C(8, degree),)
        Coefficients over the lexicographic increasing multi-indices; the
        array is empty for degrees above 8.
    """

    degree: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        size = comb(_DIM, self.degree) if self.degree <= _DIM else 0
        coeffs = np.asarray(self.coeffs, dtype=float).reshape(size)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, degree: int) -> "ScalarForm":
        size = comb(_DIM, degree) if degree <= _DIM else 0
        return cls(degree=degree, coeffs=np.zeros(size))

    @classmethod
    def constant(cls, value: float) -> "ScalarForm":
        return cls(degree=0, coeffs=np.array([float(value)]))


def wedge(f: MatrixForm, g: MatrixForm) -> MatrixForm:
    """Wedge product of matrix-valued forms (matrix product on the slots).

    For each increasing output index I the component is the signed sum over
    splits I = J | K of the matrix products F_J G_K.
    """
    degree = f.degree + g.degree
    if degree > _DIM:
        raise DegreeOverflow(f"wedge degree {f.degree} + {g.degree} exceeds {_DIM}")
    j_idx, k_idx, signs, group = _wedge_table(f.degree, g.degree)
    prod = np.matmul(f.data[j_idx], g.data[k_idx]) * signs[:, None, None]
    data = prod.reshape(comb(_DIM, degree), group, _DIM, _DIM).sum(axis=1)
    return MatrixForm(degree=degree, data=data)


def _wedge_data_batch(a: np.ndarray, p: int, b: np.ndarray, q: int) -> np.ndarray:
    """Batched wedge on raw component arrays of shape (..., C, 8, 8)."""
    j_idx, k_idx, signs, group = _wedge_table(p, q)
    prod = np.matmul(a[..., j_idx, :, :], b[..., k_idx, :, :]) * signs[:, None, None]
    new_shape = prod.shape[:-3] + (comb(_DIM, p + q), group, _DIM, _DIM)
    return prod.reshape(new_shape).sum(axis=-3)


def inner(f: MatrixForm, g: MatrixForm) -> float:
    """Componentwise trace inner product: sum over indices of tr(F_I^T G_I)."""
    if f.degree != g.degree:
        raise DegreeMismatch(f"inner product requires equal degrees, got {f.degree} and {g.degree}")
    return float(np.einsum("cij,cij->", f.data, g.data))


def trace_form_square(f: MatrixForm) -> np.ndarray:
    """The 8x8 matrix tr F^2 = -2 sum over pairs of F_ab F_ab."""
    if f.degree != 2:
        raise DegreeMismatch(f"trace_form_square requires a 2-form, got degree {f.degree}")
    return -2.0 * np.einsum("cij,cjk->ik", f.data, f.data)


@dataclass(frozen=True)
class InvariantRow:
    """The six pointwise curvature invariants of a two-form field.

    Attributes
    ----------
    ff : float
        (F, F).
    ff2 : float
        (F, F)^2.
    f2f2 : float
        (F^2, F^2) with F^2 the matrix-wedge square.
    trf2 : float
        (tr F^2, tr F^2), the squared Frobenius norm of trace_form_square.
    f3f3_23 : float
        (F^3, F^3)^(2/3).
    f4f4_12 : float
        (F^4, F^4)^(1/2).
    """

    ff: float
    ff2: float
    f2f2: float
    trf2: float
    f3f3_23: float
    f4f4_12: float

    def as_array(self) -> np.ndarray:
        return np.array([self.ff, self.ff2, self.f2f2, self.trf2, self.f3f3_23, self.f4f4_12])


#: Field order of :class:`InvariantRow`, shared with the CSV writer.
INVARIANT_NAMES: Tuple[str, ...] = ("ff", "ff2", "f2f2", "trf2", "f3f3_23", "f4f4_12")


def invariant_entries_batch(f: np.ndarray) -> np.ndarray:
    """Vectorized invariant rows for component arrays of shape (..., 28, 8, 8).

    Returns an array of shape (..., 6) ordered as :data:`INVARIANT_NAMES`.
    """
    f = np.asarray(f, dtype=float)
    ff = np.einsum("...cij,...cij->...", f, f)
    f2 = _wedge_data_batch(f, 2, f, 2)
    f2f2 = np.einsum("...cij,...cij->...", f2, f2)
    f3 = _wedge_data_batch(f2, 4, f, 2)
    f3f3 = np.einsum("...cij,...cij->...", f3, f3)
    f4 = _wedge_data_batch(f3, 6, f, 2)
    f4f4 = np.einsum("...cij,...cij->...", f4, f4)
    trf2 = -2.0 * np.einsum("...cij,...cjk->...ik", f, f)
    trf2_sq = np.einsum("...ik,...ik->...", trf2, trf2)
    return np.stack(
        [ff, ff**2, f2f2, trf2_sq, np.maximum(f3f3, 0.0) ** (2.0 / 3.0), np.sqrt(np.maximum(f4f4, 0.0))],
        axis=-1,
    )


def invariant_row(form) -> InvariantRow:
    """Evaluate the six invariants for a curvature two-form or 2-form."""
    if isinstance(form, CurvatureTwoForm):
        data = np.asarray(form.f, dtype=float)
    elif isinstance(form, MatrixForm):
        if form.degree != 2:
            raise DegreeMismatch(f"invariant_row requires a 2-form, got degree {form.degree}")
        data = form.data
    else:
        data = np.asarray(form, dtype=float)
    entries = invariant_entries_batch(data)
    return InvariantRow(*(float(x) for x in entries))


def _scalar_matrix_mul(a: np.ndarray, p: int, b: np.ndarray, q: int) -> np.ndarray:
    """Product of 8x8 matrices whose entries are scalar forms.

    ``a`` has shape (8, 8, C(8,p)), ``b`` has shape (8, 8, C(8,q)); matrix
    slots multiply while the form coefficients wedge.  Degrees above 8 give
    the empty zero form.
    """
    if p + q > _DIM:
        return np.zeros((_DIM, _DIM, 0))
    j_idx, k_idx, signs, group = _wedge_table(p, q)
    prod = np.einsum("ikt,kjt->ijt", a[:, :, j_idx], b[:, :, k_idx]) * signs
    return prod.reshape(_DIM, _DIM, comb(_DIM, p + q), group).sum(axis=-1)


def sigma_invariants(form) -> Tuple[ScalarForm, ...]:
    """Coefficients sigma_0..sigma_8 of det(I + tF) in the even wedge ring.

    The input 2-form is read as an 8x8 skew matrix whose (i, j) entry is the
    scalar 2-form of components F_.[i, j]; determinant expansion happens in
    the commutative ring of even-degree scalar forms, via Newton's identities
    from the power sums p_m = tr(F^m).  sigma_k has degree 2k, so sigma_5
    through sigma_8 are identically zero in eight dimensions (their degree
    exceeds 8); they are returned as zero forms of the nominal degree.
    """
    if isinstance(form, CurvatureTwoForm):
        data = np.asarray(form.f, dtype=float)
    elif isinstance(form, MatrixForm):
        if form.degree != 2:
            raise DegreeMismatch(f"sigma_invariants requires a 2-form, got degree {form.degree}")
        data = form.data
    else:
        data = np.asarray(form, dtype=float)
    if data.shape != (comb(_DIM, 2), _DIM, _DIM):
        raise DegreeMismatch(f"expected component array of shape (28, 8, 8), got {data.shape}")

    matrix = np.transpose(data, (1, 2, 0))  # (8, 8, 28): entries are 2-forms
    # Power sums p_m = tr(M^m); degree 2m, zero beyond m = 4.
    powers = {1: matrix}
    for m in (2, 3, 4):
        powers[m] = _scalar_matrix_mul(powers[m - 1], 2 * (m - 1), matrix, 2)
    p_sums = {m: np.einsum("iic->c", powers[m]) for m in (1, 2, 3, 4)}

    def _coeffs(sf: ScalarForm) -> np.ndarray:
        return sf.coeffs

    def _wedge_coeffs(a: np.ndarray, p: int, b: np.ndarray, q: int) -> np.ndarray:
        if p + q > _DIM:
            return np.zeros(0)
        j_idx, k_idx, signs, group = _wedge_table(p, q)
        prod = a[j_idx] * b[k_idx] * signs
        return prod.reshape(comb(_DIM, p + q), group).sum(axis=-1)

    sigmas = [ScalarForm.constant(1.0)]
    for k in range(1, _DIM + 1):
        degree = 2 * k
        acc = np.zeros(comb(_DIM, degree) if degree <= _DIM else 0)
        for i in range(1, k + 1):
            if i > 4 or 2 * (k - i) + 2 * i > _DIM:
                continue
            term = _wedge_coeffs(p_sums[i], 2 * i, _coeffs(sigmas[k - i]), 2 * (k - i))
            acc = acc + ((-1.0) ** (i - 1)) * term
        sigmas.append(ScalarForm(degree=degree, coeffs=acc / k))
    return tuple(sigmas)
