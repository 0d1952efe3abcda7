"""Spin(7) duality on two-form indices in eight dimensions.

The 28-dimensional space of 2-forms on an 8-dimensional orthonormal frame
splits into irreducible pieces of dimensions 21 and 7 under the Spin(7)
invariant fourth-rank tensor.  This module builds the splitting from seven
explicit normal vectors (the "set a" combinations), derives the complementary
projector, and exposes residuals for both the 7 defining equations of the
21-dimensional piece and the 21 defining equations of the 7-dimensional piece.

Conventions
-----------
Pairs (a, b) with 1 <= a < b <= 8 are enumerated lexicographically and mapped
to 0..27.  The eigenvalue-(+1) subspace of the duality operator Phi is
21-dimensional and is called *self-dual* here; the eigenvalue-(-3) subspace is
7-dimensional and is called *anti-self-dual*.  (The naming of the two pieces
is not uniform across the literature; this module fixes one choice and uses it
consistently.)
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from typing import Sequence, Tuple

import numpy as np

from .curvature import CurvatureTwoForm

__all__ = [
    "PairIndex",
    "DualityOperator",
    "PAIR_INDEX",
    "SET_A",
    "SET_B",
    "set_a_basis",
    "projectors",
    "decompose",
    "decompose_components",
    "duality_flip",
    "set_a_residuals",
    "set_b_residuals",
]


class PairIndex:
    """Bijection between ordered pairs (a < b), a, b in 1..8, and 0..27.

    The order is lexicographic: (1,2) -> 0, (1,3) -> 1, ..., (7,8) -> 27.
    """

    def __init__(self, n: int = 8) -> None:
        self.n = n
        self.pairs: Tuple[Tuple[int, int], ...] = tuple(
            (a + 1, b + 1) for a, b in combinations(range(n), 2)
        )
        self._lookup = {pair: i for i, pair in enumerate(self.pairs)}

    def __len__(self) -> int:
        return len(self.pairs)

    def index_of(self, a: int, b: int) -> int:
        """Return the linear index of the ordered pair (a, b), 1-indexed."""
        return self._lookup[(a, b)]

    def pair_of(self, index: int) -> Tuple[int, int]:
        """Return the 1-indexed ordered pair stored at ``index``."""
        return self.pairs[index]


#: Module-wide pair enumeration for 8 dimensions (28 pairs).
PAIR_INDEX = PairIndex(8)

#: The seven "set a" combinations.  Each row lists four (pair, coefficient)
#: terms; the corresponding linear forms cut out the 21-dimensional piece.
SET_A: Tuple[Tuple[Tuple[Tuple[int, int], int], ...], ...] = (
    (((1, 2), +1), ((3, 4), +1), ((5, 6), +1), ((7, 8), +1)),
    (((1, 3), +1), ((2, 4), -1), ((5, 7), +1), ((6, 8), -1)),
    (((1, 4), +1), ((2, 3), +1), ((6, 7), -1), ((5, 8), -1)),
    (((1, 5), +1), ((2, 6), -1), ((3, 7), -1), ((4, 8), +1)),
    (((1, 6), +1), ((2, 5), +1), ((3, 8), +1), ((4, 7), +1)),
    (((1, 7), +1), ((2, 8), -1), ((3, 5), +1), ((4, 6), -1)),
    (((1, 8), +1), ((2, 7), +1), ((3, 6), -1), ((4, 5), -1)),
)

#: The twenty-one "set b" binomials, each stored as (pair, pair, sign) meaning
#: the linear form F[pair1] + sign * F[pair2].  They cut out the 7-dimensional
#: piece, i.e. they vanish on the anti-self-dual part.
SET_B: Tuple[Tuple[Tuple[int, int], Tuple[int, int], int], ...] = (
    ((1, 2), (3, 4), -1),
    ((1, 2), (5, 6), -1),
    ((1, 2), (7, 8), -1),
    ((1, 3), (2, 4), +1),
    ((1, 3), (5, 7), -1),
    ((1, 3), (6, 8), +1),
    ((1, 4), (2, 3), -1),
    ((1, 4), (6, 7), +1),
    ((1, 4), (5, 8), +1),
    ((1, 5), (2, 6), +1),
    ((1, 5), (3, 7), +1),
    ((1, 5), (4, 8), -1),
    ((1, 6), (2, 5), -1),
    ((1, 6), (3, 8), -1),
    ((1, 6), (4, 7), -1),
    ((1, 7), (2, 8), +1),
    ((1, 7), (3, 5), -1),
    ((1, 7), (4, 6), +1),
    ((1, 8), (2, 7), -1),
    ((1, 8), (3, 6), +1),
    ((1, 8), (4, 5), +1),
)


@dataclass(frozen=True)
class DualityOperator:
    """The Spin(7) duality operator on the 28-dimensional pair space.

    Attributes
    ----------
    phi : ndarray, shape (28, 28)
        Symmetric operator with eigenvalues +1 (multiplicity 21) and -3
        (multiplicity 7); ``phi = p_plus - 3 * p_minus``.
    p_plus : ndarray, shape (28, 28)
        Orthogonal projector onto the 21-dimensional (self-dual) piece.
    p_minus : ndarray, shape (28, 28)
        Orthogonal projector onto the 7-dimensional (anti-self-dual) piece.
    """

    phi: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray


def set_a_basis() -> np.ndarray:
    """Return the seven set-a normal vectors as rows of a (7, 28) array.

    Each row has exactly four nonzero entries, each +-1, placed at the pair
    slots listed in :data:`SET_A`.  The rows are mutually orthogonal with
    squared norm 4.
    """
    basis = np.zeros((7, len(PAIR_INDEX)))
    for row, terms in enumerate(SET_A):
        for (a, b), coeff in terms:
            basis[row, PAIR_INDEX.index_of(a, b)] = float(coeff)
    return basis


@lru_cache(maxsize=1)
def _cached_operator() -> DualityOperator:
    basis = set_a_basis()
    p_minus = basis.T @ basis / 4.0
    p_plus = np.eye(len(PAIR_INDEX)) - p_minus
    phi = p_plus - 3.0 * p_minus
    return DualityOperator(phi=phi, p_plus=p_plus, p_minus=p_minus)


def projectors() -> DualityOperator:
    """Build the duality operator from the set-a normal vectors.

    ``p_minus`` is the orthogonal projector onto the span of the seven set-a
    vectors (each of squared norm 4), ``p_plus`` its complement, and
    ``phi = p_plus - 3 p_minus``.  The operator is immutable and cached.
    """
    return _cached_operator()


def decompose_components(values: np.ndarray, axis: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Split an array with a 28-long pair axis into (plus, minus) parts.

    Parameters
    ----------
    values : ndarray
        Any array whose ``axis`` dimension has length 28 and enumerates the
        lexicographic pairs.
    axis : int
        Position of the pair axis.

    Returns
    -------
    (plus, minus) : pair of ndarrays with the same shape as ``values``.
    """
    values = np.asarray(values)
    if values.shape[axis] != len(PAIR_INDEX):
        raise ValueError(
            f"pair axis must have length {len(PAIR_INDEX)}, got {values.shape[axis]}"
        )
    op = projectors()
    moved = np.moveaxis(values, axis, 0)
    plus = np.moveaxis(np.tensordot(op.p_plus, moved, axes=([1], [0])), 0, axis)
    minus = np.moveaxis(np.tensordot(op.p_minus, moved, axes=([1], [0])), 0, axis)
    return plus, minus


def decompose(form: CurvatureTwoForm) -> Tuple[CurvatureTwoForm, CurvatureTwoForm]:
    """Split a curvature two-form into self-dual and anti-self-dual parts.

    The projectors act along the 28-dimensional pair index, entrywise in the
    matrix slots, so ``plus.f + minus.f == form.f`` up to rounding and the two
    parts are orthogonal under the componentwise trace inner product.
    """
    plus, minus = decompose_components(form.f, axis=0)
    return replace(form, f=plus), replace(form, f=minus)


def duality_flip(form: CurvatureTwoForm) -> CurvatureTwoForm:
    """Return the duality-flipped field F+ minus F-.

    Applying the flip twice returns the original field.
    """
    plus, minus = decompose_components(form.f, axis=0)
    return replace(form, f=plus - minus)


def _component_array(form) -> np.ndarray:
    values = form.f if isinstance(form, CurvatureTwoForm) else np.asarray(form)
    if values.shape[0] != len(PAIR_INDEX):
        raise ValueError("expected a leading pair axis of length 28")
    return values


def _frobenius(x: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(x) ** 2)))


def set_a_residuals(form) -> np.ndarray:
    """Frobenius norms of the seven set-a combinations of components.

    Accepts a :class:`CurvatureTwoForm` or any array with a leading pair axis.
    All seven residuals vanish on the self-dual part of a field.
    """
    values = _component_array(form)
    out = np.empty(len(SET_A))
    for row, terms in enumerate(SET_A):
        acc = sum(
            float(coeff) * values[PAIR_INDEX.index_of(a, b)] for (a, b), coeff in terms
        )
        out[row] = _frobenius(acc)
    return out


def set_b_residuals(form) -> np.ndarray:
    """Frobenius norms of the twenty-one set-b combinations of components.

    Accepts a :class:`CurvatureTwoForm` or any array with a leading pair axis.
    All twenty-one residuals vanish on the anti-self-dual part of a field.
    """
    values = _component_array(form)
    out = np.empty(len(SET_B))
    for row, (pair1, pair2, sign) in enumerate(SET_B):
        acc = values[PAIR_INDEX.index_of(*pair1)] + float(sign) * values[
            PAIR_INDEX.index_of(*pair2)
        ]
        out[row] = _frobenius(acc)
    return out
