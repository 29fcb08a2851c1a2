"""Finite matrix realizations of three-generator ladder algebras.

Every realization packages three dense complex matrices (raising, lowering,
weight) together with the two structure constants that fix their
commutation relations:

    [raising, lowering] = pairing * weight
    [weight, raising]   = +step * raising
    [weight, lowering]  = -step * lowering

Bosonic realizations live on a truncated Fock basis where the relations
cannot close on the boundary rows; they carry an interior projector and
all algebra checks are evaluated after projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Array = np.ndarray

# Closure tolerances for shipped realizations.
EXACT_RESIDUAL_TOL = 1e-13
TRUNCATED_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class StructureConstants:
    """The two scalars classifying a three-generator ladder algebra.

    ``step`` is the weight shift produced by the raising generator,
    ``pairing`` the weight coefficient produced by commuting the ladder
    pair.  Their product decides the character of the algebra: positive
    products behave elliptically (compact, su(2)-like), negative products
    hyperbolically (su(1,1)-like).
    """

    step: float
    pairing: float

    def __post_init__(self) -> None:
        if self.step == 0 or self.pairing == 0:
            raise ValueError("structure constants must be nonzero")

    @property
    def is_elliptic(self) -> bool:
        return self.step * self.pairing > 0


@dataclass(frozen=True)
class AlgebraRealization:
    """A concrete matrix triple obeying the ladder commutation relations.

    ``hermitian_pair`` records whether the lowering generator is the
    adjoint of the raising one and the weight is Hermitian; these are the
    realizations with unitary gauge rotations.  ``interior_mask`` selects
    the basis rows unaffected by Fock-space truncation (all rows for exact
    realizations).  ``conserved_number`` carries the fixed excitation
    label of sector realizations (half the total quanta for two-mode
    blocks) for use in scalar phase offsets.
    """

    name: str
    raising: Array
    lowering: Array
    weight: Array
    constants: StructureConstants
    hermitian_pair: bool
    interior_mask: Array = field(repr=False)
    conserved_number: float | None = None

    def __post_init__(self) -> None:
        for label, mat in (("raising", self.raising), ("lowering", self.lowering),
                           ("weight", self.weight)):
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ValueError(f"{label} generator must be square")
            if mat.shape != self.weight.shape:
                raise ValueError("generators must share one dimension")
            if not np.all(np.isfinite(mat)):
                raise ValueError(f"{label} generator has non-finite entries")
        if self.interior_mask.shape != (self.dim,):
            raise ValueError("interior mask must have one flag per basis row")

    @property
    def dim(self) -> int:
        return self.weight.shape[0]

    @property
    def is_exact(self) -> bool:
        return bool(np.all(self.interior_mask))

    def interior_projector(self) -> Array:
        """Diagonal 0/1 matrix selecting the truncation-safe rows."""
        return np.diag(self.interior_mask.astype(float)).astype(complex)

    def project(self, matrix: Array) -> Array:
        """Zero the boundary rows and columns of ``matrix``."""
        mask = self.interior_mask
        return matrix * np.outer(mask, mask)


@dataclass(frozen=True)
class RealizationCheck:
    """Projected Frobenius norms of the three commutator defects."""

    pairing_residual: float
    raising_residual: float
    lowering_residual: float
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.pairing_residual, self.raising_residual,
                   self.lowering_residual)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


def commutator(x: Array, y: Array) -> Array:
    """Return ``x @ y - y @ x``."""
    if x.shape != y.shape or x.ndim != 2:
        raise ValueError(f"commutator needs equal square shapes, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def verify_realization(realization: AlgebraRealization,
                       tol: float = TRUNCATED_RESIDUAL_TOL) -> RealizationCheck:
    """Check the three commutation relations on the interior rows.

    Always returns a report; ``passed`` is true when every projected
    residual norm is below ``tol``.
    """
    a, b, c = realization.raising, realization.lowering, realization.weight
    m, n = realization.constants.step, realization.constants.pairing
    residuals = (
        commutator(a, b) - n * c,
        commutator(c, a) - m * a,
        commutator(c, b) + m * b,
    )
    norms = tuple(float(np.linalg.norm(realization.project(d))) for d in residuals)
    return RealizationCheck(*norms, tolerance=tol)


def _full_mask(dim: int) -> Array:
    return np.ones(dim, dtype=bool)


def _truncated_mask(dim: int, boundary_rows: int) -> Array:
    mask = np.ones(dim, dtype=bool)
    mask[dim - boundary_rows:] = False
    return mask


def spin_j(j: float) -> AlgebraRealization:
    """Standard spin-j ladder triple on the basis m = j, j-1, ..., -j.

    Exact for every half-integer j; structure constants (1, 2).
    """
    two_j = 2 * j
    if two_j <= 0 or abs(two_j - round(two_j)) > 1e-12:
        raise ValueError(f"2j must be a positive integer, got j={j}")
    dim = int(round(two_j)) + 1
    weights = j - np.arange(dim)
    raising = np.zeros((dim, dim), dtype=complex)
    for k in range(dim - 1):
        m_low = weights[k + 1]
        raising[k, k + 1] = np.sqrt(j * (j + 1) - m_low * (m_low + 1))
    return AlgebraRealization(
        name=f"spin-{j:g}",
        raising=raising,
        lowering=raising.conj().T,
        weight=np.diag(weights).astype(complex),
        constants=StructureConstants(step=1.0, pairing=2.0),
        hermitian_pair=True,
        interior_mask=_full_mask(dim),
    )


def schwinger_su2(n_total: int) -> AlgebraRealization:
    """Fixed-total-quanta block of the two-mode bosonic su(2) realization.

    The block with ``n_total`` quanta shared between two modes carries the
    ladder pair (mode-1 up, mode-2 down) and half the mode-number
    difference as weight; it is permutation-similar to ``spin_j(n_total/2)``.
    The conserved half-total ``n_total / 2`` is reported for the scalar
    phase-offset channel.
    """
    if n_total < 0:
        raise ValueError("total quanta must be nonnegative")
    dim = n_total + 1
    # Basis ordered by ascending quanta in the first mode.
    n1 = np.arange(dim)
    raising = np.zeros((dim, dim), dtype=complex)
    for k in range(dim - 1):
        raising[k + 1, k] = np.sqrt((k + 1) * (n_total - k))
    weight = np.diag(n1 - n_total / 2).astype(complex)
    return AlgebraRealization(
        name=f"schwinger-{n_total}",
        raising=raising,
        lowering=raising.conj().T,
        weight=weight,
        constants=StructureConstants(step=1.0, pairing=2.0),
        hermitian_pair=True,
        interior_mask=_full_mask(dim),
        conserved_number=n_total / 2,
    )


def su11_discrete(k: float, dim: int) -> AlgebraRealization:
    """Positive-discrete-series su(1,1) ladder truncated at ``dim`` rungs.

    Weight spectrum k, k+1, ...; raising elements sqrt((p+1)(2k+p)).
    Structure constants (1, -2): the hyperbolic class.  The pairing
    relation fails on the top rung of any truncation, so the interior
    projector excludes the last row.
    """
    if k <= 0:
        raise ValueError("Bargmann index must be positive")
    if dim < 2:
        raise ValueError("need at least two ladder rungs")
    p = np.arange(dim)
    raising = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim - 1):
        raising[idx + 1, idx] = np.sqrt((idx + 1) * (2 * k + idx))
    return AlgebraRealization(
        name=f"su11-k{k:g}",
        raising=raising,
        lowering=raising.conj().T,
        weight=np.diag(k + p).astype(complex),
        constants=StructureConstants(step=1.0, pairing=-2.0),
        hermitian_pair=True,
        interior_mask=_truncated_mask(dim, 1),
    )


def boson_ladder(dim: int) -> Array:
    """Truncated single-mode annihilation operator."""
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        a[n, n + 1] = np.sqrt(n + 1)
    return a


def gho_realization(dim: int) -> AlgebraRealization:
    """Quadratic-oscillator triple (position^2, momentum^2, dilation).

    The squared quadratures and the symmetrized dilation generator close
    with structure constants (4, 2).  The ladder pair is not an adjoint
    pair (both members are individually Hermitian) and the generators
    reach two rungs up the Fock ladder, so the interior projector excludes
    the top two rows.
    """
    if dim < 3:
        raise ValueError("need at least three Fock states")
    a = boson_ladder(dim)
    ad = a.conj().T
    q = (a + ad) / np.sqrt(2)
    p = -1j * (a - ad) / np.sqrt(2)
    return AlgebraRealization(
        name=f"gho-{dim}",
        raising=q @ q,
        lowering=p @ p,
        weight=1j * (q @ p + p @ q),
        constants=StructureConstants(step=4.0, pairing=2.0),
        hermitian_pair=False,
        interior_mask=_truncated_mask(dim, 2),
    )


def two_level_realization() -> AlgebraRealization:
    """Transition-operator triple of a bare two-level system.

    Raising maps the lower onto the upper state, the weight is the
    population difference; structure constants (2, 1).  Exact.
    """
    raising = np.array([[0, 1], [0, 0]], dtype=complex)
    return AlgebraRealization(
        name="two-level",
        raising=raising,
        lowering=raising.conj().T,
        weight=np.diag([1.0, -1.0]).astype(complex),
        constants=StructureConstants(step=2.0, pairing=1.0),
        hermitian_pair=True,
        interior_mask=_full_mask(2),
    )
