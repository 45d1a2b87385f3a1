"""Dense complex-matrix kernel shared by the rest of the package.

Hermitian eigendecomposition, operator norms, numerical nullspaces, PSD square
roots, and orthonormal operator subspaces under the Hilbert-Schmidt inner
product tr(A†B).  Dimensions stay small (d ≤ 64, superoperators ≤ 4096), so
dense LAPACK routines via numpy are used throughout.

Vectorization is column-stacking: vec(AXB) = (Bᵀ ⊗ A) vec(X).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPositive, NotSquare
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "HermitianEigensystem",
    "OperatorSubspace",
    "SubspaceComparison",
    "as_complex_matrix",
    "frobenius_norm",
    "hermitian_defect",
    "hermitian_eigendecompose",
    "hs_inner",
    "nullspace",
    "operator_norm",
    "orthonormalize",
    "sqrt_psd",
    "subspace_projector",
    "subspaces_equal",
    "sum_terms",
    "unvec",
    "vec",
]


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise NotSquare(f"expected a matrix, got array of rank {a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def hermitian_defect(a: np.ndarray) -> float:
    """Frobenius norm of M - M†."""
    return float(np.linalg.norm(a - a.conj().T))


def _require_hermitian(a: np.ndarray, tol: float) -> None:
    if hermitian_defect(a) > tol * np.linalg.norm(a):
        raise NotHermitian(f"asymmetry {hermitian_defect(a):.3e} exceeds {tol:g} * ‖M‖")


def operator_norm(m) -> float:
    """Largest singular value."""
    a = as_complex_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def sum_terms(terms: Iterable[np.ndarray]) -> np.ndarray:
    """Left-to-right accumulation, shared by every path that sums operator lists.

    Keeping one accumulation order makes independently computed sums of
    bit-identical terms bit-identical themselves.
    """
    return reduce(np.add, terms)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`vec` for a d×d matrix."""
    return np.asarray(v).reshape((d, d), order="F")


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigenvalues ascending, eigenvectors as unitary columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eigendecompose(m, tol: Tolerances = DEFAULT) -> HermitianEigensystem:
    """Full eigensystem of a Hermitian matrix.

    Raises NotSquare / NotHermitian on malformed input and NoConvergence if
    the underlying solver gives up.
    """
    a = as_complex_matrix(m)
    _require_square(a)
    _require_hermitian(a, tol.hermitian)
    try:
        w, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return HermitianEigensystem(w, u)


def sqrt_psd(m, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Unique PSD square root; eigenvalue dust above -tol.psd is clipped to 0."""
    eig = hermitian_eigendecompose(m, tol)
    if eig.eigenvalues[0] < -tol.psd:
        raise NotPositive(f"eigenvalue {eig.eigenvalues[0]:.3e} below -{tol.psd:g}")
    w = np.clip(eig.eigenvalues, 0.0, None)
    root = (eig.eigenvectors * np.sqrt(w)) @ eig.eigenvectors.conj().T
    return (root + root.conj().T) / 2


def nullspace(m, tol: float = DEFAULT.nullspace) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel of M.

    Singular vectors whose singular value falls at or below tol·σ_max are
    kept.  A matrix with σ_max ≤ tol counts as zero and returns the full
    identity basis: rounding dust must not masquerade as structure, and every
    returned x then still satisfies ‖Mx‖ ≤ tol·‖x‖.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_complex_matrix(m)
    cols = a.shape[1]
    if a.size == 0:
        return np.eye(cols, dtype=complex)
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] <= tol:
        return np.eye(cols, dtype=complex)
    _, _, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.count_nonzero(s > tol * s[0]))
    return vh[rank:].conj().T.copy()


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(A†B)."""
    return complex(np.vdot(a, b))


@dataclass(frozen=True)
class OperatorSubspace:
    """Subspace of d×d operators with an orthonormal basis under tr(A†B)."""

    dim_hilbert: int
    basis: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_vectors(cls, columns: np.ndarray, dim_hilbert: int) -> "OperatorSubspace":
        """Build from orthonormal d²-vectors (columns), unvectorizing each."""
        mats = tuple(unvec(columns[:, i], dim_hilbert) for i in range(columns.shape[1]))
        return cls(dim_hilbert, mats)


def orthonormalize(mats: Sequence[np.ndarray], drop_tol: float = DEFAULT.nullspace) -> list[np.ndarray]:
    """Modified Gram-Schmidt under the Hilbert-Schmidt inner product.

    Vectors whose residual norm falls below drop_tol are discarded.  A second
    projection pass keeps the basis orthonormal to working precision.
    """
    basis: list[np.ndarray] = []
    for m in mats:
        v = np.array(m, dtype=complex)
        for _ in range(2):
            for b in basis:
                v = v - hs_inner(b, v) * b
        nrm = frobenius_norm(v)
        if nrm < drop_tol:
            continue
        basis.append(v / nrm)
    return basis


def subspace_projector(s: OperatorSubspace) -> np.ndarray:
    """Orthogonal projector onto the subspace, as a d²×d² matrix."""
    d2 = s.dim_hilbert**2
    if not s.basis:
        return np.zeros((d2, d2), dtype=complex)
    v = np.column_stack([vec(b) for b in s.basis])
    return v @ v.conj().T


@dataclass(frozen=True)
class SubspaceComparison:
    equal: bool
    distance: float
    dim_left: int
    dim_right: int


def subspaces_equal(s1: OperatorSubspace, s2: OperatorSubspace, tol: float = DEFAULT.subspace) -> SubspaceComparison:
    """Compare two operator subspaces by the Frobenius distance of their projectors."""
    if s1.dim_hilbert != s2.dim_hilbert:
        raise DimensionMismatch(f"subspaces live on dimensions {s1.dim_hilbert} and {s2.dim_hilbert}")
    distance = float(np.linalg.norm(subspace_projector(s1) - subspace_projector(s2)))
    return SubspaceComparison(distance <= tol, distance, s1.dim, s2.dim)
