"""Quantitative non-commutation: spectral bins, witnesses, and contractive blocks.

For a commuting effect set, the products of per-effect spectral windows
(k/m, (k+1)/m], k ∈ {-1, ..., m-1}, tile the joint spectrum into bin
projections F^m_{k₁...kₙ}.  An operator commutes with every effect exactly
when it commutes with every such bin at every resolution; failure shows up as
an off-diagonal block between two windows of one effect.

witness_search finds such a block with window indices at least 2 apart by
doubling the resolution; build_contractive_block turns a witness into a block
Y on which the Lüders operation contracts the operator norm by an explicit,
computable margin.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .effects import Effect, EffectSet, spectral_window, window_index
from .errors import (
    CommutesNoWitness,
    DimensionMismatch,
    IndexOutOfRange,
    RefinementVanished,
    ResolutionExhausted,
)
from .operation import JointBlock, LuedersOperation, joint_eigenspaces, _require_commuting
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "ContractionReport",
    "M_MAX",
    "OffDiagonalBlock",
    "WitnessCertificate",
    "bin_commutation_check",
    "bin_projection",
    "build_contractive_block",
    "contraction_bound",
    "contraction_threshold",
    "minimal_spectral_gap",
    "occupied_bins",
    "offdiagonal_block_search",
    "witness_search",
]

# Resolution cap for the dyadic witness search.  A genuine non-commuter is
# caught once 1/m falls below half the smallest gap between coupled distinct
# eigenvalues, so the cap only converts pathological inputs into a typed error.
M_MAX = 2**20


def _check_bin_index(effect_set: EffectSet, m: int, ks) -> tuple[int, ...]:
    if m < 1:
        raise IndexOutOfRange(f"resolution m must be positive, got {m}")
    ks = tuple(int(k) for k in ks)
    if len(ks) != effect_set.n:
        raise IndexOutOfRange(f"expected {effect_set.n} indices, got {len(ks)}")
    for k in ks:
        if not -1 <= k <= m - 1:
            raise IndexOutOfRange(f"index {k} outside {{-1, ..., {m - 1}}}")
    return ks


def bin_projection(effect_set: EffectSet, m: int, ks, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Product of per-effect window projectors: F^m_{k₁...kₙ} = Π P^{Eᵢ}(kᵢ/m, (kᵢ+1)/m]."""
    _require_commuting(effect_set)
    ks = _check_bin_index(effect_set, m, ks)
    p = np.eye(effect_set.dim, dtype=complex)
    for eff, k in zip(effect_set.effects, ks):
        p = p @ spectral_window(eff, k / m, (k + 1) / m, tol).projector
    return p


def occupied_bins(effect_set: EffectSet, m: int, tol: Tolerances = DEFAULT) -> dict[tuple[int, ...], np.ndarray]:
    """Nonzero bin projections at resolution m, keyed by index tuple.

    Built from the joint eigenstructure, so only the at most d occupied tuples
    are materialized instead of all (m+1)ⁿ candidates.  Keys are sorted
    lexicographically for deterministic iteration.
    """
    js = joint_eigenspaces(effect_set, tol)
    groups: dict[tuple[int, ...], list[np.ndarray]] = {}
    for block in js.blocks:
        key = tuple(window_index(float(v), m, tol.cluster) for v in block.values)
        groups.setdefault(key, []).append(block.basis)
    return {
        key: mk.sum_terms([v @ v.conj().T for v in vs])
        for key, vs in sorted(groups.items())
    }


def bin_commutation_check(effect_set: EffectSet, b, m: int, tol: Tolerances = DEFAULT) -> bool:
    """True iff b commutes with every occupied bin projection at resolution m."""
    _require_commuting(effect_set)
    if m < 1:
        raise IndexOutOfRange(f"resolution m must be positive, got {m}")
    mat = mk.as_complex_matrix(b)
    thresh = tol.commutator * mk.operator_norm(mat)
    return all(
        mk.operator_norm(f @ mat - mat @ f) <= thresh
        for f in occupied_bins(effect_set, m, tol).values()
    )


def minimal_spectral_gap(effect_set: EffectSet, tol: Tolerances = DEFAULT) -> float:
    """Smallest positive gap between distinct per-effect eigenvalues of a commuting set.

    Bin checks at resolutions m with 2/m below this gap separate every pair of
    distinct eigenvalues, which is the point where commuting with all bins
    forces commuting with the effects themselves.  Returns inf when every
    effect is a scalar.
    """
    js = joint_eigenspaces(effect_set, tol)
    gap = math.inf
    values = np.array([b.values for b in js.blocks])
    for i in range(effect_set.n):
        col = np.sort(values[:, i])
        for a, b in zip(col, col[1:]):
            diff = float(b - a)
            if diff > tol.cluster:
                gap = min(gap, diff)
    return gap


@dataclass(frozen=True)
class OffDiagonalBlock:
    left: tuple[int, ...]
    right: tuple[int, ...]
    block_norm: float


def offdiagonal_block_search(
    effect_set: EffectSet,
    b,
    m: int,
    witness_tol: float | None = None,
    tol: Tolerances = DEFAULT,
) -> OffDiagonalBlock | None:
    """First pair of distinct occupied bins with ‖F b F'‖ above threshold, or None.

    Pairs are scanned in lexicographic order of (left, right), so the result
    is deterministic.
    """
    _require_commuting(effect_set)
    mat = mk.as_complex_matrix(b)
    thresh = tol.witness * mk.operator_norm(mat) if witness_tol is None else witness_tol
    bins = occupied_bins(effect_set, m, tol)
    for ks, ks2 in itertools.product(bins, repeat=2):
        if ks == ks2:
            continue
        norm = mk.operator_norm(bins[ks] @ mat @ bins[ks2])
        if norm > thresh:
            return OffDiagonalBlock(ks, ks2, norm)
    return None


# ---------------------------------------------------------------------------
# witness search on a single effect


@dataclass(frozen=True)
class WitnessCertificate:
    """A separated window pair of one effect that the operator couples.

    At resolution m the operator has a block of norm block_norm between the
    windows with indices k and j, |k - j| ≥ 2, so the windows enclose spectral
    values at least 1/m apart.
    """

    m: int
    k: int
    j: int
    block_norm: float
    left_projector: np.ndarray
    right_projector: np.ndarray

    def to_dict(self, full: bool = False) -> dict:
        out = {"m": self.m, "k": self.k, "j": self.j, "block_norm": self.block_norm}
        if full:
            from .serialize import matrix_to_lists

            out["left_projector"] = matrix_to_lists(self.left_projector)
            out["right_projector"] = matrix_to_lists(self.right_projector)
        return out


def witness_search(
    effect: Effect,
    b,
    witness_tol: float | None = None,
    tol: Tolerances = DEFAULT,
    m_max: int = M_MAX,
) -> WitnessCertificate:
    """Find windows of one effect, two or more indices apart, that b couples.

    Doubles the resolution m = 2, 4, 8, ... and scans window pairs in
    lexicographic (k, j) order; the first block with norm above the threshold
    and |k - j| ≥ 2 wins.  Raises CommutesNoWitness when [b, E] vanishes
    within tolerance and ResolutionExhausted past m_max.
    """
    mat = mk.as_complex_matrix(b)
    if mat.shape != effect.matrix.shape:
        raise DimensionMismatch(f"operator shape {mat.shape} does not match effect shape {effect.matrix.shape}")
    b_norm = mk.operator_norm(mat)
    comm = mk.operator_norm(effect.matrix @ mat - mat @ effect.matrix)
    if comm <= tol.commutator * b_norm:
        raise CommutesNoWitness(f"commutator norm {comm:.3e} within tolerance")
    thresh = tol.witness * b_norm if witness_tol is None else witness_tol

    u = effect.eigenvectors
    m = 2
    while m <= m_max:
        groups: dict[int, list[int]] = {}
        for idx, lam in enumerate(effect.eigenvalues):
            groups.setdefault(window_index(float(lam), m, tol.cluster), []).append(idx)
        projs = {
            k: u[:, cols] @ u[:, cols].conj().T for k, cols in sorted(groups.items())
        }
        for k, j in itertools.product(sorted(projs), repeat=2):
            if abs(k - j) < 2:
                continue
            norm = mk.operator_norm(projs[k] @ mat @ projs[j])
            if norm > thresh:
                return WitnessCertificate(m, k, j, norm, projs[k], projs[j])
        m *= 2
    raise ResolutionExhausted(f"no separated window pair up to resolution {m_max}")


# ---------------------------------------------------------------------------
# the contraction bound and the block construction


def contraction_bound(n: int, m: int, p: int) -> float:
    """Guaranteed norm-loss fraction (p² - 4√n·m·p - 2n) / (2(pm)²).

    n is the number of effects, m the witness resolution, p the refinement
    factor.  Positive once p exceeds roughly (4m + 2)√n; grows towards
    1/(2m²) as p → ∞.
    """
    if n < 1 or m < 1 or p < 1:
        raise ValueError("need n, m, p >= 1")
    return (p * p - 4 * math.sqrt(n) * m * p - 2 * n) / (2 * (p * m) ** 2)


def _contraction_bound_alternate(n: int, m: int, p: int) -> float:
    # Variant with the cross term not scaled by p; reported for reference,
    # never used in verdicts.
    return (p * p - 4 * math.sqrt(n) * m - 2 * n) / (2 * (p * m) ** 2)


def contraction_threshold(n: int, m: int) -> int:
    """Smallest p with a positive contraction bound, by integer scan."""
    p = 1
    while contraction_bound(n, m, p) <= 0:
        p += 1
    return p


@dataclass(frozen=True)
class ContractionReport:
    """A block Y = P X Q on which the operation contracts the norm.

    P and Q are products of bin projections from the commutant of the effect
    set, PQ = 0, and the refined first-coordinate indices satisfy
    |s₁ - s₁'| ≥ p.  achieved_ratio = (‖Y‖ - ‖Φ(Y)‖)/‖Y‖ is certified to be
    at least `bound`; `bound_alternate` is an informational variant.
    """

    n: int
    m: int
    p: int
    bound: float
    bound_alternate: float
    achieved_ratio: float
    coarse_left: tuple[int, ...]
    coarse_right: tuple[int, ...]
    refined_left: tuple[int, ...]
    refined_right: tuple[int, ...]
    y: np.ndarray
    left_projector: np.ndarray
    right_projector: np.ndarray
    y_norm: float
    image_norm: float

    def to_dict(self, full: bool = False) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "bound": self.bound,
            "bound_alternate": self.bound_alternate,
            "achieved_ratio": self.achieved_ratio,
            "coarse_left": list(self.coarse_left),
            "coarse_right": list(self.coarse_right),
            "refined_left": list(self.refined_left),
            "refined_right": list(self.refined_right),
            "y_norm": self.y_norm,
            "image_norm": self.image_norm,
        }
        if full:
            from .serialize import matrix_to_lists

            out["y"] = matrix_to_lists(self.y)
            out["left_projector"] = matrix_to_lists(self.left_projector)
            out["right_projector"] = matrix_to_lists(self.right_projector)
        return out


def _group_by_bins(blocks: list[JointBlock], m: int, tol: Tolerances) -> dict[tuple[int, ...], list[JointBlock]]:
    groups: dict[tuple[int, ...], list[JointBlock]] = {}
    for block in blocks:
        key = tuple(window_index(float(v), m, tol.cluster) for v in block.values)
        groups.setdefault(key, []).append(block)
    return groups


def _projector_of(blocks: list[JointBlock]) -> np.ndarray:
    return mk.sum_terms([b.basis @ b.basis.conj().T for b in blocks])


def build_contractive_block(
    effect_set: EffectSet,
    x,
    p: int,
    witness_tol: float | None = None,
    tol: Tolerances = DEFAULT,
) -> ContractionReport:
    """Construct a block of x that the Lüders operation provably contracts.

    Steps: find a witness pair (k, j) of the first effect at resolution m;
    expand to full bin tuples with first coordinates k and j that keep the
    block alive; refine both tuples at resolution p·m the same way.  The
    surviving block Y = P x Q then loses at least contraction_bound(n, m, p)
    of its operator norm under the operation.
    """
    _require_commuting(effect_set)
    if p < 1:
        raise ValueError("refinement factor p must be >= 1")
    mat = mk.as_complex_matrix(x)
    if mat.shape != (effect_set.dim, effect_set.dim):
        raise DimensionMismatch(f"operator shape {mat.shape} does not match dimension {effect_set.dim}")
    cert = witness_search(effect_set.effects[0], mat, witness_tol, tol)
    m, k, j = cert.m, cert.k, cert.j
    thresh = tol.witness * mk.operator_norm(mat) if witness_tol is None else witness_tol

    js = joint_eigenspaces(effect_set, tol)
    coarse = _group_by_bins(list(js.blocks), m, tol)
    left_keys = sorted(t for t in coarse if t[0] == k)
    right_keys = sorted(t for t in coarse if t[0] == j)
    chosen = None
    for ks, ks2 in itertools.product(left_keys, right_keys):
        p0 = _projector_of(coarse[ks])
        q0 = _projector_of(coarse[ks2])
        y0 = p0 @ mat @ q0
        if mk.operator_norm(y0) > thresh:
            chosen = (ks, ks2, p0, q0, y0)
            break
    if chosen is None:
        raise RefinementVanished("expanding the witness to full bin tuples lost the block")
    ks, ks2, p0, q0, y0 = chosen

    fine = p * m
    fine_left = _group_by_bins(coarse[ks], fine, tol)
    fine_right = _group_by_bins(coarse[ks2], fine, tol)
    refined = None
    for s, s2 in itertools.product(sorted(fine_left), sorted(fine_right)):
        fs = _projector_of(fine_left[s])
        fs2 = _projector_of(fine_right[s2])
        if mk.operator_norm(fs @ y0 @ fs2) > thresh:
            refined = (s, s2, fs, fs2)
            break
    if refined is None:
        raise RefinementVanished(f"refinement at resolution {fine} lost the block")
    s, s2, fs, fs2 = refined

    left = fs @ p0
    right = q0 @ fs2
    y = left @ mat @ right
    y_norm = mk.operator_norm(y)
    image_norm = mk.operator_norm(LuedersOperation(effect_set).apply(y))
    return ContractionReport(
        n=effect_set.n,
        m=m,
        p=p,
        bound=contraction_bound(effect_set.n, m, p),
        bound_alternate=_contraction_bound_alternate(effect_set.n, m, p),
        achieved_ratio=(y_norm - image_norm) / y_norm,
        coarse_left=ks,
        coarse_right=ks2,
        refined_left=s,
        refined_right=s2,
        y=y,
        left_projector=left,
        right_projector=right,
        y_norm=y_norm,
        image_norm=image_norm,
    )
