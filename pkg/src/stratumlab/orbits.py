"""Orbit types of the block-unitary adjoint action on density matrices.

The unitary group of a block-diagonal algebra acts by conjugation. The orbit
of a density matrix is determined by its per-block eigenvalue multiset, and
its orbit TYPE by the per-block multiplicity pattern of eigenvalue clusters
(including the zero cluster, which is a cluster like any other). The isotropy
group of a point is the product of unitary groups of the clusters, so its
dimension is the sum of squared multiplicities.

Orbit types are ordered the standard (counter-intuitive) way: a type is
smaller when its isotropy is bigger, so the maximally mixed state is the
minimum and generic (all eigenvalues simple per block) points are maximal.
On multiplicity patterns this is per-block partition refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import AmbiguousClustering, NotInAlgebra, NotUnitary
from .states import AlgebraDescriptor, DensityMatrix, validate_density
from .strata import rank_from_eigenvalues

DEFAULT_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class OrbitSignature:
    """Per-block eigenvalue-cluster multiplicities, each block descending."""

    alg: AlgebraDescriptor
    per_block: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.per_block) != self.alg.num_blocks:
            raise ValueError(
                f"{len(self.per_block)} block patterns for {self.alg.num_blocks} blocks"
            )
        fixed = []
        for mults, n in zip(self.per_block, self.alg.block_sizes):
            mults = tuple(int(m) for m in mults)
            if any(m < 1 for m in mults) or sum(mults) != n:
                raise ValueError(f"multiplicities {mults} do not partition block size {n}")
            if tuple(sorted(mults, reverse=True)) != mults:
                raise ValueError(f"multiplicities {mults} must be sorted descending")
            fixed.append(mults)
        object.__setattr__(self, "per_block", tuple(fixed))


def _cluster_multiplicities(w: np.ndarray, cluster_tol: float) -> tuple[int, ...]:
    """Single-linkage clustering of sorted eigenvalues.

    Consecutive values within cluster_tol merge; the resulting clusters must
    then be separated by more than 10 * cluster_tol, else the pattern is
    declared ambiguous.
    """
    w = np.sort(np.asarray(w, dtype=float))
    sizes = [1]
    boundary_gaps = []
    for a, b in zip(w[:-1], w[1:]):
        gap = b - a
        if gap <= cluster_tol:
            sizes[-1] += 1
        else:
            sizes.append(1)
            boundary_gaps.append(gap)
    for gap in boundary_gaps:
        if gap < 10.0 * cluster_tol:
            raise AmbiguousClustering(gap, cluster_tol)
    return tuple(sorted(sizes, reverse=True))


def orbit_signature(
    rho: DensityMatrix, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> OrbitSignature:
    """Cluster multiplicity pattern of each block of rho.

    Raises
    ------
    AmbiguousClustering
        If two clusters in some block are separated by less than
        10 * cluster_tol.
    """
    patterns = []
    for block in rho.blocks():
        w = np.linalg.eigvalsh(block)
        patterns.append(_cluster_multiplicities(w, cluster_tol))
    return OrbitSignature(alg=rho.alg, per_block=tuple(patterns))


def isotropy_dim(sig: OrbitSignature) -> int:
    """Real dimension of the stabilizer: sum of squared multiplicities."""
    return sum(m * m for mults in sig.per_block for m in mults)


def adjoint_act(u: np.ndarray, rho: DensityMatrix, tol: float = 1e-10) -> DensityMatrix:
    """Conjugate rho by a block-diagonal unitary u.

    Raises
    ------
    NotInAlgebra
        If u has off-block entries above tol.
    NotUnitary
        If u^dagger u deviates from the identity beyond tol.
    """
    u = np.asarray(u, dtype=complex)
    n = rho.dim
    if u.shape != (n, n):
        raise ValueError(f"expected shape {(n, n)}, got {u.shape}")
    off = linalg.off_block_magnitude(u, rho.alg.block_sizes)
    if off > tol:
        raise NotInAlgebra("unitary is not block diagonal for this algebra", magnitude=off)
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    if dev > tol:
        raise NotUnitary("matrix is not unitary", magnitude=dev)
    return validate_density(u @ rho.matrix @ u.conj().T, rho.alg, rho.tol)


def _anti_hermitian_basis(n: int) -> list[np.ndarray]:
    """Real orthogonal basis of the anti-Hermitian n x n matrices (n^2 of them)."""
    out = []
    for d in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[d, d] = 1j
        out.append(m)
    for d in range(n):
        for e in range(d + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[d, e] = 1.0
            m[e, d] = -1.0
            out.append(m / np.sqrt(2.0))
            m = np.zeros((n, n), dtype=complex)
            m[d, e] = 1j
            m[e, d] = 1j
            out.append(m / np.sqrt(2.0))
    return out


def orbit_dim(rho: DensityMatrix, tol: float = 1e-9) -> int:
    """Dimension of the adjoint orbit through rho.

    Computed as the rank of the real linear map X -> [X, rho] over the
    anti-Hermitian block-diagonal X (the Lie algebra of the block unitary
    group); singular values are thresholded with the usual gray-zone
    protocol. Equals dim U(A) - isotropy_dim whenever clustering is clean.
    """
    n = rho.dim
    columns = []
    at = 0
    for nb in rho.alg.block_sizes:
        for x_block in _anti_hermitian_basis(nb):
            x = np.zeros((n, n), dtype=complex)
            x[at : at + nb, at : at + nb] = x_block
            c = x @ rho.matrix - rho.matrix @ x
            columns.append(np.concatenate([c.real.ravel(), c.imag.ravel()]))
        at += nb
    m = np.stack(columns, axis=1)
    sv = np.linalg.svd(m, compute_uv=False)
    return rank_from_eigenvalues(sv, tol)


def _merges_to(fine: tuple[int, ...], coarse: tuple[int, ...]) -> bool:
    """Whether the parts of `fine` can be grouped to sum to the parts of
    `coarse` (i.e. fine refines coarse as a partition)."""
    if sum(fine) != sum(coarse):
        return False
    coarse = tuple(sorted(coarse, reverse=True))
    fine = tuple(sorted(fine, reverse=True))
    if len(fine) < len(coarse):
        return False

    def fill(remaining: list[int], targets: tuple[int, ...]) -> bool:
        if not targets:
            return not remaining
        target = targets[0]
        # choose a subset of remaining parts summing to target; parts are
        # sorted descending, always take a candidate set containing the
        # largest remaining part to kill symmetric duplicates
        first = remaining[0]
        if first > target:
            return False

        def choose(idx: int, need: int, picked: list[int]) -> bool:
            if need == 0:
                rest = list(remaining)
                for p in picked:
                    rest.remove(p)
                return fill(rest, targets[1:])
            for j in range(idx, len(remaining)):
                if j > idx and remaining[j] == remaining[j - 1]:
                    continue
                if remaining[j] <= need:
                    if choose(j + 1, need - remaining[j], picked + [remaining[j]]):
                        return True
            return False

        return choose(1, target - first, [first])

    return fill(list(fine), coarse)


def orbit_type_leq(a: OrbitSignature, b: OrbitSignature) -> bool:
    """Partial order on orbit types: a <= b iff b's stabilizer embeds into
    a's, which for multiplicity patterns means that, per block, b's partition
    refines a's (a's parts are sums of groups of b's parts)."""
    if a.alg != b.alg:
        raise ValueError("signatures belong to different algebras")
    return all(
        _merges_to(fb, fa) for fa, fb in zip(a.per_block, b.per_block)
    )
