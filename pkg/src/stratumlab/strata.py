"""Rank strata of the density matrices of a block-diagonal algebra.

The density matrices of M_{n_1} (+) ... (+) M_{n_k} are partitioned by the
tuple of per-block ranks. Each piece (stratum) is a smooth manifold; over a
full matrix block, the rank-i stratum fibers over the Grassmannian of
(n - i)-dimensional kernels with positive-definite trace-normalized fibers,
giving real dimension 2 i (n - i) + i^2 - 1.

Rank decisions follow a strict tolerance protocol: eigenvalues must stay out
of the gray zone (tol/10, 10 tol), otherwise the classification refuses to
answer rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import AmbiguousRank, NotOrthonormal
from .states import AlgebraDescriptor, DensityMatrix, validate_density


def rank_from_eigenvalues(w: np.ndarray, tol: float) -> int:
    """Count eigenvalues above tol, enforcing the gray-zone protocol.

    Any value inside the open interval (tol/10, 10 tol) makes the count a
    coin flip, so AmbiguousRank is raised instead. Works on singular values
    too.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    w = np.asarray(w, dtype=float)
    in_zone = (w > tol / 10.0) & (w < 10.0 * tol)
    if bool(np.any(in_zone)):
        raise AmbiguousRank(float(w[in_zone][0]), tol)
    return int(np.count_nonzero(w > tol))


def numerical_rank(rho: DensityMatrix, tol: float | None = None) -> int:
    """Rank of a density matrix under the gray-zone protocol, clamped to >= 1.

    The clamp is sound: a trace-one PSD matrix cannot vanish.
    """
    if tol is None:
        tol = rho.tol
    return max(1, rank_from_eigenvalues(rho.eigenvalues(), tol))


@dataclass(frozen=True)
class StratumLabel:
    """Per-block ranks identifying one stratum of an algebra's state space."""

    alg: AlgebraDescriptor
    per_block: tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(i) for i in self.per_block)
        if len(ranks) != self.alg.num_blocks:
            raise ValueError(
                f"{len(ranks)} ranks for {self.alg.num_blocks} blocks"
            )
        for i, n in zip(ranks, self.alg.block_sizes):
            if not 0 <= i <= n:
                raise ValueError(f"block rank {i} outside [0, {n}]")
        if sum(ranks) == 0:
            raise ValueError("total rank 0 labels no stratum of the state space")
        object.__setattr__(self, "per_block", ranks)

    @property
    def total(self) -> int:
        return sum(self.per_block)


def classify(rho: DensityMatrix, tol: float | None = None) -> StratumLabel:
    """Stratum label (per-block ranks) of a density matrix.

    Raises AmbiguousRank if any block eigenvalue is in the tolerance gray
    zone.
    """
    if tol is None:
        tol = rho.tol
    ranks = []
    for block in rho.blocks():
        w = np.linalg.eigvalsh(block)
        ranks.append(rank_from_eigenvalues(w, tol))
    return StratumLabel(alg=rho.alg, per_block=tuple(ranks))


def stratum_dim(n: int, i: int) -> int:
    """Real dimension of the rank-i stratum in the states of M_n(C).

    2 i (n - i) from the Grassmannian of kernels plus i^2 - 1 for the
    trace-one positive-definite fiber; equivalently n^2 - (n - i)^2 - 1.
    """
    if not 1 <= i <= n:
        raise ValueError(f"rank must satisfy 1 <= i <= n, got i={i}, n={n}")
    return 2 * i * (n - i) + i * i - 1


def stratum_dim_label(label: StratumLabel) -> int:
    """Real dimension of the stratum of a direct sum: per-block counts minus
    one global trace constraint."""
    total = 0
    for i, n in zip(label.per_block, label.alg.block_sizes):
        total += n * n - (n - i) * (n - i)
    return total - 1


def frontier_leq(a: StratumLabel, b: StratumLabel) -> bool:
    """Frontier partial order: a's stratum lies in the closure of b's.

    For block-diagonal algebras this is the componentwise per-block rank
    order (closing a stratum can only drop ranks, independently per block).
    """
    if a.alg != b.alg:
        raise ValueError("labels belong to different algebras")
    return all(ia <= ib for ia, ib in zip(a.per_block, b.per_block))


@dataclass(frozen=True)
class StratumCoords:
    """Manifold coordinates of a rank-i density matrix.

    kernel : n x (n - i) orthonormal frame spanning Ker(rho)
    coframe : n x i orthonormal frame spanning the range
    reduced : i x i positive-definite compression of rho to its range,
        trace one within 1e-10

    The point is recovered as coframe @ reduced @ coframe^dagger (the
    operator composed with the projection along the kernel).
    """

    alg: AlgebraDescriptor
    kernel: np.ndarray
    coframe: np.ndarray
    reduced: np.ndarray

    def __post_init__(self):
        n = self.alg.dim
        linalg.check_frame(self.kernel)
        linalg.check_frame(self.coframe)
        if self.kernel.shape[0] != n or self.coframe.shape[0] != n:
            raise ValueError("frames do not live in the algebra's ambient space")
        i = self.coframe.shape[1]
        if self.kernel.shape[1] != n - i:
            raise ValueError(
                f"kernel columns ({self.kernel.shape[1]}) plus rank ({i}) must equal {n}"
            )
        cross = float(np.max(np.abs(self.coframe.conj().T @ self.kernel))) if n - i else 0.0
        if cross > 1e-10:
            raise NotOrthonormal("kernel and coframe are not orthogonal", magnitude=cross)
        red = linalg.as_hermitian(self.reduced, 1e-10)
        w = np.linalg.eigvalsh(red)
        if w[0] <= 0:
            raise ValueError(f"reduced part must be positive definite, min eig {w[0]:.3e}")
        tr_dev = abs(float(np.trace(red).real) - 1.0)
        if tr_dev > 1e-10:
            raise ValueError(f"reduced part trace differs from 1 by {tr_dev:.3e}")

    @property
    def rank(self) -> int:
        return self.coframe.shape[1]


def stratum_coords(
    rho: DensityMatrix, tol: float | None = None, rank: int | None = None
) -> StratumCoords:
    """Split a density matrix into (kernel frame, range frame, reduced part).

    Frames come from the gauge-fixed eigendecomposition (ascending
    eigenvalues, largest-modulus entry of each column real positive), so the
    result is deterministic. If rank is not supplied it is decided by the
    gray-zone protocol at tol.
    """
    if tol is None:
        tol = rho.tol
    w, v = linalg.eigh_fixed(rho.matrix)
    n = rho.dim
    i = max(1, rank_from_eigenvalues(w, tol)) if rank is None else int(rank)
    if not 1 <= i <= n:
        raise ValueError(f"rank must satisfy 1 <= rank <= {n}, got {i}")
    kernel = v[:, : n - i]
    coframe = v[:, n - i :]
    reduced = linalg.hermitian_part(coframe.conj().T @ rho.matrix @ coframe)
    return StratumCoords(alg=rho.alg, kernel=kernel, coframe=coframe, reduced=reduced)


def stratum_from_coords(coords: StratumCoords, tol: float = 1e-9) -> DensityMatrix:
    """Rebuild the density matrix coframe @ reduced @ coframe^dagger."""
    m = coords.coframe @ coords.reduced @ coords.coframe.conj().T
    return validate_density(linalg.hermitian_part(m), coords.alg, tol)


def _contrast_coefficients(weights: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to weights in R^k.

    Columns 2..k of the Householder reflection sending e_1 to the normalized
    weight vector; deterministic, exactly orthonormal.
    """
    s = np.asarray(weights, dtype=float)
    k = s.size
    s = s / np.linalg.norm(s)
    e1 = np.zeros(k)
    e1[0] = 1.0
    w = s - e1
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        h = np.eye(k)
    else:
        w = w / nw
        h = np.eye(k) - 2.0 * np.outer(w, w)
        # first column of h is -s when built this way; flip signs so h[:,0] = s
        if np.dot(h[:, 0], s) < 0:
            h = -h
    return h[:, 1:]


def tangent_basis(
    rho: DensityMatrix, tol: float | None = None, label: StratumLabel | None = None
) -> list[np.ndarray]:
    """Orthonormal basis of the tangent space of rho's stratum at rho.

    The tangent space is the set of block-diagonal Hermitian H with total
    trace zero whose compression to the kernel of rho vanishes
    (P_ker H P_ker = 0). The basis is built exactly in the eigenframe of each
    block: range-range traceless directions, range-kernel couplings, and the
    relative block-weight contrasts; its length is stratum_dim_label of the
    stratum.

    Pass label to use construction-known ranks instead of the tolerance
    protocol.
    """
    if tol is None:
        tol = rho.tol
    if label is None:
        label = classify(rho, tol)
    elif label.alg != rho.alg:
        raise ValueError("label belongs to a different algebra")
    n = rho.dim
    basis: list[np.ndarray] = []
    range_projectors: list[np.ndarray] = []
    occupied: list[int] = []
    at = 0
    for b, (nb, ib) in enumerate(zip(rho.alg.block_sizes, label.per_block)):
        block = rho.matrix[at : at + nb, at : at + nb]
        if ib >= 1:
            _, v = linalg.eigh_fixed(block)
            vr = np.zeros((n, ib), dtype=complex)
            vr[at : at + nb, :] = v[:, nb - ib :]
            vk = np.zeros((n, nb - ib), dtype=complex)
            vk[at : at + nb, :] = v[:, : nb - ib]
            # range x kernel couplings
            for r in range(ib):
                for q in range(nb - ib):
                    outer = np.outer(vr[:, r], vk[:, q].conj())
                    basis.append((outer + outer.conj().T) / np.sqrt(2.0))
                    basis.append((1j * outer - 1j * outer.conj().T) / np.sqrt(2.0))
            # traceless Hermitian directions inside the range block
            for r in range(ib):
                for s in range(r + 1, ib):
                    outer = np.outer(vr[:, r], vr[:, s].conj())
                    basis.append((outer + outer.conj().T) / np.sqrt(2.0))
                    basis.append((1j * outer - 1j * outer.conj().T) / np.sqrt(2.0))
            for a in range(1, ib):
                d = np.zeros((n, n), dtype=complex)
                for c in range(a):
                    d += np.outer(vr[:, c], vr[:, c].conj())
                d -= a * np.outer(vr[:, a], vr[:, a].conj())
                basis.append(d / np.sqrt(a * (a + 1)))
            range_projectors.append(vr @ vr.conj().T)
            occupied.append(ib)
        at += nb
    # relative weights between occupied blocks (trace-free combinations of
    # the normalized range projectors)
    if len(occupied) > 1:
        contrasts = _contrast_coefficients(np.sqrt(np.asarray(occupied, dtype=float)))
        units = [p / np.sqrt(i) for p, i in zip(range_projectors, occupied)]
        for a in range(contrasts.shape[1]):
            t = np.zeros((n, n), dtype=complex)
            for b in range(len(units)):
                t += contrasts[b, a] * units[b]
            basis.append(t)
    return basis


def retract_to_stratum(
    h: np.ndarray, label: StratumLabel, tol: float = 1e-9
) -> DensityMatrix:
    """Nearest-by-truncation point of the labeled stratum to a Hermitian h.

    Per block, keeps the top i_b eigenvalues (which must be positive), then
    renormalizes the total trace to one. Used to turn tangent steps into
    curves that stay inside a stratum.
    """
    h = np.asarray(h, dtype=complex)
    blocks = linalg.block_extract(h, label.alg.block_sizes)
    rebuilt = []
    for block, ib in zip(blocks, label.per_block):
        if ib == 0:
            rebuilt.append(np.zeros_like(block))
            continue
        w, v = linalg.eigh_fixed(block)
        top_w = w[block.shape[0] - ib :]
        top_v = v[:, block.shape[0] - ib :]
        if top_w[0] <= 0:
            raise ValueError(
                f"cannot retract: leading block eigenvalue {top_w[0]:.3e} is not positive"
            )
        rebuilt.append((top_v * top_w) @ top_v.conj().T)
    m = linalg.block_embed(rebuilt)
    m = m / float(np.trace(m).real)
    return validate_density(linalg.hermitian_part(m), label.alg, tol)
