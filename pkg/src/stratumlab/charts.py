"""Local conic charts around a fixed-rank density matrix.

Near a rank-i density matrix f whose smallest positive eigenvalue is a, every
state g whose spectrum splits into a small part (below epsilon) and a large
part (above a - epsilon) factors into a pair: the compression of g to the
small spectral subspace W (a PSD cone variable h with small trace alpha) and
the trace-renormalized compression to the complement (a full-rank base
variable k). The assignment g -> (h, k) is the chart; its inverse is

    (h, k) -> h on W  +  (1 - Tr h) k on W-perp,

trusted for alpha < 1/2. The production route computes spectral projectors by
eigendecomposition; an independent contour-quadrature route (trapezoid rule
on a circle, exponentially convergent) is kept for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    AlphaTooLarge,
    EigenvalueOnContour,
    NotInChartDomain,
    NotOrthonormal,
)
from .states import AlgebraDescriptor, DensityMatrix, validate_density
from .strata import numerical_rank, rank_from_eigenvalues

MIN_NODES = 16


@dataclass(frozen=True)
class ChartConfig:
    """Spectral thresholds and quadrature resolution for one chart.

    gap_a : smallest positive eigenvalue of the chart's center
    epsilon : spectral split threshold, 0 < epsilon < gap_a
    contour_radius : radius of the circle separating small from large
        spectrum; must satisfy epsilon <= radius <= gap_a - epsilon
    quadrature_nodes : trapezoid nodes for the contour route (>= 16)
    """

    gap_a: float
    epsilon: float
    contour_radius: float
    quadrature_nodes: int = 64

    def __post_init__(self):
        if not self.gap_a > 0:
            raise ValueError(f"gap must be positive, got {self.gap_a}")
        if not 0 < self.epsilon < self.gap_a:
            raise ValueError(
                f"epsilon must lie in (0, {self.gap_a:.6g}), got {self.epsilon:.6g}"
            )
        if not self.epsilon <= self.contour_radius <= self.gap_a - self.epsilon:
            raise ValueError(
                "contour radius must lie between epsilon and gap - epsilon, got "
                f"{self.contour_radius:.6g} outside [{self.epsilon:.6g}, "
                f"{self.gap_a - self.epsilon:.6g}]"
            )
        if self.quadrature_nodes < MIN_NODES:
            raise ValueError(f"need at least {MIN_NODES} quadrature nodes")


def spectral_gap(f: DensityMatrix, tol: float | None = None) -> float:
    """Smallest positive eigenvalue of f (gray-zone rank protocol)."""
    if tol is None:
        tol = f.tol
    w = f.eigenvalues()
    i = max(1, rank_from_eigenvalues(w, tol))
    return float(w[f.dim - i])


def chart_config_for(
    f: DensityMatrix,
    epsilon: float | None = None,
    nodes: int = 64,
    tol: float | None = None,
) -> ChartConfig:
    """Default chart configuration centered at f.

    epsilon defaults to a quarter of the spectral gap; the contour radius sits
    halfway between epsilon and gap - epsilon.
    """
    a = spectral_gap(f, tol)
    if epsilon is None:
        epsilon = a / 4.0
    radius = 0.5 * (epsilon + (a - epsilon))
    return ChartConfig(gap_a=a, epsilon=epsilon, contour_radius=radius, quadrature_nodes=nodes)


def in_chart_domain(f: DensityMatrix, g: DensityMatrix, cfg: ChartConfig) -> bool:
    """Whether g's spectrum splits below epsilon / above gap - epsilon."""
    if g.dim != f.dim:
        raise ValueError("center and point live in different ambient spaces")
    w = g.eigenvalues()
    return bool(np.all((w < cfg.epsilon) | (w > cfg.gap_a - cfg.epsilon)))


@dataclass(frozen=True)
class ChartPoint:
    """Value of the conic chart: frames plus cone and base variables.

    frame_kernel : n x (n - i) orthonormal frame of the small spectral
        subspace W
    frame_range : n x i orthonormal frame of the complement
    cone_part : (n - i) x (n - i) PSD compression of the point to W; its
        trace is the weight alpha (the cone variable; alpha = 0 at the vertex)
    base_part : i x i positive-definite, trace one within 1e-10 (the
        renormalized large-spectrum compression)
    """

    alg: AlgebraDescriptor
    frame_kernel: np.ndarray
    frame_range: np.ndarray
    cone_part: np.ndarray
    base_part: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        n = self.alg.dim
        linalg.check_frame(self.frame_kernel)
        linalg.check_frame(self.frame_range)
        if self.frame_kernel.shape[0] != n or self.frame_range.shape[0] != n:
            raise ValueError("frames do not match the algebra's ambient dimension")
        d = self.frame_kernel.shape[1]
        i = self.frame_range.shape[1]
        if d + i != n:
            raise ValueError(f"frame widths {d} + {i} must sum to {n}")
        if d:
            cross = float(np.max(np.abs(self.frame_range.conj().T @ self.frame_kernel)))
            if cross > 1e-10:
                raise NotOrthonormal("chart frames are not orthogonal", magnitude=cross)
        cone = linalg.as_hermitian(self.cone_part, 1e-10)
        if cone.shape != (d, d):
            raise ValueError(f"cone part must be {d} x {d}, got {cone.shape}")
        if d and float(np.linalg.eigvalsh(cone)[0]) < -1e-12:
            raise ValueError("cone part must be PSD")
        base = linalg.as_hermitian(self.base_part, 1e-10)
        if base.shape != (i, i):
            raise ValueError(f"base part must be {i} x {i}, got {base.shape}")
        if float(np.linalg.eigvalsh(base)[0]) <= 0:
            raise ValueError("base part must be positive definite")
        tr_dev = abs(float(np.trace(base).real) - 1.0)
        if tr_dev > 1e-10:
            raise ValueError(f"base part trace differs from 1 by {tr_dev:.3e}")

    @property
    def alpha(self) -> float:
        """Trace weight carried by the small spectral subspace."""
        return float(np.trace(self.cone_part).real)


def chart_forward(
    f: DensityMatrix, g: DensityMatrix, cfg: ChartConfig | None = None
) -> ChartPoint:
    """Evaluate the conic chart centered at f on the point g.

    Raises
    ------
    NotInChartDomain
        If g's spectrum does not split at cfg's thresholds, or the split does
        not leave exactly rank(f) large eigenvalues.
    AlphaTooLarge
        If the small-spectrum weight is >= 1/2.
    """
    if f.alg != g.alg:
        raise ValueError("center and point belong to different algebras")
    if cfg is None:
        cfg = chart_config_for(f)
    if not in_chart_domain(f, g, cfg):
        w = g.eigenvalues()
        inside = w[(w >= cfg.epsilon) & (w <= cfg.gap_a - cfg.epsilon)]
        raise NotInChartDomain(
            f"eigenvalue {inside[0]:.6g} inside the forbidden band "
            f"[{cfg.epsilon:.6g}, {cfg.gap_a - cfg.epsilon:.6g}]"
        )
    i = numerical_rank(f)
    n = f.dim
    w, v = linalg.eigh_fixed(g.matrix)
    n_small = int(np.count_nonzero(w < cfg.epsilon))
    if n_small != n - i:
        raise NotInChartDomain(
            f"spectral split leaves {n - n_small} large eigenvalues but the "
            f"center has rank {i}"
        )
    frame_kernel = v[:, :n_small]
    frame_range = v[:, n_small:]
    cone = linalg.hermitian_part(frame_kernel.conj().T @ g.matrix @ frame_kernel)
    alpha = float(np.trace(cone).real)
    if alpha >= 0.5:
        raise AlphaTooLarge(alpha)
    base = linalg.hermitian_part(frame_range.conj().T @ g.matrix @ frame_range) / (1.0 - alpha)
    return ChartPoint(
        alg=f.alg,
        frame_kernel=frame_kernel,
        frame_range=frame_range,
        cone_part=cone,
        base_part=base,
        tol=g.tol,
    )


def chart_inverse(p: ChartPoint, tol: float | None = None) -> DensityMatrix:
    """Rebuild the density matrix of a chart value.

    cone on W plus (1 - alpha) base on W-perp; defined whenever the chart
    point is valid (its constructor already enforces alpha's budget on the
    forward path, and PSD/trace on both parts).
    """
    if tol is None:
        tol = p.tol
    w, c = p.frame_kernel, p.frame_range
    m = w @ p.cone_part @ w.conj().T + (1.0 - p.alpha) * (c @ p.base_part @ c.conj().T)
    return validate_density(linalg.hermitian_part(m), p.alg, tol)


def small_spectral_projector(
    g: np.ndarray, threshold: float, guard: float = 1e-3
) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors with eigenvalue
    below threshold (eigendecomposition route).

    Raises
    ------
    EigenvalueOnContour
        If some eigenvalue is within guard * threshold of the threshold, so
        the split is not stable.
    """
    w, v = linalg.eigh_fixed(np.asarray(g, dtype=complex))
    margin = float(np.min(np.abs(w - threshold)))
    if margin < guard * threshold:
        raise EigenvalueOnContour(
            f"eigenvalue within {margin:.3e} of split threshold {threshold:.6g}"
        )
    small = v[:, w < threshold]
    return linalg.hermitian_part(small @ small.conj().T)


def _check_contour_margin(w: np.ndarray, radius: float, guard: float) -> None:
    margin = float(np.min(np.abs(np.abs(w) - radius)))
    if margin < guard * radius:
        raise EigenvalueOnContour(
            f"eigenvalue within {margin:.3e} of the contour radius {radius:.6g}"
        )


def contour_projector(
    g: np.ndarray, radius: float, nodes: int = 64, guard: float = 1e-3
) -> np.ndarray:
    """Spectral projector onto eigenvalues inside |z| = radius, by trapezoid
    quadrature of the resolvent around that circle.

    The trapezoid rule on a circle converges exponentially in the node count
    for this integrand; kept as an oracle against the eigendecomposition
    route.

    Raises
    ------
    EigenvalueOnContour
        If some eigenvalue is within guard * radius of the circle.
    """
    g = linalg.as_hermitian(np.asarray(g, dtype=complex))
    if nodes < 4:
        raise ValueError("need at least 4 quadrature nodes")
    _check_contour_margin(np.linalg.eigvalsh(g), radius, guard)
    n = g.shape[0]
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    acc = np.zeros((n, n), dtype=complex)
    eye = np.eye(n, dtype=complex)
    for t in theta:
        z = radius * np.exp(1j * t)
        acc += np.exp(1j * t) * np.linalg.inv(z * eye - g)
    return linalg.hermitian_part(acc * (radius / nodes))


def contour_small_part(
    g: np.ndarray, radius: float, nodes: int = 64, guard: float = 1e-3
) -> np.ndarray:
    """Quadrature of z -> z R_g(z) around |z| = radius: the part of g carried
    by the spectrum inside the circle (its trace is the cone weight alpha)."""
    g = linalg.as_hermitian(np.asarray(g, dtype=complex))
    if nodes < 4:
        raise ValueError("need at least 4 quadrature nodes")
    _check_contour_margin(np.linalg.eigvalsh(g), radius, guard)
    n = g.shape[0]
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    acc = np.zeros((n, n), dtype=complex)
    eye = np.eye(n, dtype=complex)
    for t in theta:
        z = radius * np.exp(1j * t)
        acc += np.exp(1j * t) * z * np.linalg.inv(z * eye - g)
    return linalg.hermitian_part(acc * (radius / nodes))
