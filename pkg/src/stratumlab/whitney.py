"""Randomized verification of the stratification's regularity.

Whitney condition (B) at a point y of a lower stratum, with respect to a
higher stratum: for sequences x_k (higher stratum) and y_k (lower stratum)
both converging to y, the secant directions of x_k - y_k come to lie inside
the limiting tangent spaces of the higher stratum. Numerically we measure the
gap

    g_k = || component of secant(x_k, y_k) orthogonal to T_{x_k}(stratum) ||

along constructed geometric approach sequences; condition (B) predicts g_k
decays to zero (empirically with slope ~1 in log-log). The fixed-base variant
(y_k = y, the condition (A) flavor) is run alongside. A negative control
replaces the tangent space by a fixed random plane and must fail, otherwise
the detector is vacuous.

The frontier suite checks that the closure order of strata is exactly the
componentwise per-block rank order: comparable pairs are witnessed by
constructed approximants, incomparable pairs by the Eckart-Young distance
floor (a rank-(j) matrix cannot approximate a rank-(i > j) block closer than
the norm of the dropped eigenvalue tail).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import CoincidentPoints
from .sampler import approach_state, sample_algebra, sequence_toward, _rng, standard_normal
from .states import AlgebraDescriptor, DensityMatrix
from .strata import StratumLabel, classify, frontier_leq, tangent_basis

SLOPE_FIT_FLOOR = 1e-13


def secant_direction(x: np.ndarray, y: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Unit (HS) direction from y to x.

    Raises
    ------
    CoincidentPoints
        If the two matrices are closer than tol.
    """
    d = np.asarray(x, dtype=complex) - np.asarray(y, dtype=complex)
    norm = linalg.hs_norm(d)
    if norm <= tol:
        raise CoincidentPoints(f"points coincide within {norm:.3e}")
    return d / norm


def gap_line_space(v: np.ndarray, basis) -> float:
    """HS norm of the component of v orthogonal to the span of an orthonormal
    basis of Hermitian matrices."""
    residual = np.array(v, dtype=complex, copy=True)
    for e in basis:
        residual -= linalg.hs_inner(e, v) * e
    return linalg.hs_norm(residual)


@dataclass(frozen=True)
class WhitneyReport:
    """Aggregated secant-tangent gaps along approach sequences.

    pairs / pairs_fixed_base hold (k, max distance to y, max gap) per step,
    maxima over trials; distances decrease strictly. slope is the pooled
    log-log decay rate of the moving-base gaps (fit above slope_fit_floor).
    """

    n: int
    base_rank: int
    target_rank: int
    rate: float
    length: int
    trials: int
    seed: int
    gap_threshold: float
    distance_target: float
    slope_fit_floor: float
    pairs: tuple[tuple[int, float, float], ...]
    pairs_fixed_base: tuple[tuple[int, float, float], ...]
    slope: float
    terminal_distance: float
    terminal_gap: float
    terminal_gap_fixed_base: float
    passed: bool

    def __post_init__(self):
        dists = [d for _, d, _ in self.pairs]
        if any(b >= a for a, b in zip(dists[:-1], dists[1:])):
            raise ValueError("distances along the sequence must strictly decrease")
        if any(g < 0 for _, _, g in self.pairs + self.pairs_fixed_base):
            raise ValueError("gaps cannot be negative")


def whitney_b_estimate(
    y: DensityMatrix,
    j: int,
    rate: float = 0.5,
    length: int = 22,
    trials: int = 50,
    seed: int = 0,
    gap_threshold: float = 1e-3,
    distance_target: float = 1e-6,
) -> WhitneyReport:
    """Estimate the Whitney (B) secant-tangent gaps at y against stratum j.

    Runs `trials` independent approach sequences, measures the gap of the
    moving-base secant (x_k to y_k) and the fixed-base secant (x_k to y)
    against the tangent space of the rank-j stratum at x_k, and aggregates
    per-step maxima. Passes when the terminal distance reaches
    distance_target and both terminal gaps are below gap_threshold.
    """
    label_j = StratumLabel(alg=y.alg, per_block=(j,))
    gaps_b = np.zeros((trials, length))
    gaps_a = np.zeros((trials, length))
    dists = np.zeros((trials, length))
    for t in range(trials):
        seq = sequence_toward(y, j, rate=rate, length=length, seed=seed, index=t)
        for k, (x, yk) in enumerate(seq):
            basis = tangent_basis(x, label=label_j)
            gaps_b[t, k] = gap_line_space(secant_direction(x.matrix, yk.matrix), basis)
            gaps_a[t, k] = gap_line_space(secant_direction(x.matrix, y.matrix), basis)
            dists[t, k] = linalg.hs_norm(x.matrix - y.matrix)
    max_d = dists.max(axis=0)
    max_b = gaps_b.max(axis=0)
    max_a = gaps_a.max(axis=0)
    keep = (gaps_b > SLOPE_FIT_FLOOR).ravel()
    if j == y.dim:
        # the target stratum is open, its tangent space is the whole
        # trace-zero hyperplane, every gap is roundoff; no rate to fit
        slope = float("inf")
    elif int(keep.sum()) >= 3:
        slope = float(
            np.polyfit(np.log10(dists.ravel()[keep]), np.log10(gaps_b.ravel()[keep]), 1)[0]
        )
    else:
        # gaps collapsed onto the numerical floor immediately; decay is as
        # fast as measurable
        slope = float("inf")
    passed = bool(
        max_d[-1] <= distance_target
        and max_b[-1] <= gap_threshold
        and max_a[-1] <= gap_threshold
    )
    return WhitneyReport(
        n=y.dim,
        base_rank=classify(y).total,
        target_rank=j,
        rate=rate,
        length=length,
        trials=trials,
        seed=seed,
        gap_threshold=gap_threshold,
        distance_target=distance_target,
        slope_fit_floor=SLOPE_FIT_FLOOR,
        pairs=tuple((k + 1, float(max_d[k]), float(max_b[k])) for k in range(length)),
        pairs_fixed_base=tuple(
            (k + 1, float(max_d[k]), float(max_a[k])) for k in range(length)
        ),
        slope=slope,
        terminal_distance=float(max_d[-1]),
        terminal_gap=float(max_b[-1]),
        terminal_gap_fixed_base=float(max_a[-1]),
        passed=passed,
    )


def whitney_negative_control(
    y: DensityMatrix,
    j: int,
    rate: float = 0.5,
    length: int = 22,
    trials: int = 50,
    seed: int = 0,
    gap_threshold: float = 1e-3,
    subspace_dim: int = 2,
) -> dict:
    """Detector sensitivity check: replace the tangent space by a fixed random
    plane of traceless Hermitians and count the trials whose terminal gap
    still passes. A healthy detector fails nearly all of them.

    Returns a dict with the per-trial terminal gaps and the fraction failing
    the gap criterion.
    """
    n = y.dim
    fails = 0
    terminal_gaps = []
    for t in range(trials):
        rng = _rng(seed, 7, t)
        plane = []
        for _ in range(subspace_dim):
            g = standard_normal(rng, (n, n)) + 1j * standard_normal(rng, (n, n))
            h = linalg.hermitian_part(g)
            h -= np.trace(h).real * np.eye(n) / n
            for e in plane:
                h = h - linalg.hs_inner(e, h) * e
            plane.append(h / linalg.hs_norm(h))
        seq = sequence_toward(y, j, rate=rate, length=length, seed=seed, index=t)
        x, yk = seq[-1]
        gap = gap_line_space(secant_direction(x.matrix, yk.matrix), plane)
        terminal_gaps.append(float(gap))
        if gap > gap_threshold:
            fails += 1
    return {
        "trials": trials,
        "failed": fails,
        "fraction_failed": fails / trials,
        "terminal_gaps": terminal_gaps,
    }


def enumerate_labels(alg: AlgebraDescriptor) -> list[StratumLabel]:
    """All stratum labels of an algebra (per-block ranks, total >= 1)."""
    out = []
    for ranks in itertools.product(*(range(n + 1) for n in alg.block_sizes)):
        if sum(ranks) >= 1:
            out.append(StratumLabel(alg=alg, per_block=ranks))
    return out


@dataclass(frozen=True)
class FrontierReport:
    """Empirical reachability of stratum i from stratum j, with witnesses."""

    source: tuple[int, ...]
    target: tuple[int, ...]
    expected: bool
    reachable: bool
    matches: bool
    samples: int
    max_distance: float
    min_floor: float


def frontier_check(
    i: StratumLabel,
    j: StratumLabel,
    samples: int = 15,
    seed: int = 0,
    delta: float = 4e-7,
    distance_target: float = 1e-6,
) -> FrontierReport:
    """Decide empirically whether stratum i lies in the closure of stratum j.

    For componentwise-comparable pairs, constructs a rank-j approximant
    within distance_target of every sampled rank-i point. For incomparable pairs,
    evaluates the Eckart-Young floor: the distance from the sampled point to
    anything with the lower block rank, which must exceed distance_target.
    """
    if i.alg != j.alg:
        raise ValueError("labels belong to different algebras")
    expected = frontier_leq(i, j)
    comparable = all(ia <= ja for ia, ja in zip(i.per_block, j.per_block))
    max_distance = 0.0
    min_floor = float("inf")
    reachable = True
    for s in range(samples):
        y = sample_algebra(i.alg, seed, ranks=i.per_block, index=s)
        if comparable:
            x = approach_state(y, j, delta=delta, seed=seed, index=s)
            d = linalg.hs_norm(x.matrix - y.matrix)
            max_distance = max(max_distance, d)
            if d > distance_target or classify(x).per_block != j.per_block:
                reachable = False
        else:
            floor_sq = 0.0
            for block, ib, jb in zip(y.blocks(), i.per_block, j.per_block):
                if jb < ib:
                    w = np.linalg.eigvalsh(block)
                    positive = np.sort(w[w > 10.0 * y.tol])
                    floor_sq += float(np.sum(positive[: ib - jb] ** 2))
            floor = float(np.sqrt(floor_sq))
            min_floor = min(min_floor, floor)
            if floor <= distance_target:
                # cannot certify impossibility at this resolution
                reachable = True
    if not comparable and min_floor > distance_target:
        reachable = False
    return FrontierReport(
        source=i.per_block,
        target=j.per_block,
        expected=expected,
        reachable=reachable,
        matches=(reachable == expected),
        samples=samples,
        max_distance=max_distance,
        min_floor=min_floor if min_floor != float("inf") else 0.0,
    )


def frontier_matrix(alg: AlgebraDescriptor, samples: int = 15, seed: int = 0) -> dict:
    """Full reachability-vs-order comparison over all stratum label pairs."""
    labels = enumerate_labels(alg)
    expected = []
    reachable = []
    mismatches = []
    for a in labels:
        e_row, r_row = [], []
        for b in labels:
            rep = frontier_check(a, b, samples=samples, seed=seed)
            e_row.append(rep.expected)
            r_row.append(rep.reachable)
            if not rep.matches:
                mismatches.append({"source": a.per_block, "target": b.per_block})
        expected.append(e_row)
        reachable.append(r_row)
    return {
        "alg": list(alg.block_sizes),
        "labels": [list(l.per_block) for l in labels],
        "expected": expected,
        "reachable": reachable,
        "equal": not mismatches,
        "mismatches": mismatches,
    }
