"""Randomized verification suites behind `stratumlab verify`.

Each suite returns a JSON-serializable dict: the parameters it ran with, the
per-check details, and a single "passed" verdict. The acceptance tests run
the same code at their mandated sample counts; the CLI exposes the knobs.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .charts import contour_projector, contour_small_part, small_spectral_projector
from .joins import JOIN_RANK_NOTE, convex_split, join_piece_label, join_state, make_join_point, rank_of_join
from .orbits import isotropy_dim, orbit_dim, orbit_signature
from .sampler import _rng, sample_algebra, sample_hs, sample_rank, sample_unitary
from .states import AlgebraDescriptor, cone_state, full_algebra, maximally_mixed, validate_density
from .strata import classify
from .whitney import frontier_matrix, whitney_b_estimate, whitney_negative_control

CONTOUR_RADIUS = 0.25
SMALL_BAND = 0.15
LARGE_BAND = (0.4, 1.0)


def _margin_split_sample(n: int, seed: int, index: int):
    """Hermitian matrix whose spectrum splits across the contour with a
    comfortable margin: small eigenvalues in [0, 0.15], large in [0.4, 1]."""
    rng = _rng(seed, 8, index)
    n_small = 1 + index % (n - 1)
    small = rng.random(n_small) * SMALL_BAND
    large = LARGE_BAND[0] + rng.random(n - n_small) * (LARGE_BAND[1] - LARGE_BAND[0])
    w = np.concatenate([small, large])
    u = sample_unitary(n, seed, 3000 + index)
    return u @ np.diag(w) @ u.conj().T, n_small


def suite_projector_equiv(samples: int = 300, seed: int = 0, nodes: int = 64) -> dict:
    """Spectral projector route equivalence: eigendecomposition vs contour
    quadrature, plus the halved-node convergence comparison."""
    err_proj = np.zeros((samples, 2))
    err_part = np.zeros((samples, 2))
    halved = max(nodes // 2, 4)
    for s in range(samples):
        n = 2 + s % 5
        g, n_small = _margin_split_sample(n, seed, s)
        w, v = linalg.eigh_fixed(g)
        small_v = v[:, :n_small]
        p_eig = small_v @ small_v.conj().T
        part_eig = (small_v * w[:n_small]) @ small_v.conj().T
        for c, node_count in enumerate((halved, nodes)):
            p_c = contour_projector(g, CONTOUR_RADIUS, node_count)
            s_c = contour_small_part(g, CONTOUR_RADIUS, node_count)
            err_proj[s, c] = linalg.hs_norm(p_c - p_eig)
            err_part[s, c] = linalg.hs_norm(s_c - part_eig)
        # the eigen production route (threshold split) must agree with the
        # raw spectral computation exactly up to roundoff
        p_prod = small_spectral_projector(g, CONTOUR_RADIUS)
        if linalg.hs_norm(p_prod - p_eig) > 1e-12:
            raise AssertionError("production projector diverged from its own spectrum")
    floor = 1e-16
    ratio_proj = float(np.median(err_proj[:, 0]) / max(np.median(err_proj[:, 1]), floor))
    ratio_part = float(np.median(err_part[:, 0]) / max(np.median(err_part[:, 1]), floor))
    max_err = float(max(err_proj[:, 1].max(), err_part[:, 1].max()))
    passed = bool(max_err <= 1e-8 and ratio_proj >= 10.0 and ratio_part >= 10.0)
    return {
        "suite": "projector-equiv",
        "samples": samples,
        "seed": seed,
        "nodes": nodes,
        "halved_nodes": halved,
        "contour_radius": CONTOUR_RADIUS,
        "max_error_full_nodes": max_err,
        "median_error_halved_projector": float(np.median(err_proj[:, 0])),
        "median_error_full_projector": float(np.median(err_proj[:, 1])),
        "error_ratio_projector": ratio_proj,
        "error_ratio_small_part": ratio_part,
        "passed": passed,
    }


def suite_whitney(
    max_dim: int = 3,
    trials: int = 10,
    seed: int = 0,
    rate: float = 0.5,
    length: int = 22,
    gap_threshold: float = 1e-3,
    min_slope: float = 0.4,
) -> dict:
    """Whitney (B) gap decay for every stratum pair i < j up to max_dim,
    with the random-plane negative control."""
    rows = []
    all_ok = True
    for n in range(2, max_dim + 1):
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                y = sample_rank(n, i, seed, index=n * 100 + i * 10 + j)
                rep = whitney_b_estimate(
                    y, j, rate=rate, length=length, trials=trials, seed=seed,
                    gap_threshold=gap_threshold,
                )
                control = whitney_negative_control(
                    y, j, rate=rate, length=length, trials=trials, seed=seed,
                    gap_threshold=gap_threshold,
                )
                slope_ok = rep.slope >= min_slope
                row_ok = bool(rep.passed and slope_ok and control["fraction_failed"] >= 0.95)
                all_ok = all_ok and row_ok
                rows.append(
                    {
                        "n": n,
                        "base_rank": i,
                        "target_rank": j,
                        "terminal_distance": rep.terminal_distance,
                        "terminal_gap": rep.terminal_gap,
                        "terminal_gap_fixed_base": rep.terminal_gap_fixed_base,
                        # infinite slope means the fit was skipped (open
                        # target stratum or all gaps under the floor)
                        "slope": rep.slope if np.isfinite(rep.slope) else None,
                        "control_fraction_failed": control["fraction_failed"],
                        "passed": row_ok,
                    }
                )
    return {
        "suite": "whitney",
        "max_dim": max_dim,
        "trials": trials,
        "seed": seed,
        "rate": rate,
        "length": length,
        "gap_threshold": gap_threshold,
        "min_slope": min_slope,
        "pairs": rows,
        "passed": all_ok,
    }


DEFAULT_FRONTIER_ALGEBRAS = ((1,), (2,), (3,), (4,), (1, 2), (1, 1, 1, 1))


def suite_frontier(samples: int = 10, seed: int = 0, algebras=DEFAULT_FRONTIER_ALGEBRAS) -> dict:
    """Reachability matrix vs componentwise rank order for each algebra."""
    tables = []
    all_ok = True
    for sizes in algebras:
        table = frontier_matrix(AlgebraDescriptor(tuple(sizes)), samples=samples, seed=seed)
        all_ok = all_ok and table["equal"]
        tables.append(table)
    return {
        "suite": "frontier",
        "samples": samples,
        "seed": seed,
        "algebras": [list(a) for a in algebras],
        "tables": tables,
        "passed": all_ok,
    }


EXPECTED_TETRAHEDRON_PIECES = {
    "R1": 1,
    "R2": 2,
    "S1": 1,
    "S2": 2,
    "R1xS1xI": 2,
    "R1xS2xI": 3,
    "R2xS1xI": 3,
    "R2xS2xI": 4,
}


def _tetrahedron_piece_census(seed: int, samples: int) -> dict:
    """Visit every piece of the join decomposition of C^2 (+) C^2 (the solid
    tetrahedron) and record the computed rank of each."""
    alg = AlgebraDescriptor((1, 1, 1, 1))
    split = (2, 2)
    two = AlgebraDescriptor((1, 1))

    def point(p1, p2):
        m = np.diag(np.asarray([0.0, 0.0], dtype=complex))
        m[0, 0], m[1, 1] = p1, p2
        return validate_density(m, two)

    factor_states = {
        1: point(1.0, 0.0),
        2: point(0.7, 0.3),
    }
    seen: dict[str, int] = {}

    def visit(weights, comps):
        p = make_join_point(alg, weights, comps, split=split)
        lab = join_piece_label(p)
        rank = rank_of_join(p)
        prev = seen.setdefault(lab.piece_name, rank)
        if prev != rank:
            raise AssertionError(f"piece {lab.piece_name} visited with ranks {prev} and {rank}")

    for r in (1, 2):
        visit((1.0, 0.0), (factor_states[r], None))
        visit((0.0, 1.0), (None, factor_states[r]))
        for s in (1, 2):
            visit((0.6, 0.4), (factor_states[r], factor_states[s]))
    # random interior samples all land in a known piece
    for s in range(samples):
        rho = sample_algebra(alg, seed, index=5000 + s)
        lab = join_piece_label(convex_split(rho, split=split))
        if lab.piece_name not in EXPECTED_TETRAHEDRON_PIECES:
            raise AssertionError(f"sample landed in unknown piece {lab.piece_name}")
    return seen


def suite_join(samples: int = 200, seed: int = 0) -> dict:
    """Join round-trips, endpoint collapse, and the tetrahedron piece table."""
    cases = (
        ((1, 2), (1, 1)),
        ((1, 1, 1, 1), (2, 2)),
        ((2, 3), (1, 1)),
    )
    max_err = 0.0
    for sizes, split in cases:
        alg = AlgebraDescriptor(sizes)
        for s in range(samples):
            rho = sample_algebra(alg, seed, index=s)
            back = join_state(convex_split(rho, split=split))
            max_err = max(max_err, linalg.hs_norm(back.matrix - rho.matrix))
    # endpoint collapse: at weight zero the second component is dropped, so
    # two different fillers give byte-identical assembled states
    alg = AlgebraDescriptor((1, 1, 1, 1))
    split = (2, 2)
    two = AlgebraDescriptor((1, 1))
    phi1 = validate_density(np.diag([0.4, 0.6]).astype(complex), two)
    fill_a = validate_density(np.diag([1.0, 0.0]).astype(complex), two)
    fill_b = validate_density(np.diag([0.2, 0.8]).astype(complex), two)
    left = join_state(make_join_point(alg, (1.0, 0.0), (phi1, fill_a), split=split))
    right = join_state(make_join_point(alg, (1.0, 0.0), (phi1, fill_b), split=split))
    collapse_exact = bool(np.array_equal(left.matrix, right.matrix))
    pieces = _tetrahedron_piece_census(seed, samples=min(samples, 200))
    pieces_ok = pieces == EXPECTED_TETRAHEDRON_PIECES
    passed = bool(max_err <= 1e-10 and collapse_exact and pieces_ok)
    return {
        "suite": "join",
        "samples": samples,
        "seed": seed,
        "round_trip_max_error": max_err,
        "endpoint_collapse_exact": collapse_exact,
        "piece_count": len(pieces),
        "piece_ranks": dict(sorted(pieces.items())),
        "note": JOIN_RANK_NOTE,
        "passed": passed,
    }


def suite_orbit_census(draws: int = 2000, seed: int = 0, cluster_tol: float = 1e-8) -> dict:
    """Signature census with stabilizer/orbit dimension consistency on M_2
    and on C (+) M_2."""
    reports = []
    all_ok = True

    def census(alg, samples, constructed, generic_signature):
        counts: dict = {}
        consistent = True
        dim_u = alg.unitary_group_dim
        for rho in samples + constructed:
            sig = orbit_signature(rho, cluster_tol)
            counts[sig.per_block] = counts.get(sig.per_block, 0) + 1
            if orbit_dim(rho) + isotropy_dim(sig) != dim_u:
                consistent = False
        generic_fraction = sum(
            counts.get(k, 0) for k in counts if k == generic_signature
        ) / max(len(samples), 1)
        return counts, consistent, generic_fraction

    m2 = full_algebra(2)
    m2_samples = [sample_hs(2, seed, index=s) for s in range(draws)]
    m2_constructed = [maximally_mixed(m2)]
    counts, consistent, generic_fraction = census(m2, m2_samples, m2_constructed, ((1, 1),))
    generic_orbit_dims = {orbit_dim(rho) for rho in m2_samples[: min(draws, 50)]}
    m2_ok = bool(
        set(counts) == {((1, 1),), ((2,),)}
        and consistent
        and generic_fraction >= 0.999
        and generic_orbit_dims == {2}
    )
    all_ok = all_ok and m2_ok
    reports.append(
        {
            "alg": [2],
            "signatures": {str(list(map(list, k))): v for k, v in sorted(counts.items())},
            "distinct": len(counts),
            "dimension_identity_holds": consistent,
            "generic_fraction": generic_fraction,
            "generic_orbit_dim": sorted(generic_orbit_dims),
            "passed": m2_ok,
        }
    )

    cm2 = AlgebraDescriptor((1, 2))
    cm2_samples = [sample_algebra(cm2, seed, index=s) for s in range(draws)]
    cm2_constructed = [maximally_mixed(cm2), cone_state(0.5, (0.0, 0.0, 0.0))]
    counts, consistent, generic_fraction = census(
        cm2, cm2_samples, cm2_constructed, ((1,), (1, 1))
    )
    cm2_ok = bool(
        set(counts) == {((1,), (1, 1)), ((1,), (2,))}
        and consistent
        and generic_fraction >= 0.999
    )
    all_ok = all_ok and cm2_ok
    reports.append(
        {
            "alg": [1, 2],
            "signatures": {str(list(map(list, k))): v for k, v in sorted(counts.items())},
            "distinct": len(counts),
            "dimension_identity_holds": consistent,
            "generic_fraction": generic_fraction,
            "passed": cm2_ok,
        }
    )
    return {
        "suite": "orbit-census",
        "draws": draws,
        "seed": seed,
        "cluster_tol": cluster_tol,
        "censuses": reports,
        "passed": all_ok,
    }


SUITES = {
    "whitney": suite_whitney,
    "frontier": suite_frontier,
    "join": suite_join,
    "orbit-census": suite_orbit_census,
    "projector-equiv": suite_projector_equiv,
}
