import numpy as np
import numpy.testing as npt
import pytest

from stratumlab import linalg
from stratumlab.errors import CoincidentPoints
from stratumlab.sampler import sample_rank
from stratumlab.states import AlgebraDescriptor
from stratumlab.strata import StratumLabel, frontier_leq
from stratumlab.whitney import (
    FrontierReport,
    WhitneyReport,
    enumerate_labels,
    frontier_check,
    frontier_matrix,
    gap_line_space,
    secant_direction,
    whitney_b_estimate,
    whitney_negative_control,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_secant_direction_unit_and_orientation():
    y = np.diag([0.5, 0.5]).astype(complex)
    h = SX / np.sqrt(2.0)
    v = secant_direction(y + 1e-3 * h, y)
    assert linalg.hs_norm(v) == pytest.approx(1.0, abs=1e-14)
    npt.assert_allclose(v, h, atol=1e-12)
    # swapping the arguments flips the sign
    npt.assert_allclose(secant_direction(y, y + 1e-3 * h), -h, atol=1e-12)


def test_secant_direction_coincident():
    y = np.diag([0.7, 0.3]).astype(complex)
    with pytest.raises(CoincidentPoints):
        secant_direction(y, y)
    with pytest.raises(CoincidentPoints):
        secant_direction(y + 1e-16 * SX, y, tol=1e-14)


def test_gap_line_space_exact():
    e1 = SZ / np.sqrt(2.0)
    e2 = SX / np.sqrt(2.0)
    e3 = SY / np.sqrt(2.0)
    v = 3.0 * e1 + 4.0 * e2 + 5.0 * e3
    # the residual against span{e1, e2} is exactly the e3 component
    assert gap_line_space(v, [e1, e2]) == pytest.approx(5.0, abs=1e-12)
    assert gap_line_space(v, [e1, e2, e3]) == pytest.approx(0.0, abs=1e-12)
    assert gap_line_space(v, []) == pytest.approx(linalg.hs_norm(v), abs=1e-12)


def _report_kwargs(**overrides):
    base = dict(
        n=2,
        base_rank=1,
        target_rank=2,
        rate=0.5,
        length=2,
        trials=1,
        seed=0,
        gap_threshold=1e-3,
        distance_target=1e-6,
        slope_fit_floor=1e-13,
        pairs=((1, 0.5, 1e-4), (2, 0.25, 5e-5)),
        pairs_fixed_base=((1, 0.5, 1e-4), (2, 0.25, 5e-5)),
        slope=1.0,
        terminal_distance=0.25,
        terminal_gap=5e-5,
        terminal_gap_fixed_base=5e-5,
        passed=False,
    )
    base.update(overrides)
    return base


def test_report_rejects_nondecreasing_distances():
    with pytest.raises(ValueError):
        WhitneyReport(**_report_kwargs(pairs=((1, 0.25, 1e-4), (2, 0.5, 5e-5))))


def test_report_rejects_negative_gaps():
    with pytest.raises(ValueError):
        WhitneyReport(**_report_kwargs(pairs_fixed_base=((1, 0.5, 1e-4), (2, 0.25, -1e-5))))
    assert WhitneyReport(**_report_kwargs()).terminal_gap == 5e-5


def test_whitney_estimate_proper_pair():
    # rank 1 inside the closure of the rank-2 stratum of the 3x3 states
    y = sample_rank(3, 1, seed=31)
    rep = whitney_b_estimate(y, 2, trials=5, seed=31)
    assert rep.passed
    assert rep.terminal_distance <= 1e-6
    assert rep.terminal_gap <= 1e-3
    assert rep.terminal_gap_fixed_base <= 1e-3
    dists = [d for _, d, _ in rep.pairs]
    assert all(b < a for a, b in zip(dists[:-1], dists[1:]))
    # the gap decays roughly linearly with the distance
    assert rep.slope >= 0.4


def test_whitney_estimate_open_target():
    # target equal to the full rank: the stratum is open, its tangent space is
    # everything traceless, so gaps are pure roundoff and no slope is fitted
    y = sample_rank(2, 1, seed=32)
    rep = whitney_b_estimate(y, 2, trials=5, seed=32)
    assert rep.passed
    assert np.isinf(rep.slope)
    assert rep.terminal_gap <= 1e-8


def test_negative_control_detects_random_plane():
    y = sample_rank(3, 1, seed=33)
    out = whitney_negative_control(y, 2, trials=20, seed=33)
    assert out["trials"] == 20
    assert len(out["terminal_gaps"]) == 20
    assert out["fraction_failed"] >= 0.95


def test_enumerate_labels_counts():
    assert len(enumerate_labels(AlgebraDescriptor((2,)))) == 2
    assert len(enumerate_labels(AlgebraDescriptor((3,)))) == 3
    # (1+1)(2+1) - 1 composite rank vectors, minus none else
    assert len(enumerate_labels(AlgebraDescriptor((1, 2)))) == 5
    assert len(enumerate_labels(AlgebraDescriptor((1, 1, 1, 1)))) == 15
    labels = enumerate_labels(AlgebraDescriptor((1, 1)))
    assert {l.per_block for l in labels} == {(0, 1), (1, 0), (1, 1)}


def test_frontier_check_reachable_pair():
    alg = AlgebraDescriptor((3,))
    rep = frontier_check(StratumLabel(alg, (1,)), StratumLabel(alg, (2,)), samples=5, seed=34)
    assert isinstance(rep, FrontierReport)
    assert rep.expected and rep.reachable and rep.matches
    assert rep.max_distance <= 1e-6


def test_frontier_check_rank_drop_blocked():
    # rank cannot drop under a small perturbation: the dropped spectral tail
    # is an Eckart-Young floor on the distance
    alg = AlgebraDescriptor((2,))
    rep = frontier_check(StratumLabel(alg, (2,)), StratumLabel(alg, (1,)), samples=5, seed=35)
    assert not rep.expected
    assert not rep.reachable
    assert rep.matches
    assert rep.min_floor > 1e-6


def test_frontier_check_incomparable_blocks():
    alg = AlgebraDescriptor((1, 1))
    rep = frontier_check(StratumLabel(alg, (1, 0)), StratumLabel(alg, (0, 1)), samples=5, seed=36)
    assert not rep.expected
    assert rep.matches


def test_frontier_check_algebra_mismatch():
    a = AlgebraDescriptor((2,))
    b = AlgebraDescriptor((1, 1))
    with pytest.raises(ValueError):
        frontier_check(StratumLabel(a, (1,)), StratumLabel(b, (1, 1)))


def test_frontier_matrix_matches_order():
    alg = AlgebraDescriptor((1, 1))
    out = frontier_matrix(alg, samples=5, seed=37)
    assert out["equal"]
    assert out["mismatches"] == []
    labels = [tuple(l) for l in out["labels"]]
    for a, row in zip(labels, out["expected"]):
        for b, val in zip(labels, row):
            assert val == frontier_leq(StratumLabel(alg, a), StratumLabel(alg, b))
    assert out["reachable"] == out["expected"]
