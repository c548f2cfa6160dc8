"""End-to-end acceptance checks tying the analytic formulas, the two
independent eigensolver routes, and the operator-level estimators together.
"""

import numpy as np
import pytest

from projspectra.chsh import (TSIRELSON, chsh_radius_direct, chsh_radius_ktl,
                              planted_maximal_pair, random_bipartite,
                              tsirelson_sweep)
from projspectra.densela import (DenseHermitian, commutator, jacobi_eigen,
                                 random_projection, spectral_norm)
from projspectra.jordan import (ProjectionPairDense, block_spectra,
                                commutator_radius_exact)
from projspectra.oneshift import (OperatorPairOracle, direct_sum_pair,
                                  extract_one_shifted, shift_pair_oracle)
from projspectra.spectral import (ConstantAngleModel, b_func, bound_report,
                                  constant_angle_char_roots,
                                  constant_angle_exact_radius,
                                  constant_angle_tail, f_set_case1,
                                  select_lambda)
from projspectra.tridiag import AngleSequence, build_sum, eigen_tridiag

SWEEP_THETAS = (np.pi / 8, np.pi / 5, np.pi / 3, np.pi / 2,
                2 * np.pi / 3, 7 * np.pi / 8)
SWEEP_SCHEDULE = (125, 250, 500, 1000)


@pytest.fixture(scope="module")
def sweep_reports():
    # the defect threshold is a reported tuning knob: the per-truncation
    # eigenvector defects decay like n^(-1/2) and sit near 2e-2 at n=1000,
    # so 5e-2 is needed to accept the genuine candidates at this schedule
    return {theta: bound_report(ConstantAngleModel(theta), SWEEP_SCHEDULE,
                                defect_accept=5e-2)
            for theta in SWEEP_THETAS}


# 1. sandwich estimates agree with the closed-form radius across a theta sweep
def test_constant_angle_radius_sweep(sweep_reports):
    for theta, report in sweep_reports.items():
        exact = constant_angle_exact_radius(theta)
        assert abs(report.upper - exact) <= 5e-3, f"theta={theta}"
        assert abs(report.lower - exact) <= 5e-3, f"theta={theta}"


# 2. right-angle truncations have the closed-form cosine spectrum
@pytest.mark.parametrize("n", [2, 10, 50])
def test_right_angle_spectrum_closed_form(n):
    spec = eigen_tridiag(build_sum(AngleSequence.constant(np.pi / 2, n)))
    k = np.arange(1, 2 * n + 1)
    target = np.sort(2.0 * np.cos((2 * k - 1) * np.pi / (4 * n)))
    assert np.abs(spec.eigenvalues - target).max() < 1e-10


# 3. three routes to the commutator radius agree on random dense pairs
def test_three_route_radius_agreement():
    rng = np.random.Generator(np.random.PCG64(2024))
    for _ in range(200):
        dim = int(rng.integers(1, 17))
        r1, r2 = (int(r) for r in rng.integers(0, dim + 1, size=2))
        s1, s2 = (int(s) for s in rng.integers(0, 2 ** 31, size=2))
        pair = ProjectionPairDense(random_projection(dim, r1, s1),
                                   random_projection(dim, r2, s2))
        a = DenseHermitian(2.0 * pair.P.entries - np.eye(dim))
        b = DenseHermitian(2.0 * pair.Q.entries - np.eye(dim))
        sum_evs = jacobi_eigen(DenseHermitian(a.entries + b.entries)).eigenvalues
        # b has infinite slope at |lambda| in {0, 2}, so eigenvalues within
        # 1e-7 of those points (roundoff images of the exact 1-d blocks,
        # where b vanishes) are excluded from the maximum
        usable = [lam for lam in sum_evs
                  if min(abs(lam), abs(2.0 - abs(lam))) > 1e-7]
        via_spectrum = max((b_func(lam) for lam in usable), default=0.0)
        via_blocks = commutator_radius_exact(pair)
        c = commutator(a, b)
        via_norm = float(spectral_norm(lambda v, m=c.entries: m @ v, dim))
        assert abs(via_spectrum - via_blocks) < 1e-8
        assert abs(via_blocks - via_norm) < 1e-8
        assert abs(via_spectrum - via_norm) < 1e-8


# 4. the Bell radius never exceeds 2*sqrt(2), and the planted instance attains it
def test_bell_radius_cap():
    summary = tsirelson_sweep(200, (8, 8), seed=0)
    assert summary.ok, f"violating seeds: {summary.violations}"
    assert summary.max_rho <= TSIRELSON + 1e-8
    planted = float(chsh_radius_direct(planted_maximal_pair()))
    assert abs(planted - TSIRELSON) < 1e-8


# 5. the radius identity holds on random tensor instances up to dimension 256
def test_bell_radius_identity():
    rng = np.random.Generator(np.random.PCG64(77))
    for _ in range(100):
        dims = (int(rng.integers(1, 17)), int(rng.integers(1, 17)))
        pairs = random_bipartite(dims, int(rng.integers(0, 2 ** 31)))
        rho1 = commutator_radius_exact(pairs.side1)
        rho2 = commutator_radius_exact(pairs.side2)
        direct = float(chsh_radius_direct(pairs, seed=3))
        assert abs(direct - chsh_radius_ktl(rho1, rho2)) < 1e-8


# 6. angle extraction inverts the block construction, and recovers the
#    right angles of the pair-averaging shift example
def test_extraction_roundtrip_random_sequences():
    rng = np.random.Generator(np.random.PCG64(555))
    for _ in range(50):
        ang = AngleSequence(rng.uniform(0.1, np.pi - 0.1, 12),
                            rng.uniform(0.1, np.pi - 0.1, 11))
        oracle = OperatorPairOracle.from_dense(direct_sum_pair([ang]))
        u0 = np.zeros(24, dtype=np.complex128)
        u0[0] = 1.0
        result = extract_one_shifted(oracle, u0, 12)
        assert result.angles is not None
        assert np.abs(result.angles.theta - ang.theta).max() < 1e-9
        assert np.abs(result.angles.omega - ang.omega).max() < 1e-9


def test_extraction_shift_example():
    oracle = shift_pair_oracle(400)
    u0 = np.zeros(400, dtype=np.complex128)
    u0[0] = 1.0
    result = extract_one_shifted(oracle, u0, 80)
    assert result.angles is not None and result.angles.n == 80
    assert np.abs(result.angles.theta - np.pi / 2).max() < 1e-9
    assert np.abs(result.angles.omega - np.pi / 2).max() < 1e-9


# 7. characteristic roots localize to the expected phase intervals
@pytest.mark.parametrize("theta", [np.pi / 5, np.pi / 3, 2 * np.pi / 3])
@pytest.mark.parametrize("n", [10, 50])
def test_root_localization(theta, n):
    roots = constant_angle_char_roots(theta, n)
    counts = roots.interval_counts
    assert counts.sum() == 2 * n
    assert counts[n] == 0
    for k in range(1, 2 * n):
        if k != n:
            assert counts[k] == 1, f"interval {k}"
    assert counts[0] <= 3 and counts[2 * n] <= 3
    assert roots.warnings == ()


# 8. eigenvector tail decay: the last coordinate shrinks like n^(-1/2),
#    which is measurably far from 1e-2 at n=80
def _tail_near(theta, n, lam_target):
    roots = constant_angle_char_roots(theta, n, subgrid=8 if n > 500 else 64)
    lams = 2.0 * np.sin(theta) * np.cos(roots.phi)
    return constant_angle_tail(theta, n, roots.phi[int(np.argmin(np.abs(lams - lam_target)))])


@pytest.mark.xfail(strict=True, reason=(
    "the normalized eigenvector's last coordinate decays like n^(-1/2) "
    "(measured 0.142, 0.097, 0.068, 0.048 at n = 10, 20, 40, 80) and only "
    "crosses 1e-2 near n = 1900, so it cannot be below 1e-2 at n = 80"))
def test_tail_below_threshold_at_n80():
    assert _tail_near(np.pi / 3, 80, 0.5) < 1e-2


def test_tail_decay_law():
    tails = [_tail_near(np.pi / 3, n, 0.5) for n in (10, 20, 40, 80)]
    assert all(b < a for a, b in zip(tails, tails[1:]))
    # n^(-1/2) law: doubling n shrinks the tail by about sqrt(2)
    for a, b in zip(tails, tails[1:]):
        assert 0.6 < b / a < 0.8
    # the threshold is eventually reached, far beyond n = 80
    assert _tail_near(np.pi / 3, 2000, 0.5) < 1e-2
    # the formula agrees with the eigensolver route
    theta, n = np.pi / 3, 40
    roots = constant_angle_char_roots(theta, n)
    lams = 2.0 * np.sin(theta) * np.cos(roots.phi)
    j = int(np.argmin(np.abs(lams - 0.5)))
    spec = eigen_tridiag(build_sum(AngleSequence.constant(theta, n)),
                         want_vectors=True)
    k = int(np.argmin(np.abs(spec.eigenvalues - lams[j])))
    assert abs(abs(spec.eigenvectors[-1, k])
               - constant_angle_tail(theta, n, roots.phi[j])) < 1e-10


# 9. on finite direct sums of 2-d blocks the lower set, the exact radius and
#    the spectrum selector all give the same value
def test_direct_sum_equality():
    xs = (0.09, 0.3, 0.5)
    for blocks in ([0.09], [0.3], [0.5], list(xs)):
        pair = direct_sum_pair(blocks)
        dim = pair.dim
        exact = commutator_radius_exact(pair)
        f_set = f_set_case1([np.asarray(block_spectra(x).sum_eigs) / 2.0
                             for x in blocks])
        via_f_set = max(b_func(lam) for lam in f_set)
        sum_evs = jacobi_eigen(DenseHermitian(
            2.0 * (pair.P.entries + pair.Q.entries) - 2.0 * np.eye(dim))).eigenvalues
        via_selector = b_func(select_lambda(sum_evs))
        assert abs(via_f_set - exact) < 1e-9
        assert abs(via_selector - exact) < 1e-9


# 10. every sweep report keeps its sandwich ordering
def test_sweep_reports_sandwich_invariant(sweep_reports):
    for theta, report in sweep_reports.items():
        assert report.lower <= report.upper + 1e-9, f"theta={theta}"
        assert report.upper <= 2.0 + 1e-9
        assert report.candidate_set, f"no accepted candidates at theta={theta}"
