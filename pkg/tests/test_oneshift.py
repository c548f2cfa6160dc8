import numpy as np
import pytest

from projspectra.jordan import halmos_pair
from projspectra.oneshift import (OperatorPairOracle, approx_from_samples,
                                  approximation_defect, direct_sum_pair,
                                  extract_one_shifted, polynomial_defect,
                                  shift_pair_oracle, tensor_pair)
from projspectra.tridiag import AngleSequence


def random_angles(n, seed, margin=0.1):
    rng = np.random.Generator(np.random.PCG64(seed))
    return AngleSequence(rng.uniform(margin, np.pi - margin, n),
                         rng.uniform(margin, np.pi - margin, n - 1))


def first_basis_vector(dim):
    u = np.zeros(dim, dtype=np.complex128)
    u[0] = 1.0
    return u


def test_extraction_roundtrip_single_sequence():
    ang = random_angles(8, 0)
    oracle = OperatorPairOracle.from_dense(direct_sum_pair([ang]))
    result = extract_one_shifted(oracle, first_basis_vector(16), 8)
    assert result.angles is not None
    assert np.abs(result.angles.theta - ang.theta).max() < 1e-12
    assert np.abs(result.angles.omega - ang.omega).max() < 1e-12
    gram = result.basis.conj().T @ result.basis
    assert np.abs(gram - np.eye(result.basis.shape[1])).max() < 1e-12


def test_extraction_input_validation():
    oracle = OperatorPairOracle.from_dense(direct_sum_pair([random_angles(4, 1)]))
    with pytest.raises(ValueError):
        extract_one_shifted(oracle, first_basis_vector(8), 0)
    with pytest.raises(ValueError):
        extract_one_shifted(oracle, 2.0 * first_basis_vector(8), 4)
    not_fixed = np.zeros(8, dtype=np.complex128)
    not_fixed[1] = 1.0  # second basis vector is not Q-fixed
    with pytest.raises(ValueError):
        extract_one_shifted(oracle, not_fixed, 4)


def test_extraction_breakdown_on_invariant_subspace():
    # after exhausting one 2n-dimensional block the recursion must stop
    ang = random_angles(3, 2)
    pair = direct_sum_pair([ang, 0.4])
    oracle = OperatorPairOracle.from_dense(pair)
    result = extract_one_shifted(oracle, first_basis_vector(8), 6)
    assert result.terminated
    assert result.breakdown_step == 6
    assert result.angles is not None and result.angles.n == 3


def test_shift_oracle_projections():
    oracle = shift_pair_oracle(12)
    rng = np.random.Generator(np.random.PCG64(5))
    for _ in range(5):
        v = rng.standard_normal(12)
        for apply_proj in (oracle.apply_P, oracle.apply_Q):
            pv = np.asarray(apply_proj(v))
            assert np.abs(np.asarray(apply_proj(pv)) - pv).max() < 1e-13
    with pytest.raises(ValueError):
        shift_pair_oracle(5)
    with pytest.raises(ValueError):
        shift_pair_oracle(2)


def test_shift_extraction_gives_right_angles():
    oracle = shift_pair_oracle(100)
    result = extract_one_shifted(oracle, first_basis_vector(100), 20)
    assert result.angles is not None
    assert np.abs(result.angles.theta - np.pi / 2).max() < 1e-12
    assert np.abs(result.angles.omega - np.pi / 2).max() < 1e-12


def test_approx_from_samples_reproduces_samples():
    rng = np.random.Generator(np.random.PCG64(9))
    pair = direct_sum_pair([random_angles(3, 9), 0.3])
    oracle = OperatorPairOracle.from_dense(pair)
    samples = [rng.standard_normal(8) for _ in range(3)]
    restricted, embed = approx_from_samples(pair, samples)
    for v in samples:
        d = approximation_defect(oracle, (embed, restricted.P, restricted.Q), v)
        assert d.defect < 1e-12 * np.linalg.norm(v)


def test_polynomial_defect_zero_on_full_space():
    pair = direct_sum_pair([0.25, 0.6])
    oracle = OperatorPairOracle.from_dense(pair)
    approx = (np.eye(4), pair.P, pair.Q)
    rng = np.random.Generator(np.random.PCG64(13))
    v = rng.standard_normal(4)
    f = {"PQ": 1.0, "QP": -1.0, "AB": 0.5j, "I": 2.0}
    assert polynomial_defect(f, oracle, approx, v) < 1e-12
    with pytest.raises(ValueError):
        polynomial_defect({"PX": 1.0}, oracle, approx, v)
    with pytest.raises(ValueError):
        polynomial_defect({}, oracle, approx, v)


def test_direct_sum_pair_block_types():
    pair = direct_sum_pair([halmos_pair(0.3), 0.7, random_angles(2, 4)])
    assert pair.dim == 2 + 2 + 4
    with pytest.raises(ValueError):
        direct_sum_pair([])
    with pytest.raises(ValueError):
        direct_sum_pair(["bad"])


def test_tensor_pair_commuting_factors():
    a = halmos_pair(0.3)
    b = halmos_pair(0.8)
    oracle = tensor_pair(a, b)
    rng = np.random.Generator(np.random.PCG64(17))
    v = rng.standard_normal(4)
    # P (x) I and I (x) Q always commute
    pq = oracle.apply_P(oracle.apply_Q(v))
    qp = oracle.apply_Q(oracle.apply_P(v))
    assert np.abs(pq - qp).max() < 1e-13
    ref = np.kron(a.P.entries, np.eye(2)) @ v
    assert np.abs(oracle.apply_P(v) - ref).max() < 1e-13
