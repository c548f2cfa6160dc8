import numpy as np
import pytest

from projspectra.densela import (DenseHermitian, commutator, jacobi_eigen,
                                 random_projection, spectral_norm)
from projspectra.jordan import (ProjectionPairDense, block_spectra,
                                commutator_radius_exact, decomposition_json,
                                eigvec_uv, halmos_pair, halmos_param,
                                jordan_decompose, reconstruct, witness_vector)


def random_pair(dim, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    r1, r2 = rng.integers(0, dim + 1, size=2)
    s1, s2 = rng.integers(0, 2 ** 31, size=2)
    return ProjectionPairDense(random_projection(dim, int(r1), int(s1)),
                               random_projection(dim, int(r2), int(s2)))


def test_pair_rejects_non_idempotent():
    good = random_projection(4, 2, seed=0)
    bad = DenseHermitian(0.5 * np.eye(4))
    with pytest.raises(ValueError):
        ProjectionPairDense(good, bad)
    with pytest.raises(ValueError):
        ProjectionPairDense(good, random_projection(5, 2, seed=1))


def test_halmos_pair_block_spectra():
    for x in (0.1, 0.37, 0.5, 0.93):
        pair = halmos_pair(x)
        bs = block_spectra(x)
        sum_evs = jacobi_eigen(DenseHermitian(
            2.0 * (pair.P.entries + pair.Q.entries) - 2.0 * np.eye(2))).eigenvalues
        assert np.abs(sum_evs - np.asarray(bs.sum_eigs)).max() < 1e-12
        comm = commutator(
            DenseHermitian(2.0 * pair.P.entries - np.eye(2)),
            DenseHermitian(2.0 * pair.Q.entries - np.eye(2)))
        rho = float(spectral_norm(lambda v, m=comm.entries: m @ v, 2))
        assert abs(rho - bs.comm_magnitude) < 1e-10


def test_eigvec_uv_are_eigenvectors():
    for x in (0.2, 0.5, 0.8):
        pair = halmos_pair(x)
        s = 2.0 * (pair.P.entries + pair.Q.entries) - 2.0 * np.eye(2)
        u, v = eigvec_uv(x)
        lam = 2.0 * np.sqrt(x)
        assert np.linalg.norm(s @ u + lam * u) < 1e-12
        assert np.linalg.norm(s @ v - lam * v) < 1e-12
        assert abs(np.linalg.norm(u) - 1.0) < 1e-12
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12


def test_decomposition_roundtrip():
    for seed in range(40):
        dim = 1 + seed % 10
        pair = random_pair(dim, seed)
        decomp = jordan_decompose(pair)
        assert sum(1 if b.kind == "1d" else 2 for b in decomp.blocks) == dim
        back = reconstruct(decomp)
        assert np.abs(back.P.entries - pair.P.entries).max() < 1e-10
        assert np.abs(back.Q.entries - pair.Q.entries).max() < 1e-10


def test_decomposition_basis_is_unitary():
    pair = random_pair(9, 999)
    decomp = jordan_decompose(pair)
    u = decomp.change_of_basis
    assert np.abs(u.conj().T @ u - np.eye(pair.dim)).max() < 1e-10


def test_exact_radius_matches_norm_of_commutator():
    for seed in range(30):
        dim = 2 + seed % 8
        pair = random_pair(dim, 3000 + seed)
        a = DenseHermitian(2.0 * pair.P.entries - np.eye(dim))
        b = DenseHermitian(2.0 * pair.Q.entries - np.eye(dim))
        c = commutator(a, b)
        rho_norm = float(spectral_norm(lambda v, m=c.entries: m @ v, dim))
        # [A, B] = 4 [P, Q], so the involution commutator radius is reported
        assert abs(commutator_radius_exact(pair) - rho_norm) < 1e-9


def test_halmos_param_recovers_x():
    for x in (0.11, 0.5, 0.77):
        decomp = jordan_decompose(halmos_pair(x))
        two_d = [b for b in decomp.blocks if b.kind == "2d"]
        assert len(two_d) == 1
        assert abs(halmos_param(two_d[0]) - x) < 1e-12


def test_witness_vector_nearly_attains_radius():
    for x in (0.15, 0.5, 0.85):
        target = 4.0 * np.sqrt(x * (1.0 - x))
        _, value = witness_vector(x)
        assert value >= target - 1e-6
        assert value <= target + 1e-12


def test_decomposition_json_shape():
    payload = decomposition_json(jordan_decompose(random_pair(6, 42)))
    assert set(payload) == {"blocks", "radius"}
    for entry in payload["blocks"]:
        assert "kind" in entry
