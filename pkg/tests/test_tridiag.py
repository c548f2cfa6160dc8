import numpy as np
import pytest

from projspectra.tridiag import (AngleSequence, SymTridiagonal, apply_tridiag,
                                 build_A, build_B, build_sum, eigen_tridiag,
                                 lanczos_tridiagonal, sturm_count)


def random_angles(n, seed, margin=0.1):
    rng = np.random.Generator(np.random.PCG64(seed))
    return AngleSequence(rng.uniform(margin, np.pi - margin, n),
                         rng.uniform(margin, np.pi - margin, n - 1))


def test_angle_sequence_validation():
    with pytest.raises(ValueError):
        AngleSequence(np.array([]), np.array([]))
    with pytest.raises(ValueError):
        AngleSequence(np.array([0.0, 1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        AngleSequence(np.array([1.0, np.pi]), np.array([1.0]))
    with pytest.raises(ValueError):
        AngleSequence(np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    ang = AngleSequence.constant(np.pi / 3, 4)
    assert ang.n == 4 and ang.omega.size == 3


def test_builders_produce_involutions():
    for seed in range(8):
        ang = random_angles(2 + seed, seed)
        for t in (build_A(ang), build_B(ang)):
            m = t.dense()
            assert np.abs(m - m.T).max() == 0.0
            assert np.abs(m @ m - np.eye(2 * ang.n)).max() < 1e-12


def test_sum_matches_a_plus_b():
    for seed in range(8):
        ang = random_angles(3 + seed, 50 + seed)
        s = build_sum(ang).dense()
        assert np.abs(s - (build_A(ang).dense() + build_B(ang).dense())).max() < 1e-14


def test_apply_tridiag_matches_dense():
    rng = np.random.Generator(np.random.PCG64(11))
    ang = random_angles(10, 11)
    t = build_sum(ang)
    v = rng.standard_normal((20, 3))
    assert np.abs(apply_tridiag(t, v) - t.dense() @ v).max() < 1e-13


def test_sturm_count_matches_eigenvalue_count():
    ang = random_angles(12, 5)
    t = build_sum(ang)
    evs = np.linalg.eigvalsh(t.dense())
    for x in np.linspace(-3.0, 3.0, 25):
        assert sturm_count(t, x) == int(np.sum(evs < x))


def test_eigen_tridiag_matches_lapack():
    for seed in range(10):
        ang = random_angles(4 + 3 * seed, 500 + seed)
        t = build_sum(ang)
        spec = eigen_tridiag(t)
        ref = np.linalg.eigvalsh(t.dense())
        assert np.abs(spec.eigenvalues - ref).max() < 1e-11 * max(1.0, np.abs(ref).max())


def test_eigen_tridiag_vectors():
    ang = random_angles(15, 9)
    t = build_sum(ang)
    spec = eigen_tridiag(t, want_vectors=True)
    residual = apply_tridiag(t, spec.eigenvectors) - spec.eigenvectors * spec.eigenvalues
    assert np.abs(residual).max() < 1e-10
    gram = spec.eigenvectors.T @ spec.eigenvectors
    assert np.abs(gram - np.eye(2 * ang.n)).max() < 1e-9


def test_eigen_tridiag_clustered_spectrum():
    # repeated eigenvalues still give an orthonormal basis
    t = SymTridiagonal(np.array([1.0, 1.0, 1.0, 2.0]), np.zeros(3))
    spec = eigen_tridiag(t, want_vectors=True)
    gram = spec.eigenvectors.T @ spec.eigenvectors
    assert np.abs(gram - np.eye(4)).max() < 1e-10


def test_lanczos_reproduces_spectral_extremes():
    rng = np.random.Generator(np.random.PCG64(21))
    g = rng.standard_normal((40, 40))
    m = 0.5 * (g + g.T)
    t = lanczos_tridiagonal(lambda v: m @ v, 40)
    evs = eigen_tridiag(t).eigenvalues
    ref = np.linalg.eigvalsh(m)
    assert abs(evs[0] - ref[0]) < 1e-8
    assert abs(evs[-1] - ref[-1]) < 1e-8
