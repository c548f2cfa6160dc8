import numpy as np
import pytest

from projspectra.densela import (DenseHermitian, NonHermitianError, commutator,
                                 jacobi_eigen, kron_apply, random_projection,
                                 spectral_norm)


def random_hermitian(dim, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return DenseHermitian(0.5 * (g + g.conj().T))


def test_dense_hermitian_rejects_asymmetry():
    with pytest.raises(NonHermitianError):
        DenseHermitian(np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(ValueError):
        DenseHermitian(np.zeros((2, 3)))


def test_dense_hermitian_accepts_roundoff_dust():
    m = np.array([[1.0, 0.5 + 1e-15j], [0.5, 2.0]])
    DenseHermitian(m)


def test_jacobi_matches_lapack_eigenvalues():
    for seed in range(30):
        dim = 1 + seed % 12
        h = random_hermitian(dim, seed)
        spec = jacobi_eigen(h)
        ref = np.linalg.eigvalsh(h.entries)
        assert np.abs(spec.eigenvalues - ref).max() < 1e-12 * max(1.0, np.abs(ref).max())


def test_jacobi_eigenvectors_are_consistent():
    for seed in range(10):
        dim = 2 + seed
        h = random_hermitian(dim, 100 + seed)
        spec = jacobi_eigen(h)
        residual = h.entries @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues
        assert np.abs(residual).max() < 1e-12 * max(1.0, np.abs(spec.eigenvalues).max())
        gram = spec.eigenvectors.conj().T @ spec.eigenvectors
        assert np.abs(gram - np.eye(dim)).max() < 1e-12


def test_spectral_norm_matches_eigenvalues():
    for seed in range(20):
        dim = 2 + seed
        h = random_hermitian(dim, 200 + seed)
        est = spectral_norm(lambda v, m=h.entries: m @ v, dim)
        ref = np.abs(np.linalg.eigvalsh(h.entries)).max()
        assert est.converged
        assert abs(float(est) - ref) < 1e-9 * max(1.0, ref)


def test_spectral_norm_degenerate_top():
    # a projector has a fully degenerate top eigenvalue 1
    p = random_projection(12, 5, seed=3)
    est = spectral_norm(lambda v: p.entries @ v, 12)
    assert est.converged
    assert abs(float(est) - 1.0) < 1e-9


def test_spectral_norm_symmetric_spectrum():
    # spectra symmetric about zero stall plain power iteration on T
    m = np.diag([2.0, -2.0, 1.0, -1.0]).astype(complex)
    est = spectral_norm(lambda v: m @ v, 4)
    assert abs(float(est) - 2.0) < 1e-9


def test_spectral_norm_zero_operator():
    est = spectral_norm(lambda v: np.zeros_like(v), 5)
    assert float(est) == 0.0 and est.converged


def test_commutator_is_hermitian_and_correct():
    a = random_hermitian(6, 1)
    b = random_hermitian(6, 2)
    c = commutator(a, b)
    direct = 1j * (a.entries @ b.entries - b.entries @ a.entries)
    assert np.abs(c.entries - direct).max() < 1e-12
    with pytest.raises(ValueError):
        commutator(a, random_hermitian(5, 3))


def test_kron_apply_matches_dense_kron():
    rng = np.random.Generator(np.random.PCG64(7))
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    v = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    got = kron_apply([a, b], v)
    ref = np.kron(a, b) @ v
    assert np.abs(got - ref).max() < 1e-12
    # callable factor form
    got2 = kron_apply([(3, lambda x: a @ x), b], v)
    assert np.abs(got2 - ref).max() < 1e-12


def test_kron_apply_rejects_bad_length():
    with pytest.raises(ValueError):
        kron_apply([np.eye(2), np.eye(2)], np.zeros(5))


def test_random_projection_properties():
    for seed in range(10):
        dim = 2 + seed
        rank = seed % (dim + 1)
        p = random_projection(dim, rank, seed)
        m = p.entries
        assert np.abs(m @ m - m).max() < 1e-12
        assert abs(np.trace(m).real - rank) < 1e-10
        again = random_projection(dim, rank, seed)
        assert np.array_equal(m, again.entries)
    with pytest.raises(ValueError):
        random_projection(3, 4, 0)
