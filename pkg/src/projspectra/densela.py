"""Dense complex-Hermitian linear algebra.

Brute-force engine used to cross-check the tridiagonal path and to drive
small tensor-space computations.  Everything here is deterministic: random
instances are generated from an explicit seed via numpy's PCG64 generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_RTOL = 1e-12


class NonHermitianError(ValueError):
    """Input matrix fails the Hermitian symmetry check."""

    def __init__(self, max_asymmetry: float):
        self.max_asymmetry = max_asymmetry
        super().__init__(
            f"matrix is not Hermitian: max |M - M^H| entry = {max_asymmetry:.3e}"
        )


@dataclass(frozen=True)
class DenseHermitian:
    """A dim x dim complex Hermitian matrix."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        scale = np.abs(m).max() if m.size else 0.0
        asym = np.abs(m - m.conj().T).max()
        if asym > HERMITICITY_RTOL * max(scale, 1.0):
            raise NonHermitianError(float(asym))
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class DenseSpectrum:
    """Full eigendecomposition, eigenvalues ascending, eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def jacobi_eigen(t: DenseHermitian) -> DenseSpectrum:
    """Full spectrum of a Hermitian matrix by cyclic Jacobi sweeps.

    Deliberately independent of the tridiagonal (Sturm/inverse-iteration)
    solver so the two can be tested against each other.  Off-diagonal
    Frobenius norm is driven below 1e-14 times its initial value, with at
    most 60 cyclic sweeps.
    """
    a = t.entries.copy()
    n = t.dim
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return DenseSpectrum(a.real.diagonal().copy(), v)

    def off_norm(m):
        # measured directly -- subtracting the diagonal norm from the full
        # Frobenius norm cancels catastrophically near convergence
        return np.linalg.norm(m - np.diag(np.diagonal(m)), "fro")

    threshold = 1e-14 * max(off_norm(a), np.finfo(float).tiny)
    for _ in range(60):
        if off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = 0.5 * np.arctan2(2.0 * abs(apq), app - aqq)
                c = np.cos(theta)
                s = np.sin(theta) * np.exp(-1j * np.angle(apq))
                # A <- J^H A J with J = [[c, -conj(s)], [s, c]] on (p, q)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + s * col_q
                a[:, q] = -np.conj(s) * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + np.conj(s) * row_q
                a[q, :] = -s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * vq
                v[:, q] = -np.conj(s) * vp + c * vq

    eigenvalues = np.diagonal(a).real.copy()
    order = np.argsort(eigenvalues, kind="stable")
    return DenseSpectrum(eigenvalues[order], v[:, order])


@dataclass(frozen=True)
class NormEstimate:
    """Result of a matrix-free spectral-norm estimate."""

    value: float
    converged: bool
    gap: float
    iterations: int

    def __float__(self) -> float:
        return self.value


def spectral_norm(apply, dim: int, iters: int = 5000, tol: float = 1e-13,
                  seed: int = 0) -> NormEstimate:
    """Operator norm of a Hermitian operator given as a callback.

    Power iteration on T^2 (so spectra symmetric about zero do not stall),
    deterministic seeded start vector.  The result is accepted only when the
    final residual ||T^2 v - rho v|| certifies the value; a nearly degenerate
    top of the spectrum stalls power iteration, in which case a Krylov
    (Lanczos) pass takes over.  The returned estimate is flagged unconverged
    only when neither route can certify it.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.uniform(-1.0, 1.0, size=dim) + 1j * rng.uniform(-1.0, 1.0, size=dim)
    v /= np.linalg.norm(v)
    estimate = 0.0
    gap = np.inf
    k = 0
    for k in range(1, iters + 1):
        w = apply(apply(v))
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return NormEstimate(0.0, True, 0.0, k)
        rayleigh = np.vdot(v, w).real  # estimates ||T||^2
        gap = abs(rayleigh - estimate) / max(abs(rayleigh), 1.0)
        estimate = rayleigh
        v = w / norm_w
        if gap <= tol:
            break
    estimate = max(estimate, 0.0)
    # residual bound: |rho - lambda_max^2| <= ||T^2 v - rho v|| for Hermitian T
    residual = np.linalg.norm(apply(apply(v)) - estimate * v)
    if residual <= 1e-10 * max(estimate, 1.0):
        return NormEstimate(float(np.sqrt(estimate)), True, float(gap), k)

    from .tridiag import eigen_tridiag, lanczos_tridiagonal
    steps = min(dim, 300)
    t = lanczos_tridiagonal(apply, dim, max_steps=steps, seed=seed + 1)
    evs = eigen_tridiag(t).eigenvalues
    krylov = float(max(abs(evs[0]), abs(evs[-1])))
    power = float(np.sqrt(estimate))
    value = max(krylov, power)
    converged = steps == dim or abs(krylov - power) <= 1e-9 * max(value, 1.0)
    return NormEstimate(value, converged, float(gap), k)


def commutator(a: DenseHermitian, b: DenseHermitian) -> DenseHermitian:
    """Hermitian matrix i(AB - BA); its norm equals the spectral radius of [A,B]."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    m = 1j * (a.entries @ b.entries - b.entries @ a.entries)
    # (i(AB-BA))^H = -i(B^H A^H - A^H B^H) = i(AB - BA); symmetrize fp dust only
    m = 0.5 * (m + m.conj().T)
    return DenseHermitian(m)


def kron_apply(factors, v: np.ndarray) -> np.ndarray:
    """Apply (T_1 (x) T_2 (x) ...) to a vector on the tensor space.

    Each factor is either a dense matrix or a (dim, fn) pair where fn maps
    (dim, k) arrays to (dim, k) arrays.  The Kronecker product is never
    materialized.
    """
    dims = []
    fns = []
    for f in factors:
        if isinstance(f, tuple):
            d, fn = f
            dims.append(int(d))
            fns.append(fn)
        else:
            m = np.asarray(f)
            dims.append(m.shape[0])
            fns.append(lambda x, m=m: m @ x)
    total = int(np.prod(dims))
    v = np.asarray(v)
    if v.shape[0] != total:
        raise ValueError(f"vector length {v.shape[0]} != product of dims {total}")
    x = v.reshape(dims)
    for axis, (d, fn) in enumerate(zip(dims, fns)):
        moved = np.moveaxis(x, axis, 0).reshape(d, -1)
        moved = np.asarray(fn(moved))
        x = np.moveaxis(moved.reshape([d] + [dims[i] for i in range(len(dims)) if i != axis]), 0, axis)
    return x.reshape(total)


def random_projection(dim: int, rank: int, seed: int) -> DenseHermitian:
    """Random rank-`rank` orthogonal projection, deterministic per seed.

    P = U diag(1..1,0..0) U^H with U from the QR factorization of a seeded
    complex Gaussian matrix.
    """
    if not 0 <= rank <= dim:
        raise ValueError(f"rank {rank} out of range [0, {dim}]")
    if rank == 0:
        return DenseHermitian(np.zeros((dim, dim), dtype=np.complex128))
    rng = np.random.Generator(np.random.PCG64(seed))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    u, _ = np.linalg.qr(g)
    cols = u[:, :rank]
    p = cols @ cols.conj().T
    return DenseHermitian(0.5 * (p + p.conj().T))
