"""One-shifted tridiagonal builders and a symmetric tridiagonal eigensolver.

The builders produce the 2n x 2n involutions 2P_n - E and 2Q_n - E attached
to an angle sequence, and their sum.  The eigensolver is Sturm-sequence
bisection plus inverse iteration; it is the path under test against the
dense Jacobi oracle in `densela`.

Index conventions: angles are 1-based in the docs (theta_1..theta_n), arrays
are 0-based; basis ordering is u1, v1, u2, v2, ...
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ANGLE_MARGIN = 1e-12


@dataclass(frozen=True)
class AngleSequence:
    """Angle data Theta (length n) and Omega (length n-1), all in (0, pi)."""

    theta: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        th = np.atleast_1d(np.asarray(self.theta, dtype=float))
        om = np.atleast_1d(np.asarray(self.omega, dtype=float)) if np.size(self.omega) \
            else np.zeros(0)
        if th.size < 1:
            raise ValueError("need at least one theta angle")
        if om.size != th.size - 1:
            raise ValueError(f"omega must have length {th.size - 1}, got {om.size}")
        for name, arr in (("theta", th), ("omega", om)):
            if arr.size and (arr.min() <= ANGLE_MARGIN or arr.max() >= np.pi - ANGLE_MARGIN):
                raise ValueError(f"{name} angles must lie strictly in (0, pi)")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "omega", om)

    @property
    def n(self) -> int:
        return self.theta.size

    @staticmethod
    def constant(theta: float, n: int) -> "AngleSequence":
        return AngleSequence(np.full(n, theta), np.full(n - 1, theta))


@dataclass(frozen=True)
class SymTridiagonal:
    """Real symmetric tridiagonal matrix: main diagonal + one off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.diag, dtype=float))
        e = np.asarray(self.offdiag, dtype=float).reshape(-1)
        if e.size != d.size - 1:
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.size}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("entries must be finite")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self) -> int:
        return self.diag.size

    def norm_inf(self) -> float:
        e = np.concatenate([[0.0], np.abs(self.offdiag), [0.0]])
        return float(np.max(np.abs(self.diag) + e[:-1] + e[1:])) if self.dim else 0.0

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        idx = np.arange(self.dim - 1)
        m[idx, idx + 1] = self.offdiag
        m[idx + 1, idx] = self.offdiag
        return m


@dataclass(frozen=True)
class TridiagSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray | None
    flagged: np.ndarray | None = None


def build_A(ang: AngleSequence) -> SymTridiagonal:
    """2P_n(Theta) - E: block diagonal of r(theta_i) rotations, size 2n."""
    n = ang.n
    diag = np.empty(2 * n)
    diag[0::2] = np.cos(ang.theta)
    diag[1::2] = -np.cos(ang.theta)
    off = np.zeros(2 * n - 1)
    off[0::2] = np.sin(ang.theta)
    return SymTridiagonal(diag, off)


def build_B(ang: AngleSequence) -> SymTridiagonal:
    """2Q_n(Omega) - E: leading +1, r(omega_i) blocks shifted by one, trailing -1."""
    n = ang.n
    diag = np.empty(2 * n)
    diag[0] = 1.0
    diag[-1] = -1.0
    if n > 1:
        diag[1:-1:2] = np.cos(ang.omega)
        diag[2:-1:2] = -np.cos(ang.omega)
    off = np.zeros(2 * n - 1)
    if n > 1:
        off[1::2] = np.sin(ang.omega)
    return SymTridiagonal(diag, off)


def build_sum(ang: AngleSequence) -> SymTridiagonal:
    """A_n(Theta) + B_n(Omega); every off-diagonal entry is nonzero."""
    a = build_A(ang)
    b = build_B(ang)
    return SymTridiagonal(a.diag + b.diag, a.offdiag + b.offdiag)


def apply_tridiag(t: SymTridiagonal, v: np.ndarray) -> np.ndarray:
    """Matrix-vector (or matrix-matrix, column-wise) product in O(m)."""
    v = np.asarray(v)
    if v.shape[0] != t.dim:
        raise ValueError(f"length mismatch: matrix dim {t.dim}, vector {v.shape[0]}")
    d = t.diag if v.ndim == 1 else t.diag[:, None]
    e = t.offdiag if v.ndim == 1 else t.offdiag[:, None]
    out = d * v
    if t.dim > 1:
        out[:-1] += e * v[1:]
        out[1:] += e * v[:-1]
    return out


def _sturm_counts(diag: np.ndarray, off2: np.ndarray, x: np.ndarray,
                  pivmin: float) -> np.ndarray:
    """Eigenvalue counts strictly below each shift in x (LDL^T sign count)."""
    d = diag[0] - x
    d = np.where(np.abs(d) < pivmin, np.where(d < 0, -pivmin, pivmin), d)
    count = (d < 0).astype(np.int64)
    for i in range(1, diag.size):
        d = diag[i] - x - off2[i - 1] / d
        d = np.where(np.abs(d) < pivmin, np.where(d < 0, -pivmin, pivmin), d)
        count += d < 0
    return count


def sturm_count(t: SymTridiagonal, x: float) -> int:
    """Number of eigenvalues of T strictly below x."""
    if not np.isfinite(x):
        raise ValueError("shift must be finite")
    off2 = t.offdiag ** 2
    pivmin = max(np.finfo(float).tiny / np.finfo(float).eps,
                 off2.max(initial=0.0) * np.finfo(float).tiny)
    return int(_sturm_counts(t.diag, off2, np.asarray([x], dtype=float), pivmin)[0])


def _bisect_eigenvalues(t: SymTridiagonal, tol: float) -> np.ndarray:
    m = t.dim
    off2 = t.offdiag ** 2
    pivmin = max(np.finfo(float).tiny / np.finfo(float).eps,
                 off2.max(initial=0.0) * np.finfo(float).tiny)
    radius = np.concatenate([[0.0], np.abs(t.offdiag), [0.0]])
    lo0 = float(np.min(t.diag - radius[:-1] - radius[1:])) - tol
    hi0 = float(np.max(t.diag + radius[:-1] + radius[1:])) + tol
    lo = np.full(m, lo0)
    hi = np.full(m, hi0)
    targets = np.arange(1, m + 1)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(t.diag, off2, mid, pivmin)
        below = counts >= targets
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    return 0.5 * (lo + hi)


def _thomas_solve(diag: np.ndarray, off: np.ndarray, shifts: np.ndarray,
                  rhs: np.ndarray, pivmin: float) -> np.ndarray:
    """Solve (T - shift_k I) x_k = rhs_k for many shifts at once.

    Plain Thomas elimination with clamped pivots; near-singular systems are
    exactly what inverse iteration wants, the clamped last pivot blows the
    solution up along the eigenvector.
    """
    m = diag.size
    k = shifts.size
    c = np.empty((m, k))  # normalized superdiagonal
    x = np.empty((m, k))
    d = diag[0] - shifts
    d = np.where(np.abs(d) < pivmin, np.where(d < 0, -pivmin, pivmin), d)
    if m > 1:
        c[0] = off[0] / d
    x[0] = rhs[0] / d
    for i in range(1, m):
        d = diag[i] - shifts - off[i - 1] * c[i - 1]
        d = np.where(np.abs(d) < pivmin, np.where(d < 0, -pivmin, pivmin), d)
        if i < m - 1:
            c[i] = off[i] / d
        x[i] = (rhs[i] - off[i - 1] * x[i - 1]) / d
    for i in range(m - 2, -1, -1):
        x[i] -= c[i] * x[i + 1]
    return x


def eigen_tridiag(t: SymTridiagonal, want_vectors: bool = False,
                  seed: int = 12345) -> TridiagSpectrum:
    """All eigenvalues by bisection; eigenvectors by inverse iteration.

    Bisection to absolute tolerance 1e-13 * (1 + ||T||_inf).  Eigenvectors
    get 2 refinement solves, reorthogonalization within eigenvalue clusters
    (gap below 1e-8 * ||T||_inf), and up to 5 perturbed-shift retries on
    breakdown; vectors still failing the residual bound are flagged.
    """
    scale = 1.0 + t.norm_inf()
    tol = 1e-13 * scale
    eigenvalues = _bisect_eigenvalues(t, tol)
    if not want_vectors:
        return TridiagSpectrum(eigenvalues, None, None)

    m = t.dim
    if m == 1:
        vecs = np.ones((1, 1))
        return TridiagSpectrum(eigenvalues, vecs, np.zeros(1), np.zeros(1, dtype=bool))

    off2max = (t.offdiag ** 2).max(initial=0.0)
    pivmin = max(np.finfo(float).tiny / np.finfo(float).eps,
                 off2max * np.finfo(float).eps ** 2, scale * 1e-300)
    rng = np.random.Generator(np.random.PCG64(seed))
    rhs = rng.uniform(-1.0, 1.0, size=(m, m))
    rhs /= np.linalg.norm(rhs, axis=0)

    vecs = rhs
    for _ in range(1 + 2):  # initial solve + 2 refinements
        vecs = _thomas_solve(t.diag, t.offdiag, eigenvalues, vecs, pivmin)
        vecs /= np.linalg.norm(vecs, axis=0)

    cluster_tol = 1e-8 * scale
    _reorthogonalize_clusters(vecs, eigenvalues, cluster_tol)

    residuals = np.linalg.norm(apply_tridiag(t, vecs) - eigenvalues * vecs, axis=0)
    res_tol = 1e-11 * scale
    flagged = residuals > res_tol
    for j in np.nonzero(flagged)[0]:
        for attempt in range(5):
            shift = eigenvalues[j] + (attempt + 1) * 2.0 * tol * (-1) ** attempt
            v = rng.uniform(-1.0, 1.0, size=(m, 1))
            for _ in range(3):
                v = _thomas_solve(t.diag, t.offdiag, np.asarray([shift]), v, pivmin)
                v /= np.linalg.norm(v)
            r = np.linalg.norm(apply_tridiag(t, v[:, 0]) - eigenvalues[j] * v[:, 0])
            if r <= res_tol:
                vecs[:, j] = v[:, 0]
                residuals[j] = r
                flagged[j] = False
                break
    if np.any(flagged):
        _reorthogonalize_clusters(vecs, eigenvalues, cluster_tol)
        residuals = np.linalg.norm(apply_tridiag(t, vecs) - eigenvalues * vecs, axis=0)
        flagged = residuals > res_tol
    return TridiagSpectrum(eigenvalues, vecs, residuals, flagged)


def lanczos_tridiagonal(apply, dim: int, max_steps: int | None = None,
                        seed: int = 0) -> SymTridiagonal:
    """Tridiagonalize a Hermitian operator callback over a Krylov basis.

    Full reorthogonalization (twice per step) keeps the basis orthonormal;
    on breakdown the iteration restarts with a fresh random direction and a
    zero coupling, so the result is a direct sum over invariant subspaces.
    With max_steps = dim the spectrum of the output equals the operator's.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    m = dim if max_steps is None else min(dim, max_steps)
    rng = np.random.Generator(np.random.PCG64(seed))
    basis = np.empty((dim, m), dtype=np.complex128)
    alpha = np.empty(m)
    beta = np.empty(max(m - 1, 0))
    q = rng.uniform(-1.0, 1.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim)
    q /= np.linalg.norm(q)
    scale = 0.0
    for j in range(m):
        basis[:, j] = q
        w = np.asarray(apply(q), dtype=np.complex128)
        alpha[j] = np.vdot(q, w).real
        scale = max(scale, abs(alpha[j]), np.linalg.norm(w))
        for _ in range(2):
            w = w - basis[:, :j + 1] @ (basis[:, :j + 1].conj().T @ w)
        if j == m - 1:
            break
        b = np.linalg.norm(w)
        if b > 1e-13 * max(scale, 1.0):
            beta[j] = b
            q = w / b
        else:
            # invariant subspace exhausted: restart orthogonally
            beta[j] = 0.0
            q = rng.uniform(-1.0, 1.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim)
            for _ in range(2):
                q = q - basis[:, :j + 1] @ (basis[:, :j + 1].conj().T @ q)
            nq = np.linalg.norm(q)
            if nq < 1e-13:
                return SymTridiagonal(alpha[:j + 1], beta[:j])
            q /= nq
    return SymTridiagonal(alpha, beta)


def _reorthogonalize_clusters(vecs: np.ndarray, eigenvalues: np.ndarray,
                              cluster_tol: float) -> None:
    """Gram-Schmidt within groups of nearly equal eigenvalues, in place."""
    m = eigenvalues.size
    start = 0
    while start < m:
        end = start + 1
        while end < m and eigenvalues[end] - eigenvalues[end - 1] < cluster_tol:
            end += 1
        if end - start > 1:
            block = vecs[:, start:end]
            q, _ = np.linalg.qr(block)
            # keep the sign convention stable: largest entry positive
            for j in range(q.shape[1]):
                lead = np.argmax(np.abs(q[:, j]))
                if q[lead, j] < 0:
                    q[:, j] = -q[:, j]
            vecs[:, start:end] = q
        start = end
