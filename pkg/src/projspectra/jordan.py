"""Block decomposition of a pair of orthogonal projections.

Any pair (P, Q) on a finite-dimensional space splits into an orthogonal
direct sum of invariant blocks of dimension at most two.  Each 2-D block is
classified by a single parameter x in (0,1) (the squared cosine of the
principal angle between the block's P-range and Q-range); every spectral
quantity of the pair is a closed form in the x values.  In particular the
spectral radius of the commutator [A, B] of the involutions A = 2P - I,
B = 2Q - I is max over blocks of 4*sqrt(x(1-x)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densela import DenseHermitian, jacobi_eigen

IDEMPOTENCY_TOL = 1e-10


@dataclass(frozen=True)
class ProjectionPairDense:
    """Two orthogonal projections on the same finite-dimensional space."""

    P: DenseHermitian
    Q: DenseHermitian

    def __post_init__(self):
        if self.P.dim != self.Q.dim:
            raise ValueError(f"dimension mismatch: {self.P.dim} vs {self.Q.dim}")
        tol = IDEMPOTENCY_TOL * self.P.dim
        for name, m in (("P", self.P.entries), ("Q", self.Q.entries)):
            defect = np.linalg.norm(m @ m - m, "fro")
            if defect > tol:
                raise ValueError(f"{name} is not idempotent: ||M^2 - M||_F = {defect:.3e}")

    @property
    def dim(self) -> int:
        return self.P.dim


@dataclass(frozen=True)
class JordanBlock:
    """A 1-D or 2-D invariant block of a projection pair.

    1-D blocks carry the eigenvalue pair (p_eig, q_eig) in {0,1}^2; 2-D
    blocks carry the parameter x in (0,1).  `basis` holds 1 or 2 orthonormal
    columns of the ambient space.
    """

    kind: str  # "1d" | "2d"
    basis: np.ndarray
    x: float | None = None
    p_eig: int | None = None
    q_eig: int | None = None

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-D array of columns")
        expected = 2 if self.kind == "2d" else 1
        if self.kind not in ("1d", "2d") or b.shape[1] != expected:
            raise ValueError(f"kind {self.kind!r} inconsistent with {b.shape[1]} columns")
        gram = b.conj().T @ b
        if np.abs(gram - np.eye(expected)).max() > 1e-10:
            raise ValueError("basis columns are not orthonormal")
        if self.kind == "2d":
            if self.x is None or not 0.0 < self.x < 1.0:
                raise ValueError("2-D block needs x in (0,1)")
        else:
            if self.p_eig not in (0, 1) or self.q_eig not in (0, 1):
                raise ValueError("1-D block needs p_eig, q_eig in {0,1}")
        object.__setattr__(self, "basis", b)


@dataclass(frozen=True)
class JordanDecomposition:
    blocks: list[JordanBlock]
    change_of_basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.change_of_basis.shape[0]


def _fix_phases(cols: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = cols.copy()
    for j in range(out.shape[1]):
        lead = np.argmax(np.abs(out[:, j]))
        z = out[lead, j]
        if np.abs(z) > 0:
            out[:, j] *= np.abs(z) / z
    return out


def jordan_decompose(pair: ProjectionPairDense, tol_angle: float = 1e-7) -> JordanDecomposition:
    """Split (P, Q) into invariant blocks of dimension at most two.

    Strategy: compress Q onto range(P) and eigendecompose; eigenvalues x
    strictly inside (tol_angle^2, 1 - tol_angle^2) span 2-D blocks together
    with their Q-image component in ker(P); eigenvalues at the endpoints
    give 1-D blocks.  What remains of ker(P) is Q-invariant and splits into
    1-D Q-eigenblocks.
    """
    if not 0.0 < tol_angle < 0.1:
        raise ValueError(f"tol_angle must lie in (0, 0.1), got {tol_angle}")
    d = pair.dim
    qm = pair.Q.entries
    psp = jacobi_eigen(pair.P)
    range_p = psp.eigenvectors[:, psp.eigenvalues > 0.5]
    ker_p = psp.eigenvectors[:, psp.eigenvalues <= 0.5]

    lo, hi = tol_angle ** 2, 1.0 - tol_angle ** 2
    blocks: list[JordanBlock] = []
    shear_cols = []  # ker(P) components consumed by 2-D blocks
    if range_p.shape[1]:
        comp = range_p.conj().T @ qm @ range_p
        csp = jacobi_eigen(DenseHermitian(0.5 * (comp + comp.conj().T)))
        for x, w in zip(csp.eigenvalues, csp.eigenvectors.T):
            r = range_p @ w
            if x >= hi:
                blocks.append(JordanBlock("1d", _fix_phases(r[:, None]), p_eig=1, q_eig=1))
            elif x <= lo:
                blocks.append(JordanBlock("1d", _fix_phases(r[:, None]), p_eig=1, q_eig=0))
            else:
                s = qm @ r - x * r
                s /= np.linalg.norm(s)
                # one common phase for both columns: s is tied to r through
                # Q, an independent rotation would break the real 2x2 form
                lead = np.argmax(np.abs(r))
                phase = np.abs(r[lead]) / r[lead]
                r = r * phase
                s = s * phase
                blocks.append(JordanBlock("2d", np.column_stack([r, s]),
                                          x=float(np.clip(x, 0.0, 1.0))))
                shear_cols.append(s)

    # remainder of ker(P): orthogonal complement of the consumed shear vectors
    if ker_p.shape[1]:
        rem = ker_p
        if shear_cols:
            s_mat = np.column_stack(shear_cols)
            rem = rem - s_mat @ (s_mat.conj().T @ rem)
        u, sv, _ = np.linalg.svd(rem, full_matrices=False)
        rem = u[:, sv > 0.5]
        if rem.shape[1]:
            comp = rem.conj().T @ qm @ rem
            csp = jacobi_eigen(DenseHermitian(0.5 * (comp + comp.conj().T)))
            bad = csp.eigenvalues[np.minimum(np.abs(csp.eigenvalues),
                                             np.abs(csp.eigenvalues - 1.0)) > 1e-6]
            if bad.size:
                raise ValueError(
                    "clustering failure: Q restricted to the residual subspace has "
                    f"eigenvalues {bad} away from {{0,1}}")
            for q_val, w in zip(csp.eigenvalues, csp.eigenvectors.T):
                blocks.append(JordanBlock("1d", _fix_phases((rem @ w)[:, None]),
                                          p_eig=0, q_eig=int(round(q_val))))

    blocks.sort(key=lambda b: (0, b.p_eig, b.q_eig, 0.0) if b.kind == "1d"
                else (1, 0, 0, b.x))
    change = np.column_stack([b.basis for b in blocks]) if blocks \
        else np.zeros((d, 0), dtype=np.complex128)
    if change.shape[1] != d:
        raise ValueError(f"block dimensions sum to {change.shape[1]}, expected {d}")
    return JordanDecomposition(blocks, change)


def halmos_param(block: JordanBlock) -> float:
    """The parameter x of a 2-D block."""
    if block.kind != "2d":
        raise ValueError("halmos_param is defined for 2-D blocks only")
    return block.x


def halmos_pair(x: float) -> ProjectionPairDense:
    """The canonical 2-D pair with parameter x: P tilted by x, Q = diag(1,0)."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must lie in (0,1), got {x}")
    c = np.sqrt(x * (1.0 - x))
    p = np.array([[x, c], [c, 1.0 - x]])
    q = np.diag([1.0, 0.0])
    return ProjectionPairDense(DenseHermitian(p), DenseHermitian(q))


@dataclass(frozen=True)
class BlockSpectra:
    sum_eigs: tuple[float, float]      # spectrum of A + B
    diff_eigs: tuple[float, float]     # spectrum of A - B
    comm_magnitude: float              # |spectrum| of [A, B] (purely imaginary)


def block_spectra(x: float) -> BlockSpectra:
    """Closed-form spectra of A+B, A-B and [A,B] on a 2-D block."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must lie in (0,1), got {x}")
    s = 2.0 * np.sqrt(x)
    dd = 2.0 * np.sqrt(1.0 - x)
    return BlockSpectra((-s, s), (-dd, dd), 4.0 * np.sqrt(x * (1.0 - x)))


def _involution_sum(x: float) -> np.ndarray:
    """A + B on the canonical 2-D block with parameter x."""
    c = np.sqrt(x * (1.0 - x))
    return np.array([[2.0 * x, 2.0 * c], [2.0 * c, -2.0 * x]])


def eigvec_uv(x: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvectors of A+B on the canonical block: u for -2*sqrt(x),
    v for +2*sqrt(x)."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must lie in (0,1), got {x}")
    rx = np.sqrt(x)
    u = np.array([-np.sqrt(1.0 - x) / (1.0 + rx), 1.0])
    v = np.array([np.sqrt(1.0 - x) / (1.0 - rx), 1.0])
    return u / np.linalg.norm(u), v / np.linalg.norm(v)


def witness_vector(x: float, grid: int = 64) -> tuple[np.ndarray, float]:
    """Search w = cos(t) u + e^{i phi} sin(t) v maximizing |<[A,B]w, w>|.

    One grid pass plus one local refinement; the maximum equals the
    commutator spectral radius 4*sqrt(x(1-x)) of the block.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64")
    u, v = eigvec_uv(x)
    c = np.sqrt(x * (1.0 - x))
    a = np.array([[2.0 * x - 1.0, 2.0 * c], [2.0 * c, 1.0 - 2.0 * x]])
    b = np.diag([1.0, -1.0])
    k = a @ b - b @ a

    def value(t, phi):
        w = np.cos(t)[..., None] * u + (np.exp(1j * phi) * np.sin(t))[..., None] * v
        n = np.linalg.norm(w, axis=-1)
        w = w / n[..., None]
        return np.abs(np.einsum("...i,ij,...j->...", w.conj(), k, w)), w

    t0, t1, p0, p1 = 0.0, np.pi / 2, 0.0, 2 * np.pi
    best_w = None
    best_val = -1.0
    # coarse pass + one local refinement on a 4x denser grid
    for points in (grid, 4 * grid):
        ts = np.linspace(t0, t1, points)
        ps = np.linspace(p0, p1, points)
        tg, pg = np.meshgrid(ts, ps, indexing="ij")
        vals, ws = value(tg, pg)
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        best_val = float(vals[i, j])
        best_w = ws[i, j]
        dt = (t1 - t0) / (points - 1)
        dp = (p1 - p0) / (points - 1)
        t0, t1 = ts[i] - dt, ts[i] + dt
        p0, p1 = ps[j] - dp, ps[j] + dp
    return best_w, best_val


def commutator_radius_exact(pair: ProjectionPairDense) -> float:
    """Exact spectral radius of [A, B] via the block decomposition."""
    decomp = jordan_decompose(pair)
    radius = 0.0
    for b in decomp.blocks:
        if b.kind == "2d":
            radius = max(radius, 4.0 * np.sqrt(b.x * (1.0 - b.x)))
    return radius


def reconstruct(decomp: JordanDecomposition) -> ProjectionPairDense:
    """Assemble (P, Q) back from the blocks."""
    d = decomp.dim
    total = sum(b.basis.shape[1] for b in decomp.blocks)
    if total != d:
        raise ValueError(f"block dimensions sum to {total}, expected {d}")
    p = np.zeros((d, d), dtype=np.complex128)
    q = np.zeros((d, d), dtype=np.complex128)
    for b in decomp.blocks:
        if b.kind == "1d":
            col = b.basis[:, 0]
            outer = np.outer(col, col.conj())
            p += b.p_eig * outer
            q += b.q_eig * outer
        else:
            r, s = b.basis[:, 0], b.basis[:, 1]
            c = np.sqrt(b.x * (1.0 - b.x))
            p += np.outer(r, r.conj())
            q += (b.x * np.outer(r, r.conj()) + c * (np.outer(r, s.conj())
                  + np.outer(s, r.conj())) + (1.0 - b.x) * np.outer(s, s.conj()))
    p = 0.5 * (p + p.conj().T)
    q = 0.5 * (q + q.conj().T)
    return ProjectionPairDense(DenseHermitian(p), DenseHermitian(q))


def decomposition_json(decomp: JordanDecomposition) -> dict:
    """Plain-dict summary: block list plus the exact commutator radius."""
    blocks = []
    radius = 0.0
    for b in decomp.blocks:
        if b.kind == "2d":
            blocks.append({"kind": "2d", "x": b.x})
            radius = max(radius, 4.0 * np.sqrt(b.x * (1.0 - b.x)))
        else:
            blocks.append({"kind": "1d", "p": b.p_eig, "q": b.q_eig})
    return {"blocks": blocks, "radius": radius}
