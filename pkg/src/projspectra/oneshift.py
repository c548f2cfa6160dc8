"""Angle-sequence extraction and finite-dimensional approximation.

A projection pair with a cyclic Q-fixed unit vector admits an interleaved
orthonormal basis u1, v1, u2, v2, ... on which 2P - I acts by 2x2 rotations
r(theta_i) on <u_i, v_i> and 2Q - I by r(omega_i) on <v_i, u_{i+1}>; the
angles are recovered here by a Gram-Schmidt recursion.  The module also
provides the classical pair-averaging shift example on l^2 (truncated) and
the constructions that approximate a pair on finite-dimensional subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densela import DenseHermitian, kron_apply
from .jordan import ProjectionPairDense, halmos_pair
from .tridiag import AngleSequence, SymTridiagonal, apply_tridiag, build_A, build_B


@dataclass(frozen=True)
class OperatorPairOracle:
    """A projection pair given by application callbacks on coordinates."""

    dim: int
    apply_P: object
    apply_Q: object

    @staticmethod
    def from_dense(pair: ProjectionPairDense) -> "OperatorPairOracle":
        p, q = pair.P.entries, pair.Q.entries
        return OperatorPairOracle(pair.dim, lambda x: p @ x, lambda x: q @ x)


@dataclass(frozen=True)
class OneShiftExtraction:
    """Result of the angle-extraction recursion.

    `basis` holds the columns u1, v1, u2, v2, ... actually produced;
    `angles` is None when breakdown happened before the first complete
    angle; `residuals` records the norm of the re-orthogonalization
    correction applied at each step.
    """

    basis: np.ndarray
    angles: AngleSequence | None
    terminated: bool
    breakdown_step: int | None
    residuals: np.ndarray


def extract_one_shifted(oracle: OperatorPairOracle, u0: np.ndarray,
                        n_max: int, tol_breakdown: float = 1e-10) -> OneShiftExtraction:
    """Recover the interleaved-basis angles starting from a Q-fixed vector.

    Alternates: reflect u_i through P to get cos(theta_i) and the new
    direction v_i, then reflect v_i through Q to get cos(omega_i) and
    u_{i+1}.  Each new vector is re-orthogonalized against the whole basis
    (twice) before normalization.  A residual below tol_breakdown means the
    span so far is invariant, and the recursion stops there.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not 0.0 < tol_breakdown <= 1e-3:
        raise ValueError("tol_breakdown must lie in (0, 1e-3]")
    u = np.asarray(u0, dtype=np.complex128)
    if u.shape != (oracle.dim,):
        raise ValueError(f"u0 must have shape ({oracle.dim},)")
    if abs(np.linalg.norm(u) - 1.0) > 1e-8:
        raise ValueError("u0 must be a unit vector")
    if np.linalg.norm(np.asarray(oracle.apply_Q(u)) - u) > 1e-8:
        raise ValueError("u0 must be fixed by Q")

    basis = np.empty((oracle.dim, 2 * n_max), dtype=np.complex128)
    basis[:, 0] = u
    count = 1
    thetas: list[float] = []
    omegas: list[float] = []
    residuals: list[float] = []
    terminated = False
    breakdown_step = None

    def reflect_step(vec, apply_proj):
        nonlocal count
        image = 2.0 * np.asarray(apply_proj(vec), dtype=np.complex128) - vec
        cos = float(np.vdot(vec, image).real)
        r = image - cos * vec
        correction = 0.0
        for _ in range(2):
            coeffs = basis[:, :count].conj().T @ r
            r = r - basis[:, :count] @ coeffs
            correction += float(np.linalg.norm(coeffs))
        residuals.append(correction)
        sin = float(np.linalg.norm(r))
        return cos, sin, r

    for i in range(n_max):
        cos, sin, r = reflect_step(basis[:, count - 1], oracle.apply_P)
        if sin < tol_breakdown:
            terminated = True
            breakdown_step = count
            break
        basis[:, count] = r / sin
        count += 1
        thetas.append(float(np.arctan2(sin, cos)))
        if i == n_max - 1:
            break
        cos, sin, r = reflect_step(basis[:, count - 1], oracle.apply_Q)
        if sin < tol_breakdown:
            terminated = True
            breakdown_step = count
            break
        basis[:, count] = r / sin
        count += 1
        omegas.append(float(np.arctan2(sin, cos)))

    if thetas and len(omegas) == len(thetas):  # stopped mid-pattern
        omegas = omegas[:-1] if len(omegas) else omegas
    angles = None
    if thetas and len(omegas) == len(thetas) - 1:
        angles = AngleSequence(np.asarray(thetas), np.asarray(omegas))
    return OneShiftExtraction(basis[:, :count], angles, terminated,
                              breakdown_step, np.asarray(residuals))


def shift_pair_oracle(N: int) -> OperatorPairOracle:
    """Truncation of the pair-averaging shift example on l^2.

    P averages coordinate pairs (1,2), (3,4), ...; Q fixes coordinate 1 and
    averages pairs (2,3), (4,5), ....  At the truncation boundary Q's last
    unpaired coordinate is annihilated, which keeps Q an exact projection.
    """
    if N < 4 or N % 2:
        raise ValueError("N must be even and at least 4")

    def apply_P(x):
        x = np.asarray(x)
        pairs = x.reshape(N // 2, 2)
        means = pairs.mean(axis=1, keepdims=True)
        return np.broadcast_to(means, (N // 2, 2)).reshape(N).copy()

    def apply_Q(x):
        x = np.asarray(x)
        out = np.zeros_like(x, dtype=np.result_type(x, float))
        out[0] = x[0]
        inner = x[1:N - 1].reshape((N - 2) // 2, 2)
        means = inner.mean(axis=1, keepdims=True)
        out[1:N - 1] = np.broadcast_to(means, ((N - 2) // 2, 2)).reshape(N - 2)
        return out

    return OperatorPairOracle(N, apply_P, apply_Q)


@dataclass(frozen=True)
class ApproxDefect:
    n: int
    defect: float

    def __post_init__(self):
        if self.defect < 0:
            raise ValueError("defect must be non-negative")


def _orth(cols: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column span, rank-revealing."""
    if cols.size == 0:
        return np.zeros((cols.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    if s.size == 0:
        return u[:, :0]
    keep = s > max(cols.shape) * np.finfo(float).eps * s[0]
    return u[:, keep]


def approx_from_samples(pair: ProjectionPairDense, samples) -> tuple[ProjectionPairDense, np.ndarray]:
    """Restrict the pair to the subspace generated by a list of sample vectors.

    The subspace is span{v_j} + span{P v_j} + span{Q v_j}; the restricted
    projections are the orthogonal projections onto span{P v_j} and
    span{Q v_j} compressed to it.  By construction the restriction
    reproduces P v_j and Q v_j exactly for every sample.  Returns the
    restricted pair plus the isometric embedding (columns = subspace basis).
    """
    samples = [np.asarray(v, dtype=np.complex128) for v in samples]
    if not samples:
        raise ValueError("need at least one sample vector")
    s_mat = np.column_stack(samples)
    if s_mat.shape[0] != pair.dim:
        raise ValueError("sample length does not match pair dimension")
    p, q = pair.P.entries, pair.Q.entries
    w1 = _orth(p @ s_mat)
    w2 = _orth(q @ s_mat)
    embed = _orth(np.column_stack([s_mat, w1, w2]))
    proj1 = w1 @ w1.conj().T if w1.shape[1] else np.zeros((pair.dim, pair.dim), dtype=np.complex128)
    proj2 = w2 @ w2.conj().T if w2.shape[1] else np.zeros((pair.dim, pair.dim), dtype=np.complex128)
    p_r = embed.conj().T @ proj1 @ embed
    q_r = embed.conj().T @ proj2 @ embed
    restricted = ProjectionPairDense(DenseHermitian(0.5 * (p_r + p_r.conj().T)),
                                     DenseHermitian(0.5 * (q_r + q_r.conj().T)))
    return restricted, embed


def _apply_op(op, x):
    if callable(op):
        return np.asarray(op(x))
    if isinstance(op, SymTridiagonal):
        return apply_tridiag(op, np.asarray(x, dtype=float) if np.isrealobj(x)
                             else np.asarray(x))
    if isinstance(op, DenseHermitian):
        return op.entries @ x
    return np.asarray(op) @ x


def approximation_defect(oracle: OperatorPairOracle, approx, v: np.ndarray) -> ApproxDefect:
    """Worst of the three defects of a finite-dimensional approximation at v.

    `approx` is a triple (embedding columns E, P_n, Q_n) with P_n, Q_n
    acting on subspace coordinates (dense, tridiagonal, or callables).
    Measures max of ||v - E E^H v||, ||P v - E P_n E^H v||,
    ||Q v - E Q_n E^H v||.
    """
    e, p_n, q_n = approx
    e = np.asarray(e)
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != oracle.dim or e.shape[0] != oracle.dim:
        raise ValueError("dimension mismatch between oracle, approximation and vector")
    coords = e.conj().T @ v
    d0 = np.linalg.norm(v - e @ coords)
    d1 = np.linalg.norm(np.asarray(oracle.apply_P(v)) - e @ _apply_op(p_n, coords))
    d2 = np.linalg.norm(np.asarray(oracle.apply_Q(v)) - e @ _apply_op(q_n, coords))
    return ApproxDefect(e.shape[1], float(max(d0, d1, d2)))


_LETTERS = frozenset("PQABI")


def _word_apply(word: str, apply_p, apply_q, x):
    out = x
    for letter in reversed(word):
        if letter == "P":
            out = apply_p(out)
        elif letter == "Q":
            out = apply_q(out)
        elif letter == "A":
            out = 2.0 * np.asarray(apply_p(out)) - out
        elif letter == "B":
            out = 2.0 * np.asarray(apply_q(out)) - out
        elif letter == "I":
            pass
        else:
            raise ValueError(f"unknown letter {letter!r} in word {word!r}")
    return np.asarray(out)


def polynomial_defect(f: dict, oracle: OperatorPairOracle, approx, v: np.ndarray) -> float:
    """Defect of the approximation on a non-commutative polynomial.

    `f` maps words over the alphabet {P, Q, A, B, I} (strings, applied
    right-to-left) to complex coefficients.  Evaluates
    ||f(P,Q) v - E f(P_n,Q_n) E^H v||.
    """
    if not isinstance(f, dict) or not f:
        raise ValueError("polynomial must be a nonempty dict of word -> coefficient")
    for word in f:
        if not isinstance(word, str) or not set(word) <= _LETTERS:
            raise ValueError(f"malformed word {word!r}")
    e, p_n, q_n = approx
    e = np.asarray(e)
    v = np.asarray(v, dtype=np.complex128)
    coords = e.conj().T @ v
    true_val = np.zeros_like(v)
    approx_val = np.zeros_like(coords)
    for word, coeff in f.items():
        true_val = true_val + coeff * _word_apply(word, oracle.apply_P, oracle.apply_Q, v)
        approx_val = approx_val + coeff * _word_apply(
            word, lambda x: _apply_op(p_n, x), lambda x: _apply_op(q_n, x), coords)
    return float(np.linalg.norm(true_val - e @ approx_val))


def _as_pair(block) -> ProjectionPairDense:
    if isinstance(block, ProjectionPairDense):
        return block
    if isinstance(block, AngleSequence):
        eye = np.eye(2 * block.n)
        p = 0.5 * (build_A(block).dense() + eye)
        q = 0.5 * (build_B(block).dense() + eye)
        return ProjectionPairDense(DenseHermitian(p), DenseHermitian(q))
    if isinstance(block, (int, float)):
        return halmos_pair(float(block))
    raise ValueError(f"unsupported block specification: {block!r}")


def direct_sum_pair(blocks) -> ProjectionPairDense:
    """Block-diagonal assembly of projection pairs.

    Accepts ProjectionPairDense instances, AngleSequence values (expanded
    through the tridiagonal builders) and bare x parameters in (0,1)
    (expanded to the canonical 2-D block).
    """
    pairs = [_as_pair(b) for b in blocks]
    if not pairs:
        raise ValueError("need at least one block")
    total = sum(p.dim for p in pairs)
    pm = np.zeros((total, total), dtype=np.complex128)
    qm = np.zeros((total, total), dtype=np.complex128)
    at = 0
    for p in pairs:
        pm[at:at + p.dim, at:at + p.dim] = p.P.entries
        qm[at:at + p.dim, at:at + p.dim] = p.Q.entries
        at += p.dim
    return ProjectionPairDense(DenseHermitian(pm), DenseHermitian(qm))


def tensor_pair(pair_a: ProjectionPairDense, pair_b: ProjectionPairDense) -> OperatorPairOracle:
    """The pair (P_A (x) I, I (x) Q_B) on the tensor space, matrix-free."""
    pa = pair_a.P.entries
    qb = pair_b.Q.entries
    da, db = pair_a.dim, pair_b.dim
    ident = lambda x: x

    def apply_p(v):
        return kron_apply([pa, (db, ident)], v)

    def apply_q(v):
        return kron_apply([(da, ident), qb], v)

    return OperatorPairOracle(da * db, apply_p, apply_q)
