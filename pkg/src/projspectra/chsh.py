"""Bell-CHSH operators on bipartite tensor spaces.

The operator is B = (A1 + A2) (x) B1 + (A1 - A2) (x) B2 with involutions
A_i = 2 P_{1,i} - I on the first factor and B_i = 2 P_{2,i} - I on the
second.  Its spectral radius satisfies the identity
rho(B) = sqrt(4 + rho([A1, A2]) rho([B1, B2])), and is therefore capped by
2*sqrt(2) for every choice of projections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densela import NormEstimate, kron_apply, random_projection, spectral_norm
from .jordan import ProjectionPairDense, commutator_radius_exact, halmos_pair
from .spectral import BoundReport, _liminf_window

TSIRELSON = 2.0 * np.sqrt(2.0)
DEFAULT_DIM_CAP = 4096


@dataclass(frozen=True)
class BipartitePair:
    """A projection pair per tensor factor."""

    side1: ProjectionPairDense
    side2: ProjectionPairDense


@dataclass(frozen=True)
class CHSHReport:
    rho_direct: float | None
    rho_ktl: float
    lower: float
    upper: float
    tsirelson_ok: bool

    def __post_init__(self):
        if self.rho_ktl > TSIRELSON + 1e-9:
            raise ValueError(f"rho_ktl {self.rho_ktl} exceeds the 2*sqrt(2) cap")
        if not self.lower <= self.rho_ktl <= self.upper + 1e-9:
            raise ValueError(
                f"ordering violated: lower={self.lower}, rho_ktl={self.rho_ktl}, "
                f"upper={self.upper}")


def bell_operator_apply(pairs: BipartitePair):
    """Matrix-free application of the Bell-CHSH operator on the tensor space."""
    d1, d2 = pairs.side1.dim, pairs.side2.dim
    a1 = 2.0 * pairs.side1.P.entries - np.eye(d1)
    a2 = 2.0 * pairs.side1.Q.entries - np.eye(d1)
    b1 = 2.0 * pairs.side2.P.entries - np.eye(d2)
    b2 = 2.0 * pairs.side2.Q.entries - np.eye(d2)
    plus = a1 + a2
    minus = a1 - a2

    def apply(v):
        return kron_apply([plus, b1], v) + kron_apply([minus, b2], v)

    return apply


def chsh_radius_direct(pairs: BipartitePair, dim_cap: int = DEFAULT_DIM_CAP,
                       seed: int = 0) -> NormEstimate:
    """Spectral radius of the Bell-CHSH operator by matrix-free norm
    estimation on the tensor space."""
    total = pairs.side1.dim * pairs.side2.dim
    if total > dim_cap:
        raise ValueError(f"tensor dimension {total} exceeds the cap {dim_cap}")
    return spectral_norm(bell_operator_apply(pairs), total, seed=seed)


def chsh_radius_ktl(rho1: float, rho2: float) -> float:
    """sqrt(4 + rho1 * rho2) from the two commutator radii."""
    for r in (rho1, rho2):
        if not -1e-9 <= r <= 2.0 + 1e-9:
            raise ValueError(f"commutator radius {r} outside [0, 2]")
    rho1 = min(max(rho1, 0.0), 2.0)
    rho2 = min(max(rho2, 0.0), 2.0)
    return float(np.sqrt(4.0 + rho1 * rho2))


def chsh_bounds(report1: BoundReport, report2: BoundReport) -> CHSHReport:
    """Sandwich for rho(B) out of the two per-side commutator sandwiches.

    lower = sqrt(4 + lower1*lower2); upper = trailing-window minimum of
    sqrt(4 + b1_n * b2_n) over the common truncation schedule.  rho_ktl
    applies the radius identity to the certified side lower bounds, which
    keeps lower <= rho_ktl <= upper structurally; with exact side radii in
    hand, call chsh_radius_ktl on them directly instead.
    """
    common = sorted(set(report1.n_schedule) & set(report2.n_schedule))
    if not common:
        raise ValueError("reports share no truncation sizes")
    idx1 = [report1.n_schedule.index(n) for n in common]
    idx2 = [report2.n_schedule.index(n) for n in common]
    b_prod = [np.sqrt(4.0 + report1.b_trace[i] * report2.b_trace[j])
              for i, j in zip(idx1, idx2)]
    w = _liminf_window(len(b_prod))
    upper = float(min(b_prod[-w:]))
    lower = chsh_radius_ktl(report1.lower, report2.lower)
    rho = lower
    return CHSHReport(None, rho, lower, min(upper, TSIRELSON),
                      rho <= TSIRELSON + 1e-9)


def chsh_report_json(report: CHSHReport, seed: int | None = None) -> dict:
    out = {
        "rho_direct": report.rho_direct,
        "rho_ktl": report.rho_ktl,
        "lower": report.lower,
        "upper": report.upper,
        "tsirelson_ok": report.tsirelson_ok,
    }
    if seed is not None:
        out["seed"] = seed
    return out


@dataclass(frozen=True)
class SweepSummary:
    count: int
    max_rho: float
    max_deviation: float
    violations: tuple
    ok: bool


def random_bipartite(dims: tuple[int, int], seed: int) -> BipartitePair:
    """Seeded random instance; ranks drawn uniformly in [0, dim]."""
    rng = np.random.Generator(np.random.PCG64(seed))
    sides = []
    for d in dims:
        ranks = rng.integers(0, d + 1, size=2)
        sub = rng.integers(0, 2 ** 31, size=2)
        sides.append(ProjectionPairDense(random_projection(d, int(ranks[0]), int(sub[0])),
                                         random_projection(d, int(ranks[1]), int(sub[1]))))
    return BipartitePair(sides[0], sides[1])


def tsirelson_sweep(count: int, dim_range: tuple[int, int] = (8, 8),
                    seed: int = 0, dim_cap: int = DEFAULT_DIM_CAP) -> SweepSummary:
    """Random-instance check of the 2*sqrt(2) cap and the radius identity.

    For each instance the direct tensor-space radius and the identity value
    from the per-side exact commutator radii must agree within 1e-8 and both
    stay at or below 2*sqrt(2) + 1e-8.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    max_rho = 0.0
    max_dev = 0.0
    violations = []
    for _ in range(count):
        inst_seed = int(rng.integers(0, 2 ** 31))
        dims = (int(rng.integers(1, dim_range[0] + 1)),
                int(rng.integers(1, dim_range[1] + 1)))
        pairs = random_bipartite(dims, inst_seed)
        rho1 = commutator_radius_exact(pairs.side1)
        rho2 = commutator_radius_exact(pairs.side2)
        ktl = chsh_radius_ktl(rho1, rho2)
        direct = float(chsh_radius_direct(pairs, dim_cap=dim_cap, seed=inst_seed))
        dev = abs(direct - ktl)
        max_rho = max(max_rho, direct, ktl)
        max_dev = max(max_dev, dev)
        if dev > 1e-8 or direct > TSIRELSON + 1e-8 or ktl > TSIRELSON + 1e-8:
            violations.append(inst_seed)
    return SweepSummary(count, max_rho, max_dev, tuple(violations), not violations)


def planted_maximal_pair() -> BipartitePair:
    """Both sides the canonical half-angle block: rho(B) = 2*sqrt(2)."""
    return BipartitePair(halmos_pair(0.5), halmos_pair(0.5))
