"""Spectral-radius estimates for the commutator of two projections.

Everything revolves around the bound function b(lam) = 2*sqrt(1 -
(lam^2/2 - 1)^2) evaluated on eigenvalues of the involution sum A + B:
the commutator spectral radius is sandwiched between the sup of b over
detected two-sided spectrum candidates and the liminf of b along selected
eigenvalues of the truncated sums.  For constant-angle sequences the
eigenvalues have a closed characteristic equation in the phase phi with
lam = 2 sin(theta) cos(phi), which this module solves and exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tridiag import AngleSequence, apply_tridiag, build_A, build_B, build_sum, eigen_tridiag

LAMBDA_CLAMP = 1e-9


def b_func(lam: float) -> float:
    """The commutator bound 2*sqrt(1 - (lam^2/2 - 1)^2) on [-2, 2]."""
    lam = np.asarray(lam, dtype=float)
    if np.any(np.abs(lam) > 2.0 + LAMBDA_CLAMP):
        raise ValueError("argument outside [-2, 2]")
    lam = np.clip(lam, -2.0, 2.0)
    inner = lam * lam / 2.0 - 1.0
    val = 2.0 * np.sqrt(np.maximum(1.0 - inner * inner, 0.0))
    return float(val) if val.ndim == 0 else val


def select_lambda(spectrum: np.ndarray, criterion: str = "b_max") -> float:
    """Pick the eigenvalue whose b value the estimates are built on.

    "b_max" minimizes |lam^2 - 2| (equivalently maximizes b); the
    "literal_distance" alternative minimizes ||lam| - sqrt(2)|.  The two can
    disagree (e.g. spectrum {1.0, 1.8}).  Ties break toward positive lam,
    then toward the smaller index.
    """
    spectrum = np.atleast_1d(np.asarray(spectrum, dtype=float))
    if spectrum.size == 0:
        raise ValueError("empty spectrum")
    if np.abs(spectrum).max() > 2.0 + LAMBDA_CLAMP:
        raise ValueError("spectrum outside [-2, 2]")
    if criterion == "b_max":
        key = np.abs(spectrum * spectrum - 2.0)
    elif criterion == "literal_distance":
        key = np.abs(np.abs(spectrum) - np.sqrt(2.0))
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    best = key.min()
    tied = np.nonzero(key == best)[0]
    positive = tied[spectrum[tied] > 0]
    pick = positive[0] if positive.size else tied[0]
    return float(spectrum[pick])


@dataclass(frozen=True)
class ConstantAngleModel:
    """Constant angle sequence theta_i = omega_i = theta."""

    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < np.pi:
            raise ValueError(f"theta must lie in (0, pi), got {self.theta}")

    def angles(self, n: int) -> AngleSequence:
        return AngleSequence.constant(self.theta, n)


def _angles_for(model, n: int) -> AngleSequence:
    if isinstance(model, ConstantAngleModel):
        return model.angles(n)
    if callable(model):
        return model(n)
    raise ValueError("model must be a ConstantAngleModel or a callable n -> AngleSequence")


@dataclass(frozen=True)
class CharRoots:
    """Roots of the constant-angle characteristic equation at truncation n.

    `phi` holds the real phases; `hyper_y` the rate of the hyperbolic pair
    phi = i y / pi + i y (present for angles below pi/2, eigenvalues
    +-2 sin(theta) cosh(y) just outside the oscillatory band).  `lambdas`
    collects the eigenvalues of both branches, ascending.
    """

    phi: np.ndarray          # ascending real roots in (0, pi)
    hyper_y: tuple           # () or (y,) for the hyperbolic branch
    lambdas: np.ndarray      # ascending eigenvalues of both branches
    interval_counts: np.ndarray  # roots attributed to interval I_k, k = 0..2n
    warnings: tuple


def _char_value(theta: float, n: int, phi):
    s2 = np.sin(theta) ** 2
    c2 = (1.0 + np.cos(theta)) ** 2
    return s2 * np.sin((2 * n + 1) * phi) - c2 * np.sin((2 * n - 1) * phi)


def _bisect_root(f, a: float, b: float, fa: float, fb: float) -> float:
    for _ in range(100):
        mid = 0.5 * (a + b)
        if b - a < 1e-15 * max(1.0, abs(mid)):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fa < 0) != (fm < 0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def constant_angle_char_roots(theta: float, n: int, subgrid: int = 64) -> CharRoots:
    """All characteristic phases phi in (0, pi) for the dim-2n sum matrix.

    Scans each of the 2n+1 intervals ((k pi)/(2n+1), ((k+1) pi)/(2n+1)) with
    a sign-change subgrid and bisects every change.  Expected counts (one
    per interior interval, none in the middle one, up to three at the two
    edges, 2n in total) are validated; mismatches are reported as warnings
    rather than errors since they do occur at small n.
    """
    if not 0.0 < theta < np.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")
    if n < 1:
        raise ValueError("n must be >= 1")
    f = lambda phi: _char_value(theta, n, phi)
    m = 2 * n + 1
    roots = []
    counts = np.zeros(2 * n + 1, dtype=int)
    for k in range(2 * n + 1):
        a = k * np.pi / m + 1e-12
        b = (k + 1) * np.pi / m - 1e-12
        grid = np.linspace(a, b, subgrid)
        vals = _char_value(theta, n, grid)
        signs = np.sign(vals)
        for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
            roots.append(_bisect_root(f, grid[i], grid[i + 1], vals[i], vals[i + 1]))
            counts[k] += 1
        counts[k] += int(np.count_nonzero(vals == 0.0))

    # hyperbolic branch phi = i y: present when the boundary weight
    # (1+cos)^2/sin^2 exceeds (2n+1)/(2n-1); eigenvalues +-2 sin(theta) cosh(y)
    hyper_y = ()
    s2 = np.sin(theta) ** 2
    c2 = (1.0 + np.cos(theta)) ** 2
    ratio = c2 / s2
    threshold = (2 * n + 1) / (2 * n - 1)
    if abs(ratio - threshold) <= 1e-12 * threshold:
        # boundary weight exactly at threshold: double root at phi in {0, pi},
        # eigenvalues +-2 sin(theta)
        hyper_y = (0.0,)
        counts[0] += 1
        counts[2 * n] += 1
    elif ratio > threshold:
        def log_sinh(x):
            # log(sinh(x)) without overflow for large arguments
            return x - np.log(2.0) + np.log1p(-np.exp(-2.0 * x))

        # same sign as s2*sinh((2n+1)y) - c2*sinh((2n-1)y), computed in logs
        h = lambda y: np.log(s2) + log_sinh((2 * n + 1) * y) \
            - np.log(c2) - log_sinh((2 * n - 1) * y)
        y_hi = 1.0
        while h(y_hi) <= 0.0:
            y_hi *= 2.0
        y_lo = 1e-14
        hy = _bisect_root(h, y_lo, y_hi, h(y_lo), h(y_hi))
        hyper_y = (hy,)
        counts[0] += 1
        counts[2 * n] += 1

    warnings = []
    for k in range(1, 2 * n):
        if k == n:
            if counts[k] != 0:
                warnings.append(f"middle interval k={n} holds {counts[k]} roots, expected 0")
        elif counts[k] != 1:
            warnings.append(f"interior interval k={k} holds {counts[k]} roots, expected 1")
    for k in (0, 2 * n):
        if counts[k] > 3:
            warnings.append(f"edge interval k={k} holds {counts[k]} roots, expected at most 3")
    total = len(roots) + 2 * len(hyper_y)
    if total != 2 * n:
        warnings.append(f"found {total} roots in total, expected {2 * n}")
    phi = np.asarray(sorted(roots))
    lambdas = 2.0 * np.sin(theta) * np.cos(phi)
    if hyper_y:
        edge = 2.0 * np.sin(theta) * np.cosh(hyper_y[0])
        lambdas = np.concatenate([lambdas, [edge, -edge]])
    return CharRoots(phi, hyper_y, np.sort(lambdas), counts, tuple(warnings))


def constant_angle_eigvec(theta: float, n: int, phi_root: float) -> np.ndarray:
    """Normalized closed-form eigenvector for a characteristic phase."""
    if abs(np.sin(phi_root)) < 1e-8:
        raise ValueError("phi too close to a multiple of pi")
    j = np.arange(1, 2 * n + 1)
    u = np.sin(theta) * np.sin(j * phi_root) \
        - (1.0 + np.cos(theta)) * np.sin((j - 1) * phi_root)
    return u / np.linalg.norm(u)


def constant_angle_tail(theta: float, n: int, phi_root: float) -> float:
    """Last-coordinate magnitude |u_{2n}| of the normalized eigenvector."""
    return float(abs(constant_angle_eigvec(theta, n, phi_root)[-1]))


def f2n_symmetry_check(n: int, phi: float) -> float:
    """Symmetry residual of f_{2n}(phi) = sin((2n-1)phi)/sin((2n+1)phi)
    under phi -> pi - phi and phi -> pi + phi."""
    points = np.asarray([phi, np.pi - phi, np.pi + phi])
    denom = np.sin((2 * n + 1) * points)
    if np.abs(denom).min() < 1e-8:
        raise ValueError("phi too close to a pole of f")
    vals = np.sin((2 * n - 1) * points) / denom
    return float(max(abs(vals[0] - vals[1]), abs(vals[0] - vals[2])))


@dataclass(frozen=True)
class CandidateSpectrumPoint:
    """A value lam whose pair (-lam, lam) persists in the truncated spectra
    with vanishing projection defects."""

    lambda_: float
    witness_n: tuple
    eta_sequence: tuple     # matched positive eigenvalues per truncation
    defect_sequence: tuple  # paired eigenvector defects per truncation

    def __post_init__(self):
        if not 0.0 < self.lambda_ < 2.0:
            raise ValueError("candidate lambda must lie in (0, 2)")
        if any(d < 0 for d in self.defect_sequence):
            raise ValueError("defects must be non-negative")


def _truncation_data(model, n: int, witness_factor: int):
    """Eigen data plus per-eigenvector projection defects at truncation n.

    The defect of an eigenvector v of the dim-2n sum compares P, Q of a
    witness_factor-times larger truncation (a faithful stand-in for the
    untruncated operators on vectors supported well inside it) with the
    dim-2n projections on the zero-padded v.
    """
    ang = _angles_for(model, n)
    spec = eigen_tridiag(build_sum(ang), want_vectors=True)
    big = _angles_for(model, witness_factor * n)
    vecs = spec.eigenvectors
    padded = np.zeros((2 * witness_factor * n, vecs.shape[1]))
    padded[:2 * n] = vecs
    defects = np.zeros(vecs.shape[1])
    for small, large in ((build_A(ang), build_A(big)), (build_B(ang), build_B(big))):
        inner = np.zeros_like(padded)
        inner[:2 * n] = apply_tridiag(small, vecs)
        diff = apply_tridiag(large, padded) - inner
        # P = (A + I)/2, so projection defects are half the involution ones
        defects = np.maximum(defects, 0.5 * np.linalg.norm(diff, axis=0))
    return spec.eigenvalues, defects


def _paired_positives(evs: np.ndarray, defects: np.ndarray, pairing_tol: float):
    """Positive eigenvalues eta whose partner -eta is present, with the
    worse of the two eigenvector defects."""
    etas = []
    pair_defects = []
    for i in np.nonzero(evs > 0)[0]:
        j = np.searchsorted(evs, -evs[i])
        best = None
        for jj in (j - 1, j):
            if 0 <= jj < evs.size:
                gap = abs(evs[jj] + evs[i])
                if best is None or gap < best[0]:
                    best = (gap, jj)
        if best is not None and best[0] <= pairing_tol:
            etas.append(evs[i])
            pair_defects.append(max(defects[i], defects[best[1]]))
    return np.asarray(etas), np.asarray(pair_defects)


def detect_candidates(model, n_schedule, pairing_tol: float = 1e-8,
                      witness_N_factor: int = 4,
                      defect_accept: float = 1e-2) -> list[CandidateSpectrumPoint]:
    """Two-sided spectrum candidates of the untruncated sum operator.

    For each truncation size the spectrum is paired (-eta, eta) and each
    pair's eigenvectors receive a projection defect against a larger
    witness truncation.  Values present at the largest size are accepted as
    candidates when their matched defects are non-increasing over the last
    three schedule points and end below defect_accept.  This is a finite,
    monotone-tail proxy for a limit statement, so it is heuristic evidence,
    not a certificate.
    """
    n_schedule = [int(n) for n in n_schedule]
    if not n_schedule or any(b <= a for a, b in zip(n_schedule, n_schedule[1:])):
        raise ValueError("n_schedule must be nonempty and strictly increasing")
    per_n = []
    for n in n_schedule:
        evs, defects = _truncation_data(model, n, witness_N_factor)
        per_n.append(_paired_positives(evs, defects, pairing_tol))

    anchors, _ = per_n[-1]
    window = min(3, len(n_schedule))
    candidates = []
    for anchor in anchors:
        etas = []
        defs = []
        usable = True
        for eta_n, def_n in per_n:
            if eta_n.size == 0:
                usable = False
                break
            j = np.clip(np.searchsorted(eta_n, anchor), 0, eta_n.size - 1)
            if j > 0 and abs(eta_n[j - 1] - anchor) < abs(eta_n[j] - anchor):
                j -= 1
            etas.append(float(eta_n[j]))
            defs.append(float(def_n[j]))
        if not usable or not 0.0 < anchor < 2.0:
            continue
        tail = defs[-window:]
        monotone = all(b <= a * (1.0 + 1e-9) + 1e-12 for a, b in zip(tail, tail[1:]))
        if monotone and tail[-1] < defect_accept:
            candidates.append(CandidateSpectrumPoint(
                float(anchor), tuple(n_schedule), tuple(etas), tuple(defs)))
    return candidates


def lower_bound(candidates) -> float:
    """Sup of b over accepted candidates (0 when there are none)."""
    best = 0.0
    for c in candidates:
        best = max(best, b_func(c.lambda_))
    return best


def _liminf_window(length: int) -> int:
    return max(3, math.ceil(length / 3))


@dataclass(frozen=True)
class UpperEstimate:
    upper: float
    lambda_trace: tuple
    b_trace: tuple


def upper_bound(model, n_schedule, criterion: str = "b_max") -> UpperEstimate:
    """Liminf-style estimate of b along the selected truncated eigenvalues.

    Evaluates b(lambda_n) per schedule entry and takes the minimum over the
    trailing window (a conservative finite stand-in for the liminf).
    """
    n_schedule = [int(n) for n in n_schedule]
    if not n_schedule or any(b <= a for a, b in zip(n_schedule, n_schedule[1:])):
        raise ValueError("n_schedule must be nonempty and strictly increasing")
    lambdas = []
    bs = []
    for n in n_schedule:
        evs = eigen_tridiag(build_sum(_angles_for(model, n))).eigenvalues
        lam = select_lambda(evs, criterion)
        lambdas.append(lam)
        bs.append(b_func(lam))
    w = _liminf_window(len(bs))
    return UpperEstimate(float(min(bs[-w:])), tuple(lambdas), tuple(bs))


def constant_angle_exact_radius(theta: float) -> float:
    """Closed-form commutator radius for the constant-angle pair."""
    if not 0.0 < theta < np.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")
    if abs(theta - np.pi / 2) > np.pi / 4:
        return 2.0 * abs(np.sin(2.0 * theta))
    return 2.0


def f_set_case1(block_spectra_list) -> np.ndarray:
    """Two-sided spectrum set of a finite direct sum of blocks.

    Input: per-block spectra of (P+Q) restricted to the block minus the
    identity.  Output: {2 mu} intersected with (0, 2), deduplicated.
    """
    values = []
    for spectrum in block_spectra_list:
        for mu in np.atleast_1d(np.asarray(spectrum, dtype=float)):
            lam = 2.0 * mu
            if 0.0 < lam < 2.0:
                values.append(lam)
    values.sort()
    out = []
    for v in values:
        if not out or v - out[-1] > 1e-12:
            out.append(v)
    return np.asarray(out)


@dataclass(frozen=True)
class BoundReport:
    """Sandwich estimate of the commutator spectral radius."""

    lower: float
    upper: float
    lambda_n_trace: tuple
    b_trace: tuple
    candidate_set: tuple
    n_schedule: tuple
    theta: float | None = None
    exact: float | None = None

    def __post_init__(self):
        if not (-1e-9 <= self.lower <= self.upper + 1e-9
                and self.upper <= 2.0 + 1e-9):
            raise ValueError(
                f"bound ordering violated: lower={self.lower}, upper={self.upper}")


def bound_report(model, n_schedule, criterion: str = "b_max",
                 pairing_tol: float = 1e-8, witness_N_factor: int = 4,
                 defect_accept: float = 1e-2,
                 with_candidates: bool = True) -> BoundReport:
    """Full lower/upper sandwich for a (constant or callable) angle model.

    One eigensolve per schedule entry feeds both sides.  The reported lower
    bound evaluates each candidate's b on its matched eigenvalue at every
    trailing-window truncation and takes the worst, which keeps it at or
    below the reported upper bound by construction.
    """
    n_schedule = [int(n) for n in n_schedule]
    if not n_schedule or any(b <= a for a, b in zip(n_schedule, n_schedule[1:])):
        raise ValueError("n_schedule must be nonempty and strictly increasing")
    per_n = []
    lambdas = []
    bs = []
    for n in n_schedule:
        if with_candidates:
            evs, defects = _truncation_data(model, n, witness_N_factor)
            per_n.append(_paired_positives(evs, defects, pairing_tol))
        else:
            evs = eigen_tridiag(build_sum(_angles_for(model, n))).eigenvalues
        lam = select_lambda(evs, criterion)
        lambdas.append(lam)
        bs.append(b_func(lam))
    w = _liminf_window(len(bs))
    upper = float(min(bs[-w:]))

    candidates = []
    lower = 0.0
    if with_candidates:
        anchors, _ = per_n[-1]
        accept_window = min(3, len(n_schedule))
        for anchor in anchors:
            etas = []
            defs = []
            usable = True
            for eta_n, def_n in per_n:
                if eta_n.size == 0:
                    usable = False
                    break
                j = np.clip(np.searchsorted(eta_n, anchor), 0, eta_n.size - 1)
                if j > 0 and abs(eta_n[j - 1] - anchor) < abs(eta_n[j] - anchor):
                    j -= 1
                etas.append(float(eta_n[j]))
                defs.append(float(def_n[j]))
            if not usable or not 0.0 < anchor < 2.0:
                continue
            tail = defs[-accept_window:]
            monotone = all(b2 <= a2 * (1.0 + 1e-9) + 1e-12
                           for a2, b2 in zip(tail, tail[1:]))
            if monotone and tail[-1] < defect_accept:
                cand = CandidateSpectrumPoint(float(anchor), tuple(n_schedule),
                                              tuple(etas), tuple(defs))
                candidates.append(cand)
                lower = max(lower, min(b_func(e) for e in etas[-w:]))

    exact = None
    theta = None
    if isinstance(model, ConstantAngleModel):
        theta = model.theta
        exact = constant_angle_exact_radius(theta)
    return BoundReport(lower, upper, tuple(lambdas), tuple(bs),
                       tuple(candidates), tuple(n_schedule), theta, exact)


def report_json(report: BoundReport) -> dict:
    """Plain-dict form of a BoundReport with a stable key order."""
    out = {
        "theta": report.theta,
        "schedule": list(report.n_schedule),
        "lambda_n": list(report.lambda_n_trace),
        "b_lambda_n": list(report.b_trace),
        "upper": report.upper,
        "candidates": [{"lambda": c.lambda_, "defects": list(c.defect_sequence)}
                       for c in report.candidate_set],
        "lower": report.lower,
    }
    if report.exact is not None:
        out["exact"] = report.exact
    return out
