"""Command-line front end.

Subcommands: spectrum | radius | extract | chsh | sweep | verify.
Reports are JSON objects with a fixed key order or CSV with dot decimals
and LF line endings, so identical configurations produce byte-identical
files.  Exit codes: 0 ok, 2 config parse error, 3 precondition violation,
4 resource cap exceeded, 5 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .chsh import (DEFAULT_DIM_CAP, TSIRELSON, BipartitePair, chsh_bounds,
                   chsh_radius_direct, chsh_radius_ktl, chsh_report_json,
                   planted_maximal_pair, tsirelson_sweep)
from .densela import DenseHermitian, jacobi_eigen
from .jordan import (ProjectionPairDense, commutator_radius_exact,
                     decomposition_json, halmos_pair, jordan_decompose)
from .oneshift import OperatorPairOracle, extract_one_shifted, shift_pair_oracle
from .spectral import (ConstantAngleModel, b_func, bound_report,
                       constant_angle_char_roots, constant_angle_exact_radius,
                       report_json, select_lambda)
from .tridiag import AngleSequence, build_sum, eigen_tridiag

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_RESOURCE = 4
EXIT_INTERNAL = 5


class ConfigError(Exception):
    pass


class PreconditionError(Exception):
    pass


class ResourceCapError(Exception):
    pass


def _parse_schedule(text: str) -> list[int]:
    """Comma-separated sizes, or "a..b" for doubling steps from a up to b."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if lo < 1 or hi < lo:
                raise ValueError
            out = []
            n = lo
            while n < hi:
                out.append(n)
                n *= 2
            out.append(hi)
            return sorted(set(out))
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse schedule {text!r}") from exc
    if not out or any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigError(f"schedule must be strictly increasing: {text!r}")
    if out[0] < 1:
        raise ConfigError(f"schedule sizes must be positive: {text!r}")
    return out


def _load_config_file(path: str) -> dict:
    """Simple key=value lines; '#' starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, value = line.split("=", 1)
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _angle(value: float, degrees: bool) -> float:
    theta = float(value) * (np.pi / 180.0 if degrees else 1.0)
    if not 0.0 < theta < np.pi:
        raise ConfigError(f"angle {value} not in (0, pi) after conversion")
    return theta


def _load_angles_file(path: str) -> AngleSequence:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        return AngleSequence(np.asarray(data["theta"], dtype=float),
                             np.asarray(data.get("omega", []), dtype=float))
    except OSError as exc:
        raise ConfigError(f"cannot read angle file {path}: {exc}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed angle file {path}: {exc}") from exc


def _load_pair_file(path: str) -> ProjectionPairDense:
    """Dense pair file: JSON {"P": [[re or [re,im], ...]], "Q": ...}."""
    def to_matrix(rows):
        out = np.asarray([[complex(c[0], c[1]) if isinstance(c, list) else complex(c)
                           for c in row] for row in rows])
        return out

    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        p = to_matrix(data["P"])
        q = to_matrix(data["Q"])
    except OSError as exc:
        raise ConfigError(f"cannot read pair file {path}: {exc}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"malformed pair file {path}: {exc}") from exc
    try:
        return ProjectionPairDense(DenseHermitian(p), DenseHermitian(q))
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _json_dump(obj) -> str:
    def default(o):
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, (np.floating, np.ndarray)):
            return float(o) if np.ndim(o) == 0 else [float(x) for x in o]
        raise TypeError(f"not JSON serializable: {type(o)}")

    return json.dumps(obj, indent=2, default=default) + "\n"


def cmd_spectrum(args) -> int:
    if args.angles:
        ang = _load_angles_file(args.angles)
    elif args.theta is not None:
        if args.n is None:
            raise ConfigError("--theta requires --n")
        ang = AngleSequence.constant(_angle(args.theta, args.degrees), args.n)
    else:
        raise ConfigError("need --theta/--n or --angles")
    spec = eigen_tridiag(build_sum(ang))
    evs = [float(v) for v in spec.eigenvalues]
    if args.format == "csv":
        lines = ["eigenvalue"] + [repr(v) for v in evs]
        _write_text(args.out, "\n".join(lines) + "\n")
    else:
        _write_text(args.out, _json_dump({"n": ang.n, "eigenvalues": evs}))
    return EXIT_OK


def cmd_radius(args) -> int:
    schedule = _parse_schedule(args.schedule)
    if args.pair:
        pair = _load_pair_file(args.pair)
        decomp = jordan_decompose(pair)
        payload = decomposition_json(decomp)
        payload["exact"] = commutator_radius_exact(pair)
        _write_text(args.out, _json_dump(payload))
        return EXIT_OK
    if args.constant_theta is None:
        raise ConfigError("need --constant-theta or --pair")
    theta = _angle(args.constant_theta, args.degrees)
    report = bound_report(ConstantAngleModel(theta), schedule,
                          criterion=args.criterion,
                          defect_accept=args.defect_accept)
    _write_text(args.out, _json_dump(report_json(report)))
    return EXIT_OK


def cmd_extract(args) -> int:
    if args.example == "shift":
        oracle = shift_pair_oracle(args.N)
    elif args.pair:
        oracle = OperatorPairOracle.from_dense(_load_pair_file(args.pair))
    else:
        raise ConfigError("need --example shift or --pair")
    u0 = np.zeros(oracle.dim, dtype=np.complex128)
    u0[args.start_index] = 1.0
    try:
        result = extract_one_shifted(oracle, u0, args.steps)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    payload = {
        "theta": [float(t) for t in result.angles.theta] if result.angles else [],
        "omega": [float(w) for w in result.angles.omega] if result.angles else [],
        "terminated": result.terminated,
        "breakdown_step": result.breakdown_step,
        "residuals": [float(r) for r in result.residuals],
    }
    _write_text(args.out, _json_dump(payload))
    return EXIT_OK


def cmd_chsh(args) -> int:
    if args.sweep_count:
        summary = tsirelson_sweep(args.sweep_count, (args.dim1, args.dim2),
                                  seed=args.seed, dim_cap=args.dim_cap)
        payload = {
            "count": summary.count,
            "max_rho": summary.max_rho,
            "max_deviation": summary.max_deviation,
            "violations": list(summary.violations),
            "ok": summary.ok,
        }
        _write_text(args.out, _json_dump(payload))
        return EXIT_OK if summary.ok else EXIT_INTERNAL

    if args.side1_theta is not None and args.side2_theta is not None:
        schedule = _parse_schedule(args.schedule)
        r1 = bound_report(ConstantAngleModel(_angle(args.side1_theta, args.degrees)),
                          schedule, defect_accept=args.defect_accept)
        r2 = bound_report(ConstantAngleModel(_angle(args.side2_theta, args.degrees)),
                          schedule, defect_accept=args.defect_accept)
        report = chsh_bounds(r1, r2)
        _write_text(args.out, _json_dump(chsh_report_json(report)))
        return EXIT_OK

    if args.side1_x is not None and args.side2_x is not None:
        pairs = BipartitePair(halmos_pair(args.side1_x), halmos_pair(args.side2_x))
    elif args.pair1 and args.pair2:
        pairs = BipartitePair(_load_pair_file(args.pair1), _load_pair_file(args.pair2))
    else:
        raise ConfigError("need side specs: --side1-x/--side2-x, --side1-theta/"
                          "--side2-theta, --pair1/--pair2, or --sweep-count")
    rho1 = commutator_radius_exact(pairs.side1)
    rho2 = commutator_radius_exact(pairs.side2)
    ktl = chsh_radius_ktl(rho1, rho2)
    total = pairs.side1.dim * pairs.side2.dim
    direct = None
    if total <= args.dim_cap:
        direct = float(chsh_radius_direct(pairs, dim_cap=args.dim_cap, seed=args.seed))
    elif not args.ktl_only:
        raise ResourceCapError(
            f"tensor dimension {total} exceeds cap {args.dim_cap}; pass --ktl-only")
    payload = {
        "rho_direct": direct,
        "rho_ktl": ktl,
        "lower": ktl,
        "upper": ktl,
        "tsirelson_ok": ktl <= TSIRELSON + 1e-9,
    }
    _write_text(args.out, _json_dump(payload))
    return EXIT_OK


def cmd_sweep(args) -> int:
    schedule = _parse_schedule(args.schedule)
    if args.theta_list:
        try:
            thetas = [_angle(float(t), args.degrees)
                      for t in args.theta_list.split(",") if t.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse theta list {args.theta_list!r}") from exc
    else:
        grid = args.theta_grid
        if grid < 0:
            raise ConfigError("theta grid size must be non-negative")
        thetas = [float(t) for t in np.linspace(0, np.pi, grid + 2)[1:-1]]
    rows = ["theta,lower,upper,exact,abs_gap"]
    for theta in thetas:
        report = bound_report(ConstantAngleModel(theta), schedule,
                              defect_accept=args.defect_accept)
        exact = constant_angle_exact_radius(theta)
        gap = max(abs(report.upper - exact), abs(report.lower - exact))
        rows.append(",".join(repr(v) for v in
                             (theta, report.lower, report.upper, exact, gap)))
    _write_text(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    """Quick self-checks of the core identities and solver agreement."""
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    evs = eigen_tridiag(build_sum(AngleSequence.constant(np.pi / 2, 2))).eigenvalues
    target = np.sort(2.0 * np.cos((2 * np.arange(1, 5) - 1) / 8.0 * np.pi))
    check("half-angle 4x4 closed-form spectrum", np.abs(evs - target).max() < 1e-12)

    xs = np.linspace(0.01, 0.99, 99)
    check("b identity on 2-D blocks",
          max(abs(b_func(2 * np.sqrt(x)) - 4 * np.sqrt(x * (1 - x))) for x in xs) < 1e-13)

    rng = np.random.Generator(np.random.PCG64(0))
    ang = AngleSequence(rng.uniform(0.2, np.pi - 0.2, 25),
                        rng.uniform(0.2, np.pi - 0.2, 24))
    t = build_sum(ang)
    dev = np.abs(eigen_tridiag(t).eigenvalues
                 - jacobi_eigen(DenseHermitian(t.dense())).eigenvalues).max()
    check("tridiagonal vs dense eigensolver agreement", dev < 1e-10)

    cr = constant_angle_char_roots(np.pi / 3, 10)
    evs = eigen_tridiag(build_sum(AngleSequence.constant(np.pi / 3, 10))).eigenvalues
    check("characteristic roots match the eigensolver",
          cr.lambdas.size == evs.size and np.abs(cr.lambdas - evs).max() < 1e-10)

    summary = tsirelson_sweep(20, (4, 4), seed=7)
    check("Bell radius cap and identity on 20 instances", summary.ok)

    if failures:
        print(f"{len(failures)} verification check(s) failed")
        return EXIT_INTERNAL
    print("all verification checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projspectra",
        description="Spectral-radius estimation for projection-pair commutators "
                    "and Bell-CHSH operators")
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--degrees", action="store_true",
                        help="interpret angle arguments as degrees")
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("PROJSPECTRA_THREADS", "0")),
                        help="worker threads for sweeps (0 = sequential)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        # accepted after the subcommand as well; SUPPRESS keeps a value given
        # before the subcommand from being overwritten by a default
        p.add_argument("--degrees", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("--config", default=argparse.SUPPRESS)

    p = sub.add_parser("spectrum", help="eigenvalues of the angle-sequence sum matrix")
    add_common(p)
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--angles", help="JSON angle file {\"theta\": [...], \"omega\": [...]}")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("radius", help="commutator spectral-radius bounds")
    add_common(p)
    p.add_argument("--constant-theta", type=float)
    p.add_argument("--pair", help="JSON dense pair file")
    p.add_argument("--schedule", default="125,250,500,1000")
    p.add_argument("--criterion", choices=("b_max", "literal_distance"), default="b_max")
    p.add_argument("--defect-accept", type=float, default=1e-2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("extract", help="recover an angle sequence from a pair")
    add_common(p)
    p.add_argument("--example", choices=("shift",))
    p.add_argument("--pair", help="JSON dense pair file")
    p.add_argument("--N", type=int, default=400, help="truncation size for --example")
    p.add_argument("--steps", type=int, default=80)
    p.add_argument("--start-index", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("chsh", help="Bell-CHSH radius, identity, and bounds")
    add_common(p)
    p.add_argument("--side1-x", type=float)
    p.add_argument("--side2-x", type=float)
    p.add_argument("--side1-theta", type=float)
    p.add_argument("--side2-theta", type=float)
    p.add_argument("--pair1")
    p.add_argument("--pair2")
    p.add_argument("--schedule", default="125,250,500,1000")
    p.add_argument("--defect-accept", type=float, default=1e-2)
    p.add_argument("--sweep-count", type=int, default=0)
    p.add_argument("--dim1", type=int, default=8)
    p.add_argument("--dim2", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)
    p.add_argument("--ktl-only", action="store_true")
    p.set_defaults(func=cmd_chsh)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="theta-grid radius sweep to CSV")
    add_common(p)
    p.add_argument("--theta-grid", type=int, default=31,
                   help="number of interior grid points over (0, pi)")
    p.add_argument("--theta-list", help="explicit comma-separated theta values")
    p.add_argument("--schedule", default="25,50,100,200")
    p.add_argument("--defect-accept", type=float, default=1e-2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the built-in invariant checks")
    add_common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # pre-scan for --config so file values become parser defaults
    if "--config" in argv:
        path = argv[argv.index("--config") + 1] if argv.index("--config") + 1 < len(argv) else None
        if path is None:
            print("error: --config requires a path", file=sys.stderr)
            return EXIT_CONFIG
        try:
            overrides = _load_config_file(path)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        known = {a.dest for a in parser._actions}
        for p in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
            known |= {a.dest for a in p._actions}
        bad = set(overrides) - known
        if bad:
            print(f"error: unknown config keys {sorted(bad)}", file=sys.stderr)
            return EXIT_CONFIG
        parser.set_defaults(**overrides)
        for p in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
            p.set_defaults(**{k: v for k, v in overrides.items()
                              if k in {a.dest for a in p._actions}})
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    # config-file values arrive as strings; coerce numeric ones lazily
    for key in ("theta", "n", "N", "steps", "constant_theta", "defect_accept",
                "sweep_count", "dim1", "dim2", "seed", "dim_cap", "theta_grid",
                "start_index", "side1_x", "side2_x", "side1_theta", "side2_theta",
                "threads"):
        if hasattr(args, key) and isinstance(getattr(args, key), str):
            try:
                value = getattr(args, key)
                setattr(args, key, int(value) if key in
                        ("n", "N", "steps", "sweep_count", "dim1", "dim2", "seed",
                         "dim_cap", "theta_grid", "start_index", "threads")
                        else float(value))
            except ValueError:
                print(f"error: cannot parse config value for {key}", file=sys.stderr)
                return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
