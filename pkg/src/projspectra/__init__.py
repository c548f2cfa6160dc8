"""Spectral analysis of projection pairs, their commutators, and Bell-CHSH
operators.

Two independent computational routes are provided everywhere it matters: a
dense Jacobi eigensolver cross-checks the Sturm-bisection tridiagonal path,
and the direct tensor-space Bell radius cross-checks the closed-form radius
identity.
"""

from .chsh import (DEFAULT_DIM_CAP, TSIRELSON, BipartitePair, CHSHReport,
                   SweepSummary, bell_operator_apply, chsh_bounds,
                   chsh_radius_direct, chsh_radius_ktl, chsh_report_json,
                   planted_maximal_pair, random_bipartite, tsirelson_sweep)
from .densela import (DenseHermitian, DenseSpectrum, NonHermitianError,
                      NormEstimate, commutator, jacobi_eigen, kron_apply,
                      random_projection, spectral_norm)
from .jordan import (BlockSpectra, JordanBlock, JordanDecomposition,
                     ProjectionPairDense, block_spectra,
                     commutator_radius_exact, decomposition_json, eigvec_uv,
                     halmos_pair, halmos_param, jordan_decompose, reconstruct,
                     witness_vector)
from .oneshift import (ApproxDefect, OneShiftExtraction, OperatorPairOracle,
                       approx_from_samples, approximation_defect,
                       direct_sum_pair, extract_one_shifted, polynomial_defect,
                       shift_pair_oracle, tensor_pair)
from .spectral import (BoundReport, CandidateSpectrumPoint, CharRoots,
                       ConstantAngleModel, UpperEstimate, b_func, bound_report,
                       constant_angle_char_roots, constant_angle_eigvec,
                       constant_angle_exact_radius, constant_angle_tail,
                       detect_candidates, f2n_symmetry_check, f_set_case1,
                       lower_bound, report_json, select_lambda, upper_bound)
from .tridiag import (AngleSequence, SymTridiagonal, TridiagSpectrum,
                      apply_tridiag, build_A, build_B, build_sum,
                      eigen_tridiag, lanczos_tridiagonal, sturm_count)

__version__ = "0.1.0"

__all__ = [
    "AngleSequence", "ApproxDefect", "BipartitePair", "BlockSpectra",
    "BoundReport", "CHSHReport", "CandidateSpectrumPoint", "CharRoots",
    "ConstantAngleModel", "DEFAULT_DIM_CAP", "DenseHermitian", "DenseSpectrum",
    "JordanBlock", "JordanDecomposition", "NonHermitianError", "NormEstimate",
    "OneShiftExtraction", "OperatorPairOracle", "ProjectionPairDense",
    "SweepSummary", "SymTridiagonal", "TSIRELSON", "TridiagSpectrum",
    "UpperEstimate", "apply_tridiag", "approx_from_samples",
    "approximation_defect", "b_func", "bell_operator_apply", "block_spectra",
    "bound_report", "build_A", "build_B", "build_sum", "chsh_bounds",
    "chsh_radius_direct", "chsh_radius_ktl", "chsh_report_json", "commutator",
    "commutator_radius_exact", "constant_angle_char_roots",
    "constant_angle_eigvec", "constant_angle_exact_radius",
    "constant_angle_tail", "decomposition_json", "detect_candidates",
    "direct_sum_pair", "eigen_tridiag", "eigvec_uv", "extract_one_shifted",
    "f2n_symmetry_check", "f_set_case1", "halmos_pair", "halmos_param",
    "jacobi_eigen", "jordan_decompose", "kron_apply", "lanczos_tridiagonal",
    "lower_bound", "planted_maximal_pair", "polynomial_defect",
    "random_bipartite", "random_projection", "reconstruct", "report_json",
    "select_lambda", "shift_pair_oracle", "spectral_norm", "sturm_count",
    "tensor_pair", "tsirelson_sweep", "upper_bound", "witness_vector",
]
