"""Skorokhod embeddings for spectrally negative Levy processes."""

from .errors import (AdmissibilityError, DomainError, NumericError,
                     SnLevyError, UnsupportedError)
from .model import JumpLaw, LevyModel, Regime, model_from_dict, \
    model_from_json
from .measure import TargetMeasure, measure_from_dict, measure_from_json
from .scale import ScaleFunction, build_scale
from .excursion import ExcursionLaw
from .embedding import (Boundary, LocalTimeFunctional, build_density,
                        build_one_sided, build_two_sided,
                        build_two_sided_nonatomic, check_admissible,
                        check_integrability, expected_inverse_local_time,
                        expected_local_time, law_of_local_time,
                        shift_embedding, solve_pairing)
from .montecarlo import (Report, SimConfig, SimResult, backend_name,
                         ks_distance, run_stop_T, run_stop_T_mu,
                         run_stop_T_tilde, sample_path, validate)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "DomainError", "NumericError", "SnLevyError",
    "UnsupportedError",
    "JumpLaw", "LevyModel", "Regime", "model_from_dict", "model_from_json",
    "TargetMeasure", "measure_from_dict", "measure_from_json",
    "ScaleFunction", "build_scale", "ExcursionLaw",
    "Boundary", "LocalTimeFunctional", "build_density", "build_one_sided",
    "build_two_sided", "build_two_sided_nonatomic", "check_admissible",
    "check_integrability", "expected_inverse_local_time",
    "expected_local_time", "law_of_local_time", "shift_embedding",
    "solve_pairing",
    "Report", "SimConfig", "SimResult", "backend_name", "ks_distance",
    "run_stop_T", "run_stop_T_mu", "run_stop_T_tilde", "sample_path",
    "validate",
    "__version__",
]
