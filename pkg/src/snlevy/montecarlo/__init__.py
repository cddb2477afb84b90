"""Monte Carlo path simulation and validation of the stopping rules."""

from .backend import (COMPILED, RULE_ONESIDED, RULE_PLAIN, RULE_TILDE,
                      backend_name)
from .config import PathRecord, SimConfig
from .engine import (SimResult, first_exit, first_hit_up, run_paths,
                     run_stop_T, run_stop_T_mu, run_stop_T_tilde,
                     sample_path)
from .validate import Report, ks_distance, validate

__all__ = [
    "COMPILED", "RULE_ONESIDED", "RULE_PLAIN", "RULE_TILDE",
    "backend_name", "PathRecord", "SimConfig", "SimResult",
    "first_exit", "first_hit_up", "run_paths", "run_stop_T",
    "run_stop_T_mu", "run_stop_T_tilde", "sample_path",
    "Report", "ks_distance", "validate",
]
