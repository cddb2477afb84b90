"""Boundary constructions for the embedding stopping rules."""

from .boundary import Boundary, invert_monotone, law_of_local_time
from .two_sided import (build_boundary as build_two_sided,
                        build_boundary_nonatomic as build_two_sided_nonatomic,
                        check_admissible, check_integrability,
                        expected_local_time, shift_embedding)
from .density import build_boundary as build_density, solve_pairing
from .one_sided import build_boundary as build_one_sided
from .minimal import LocalTimeFunctional, expected_inverse_local_time
