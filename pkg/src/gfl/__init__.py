"""Generic freeness: a witness f with B[1/f] and M[1/f] free over A[1/f],
plus staircase certificates that can be checked independently."""

from .certificate import (Certificate, build_presentation, deserialize, serialize,
                          validate)
from .dsl import format, parse
from .engine import ProblemSpec, SolveConfig, agree_with_general, module_case_echelon, solve
from .errors import (CapExceeded, GflError, MalformedCertificate, ParseError,
                     PointOutsideWitnessLocus, WrongProblem)
from .staircase import Staircase

# ``gfl.verify`` stays the module; call gfl.verify.verify(problem, cert)

__all__ = [
    "CapExceeded", "Certificate", "GflError", "MalformedCertificate", "ParseError",
    "PointOutsideWitnessLocus", "ProblemSpec", "SolveConfig", "Staircase", "WrongProblem",
    "agree_with_general", "build_presentation", "deserialize", "format", "module_case_echelon",
    "parse", "serialize", "solve", "validate",
]
