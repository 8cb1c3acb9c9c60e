"""Exact p-adic matrix products and the reflected Poisson walk on the Weyl chamber."""

from .errors import (
    DivisionByZero,
    InsufficientSamples,
    PrecisionExhausted,
    PrimeMismatch,
    SamplerStuck,
    SingularMatrix,
    TruncationTooSmall,
)
from .padic import PAdicScalar, ZeroAtPrecision, from_integer, from_rational, valuation_of
from .linalg import (
    PAdicMatrix,
    Signature,
    left_diag_multiply,
    right_diag_multiply,
    singular_numbers,
    singular_numbers_minor_oracle,
)
from .sampling import SignatureMeasure, StreamKey, haar_gln_zp, haar_rejection, sample_signature, uniform_zp
from .processes import (
    GeneratorMatrix,
    RateParams,
    Trajectory,
    canonical_process,
    finite_time_distribution,
    generator_A,
    generator_B,
    matrix_walk_simulate,
    multi_time_distribution,
    one_jump_mc,
    one_jump_oracle,
    reflected_step,
    reflected_walk_simulate,
    time_scale,
)
from .verify import VerificationReport, check_lemma_one_jump, chi_square_gof, tv_distance

__version__ = "0.1.0"
