"""Majorization, majorization-preserving quantum channels, and seeded property checks."""

from .channels import (
    ChoiMatrix,
    Constant,
    DepTranspose,
    DepUnitary,
    Family,
    KrausChannel,
    LambdaRange,
    Other,
    apply,
    choi,
    classify_channel,
    constant_channel,
    depolarized_transpose,
    depolarized_unitary,
    is_cp,
    kraus_from_choi,
    lambda_range,
)
from .config import DEFAULT, Tolerances
from .linalg import hermitian_eig, is_psd, random_density, random_haar_unitary, vectorize, devectorize
from .majorization import (
    birkhoff_decompose,
    classify_vector_map,
    hlp_witness,
    is_bistochastic,
    majorizes_op,
    majorizes_vec,
    mixed_unitary_witness,
)
from .properties import (
    conjecture_explorer,
    sample_majorization_pair,
    unitary_orbit_equivalent,
    von_neumann_entropy,
)

__version__ = "0.1.0"
