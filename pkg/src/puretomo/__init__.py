"""Pure-state tomography with rank-1 measurements.

Constructions of rank-1 operator sets that pin down every pure state, the
conversion of such sets into rank-1 POVMs, closed-form and adaptive
reconstruction, and a sampled audit of distinguishability claims.
"""

from .bounds import BoundsReport, alpha, feasible_3d_minus_2, m0, m1_range
from .constructions import (
    Basis,
    BlochVector,
    counterexample_d2,
    eight_ops_d3,
    mubs_d2,
    mubs_prime,
    sic_d2,
    theorem2_collections,
)
from .errors import TomographyError
from .povm import (
    OperatorSet,
    Povm,
    Rank1Operator,
    check_resolution_subset,
    outcome_vector,
    rank1_convert,
    scale_elements,
)
from .qmath import born_value, hermitian_eig, inv_sqrt
from .states import PureState, SupportSet, canonicalize, fidelity, haar_random, support
from .tomography import (
    AdaptiveTranscript,
    BornOracle,
    adaptive_operator_count,
    adaptive_reconstruct,
    reconstruct_d3,
)
from .verify import DistinguishabilityReport, pair_separation, sampled_distinguishability

__version__ = "0.1.0"
