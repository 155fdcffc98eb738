"""Near-minimum-entropy couplings of finite discrete distributions.

Build a single joint distribution whose coordinate projections recover a
given collection of probability mass functions while keeping the joint
entropy within ``2 - 2**(2 - m)`` bits of the provable floor, the entropy
of the collection's greatest lower bound under majorization.
"""

from .alias import AliasDecomposition, as_transition, majorized_alias
from .bernoulli import BernoulliSplit, bernoulli_splitting
from .engine import Coupling, CouplingReport, compute_coupling, glb_entropy_score, verify_coupling
from .errors import (
    BadParameterError,
    BadProbabilityError,
    CouplingError,
    EmptyCollectionError,
    EmptyPmfError,
    NegativeMassError,
    NotMajorizedError,
    NotNormalizedError,
    NotSortedError,
    ParseError,
    SupportTooLargeError,
    ZeroColumnError,
    ZeroRowError,
)
from .estimator import MinEntropyCoupler
from .geometric import (
    GeometricCoupling,
    GeomSplitMap,
    couple_geometric,
    geom_split,
    truncated_pushforward,
)
from .io import read_collection, read_coupling, read_joint, write_coupling
from .majorization import GlbResult, glb_oracle, greatest_lower_bound, majorizes
from .pmf import (
    Pmf,
    SortedPmf,
    capped_geometric,
    entropy,
    geometric_entropy,
    make_pmf,
    sort_descending,
    total_variation,
)
from .sampling import SampleStream, draw_stream, sample_alias, sample_coupling

__version__ = "0.1.0"

__all__ = [
    "AliasDecomposition",
    "BadParameterError",
    "BadProbabilityError",
    "BernoulliSplit",
    "Coupling",
    "CouplingError",
    "CouplingReport",
    "EmptyCollectionError",
    "EmptyPmfError",
    "GeomSplitMap",
    "GeometricCoupling",
    "GlbResult",
    "MinEntropyCoupler",
    "NegativeMassError",
    "NotMajorizedError",
    "NotNormalizedError",
    "NotSortedError",
    "ParseError",
    "Pmf",
    "SampleStream",
    "SortedPmf",
    "SupportTooLargeError",
    "ZeroColumnError",
    "ZeroRowError",
    "as_transition",
    "bernoulli_splitting",
    "capped_geometric",
    "compute_coupling",
    "couple_geometric",
    "draw_stream",
    "entropy",
    "geom_split",
    "geometric_entropy",
    "glb_entropy_score",
    "glb_oracle",
    "greatest_lower_bound",
    "majorized_alias",
    "majorizes",
    "make_pmf",
    "sample_alias",
    "sample_coupling",
    "sort_descending",
    "total_variation",
    "truncated_pushforward",
    "read_collection",
    "read_coupling",
    "read_joint",
    "verify_coupling",
    "write_coupling",
]
