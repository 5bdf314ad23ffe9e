"""Multi-granular linguistic distribution assessments.

2-tuple arithmetic, distribution-assessment algebra, lossless transformation
between term sets of different granularity, and a large-scale multi-attribute
group decision pipeline with maximum-deviation attribute weights.
"""
from .distribution import (
    DistributionAssessment,
    RankingKey,
    dawa,
    distance,
    distance_legacy,
    expectation,
    from_term,
    inaccuracy,
    rank,
)
from .kernels import BACKEND
from .linguistic import LinguisticScale, TwoTuple, delta, delta_inv, negate
from .magdm import (
    DecisionMaker,
    DecisionOutcome,
    DecisionProblem,
    KnownWeights,
    PartialWeights,
    UnknownWeights,
    solve,
)
from .multigranular import (
    HierarchyContext,
    build_context,
    downcast,
    tf,
    transform,
    tuple_to_distribution,
    upcast,
)
from .simplex import LinearConstraint

__version__ = "0.1.0"
