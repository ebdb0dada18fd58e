"""Belief revision given an absolutely true conditioning event.

Quantitative rules: Shafer's conditioning (Dempster combination with a point
mass) and BCR17.  Qualitative rules on linguistic labels: QBCR1 and QBCR2.
All rules run on frames with arbitrary hybrid integrity constraints.
"""

from .conditioning import (
    BBA,
    QBBA,
    QualitativeTrace,
    QuasiNormStatus,
    Revision,
    bcr17_condition,
    condition,
    dempster_combine,
    qbcr1_condition,
    qbcr2_condition,
    quasi_norm_status,
    scr_condition,
    validate_bba,
    validate_qbba,
)
from .decomposition import (
    DecompositionClass,
    DecompositionContext,
    classify,
    decompose,
    enumerate_closure,
    enumerate_propositions,
    is_generated_by,
)
from .errors import (
    BeliefError,
    ImpossibleProblemError,
    ModeError,
    ModelMismatchError,
    ScaleMismatchError,
    TotalConflictError,
    ValidationError,
)
from .labels import (
    Label,
    LabelScale,
    label_add,
    label_div_scalar,
    label_mul,
    label_sum,
    label_to_unit,
)
from .lattice import (
    Frame,
    Mode,
    Model,
    Proposition,
    canonicalize,
    is_empty,
    is_subset,
    parse_expression,
    prop_complement,
    prop_intersect,
    prop_union,
    render,
)
from .scenario import Scenario, load_scenario, parse_scenario

__version__ = "0.1.0"
