"""Dimension toolkit for downsets of integer partitions and compositions."""

from .orders import (
    Composition,
    EPSILON,
    GeneralizedWord,
    Partition,
    TruncationSpec,
    W,
    WW,
    age_member,
    age_truncation,
    conjugate,
    fin,
    partition_le,
    rep,
    strip_core,
    subword_embedding,
    subword_le,
    word_of,
    young_join,
)
from .posets import (
    FinitePoset,
    LinearExtension,
    OrderError,
    RealizerReport,
    Refinement,
    extend_to_linear,
    ordinal_sum,
    poset_from,
    restrict_realizer,
    sort_by,
    substitute_intervals,
    verify_realizer,
)
from .dimension import DimensionResult, dimension_at_most, exact_dimension
from .crowns import (
    CROWN_GENERATORS,
    CrownFamily,
    abstract_crown,
    crown_2w,
    crown_omega3,
    crown_ones2,
    crown_w1w,
    crown_w1w_mirror,
    partition_crown,
    verify_crown,
)
from .classify import (
    ClassificationReport,
    PartitionShape,
    classify_composition_downset,
    classify_partition_downset,
    has_forbidden_age,
    maximal_shape_match,
    normalize_partition_word,
    normalize_word,
)
from .builders import (
    RealizerBundle,
    age_poset,
    band_realizer,
    cap_inner_realizer,
    cap_left_realizer,
    compact_embeddings,
    double_cap_realizer,
    partition_age_realizer,
    partition_grid_embed,
    prefix_realizer,
    realize_word,
    realizer_age_ww,
)

__version__ = "0.1.0"
