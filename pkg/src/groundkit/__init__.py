"""Grounding-data toolkit: snapshot models, referring-expression synthesis,
resolution planning, and evaluation geometry for GUI screenshots."""

from .snapshot import (
    BBox,
    ElementRecord,
    PageSnapshot,
    Point,
    SnapshotParseError,
    SnapshotValidationError,
    center_point,
    parse_snapshot,
    serialize_snapshot,
    validate_snapshot,
)
from .classify import (
    INTERACTIVE_TAGS,
    PURE_TEXT_TAGS,
    SIMILARITY_THRESHOLD,
    ElementClass,
    ElementKind,
    classify_element,
    dedup_ambiguous,
    is_textual,
    text_similarity,
)
from .spatial import (
    Direction,
    MAX_RELATIVE_DISTANCE,
    RegionLabel,
    Relation,
    RelationKind,
    absolute_region,
    associate_label,
    candidate_relatives,
    directional_neighbors,
    nearest_title,
)
from .expressions import (
    DescriptorSource,
    Phrase,
    REType,
    ReferringExpression,
    SynthesisPolicy,
    assemble_re,
    choose_primary_descriptor,
    contextual_phrase,
    positional_phrase,
)
from .augment import (
    AugmentationClient,
    AugmentationConfig,
    AugmentationError,
    AugmentationSkipped,
    DirectResult,
    DirectStyle,
    render_marker,
)
from .sampling import (
    Candidate,
    GroundingSample,
    LABEL_DOWNSAMPLE_CAP,
    PAGE_ELEMENT_CAP,
    StatsReport,
    corpus_stats,
    downsample_labels,
    emit_samples,
    select_page_elements,
)
from .resolution import (
    CELL,
    MAX_CELLS,
    CoordinateParseError,
    GridPlan,
    format_coordinates,
    map_point,
    parse_coordinates,
    plan_grid,
    resize_for_model,
)
from .evaluate import (
    ElemType,
    EvalRecord,
    Platform,
    aggregate_screenspot,
    score_element_accuracy,
    score_grounding,
    snap_to_element,
    split_page_blocks,
)
from .pipeline import PipelineSettings, SnapshotResult, process_snapshot
from .adapters import AdaptReport, SourceName, SourceSpec, adapt_source

__version__ = "0.1.0"
