"""Formal concept enumeration by level-wise upper-neighbor expansion."""
from .context import (
    FormalContext,
    attribute_forming,
    closure_intent,
    down,
    object_forming,
    parse_cxt,
    parse_object_list,
    serialize_cxt,
    serialize_object_list,
    up,
)
from .core import (
    Concept,
    NeighborBatch,
    SeenCache,
    bottom_concept,
    is_canonical,
    is_top,
    record,
    upper_cover_intents,
    upper_neighbors,
)
from .engine import RunStats, enumerate_concepts, stats_from_report, stats_report
from .errors import (
    BadId,
    BadMagic,
    CalledOnTop,
    DanglingEdge,
    DimensionMismatch,
    DuplicateObject,
    FCAError,
    MalformedLine,
    ParseError,
    TooLarge,
)
from .estimator import ConceptLattice
from .lattice import (
    LatticeGraph,
    ValidationReport,
    build_lattice,
    export_concepts_tsv,
    export_dot,
    export_graphml,
    parse_concepts_tsv,
    validate_lattice,
)

__version__ = "0.1.0"
