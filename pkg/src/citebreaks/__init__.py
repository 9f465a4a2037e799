"""Citation-corpus analytics for screening potential breakthrough papers.

The pipeline: load a corpus of publications, citation edges and a
micro/meso/macro cluster hierarchy; partition each meso-field's citation
distribution into CSS classes T1..T4; screen the outstanding articles for
co-citation "followers"; and select breakthrough candidates by three rules
(micro-field maxima, the filtered pool, and above-average cross-macro
diffusion). Portfolio reports aggregate the selections per analysis unit.
"""

from .config import PER_PAIR, UNION, ConfigError, RunConfig
from .corpus import (
    CitationEdge,
    ClusterHierarchy,
    ConsistencyError,
    Corpus,
    CorpusError,
    DocType,
    FormatError,
    IngestReport,
    PublicationRecord,
    citation_counts,
    from_records,
    load_corpus,
    write_corpus,
)
from .css import (
    CitationClass,
    CssPartition,
    CssSummary,
    CssThresholds,
    css_all_fields,
    css_partition,
    css_summary,
)
from .detect import (
    BreakthroughSet,
    DiffusionStat,
    apply_follower_filter,
    detect_m1,
    detect_m2a,
    detect_m2b,
    macro_diffusion,
)
from .follower import (
    FollowerPair,
    FollowerVerdict,
    candidate_pool,
    filter_followers,
    find_pairs,
)
from .portfolio import (
    MethodStats,
    PortfolioReport,
    TopDecileFlag,
    meso_overlay,
    pp_top10,
    reference_report,
    top_decile_assignments,
    top_decile_flags,
    unit_report,
)
from .synthgen import GroundTruth, SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "BreakthroughSet",
    "CitationClass",
    "CitationEdge",
    "ClusterHierarchy",
    "ConfigError",
    "ConsistencyError",
    "Corpus",
    "CorpusError",
    "CssPartition",
    "CssSummary",
    "CssThresholds",
    "DiffusionStat",
    "DocType",
    "FollowerPair",
    "FollowerVerdict",
    "FormatError",
    "GroundTruth",
    "IngestReport",
    "MethodStats",
    "PER_PAIR",
    "PortfolioReport",
    "PublicationRecord",
    "RunConfig",
    "SynthConfig",
    "TopDecileFlag",
    "UNION",
    "apply_follower_filter",
    "candidate_pool",
    "citation_counts",
    "css_all_fields",
    "css_partition",
    "css_summary",
    "detect_m1",
    "detect_m2a",
    "detect_m2b",
    "filter_followers",
    "find_pairs",
    "from_records",
    "generate",
    "load_corpus",
    "macro_diffusion",
    "meso_overlay",
    "pp_top10",
    "reference_report",
    "top_decile_assignments",
    "top_decile_flags",
    "unit_report",
    "write_corpus",
]
