"""Lightweight data augmentation for slot-filling / intent corpora.

Four methods over BIO-tagged utterances: value substitution from a
corpus index, substitution through a fill-mask language model, and
dependency-tree crop and rotate.
"""

from .corpus import (
    Corpus,
    DepTree,
    ROOT,
    SlotSpan,
    Utterance,
    bio_violation,
    extract_spans,
    parse_corpus,
    parse_three_file,
    parse_trees,
    repair_bio,
    write_corpus,
)
from .errors import (
    BackendError,
    BackendRejected,
    ConfigError,
    CorpusFormatError,
    InputError,
    SluaugError,
    TreeFormatError,
)
from .lm import (
    BLANK,
    HttpFillMask,
    HttpPairScorer,
    PairExample,
    StubFillMask,
    StubScorer,
    TokenDistribution,
    build_filter_pairs,
    filter_accept,
    lm_fill_span,
    lm_variants,
    nucleus_sample,
)
from .pipeline import (
    AugConfig,
    AugResult,
    CorpusStats,
    StatsReport,
    augment_corpus,
    sub_seed,
    write_provenance,
)
from .records import (
    METHOD_CROP,
    METHOD_ROTATE,
    METHOD_SLOT_SUB,
    METHOD_SLOT_SUB_LM,
    METHODS,
    AugRecord,
    substitute_span,
)
from .slot_index import SlotIndex, build_index, candidates, sample_candidate
from .slotsub import slot_sub_n, slot_sub_once
from .tree_ops import (
    DEFAULT_CROPPABLE,
    DEFAULT_KEEP,
    crop_variants,
    rotate_variants,
)

__version__ = "0.1.0"

__all__ = [
    "AugConfig",
    "AugRecord",
    "AugResult",
    "BLANK",
    "BackendError",
    "BackendRejected",
    "ConfigError",
    "Corpus",
    "CorpusFormatError",
    "CorpusStats",
    "DEFAULT_CROPPABLE",
    "DEFAULT_KEEP",
    "DepTree",
    "HttpFillMask",
    "HttpPairScorer",
    "InputError",
    "METHODS",
    "METHOD_CROP",
    "METHOD_ROTATE",
    "METHOD_SLOT_SUB",
    "METHOD_SLOT_SUB_LM",
    "PairExample",
    "ROOT",
    "SlotIndex",
    "SlotSpan",
    "SluaugError",
    "StatsReport",
    "StubFillMask",
    "StubScorer",
    "TokenDistribution",
    "TreeFormatError",
    "Utterance",
    "augment_corpus",
    "bio_violation",
    "build_filter_pairs",
    "build_index",
    "candidates",
    "crop_variants",
    "extract_spans",
    "filter_accept",
    "lm_fill_span",
    "lm_variants",
    "nucleus_sample",
    "parse_corpus",
    "parse_three_file",
    "parse_trees",
    "repair_bio",
    "rotate_variants",
    "sample_candidate",
    "slot_sub_n",
    "slot_sub_once",
    "sub_seed",
    "substitute_span",
    "write_corpus",
    "write_provenance",
]
