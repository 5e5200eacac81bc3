from .adapter_errors import (
    AnnotationError,
    DotaSentenceError,
    SplitError,
    SyntheticConfigError,
    ThreadError,
)
from .agreement import AgreementTable, build_agreement_table, fleiss_kappa
from .annotations import (
    AnnotationSet,
    Span,
    aggregate_annotations,
    apply_annotations,
    build_annotation_sets,
    read_annotation_records,
)
from .civil_comments import Comment, adapt_cc_threads, ancestor_chain, read_comments
from .dota import (
    MergedSentence,
    SentenceLabel,
    adapt_dota,
    adapt_dota_file,
    dota_line_label,
    read_dota_sentences,
)
from .splitting import CorpusSplit, part_sizes, split_corpus
from .synthetic import SyntheticConfig, generate_synthetic

__all__ = [
    "AnnotationError",
    "DotaSentenceError",
    "SplitError",
    "SyntheticConfigError",
    "ThreadError",
    "AgreementTable",
    "build_agreement_table",
    "fleiss_kappa",
    "AnnotationSet",
    "Span",
    "aggregate_annotations",
    "apply_annotations",
    "build_annotation_sets",
    "read_annotation_records",
    "Comment",
    "adapt_cc_threads",
    "ancestor_chain",
    "read_comments",
    "MergedSentence",
    "SentenceLabel",
    "adapt_dota",
    "adapt_dota_file",
    "dota_line_label",
    "read_dota_sentences",
    "CorpusSplit",
    "part_sizes",
    "split_corpus",
    "SyntheticConfig",
    "generate_synthetic",
]
