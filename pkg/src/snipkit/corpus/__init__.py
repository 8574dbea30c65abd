from .formats import (
    FormatError,
    corpus_from_columns,
    corpus_to_columns,
    export_corpus,
    load_corpus_cache,
    read_journals_csv,
    read_merges_csv,
    read_publications_jsonl,
    save_corpus_cache,
)
from .ingest import (
    DuplicatePublicationError,
    IngestConfig,
    IngestError,
    IngestReport,
    MergeCycleError,
    RecordError,
    ingest,
    merge_title_changes,
    resolve_merge_map,
)
from .model import (
    DEFAULT_DOC_TYPES,
    CitationEvent,
    Corpus,
    CorpusError,
    Journal,
    Publication,
    citations_received,
    normalize_doc_type,
)

__all__ = [
    "DEFAULT_DOC_TYPES",
    "CitationEvent",
    "Corpus",
    "CorpusError",
    "DuplicatePublicationError",
    "FormatError",
    "IngestConfig",
    "IngestError",
    "IngestReport",
    "Journal",
    "MergeCycleError",
    "Publication",
    "RecordError",
    "citations_received",
    "corpus_from_columns",
    "corpus_to_columns",
    "export_corpus",
    "ingest",
    "load_corpus_cache",
    "merge_title_changes",
    "normalize_doc_type",
    "read_journals_csv",
    "read_merges_csv",
    "read_publications_jsonl",
    "resolve_merge_map",
    "save_corpus_cache",
]
