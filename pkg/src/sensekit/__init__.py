"""sensekit: symbolic concept representation from sensibility judgments.

The pipeline: parse polarity-tagged applicability assertions (corpus), induce
the type hierarchy implicit in their extents (hierarchy), reify assertions
into primitive-relation triples and weighted meaning records (semantics),
compare senses dimension by dimension (similarity), and harvest draft records
from a masked-completion provider (elicitation).
"""

from __future__ import annotations

__version__ = "0.1.0"

from .corpus import (
    AGENT,
    NONSENSICAL,
    OBJECT,
    SENSIBLE,
    Assertion,
    AssertionSet,
    ConceptId,
    PropertyKey,
    check_consistency,
    corpus_from_json,
    corpus_from_json_text,
    corpus_to_json,
    corpus_to_json_text,
    extent,
    parse_corpus,
    scan_corpus,
    serialize_corpus,
)
from .elicitation import (
    BOOK_FIXTURE_TEMPLATES,
    DEFAULT_TEMPLATES,
    TEMPLATE_SETS,
    CompletionList,
    ElicitResult,
    MockProvider,
    PromptTemplate,
    RemoteProvider,
    elicit,
    rank_to_weight,
    render,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    CorpusSyntaxError,
    ElicitationError,
    EmptyCorpusError,
    InputDataError,
    LexiconError,
    MeaningStoreError,
    OntologyError,
    ProviderError,
    SensekitError,
    TemplateError,
    UnknownTypeError,
)
from .hierarchy import (
    ROOT_LABEL,
    InduceConfig,
    TypeDag,
    TypeNode,
    TypedFact,
    VerifyResult,
    dag_from_json,
    dag_from_json_text,
    dag_to_json,
    dag_to_json_text,
    export_dot,
    induce,
    verify,
)
from .semantics import (
    DEFAULT_DIMS,
    RELATION_ALIASES,
    CopularForm,
    CopularStatement,
    LexiconEntry,
    MeaningRecord,
    NominalizationLexicon,
    PrimitiveRelation,
    PrimitiveTriple,
    build_meaning,
    classify,
    lexicon_from_json,
    lexicon_to_json,
    load_lexicon,
    load_meanings,
    meaning_record_from_json,
    meaning_record_to_json,
    meanings_from_json_text,
    meanings_to_json_text,
    nominalize_assertion,
    resolve_relation,
    save_meanings,
)
from .similarity import (
    MatchedPair,
    SimilarityReport,
    concept_similarity,
    dimension_join,
    dimension_similarity,
    equal_weights,
    feature_sim,
)
