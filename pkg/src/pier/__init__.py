"""
Scoring for code-switching speech recognition.

Besides WER, CER and MER, the package computes the point-of-interest error
rate (PIER): the error operations attributed to selected reference tokens,
typically the embedded-language words, divided by the number of those tokens.
"""
from .align import AlignmentTrace, EditOp, OpKind, align, error_ops
from .corpus import Corpus, CorpusSpec, Utterance, build_corpus, filter_scoreable, load_pairs
from .errors import (
    AnnotationError,
    ConfigError,
    CorpusError,
    MarkupError,
    PierError,
    UndefinedMetricError,
)
from .metrics import MetricValue, cer, filter_ops_by_interest, mer, pier, wer
from .perturb import PerturbProfile, PerturbSpec, divergence_demo, inject_errors, make_synthetic_corpus
from .poi import (
    InterestSet,
    SwitchType,
    TokenTag,
    auto_tag_by_script,
    build_interest_set,
    load_annotations,
    parse_markup,
    render_markup,
)
from .report import CorpusReport, UtteranceScore, aggregate, dump_alignment, render, score_corpus, score_utterance
from .textnorm import NormConfig, Script, Token, classify_script, normalize, tokenize

__version__ = '0.1.0'
