"""
Loading of reference/hypothesis corpora.

Both sides are TSV files with ``utt_id<TAB>text`` lines. Interest sets are
attached at load time, so scoring only depends on the loaded corpus.
Annotation indices and markup positions refer to tokens *after*
normalization and tokenization.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CorpusError, PierError
from .poi import (
    InterestSet,
    TokenTag,
    auto_tag_by_script,
    build_interest_set,
    load_annotations,
    parse_markup,
    parse_script,
    parse_selector,
)
from .textnorm import TOKENIZERS, NormConfig, Script, Token, normalize, tokenize

__all__ = [
    'PoiMode',
    'CorpusSpec',
    'Utterance',
    'Corpus',
    'parse_poi_mode',
    'read_tsv',
    'build_corpus',
    'load_pairs',
    'filter_scoreable',
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoiMode:
    kind: str
    matrix: Optional[Script] = None
    embedded: Optional[Script] = None
    path: Optional[str] = None

    def __str__(self):
        if self.kind == 'script':
            return f'script:{self.matrix.value}-{self.embedded.value}'
        if self.kind == 'annot':
            return f'annot:{self.path}'
        return self.kind


def parse_poi_mode(value: str) -> PoiMode:
    """
    >>> str(parse_poi_mode('script:arabic-latin'))
    'script:Arabic-Latin'
    """
    if value in ('markup', 'none'):
        return PoiMode(value)
    if value.startswith('script:'):
        pair = value[len('script:'):].split('-')
        if len(pair) != 2:
            raise CorpusError(f'expected script:MATRIX-EMBEDDED, got {value!r}')
        matrix, embedded = (parse_script(p) for p in pair)
        if matrix is embedded:
            raise CorpusError('script tagging needs distinct matrix and embedded scripts')
        return PoiMode('script', matrix, embedded)
    if value.startswith('annot:') and len(value) > len('annot:'):
        return PoiMode('annot', path=value[len('annot:'):])
    raise CorpusError(f'unknown point-of-interest mode {value!r}; expected markup, script:X-Y, annot:PATH or none')


@dataclass(frozen=True)
class CorpusSpec:
    ref_path: str
    hyp_path: Optional[str] = None
    tokenizer_mode: str = 'word'
    norm: NormConfig = NormConfig()
    poi_mode: str = 'markup'
    selector: str = 'all'

    def __post_init__(self):
        if self.tokenizer_mode not in TOKENIZERS:
            raise CorpusError(f'unknown tokenizer mode {self.tokenizer_mode!r}')
        parse_poi_mode(self.poi_mode)
        parse_selector(self.selector)

    @property
    def poi(self) -> PoiMode:
        return parse_poi_mode(self.poi_mode)

    def to_dict(self) -> dict:
        d = asdict(self)
        d['poi_mode'] = str(self.poi)
        return d


@dataclass(frozen=True)
class Utterance:
    id: str
    ref_tokens: Tuple[Token, ...]
    hyp_tokens: Tuple[Token, ...]
    raw_ref: str = ''
    raw_hyp: str = ''
    # normalized text with markup removed; input of the char/mixed metrics
    ref_text: str = ''
    hyp_text: str = ''
    tags: Tuple[TokenTag, ...] = ()
    interest: Optional[InterestSet] = None


@dataclass(frozen=True)
class Corpus:
    utterances: Tuple[Utterance, ...]
    missing_hyp: int = 0
    spec: Optional[CorpusSpec] = None

    def __iter__(self):
        return iter(self.utterances)

    def __len__(self):
        return len(self.utterances)

    def __getitem__(self, item):
        return self.utterances[item]

    def by_id(self) -> Dict[str, Utterance]:
        return {u.id: u for u in self.utterances}


def read_tsv(content: str, source: str = '<tsv>') -> List[Tuple[str, str]]:
    """
    Parse ``utt_id<TAB>text`` lines. A line holding only an id has empty text.

    Blank lines are ignored; a second tab on a line is an error.
    """
    return [(utt_id, text) for utt_id, text, _ in _rows(content, source)]


def _rows(content: str, source: str) -> List[Tuple[str, str, int]]:
    rows = []
    seen = set()
    for line_no, line in enumerate(content.split('\n'), start=1):
        line = line.rstrip('\r')
        if not line.strip():
            continue
        fields = line.split('\t')
        if len(fields) > 2:
            raise CorpusError(f'{source}:{line_no}: tab inside utterance text')
        utt_id = fields[0].strip()
        text = fields[1] if len(fields) == 2 else ''
        if not utt_id:
            raise CorpusError(f'{source}:{line_no}: empty utterance id')
        if utt_id in seen:
            raise CorpusError(f'{source}:{line_no}: duplicate utterance id {utt_id!r}')
        seen.add(utt_id)
        rows.append((utt_id, text, line_no))
    return rows


def _tokenize_words(words: Sequence[str], spec: CorpusSpec):
    """
    Normalize word by word, so markup positions can be carried over to tokens.

    Returns the normalized text, its tokens and, per input word, the
    0-based token positions it produced (empty if normalization erased it).
    """
    kept = []
    owner = []
    for w, word in enumerate(words):
        norm = normalize(word, spec.norm)
        if norm:
            kept.append(norm)
            owner.append(w)
    text = ' '.join(kept)
    tokens = tokenize(text, spec.tokenizer_mode)

    starts = []
    offset = 0
    for norm in kept:
        starts.append(offset)
        offset += len(norm) + 1
    produced = [[] for _ in words]
    k = 0
    for t, token in enumerate(tokens):
        while k + 1 < len(starts) and token.source_span[0] >= starts[k + 1]:
            k += 1
        produced[owner[k]].append(t)
    return text, tokens, produced


def _reference(utt_id: str, raw: str, spec: CorpusSpec, annotations, line_no=None):
    poi = spec.poi
    if poi.kind == 'markup':
        words, word_tags = parse_markup(raw, line_no)
    else:
        words, word_tags = raw.split(), []
    text, tokens, produced = _tokenize_words(words, spec)

    if poi.kind == 'markup':
        tags = [
            TokenTag(t + 1, tag.lang, tag.switch_type, tag.source)
            for tag in word_tags
            for t in produced[tag.index - 1]
        ]
    elif poi.kind == 'script':
        tags = auto_tag_by_script(tokens, poi.matrix, poi.embedded)
    elif poi.kind == 'annot':
        tags = annotations.get(utt_id, [])
        for tag in tags:
            if tag.index > len(tokens):
                raise CorpusError(
                    f'annotation for {utt_id!r} points at token {tag.index}, '
                    f'but the normalized reference has {len(tokens)} tokens')
    else:
        tags = []

    interest = None
    if poi.kind != 'none':
        interest = build_interest_set(tags, len(tokens), spec.selector)
    return text, tokens, tuple(tags), interest


def build_corpus(
        ref_content: str,
        hyp_content: Optional[str],
        spec: CorpusSpec,
        annotation_content: Optional[str] = None,
) -> Corpus:
    """
    Pair references with hypotheses held in memory.

    `hyp_content=None` loads references only (no missing-hypothesis warnings).
    """
    refs = _rows(ref_content, spec.ref_path)
    if not refs:
        raise CorpusError(f'{spec.ref_path}: no reference utterances')
    hyps = dict(read_tsv(hyp_content, spec.hyp_path or '<hyp>')) if hyp_content is not None else {}

    ref_ids = {utt_id for utt_id, _, _ in refs}
    unknown = [utt_id for utt_id in hyps if utt_id not in ref_ids]
    if unknown:
        raise CorpusError(f'hypothesis ids not present in references: {", ".join(unknown[:5])}'
                          + (' ...' if len(unknown) > 5 else ''))

    annotations = {}
    if spec.poi.kind == 'annot':
        if annotation_content is None:
            raise CorpusError('annotation mode requires annotation content')
        annotations = load_annotations(annotation_content)
        unknown = [utt_id for utt_id in annotations if utt_id not in ref_ids]
        if unknown:
            raise CorpusError(f'annotations for unknown utterances: {", ".join(unknown[:5])}')

    missing = 0
    utterances = []
    for utt_id, raw_ref, line_no in refs:
        if hyp_content is not None and utt_id not in hyps:
            missing += 1
            logger.warning('no hypothesis for %s, scoring it as empty', utt_id)
        raw_hyp = hyps.get(utt_id, '')
        try:
            ref_text, ref_tokens, tags, interest = _reference(utt_id, raw_ref, spec, annotations, line_no)
        except PierError as e:
            raise CorpusError(f'{spec.ref_path}: utterance {utt_id!r}: {e}') from e
        hyp_text = normalize(raw_hyp, spec.norm)
        utterances.append(Utterance(
            id=utt_id,
            ref_tokens=tuple(ref_tokens),
            hyp_tokens=tuple(tokenize(hyp_text, spec.tokenizer_mode)),
            raw_ref=raw_ref,
            raw_hyp=raw_hyp,
            ref_text=ref_text,
            hyp_text=hyp_text,
            tags=tags,
            interest=interest,
        ))
    return Corpus(tuple(utterances), missing, spec)


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusError(f'cannot read {what} file {path}: {e}') from e


def load_pairs(spec: CorpusSpec) -> Corpus:
    ref_content = _read(spec.ref_path, 'reference')
    hyp_content = _read(spec.hyp_path, 'hypothesis') if spec.hyp_path is not None else None
    annotation_content = None
    if spec.poi.kind == 'annot':
        annotation_content = _read(spec.poi.path, 'annotation')
    return build_corpus(ref_content, hyp_content, spec, annotation_content)


def filter_scoreable(utts: Sequence[Utterance]) -> Tuple[List[Utterance], int, int]:
    """
    Drop utterances that cannot be scored.

    Returns ``(kept, skipped_monolingual, skipped_empty_ref)``. An empty
    reference is counted as such even if it also has no points of interest.
    Utterances without an interest set (no tagging requested) are never
    treated as monolingual.
    """
    kept = []
    skipped_monolingual = skipped_empty = 0
    for utt in utts:
        if not utt.ref_tokens:
            skipped_empty += 1
        elif utt.interest is not None and not utt.interest.indices:
            skipped_monolingual += 1
        else:
            kept.append(utt)
    return kept, skipped_monolingual, skipped_empty
