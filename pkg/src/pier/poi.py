"""
Points of interest in reference transcripts.

Three sources can mark a reference token as interesting:

* inline markup, ``das mit den <EN bots> glaub ich nicht``;
* the writing script of the token, for language pairs such as Arabic-English
  or Mandarin-English;
* a sidecar TSV with ``utt_id<TAB>token_index<TAB>label`` lines.

Each tag also records whether the token is a whole embedded-language word
(inter-word switch) or mixes both languages inside one word (intra-word
switch). Labels with a ``+`` (``EN+DE``) mark intra-word tokens; the label
``NE`` marks names, which are never counted unless asked for explicitly.
"""
from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .errors import AnnotationError, ConfigError, MarkupError
from .textnorm import NAMED_SCRIPTS, Script, classify_script, letter_scripts

__all__ = [
    'SwitchType',
    'TagSource',
    'TokenTag',
    'InterestSet',
    'LABEL_PATTERN',
    'NAME_LABEL',
    'parse_markup',
    'render_markup',
    'auto_tag_by_script',
    'load_annotations',
    'build_interest_set',
    'parse_selector',
    'parse_script',
]

LABEL_PATTERN = re.compile(r'[A-Z][A-Z+-]{0,7}')
NAME_LABEL = 'NE'


class SwitchType(str, enum.Enum):
    INTER_WORD = 'inter_word'
    INTRA_WORD = 'intra_word'
    NONE = 'none'

    def __str__(self):
        return self.value


class TagSource(str, enum.Enum):
    MARKUP = 'markup'
    SCRIPT = 'script'
    ANNOTATION = 'annotation'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TokenTag:
    index: int
    lang: str
    switch_type: SwitchType
    source: TagSource


@dataclass(frozen=True)
class InterestSet:
    """Sorted 1-based reference positions to score, with the selector that chose them."""
    indices: Tuple[int, ...]
    ref_len: int
    selector: str = 'all'

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(self.indices))
        prev = 0
        for i in self.indices:
            if i <= prev:
                raise ValueError(f'interest indices must be strictly increasing and >= 1: {self.indices}')
            prev = i
        if self.indices and self.indices[-1] > self.ref_len:
            raise ValueError(f'interest index {self.indices[-1]} exceeds reference length {self.ref_len}')

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, index) -> bool:
        return index in self.indices

    @property
    def covers_last(self) -> bool:
        """Whether the final reference token is a point of interest."""
        return bool(self.indices) and self.indices[-1] == self.ref_len


def switch_type_for_label(label: str) -> SwitchType:
    if '+' in label:
        return SwitchType.INTRA_WORD
    if label == NAME_LABEL:
        return SwitchType.NONE
    return SwitchType.INTER_WORD


def _valid_label(label: str) -> bool:
    return LABEL_PATTERN.fullmatch(label) is not None


def parse_markup(line: str, line_no: int | None = None) -> Tuple[List[str], List[TokenTag]]:
    """
    Split a reference line into plain tokens and the tags found in it.

    A token written as ``<LABEL word>`` is tagged with LABEL; a plain token
    that starts with ``<`` must be written ``\\<``. Columns in errors are
    1-based.

    >>> tokens, tags = parse_markup('das mit den <EN bots> glaub ich nicht')
    >>> tokens[3], tags[0].index, tags[0].lang
    ('bots', 4, 'EN')
    """
    tokens: List[str] = []
    tags: List[TokenTag] = []
    i, n = 0, len(line)

    def fail(message, pos):
        raise MarkupError(message, line_no, pos + 1)

    while i < n:
        if line[i].isspace():
            i += 1
            continue
        if line[i] != '<':
            j = i
            while j < n and not line[j].isspace():
                j += 1
            token = line[i:j]
            if token.startswith('\\<'):
                token = token[1:]
            tokens.append(token)
            i = j
            continue

        start = i
        k = i + 1
        while k < n and not line[k].isspace() and line[k] != '>':
            k += 1
        label = line[i + 1:k]
        if not _valid_label(label):
            fail(f'bad markup label {label!r}', i + 1)
        if k >= n:
            fail("unclosed markup, missing '>'", start)
        if line[k] == '>':
            fail('empty word in markup', k)
        while k < n and line[k].isspace():
            k += 1
        w = k
        while k < n and line[k] != '>' and not line[k].isspace():
            k += 1
        if k == w:
            fail('empty word in markup' if k < n else "unclosed markup, missing '>'", k if k < n else start)
        if k >= n or line[k] != '>':
            fail("unclosed markup, missing '>' (payload must be a single word)", start)
        k += 1
        if k < n and not line[k].isspace():
            fail("expected whitespace after '>'", k)
        tokens.append(line[w:k - 1])
        tags.append(TokenTag(len(tokens), label, switch_type_for_label(label), TagSource.MARKUP))
        i = k

    return tokens, tags


def render_markup(tokens: Sequence[str], tags: Iterable[TokenTag]) -> str:
    """Inverse of `parse_markup` for single-spaced lines."""
    labels = {tag.index: tag.lang for tag in tags}
    out = []
    for index, token in enumerate(tokens, start=1):
        if index in labels:
            if '>' in token:
                raise MarkupError(f"tagged token {token!r} cannot contain '>'")
            out.append(f'<{labels[index]} {token}>')
        elif token.startswith('<'):
            out.append('\\' + token)
        else:
            out.append(token)
    return ' '.join(out)


def parse_script(name) -> Script:
    if isinstance(name, Script):
        script = name
    else:
        lookup = {s.value.lower(): s for s in Script}
        try:
            script = lookup[str(name).strip().lower()]
        except KeyError:
            raise ConfigError(f'unknown script {name!r}') from None
    if script not in NAMED_SCRIPTS:
        raise ConfigError(f'script must be one of {[s.value for s in NAMED_SCRIPTS]}, got {script.value}')
    return script


def auto_tag_by_script(tokens: Sequence, matrix_script, embedded_script) -> List[TokenTag]:
    """
    Tag every token written in the embedded script (inter-word) and every
    mixed-script token containing it (intra-word).

    Tokens without letters are never tagged.
    """
    matrix = parse_script(matrix_script)
    embedded = parse_script(embedded_script)
    if matrix is embedded:
        raise ConfigError('matrix and embedded scripts must differ for script tagging; use markup or annotations')

    intra_label = f'{matrix.value}+{embedded.value}'
    tags = []
    for index, token in enumerate(tokens, start=1):
        text = getattr(token, 'text', token)
        script = getattr(token, 'script', None) or classify_script(text)
        if script is embedded:
            tags.append(TokenTag(index, embedded.value, SwitchType.INTER_WORD, TagSource.SCRIPT))
        elif script is Script.MIXED and embedded in letter_scripts(text):
            tags.append(TokenTag(index, intra_label, SwitchType.INTRA_WORD, TagSource.SCRIPT))
    return tags


def load_annotations(content: str) -> Dict[str, List[TokenTag]]:
    """
    Parse a sidecar annotation TSV (``utt_id``, 1-based ``token_index``, ``label``).

    Blank lines are skipped. Tags of each utterance are sorted by index.
    """
    grouped: Dict[str, List[TokenTag]] = defaultdict(list)
    seen = set()
    for line_no, line in enumerate(content.split('\n'), start=1):
        line = line.rstrip('\r')
        if not line.strip():
            continue
        fields = line.split('\t')
        if len(fields) != 3:
            raise AnnotationError(f'expected 3 tab-separated fields, got {len(fields)}', line_no)
        utt_id, raw_index, label = fields
        if not utt_id:
            raise AnnotationError('empty utterance id', line_no)
        try:
            index = int(raw_index)
        except ValueError:
            raise AnnotationError(f'token index {raw_index!r} is not an integer', line_no) from None
        if index < 1:
            raise AnnotationError(f'token index must be positive, got {index}', line_no)
        if not _valid_label(label):
            raise AnnotationError(f'bad label {label!r}', line_no)
        if (utt_id, index) in seen:
            raise AnnotationError(f'duplicate annotation for {utt_id} token {index}', line_no)
        seen.add((utt_id, index))
        grouped[utt_id].append(TokenTag(index, label, switch_type_for_label(label), TagSource.ANNOTATION))
    return {utt_id: sorted(tags, key=lambda t: t.index) for utt_id, tags in grouped.items()}


_SELECTOR_ALIASES = {
    'all': 'all',
    'inter': 'inter_word',
    'inter_word': 'inter_word',
    'intra': 'intra_word',
    'intra_word': 'intra_word',
}


def parse_selector(selector: str) -> str:
    """Canonical selector name: ``all``, ``inter_word``, ``intra_word`` or ``lang:LABEL``."""
    if selector in _SELECTOR_ALIASES:
        return _SELECTOR_ALIASES[selector]
    if selector.startswith('lang:') and len(selector) > len('lang:'):
        return selector
    raise ConfigError(f'unknown selector {selector!r}; expected all, inter, intra or lang:LABEL')


def _passes(tag: TokenTag, selector: str) -> bool:
    if selector == 'all':
        return tag.switch_type is not SwitchType.NONE
    if selector == 'inter_word':
        return tag.switch_type is SwitchType.INTER_WORD
    if selector == 'intra_word':
        return tag.switch_type is SwitchType.INTRA_WORD
    return tag.lang == selector[len('lang:'):]


def build_interest_set(tags: Iterable[TokenTag], ref_len: int, selector: str = 'all') -> InterestSet:
    canonical = parse_selector(selector)
    indices = set()
    for tag in tags:
        if not 1 <= tag.index <= ref_len:
            raise ValueError(f'tag index {tag.index} outside reference of length {ref_len}')
        if _passes(tag, canonical):
            indices.add(tag.index)
    return InterestSet(tuple(sorted(indices)), ref_len, selector)
