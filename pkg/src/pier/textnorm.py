"""
Transcript normalization and tokenization.

Three token units are supported: words (whitespace runs), characters
(whitespace removed) and mixed units, where Han characters stand alone and
everything else is grouped into words. Every token carries the writing
script of its letters so that points of interest can be found automatically
for language pairs that differ in script.
"""
from __future__ import annotations

import enum
import functools
import unicodedata
from dataclasses import dataclass, field
from typing import Iterator, List, Tuple

import regex

__all__ = [
    'Script',
    'NormConfig',
    'Token',
    'normalize',
    'tokenize',
    'tokenize_words',
    'tokenize_chars',
    'tokenize_mixed',
    'classify_script',
    'letter_scripts',
    'TOKENIZERS',
]


class Script(str, enum.Enum):
    LATIN = 'Latin'
    HAN = 'Han'
    ARABIC = 'Arabic'
    COMMON = 'Common'
    MIXED = 'Mixed'
    # letters from a script outside the three above (Cyrillic, Devanagari, ...)
    OTHER = 'Other'

    def __str__(self):
        return self.value


NAMED_SCRIPTS = (Script.LATIN, Script.HAN, Script.ARABIC)

_SCRIPT_PATTERN = regex.compile(r'(\p{Script=Latin})|(\p{Script=Han})|(\p{Script=Arabic})')
_HAN = regex.compile(r'\p{Script=Han}')

# Kept by strip_punct when both neighbours are word material.
_JOINERS = frozenset("'’-‐‑")


@dataclass(frozen=True)
class NormConfig:
    lowercase: bool = True
    strip_punct: bool = True


@dataclass(frozen=True)
class Token:
    text: str
    script: Script = field(default=None, compare=False)
    source_span: Tuple[int, int] = field(default=(0, 0), compare=False)

    def __post_init__(self):
        if not self.text:
            raise ValueError('token text must be non-empty')
        if self.script is None:
            object.__setattr__(self, 'script', classify_script(self.text))

    def __str__(self):
        return self.text


def _is_punct(char: str) -> bool:
    return unicodedata.category(char).startswith('P')


def _strip_punct(text: str) -> str:
    out = []
    last = len(text) - 1
    for i, char in enumerate(text):
        if not _is_punct(char):
            out.append(char)
            continue
        if char in _JOINERS and 0 < i < last:
            before, after = text[i - 1], text[i + 1]
            if not (before.isspace() or after.isspace() or _is_punct(before) or _is_punct(after)):
                out.append(char)
    return ''.join(out)


def normalize(raw: str, config: NormConfig = NormConfig()) -> str:
    """
    Canonically compose, optionally lowercase and strip punctuation, then
    collapse whitespace.

    >>> normalize('  Das  MIT ', NormConfig(lowercase=True, strip_punct=False))
    'das mit'
    >>> normalize("don't stop!")
    "don't stop"
    """
    text = unicodedata.normalize('NFC', raw)
    if config.lowercase:
        text = text.lower()
    if config.strip_punct:
        text = _strip_punct(text)
    # lowercasing and punctuation removal can expose new composition pairs
    text = unicodedata.normalize('NFC', text)
    return ' '.join(text.split())


@functools.lru_cache(maxsize=4096)
def _char_script(char: str) -> Script | None:
    if not unicodedata.category(char).startswith('L'):
        return None
    m = _SCRIPT_PATTERN.match(char)
    if m is None:
        return Script.OTHER
    return NAMED_SCRIPTS[m.lastindex - 1]


def letter_scripts(text: str) -> frozenset:
    """Set of scripts of the letters in `text` (Script.OTHER for unnamed scripts)."""
    return frozenset(s for s in map(_char_script, text) if s is not None)


def classify_script(text: str) -> Script:
    scripts = letter_scripts(text)
    if not scripts:
        return Script.COMMON
    named = scripts.intersection(NAMED_SCRIPTS)
    if len(named) >= 2:
        return Script.MIXED
    if len(scripts) == 1 and named:
        return next(iter(named))
    return Script.OTHER


def _token(text: str, start: int, end: int) -> Token:
    return Token(text, classify_script(text), (start, end))


def _runs(text: str) -> Iterator[Tuple[int, int]]:
    start = None
    for i, char in enumerate(text):
        if char.isspace():
            if start is not None:
                yield start, i
                start = None
        elif start is None:
            start = i
    if start is not None:
        yield start, len(text)


def tokenize_words(text: str) -> List[Token]:
    return [_token(text[s:e], s, e) for s, e in _runs(text)]


def tokenize_chars(text: str) -> List[Token]:
    return [_token(char, i, i + 1) for i, char in enumerate(text) if not char.isspace()]


def tokenize_mixed(text: str) -> List[Token]:
    """Han characters become single tokens, other non-space runs stay whole."""
    tokens = []
    for s, e in _runs(text):
        run_start = s
        for i in range(s, e):
            if _HAN.match(text[i]):
                if run_start < i:
                    tokens.append(_token(text[run_start:i], run_start, i))
                tokens.append(_token(text[i], i, i + 1))
                run_start = i + 1
        if run_start < e:
            tokens.append(_token(text[run_start:e], run_start, e))
    return tokens


TOKENIZERS = {
    'word': tokenize_words,
    'char': tokenize_chars,
    'mixed': tokenize_mixed,
}


def tokenize(text: str, mode: str = 'word') -> List[Token]:
    try:
        return TOKENIZERS[mode](text)
    except KeyError:
        raise ValueError(f'unknown tokenizer mode {mode!r}, expected one of {sorted(TOKENIZERS)}') from None
