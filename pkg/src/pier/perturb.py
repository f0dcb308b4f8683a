"""
Synthetic error injection.

Hypotheses are made from references by substituting, deleting or inserting
tokens at a configured rate, either everywhere, only at points of interest or
only away from them. Replacement tokens come from a lexicon that shares no
token with the corpus, so the minimal alignment of a perturbed hypothesis is
easy to reason about and expected error rates follow in closed form.

Each utterance has its own random stream keyed by (seed, utterance id), so
results do not depend on corpus order or on parallelism.
"""
from __future__ import annotations

import dataclasses
import hashlib
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from .corpus import Corpus, Utterance
from .errors import ConfigError
from .metrics import MetricValue
from .poi import InterestSet, SwitchType, TagSource, TokenTag, render_markup
from .report import aggregate, score_corpus
from .textnorm import tokenize_words

__all__ = [
    'TARGETS',
    'PerturbSpec',
    'PerturbProfile',
    'inject_errors',
    'perturb_corpus',
    'DivergenceResult',
    'divergence_demo',
    'fresh_lexicon',
    'make_synthetic_corpus',
    'parse_config',
]

TARGETS = ('interest_only', 'non_interest_only', 'all')


@dataclass(frozen=True)
class PerturbSpec:
    p_sub: float = 0.0
    p_del: float = 0.0
    p_ins: float = 0.0
    target: str = 'all'
    seed: int = 0
    lexicon: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'lexicon', tuple(self.lexicon))
        for name in ('p_sub', 'p_del', 'p_ins'):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f'{name} must lie in [0, 1], got {p}')
        if self.p_sub + self.p_del > 1.0 + 1e-12:
            raise ConfigError(f'p_sub + p_del must not exceed 1 (got {self.p_sub} + {self.p_del})')
        if self.target not in TARGETS:
            raise ConfigError(f'target must be one of {TARGETS}, got {self.target!r}')
        if (self.p_sub > 0 or self.p_ins > 0) and not self.lexicon:
            raise ConfigError('a non-empty lexicon is required for substitutions and insertions')
        for token in self.lexicon:
            if not token or any(c.isspace() for c in token):
                raise ConfigError(f'lexicon entries must be non-empty single tokens, got {token!r}')


@dataclass(frozen=True)
class PerturbProfile:
    """
    Several specs with non-overlapping targets applied in one pass, e.g. a
    low rate away from points of interest and a high rate at them.

    Randomness comes from the first part's seed.
    """
    parts: Tuple[PerturbSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, 'parts', tuple(self.parts))
        if not self.parts:
            raise ConfigError('a perturbation profile needs at least one spec')
        targets = [p.target for p in self.parts]
        if len(set(targets)) != len(targets) or ('all' in targets and len(targets) > 1):
            raise ConfigError(f'profile targets must not overlap, got {targets}')

    @property
    def seed(self) -> int:
        return self.parts[0].seed

    @property
    def lexicon(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(t for p in self.parts for t in p.lexicon))


def _as_profile(spec) -> PerturbProfile:
    return spec if isinstance(spec, PerturbProfile) else PerturbProfile((spec,))


def _rng(seed: int, utt_id: str) -> random.Random:
    digest = hashlib.sha256(f'{seed}\x00{utt_id}'.encode('utf-8')).digest()
    return random.Random(int.from_bytes(digest[:8], 'big'))


def _covers(target: str, index: int, chosen) -> bool:
    if target == 'all':
        return True
    return (index in chosen) == (target == 'interest_only')


def inject_errors(utt: Utterance, spec) -> List[str]:
    """
    Perturbed hypothesis tokens for one utterance.

    Every eligible reference position is substituted with probability
    ``p_sub`` or deleted with probability ``p_del`` (never both), and
    independently followed by an inserted token with probability ``p_ins``.
    `spec` is a `PerturbSpec` or a `PerturbProfile`.
    """
    profile = _as_profile(spec)
    if utt.interest is None and any(p.target != 'all' for p in profile.parts):
        raise ConfigError(f'utterance {utt.id!r} has no interest set, required for targeted perturbation')
    ref = [t.text for t in utt.ref_tokens]
    clash = set(profile.lexicon).intersection(ref)
    if clash:
        raise ConfigError(f'lexicon shares tokens with utterance {utt.id!r}: {sorted(clash)[:5]}')

    rng = _rng(profile.seed, utt.id)
    chosen = set(utt.interest.indices) if utt.interest is not None else set()
    out = []
    for index, token in enumerate(ref, start=1):
        part = next((p for p in profile.parts if _covers(p.target, index, chosen)), None)
        if part is None:
            out.append(token)
            continue
        u = rng.random()
        if u < part.p_sub:
            out.append(rng.choice(part.lexicon))
        elif u >= part.p_sub + part.p_del:
            out.append(token)
        if rng.random() < part.p_ins:
            out.append(rng.choice(part.lexicon))
    return out


def perturb_corpus(utts: Iterable[Utterance], spec) -> List[Utterance]:
    """Copies of `utts` whose hypotheses are replaced by injected errors."""
    perturbed = []
    for utt in utts:
        hyp_text = ' '.join(inject_errors(utt, spec))
        perturbed.append(dataclasses.replace(
            utt,
            hyp_tokens=tuple(tokenize_words(hyp_text)),
            raw_hyp=hyp_text,
            hyp_text=hyp_text,
        ))
    return perturbed


@dataclass(frozen=True)
class DivergenceResult:
    wer_a: MetricValue
    pier_a: MetricValue
    wer_b: MetricValue
    pier_b: MetricValue

    @property
    def wer_delta(self) -> float:
        return self.wer_b.percent - self.wer_a.percent

    @property
    def pier_delta(self) -> float:
        return self.pier_b.percent - self.pier_a.percent

    @property
    def diverges(self) -> bool:
        """WER improves while PIER gets worse."""
        return self.wer_b.rate < self.wer_a.rate and self.pier_b.rate > self.pier_a.rate

    def table(self) -> str:
        rows = [
            f'{"":<6}{"A":>9}{"B":>9}{"delta":>9}',
            f'{"WER":<6}{self.wer_a.percent:>9.2f}{self.wer_b.percent:>9.2f}{self.wer_delta:>+9.2f}',
            f'{"PIER":<6}{self.pier_a.percent:>9.2f}{self.pier_b.percent:>9.2f}{self.pier_delta:>+9.2f}',
        ]
        return '\n'.join(rows) + '\n'


def divergence_demo(corpus: Iterable[Utterance], spec_a, spec_b, jobs: int = 1) -> DivergenceResult:
    """Score the same references under two perturbation specs or profiles."""
    utts = [u for u in corpus if u.interest is not None and u.interest.indices]
    if not utts:
        raise ConfigError('divergence demo needs utterances with points of interest')
    pooled = []
    for spec in (spec_a, spec_b):
        report = aggregate(score_corpus(perturb_corpus(utts, spec), ('wer', 'pier'), jobs=jobs), ('wer', 'pier'))
        pooled.append(report.pooled)
    a, b = pooled
    return DivergenceResult(a['wer'], a['pier'], b['wer'], b['pier'])


def fresh_lexicon(vocabulary: Iterable[str], size: int = 100, prefix: str = 'zz') -> Tuple[str, ...]:
    """`size` replacement tokens guaranteed absent from `vocabulary`."""
    vocab = set(vocabulary)
    out = []
    k = 0
    while len(out) < size:
        token = f'{prefix}{k:04d}'
        if token not in vocab:
            out.append(token)
        k += 1
    return tuple(out)


def make_synthetic_corpus(
        n_utts: int = 1000,
        n_tokens: int = 10,
        n_interest: int = 1,
        seed: int = 0,
        label: str = 'EN',
        vocab_size: int = 200,
) -> Corpus:
    """
    Random code-switched corpus with known points of interest.

    Matrix words are ``m<k>``, embedded words ``e<k>``; words are distinct
    within an utterance so every perturbation aligns unambiguously.
    ``raw_ref`` holds the markup form of each reference.
    """
    if not 0 <= n_interest <= n_tokens:
        raise ConfigError('n_interest must lie between 0 and n_tokens')
    if n_tokens > vocab_size:
        raise ConfigError('vocab_size must be at least n_tokens')
    rng = random.Random(seed)
    width = len(str(n_utts - 1))
    utts = []
    for u in range(n_utts):
        positions = set(rng.sample(range(1, n_tokens + 1), n_interest))
        matrix = iter(rng.sample(range(vocab_size), n_tokens))
        embedded = iter(rng.sample(range(vocab_size), n_tokens))
        words = [f'e{next(embedded)}' if i in positions else f'm{next(matrix)}' for i in range(1, n_tokens + 1)]
        tags = tuple(TokenTag(i, label, SwitchType.INTER_WORD, TagSource.MARKUP) for i in sorted(positions))
        text = ' '.join(words)
        tokens = tuple(tokenize_words(text))
        utts.append(Utterance(
            id=f'syn{u:0{width}d}',
            ref_tokens=tokens,
            hyp_tokens=tokens,
            raw_ref=render_markup(words, tags),
            raw_hyp=text,
            ref_text=text,
            hyp_text=text,
            tags=tags,
            interest=InterestSet(tuple(sorted(positions)), n_tokens, 'all'),
        ))
    return Corpus(tuple(utts))


def parse_config(text: str) -> Dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f'line {line_no}: expected key=value, got {line!r}')
        key, value = (part.strip() for part in line.split('=', 1))
        out[key.replace('-', '_')] = value
    return out
