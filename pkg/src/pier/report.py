"""
Per-utterance scoring, corpus pooling and output rendering.

Corpus rates are micro-averaged: numerators and denominators are summed over
utterances before dividing, exactly like corpus-level WER.
"""
from __future__ import annotations

import functools
import io
import json
import unicodedata
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .align import AlignmentTrace, EditOp, OpKind, align, error_ops
from .corpus import Utterance
from .metrics import METRIC_NAMES, MetricValue, cer, filter_ops_by_interest, mer, pier, wer
from .poi import InterestSet

__all__ = [
    'UtteranceScore',
    'CorpusReport',
    'parse_metrics',
    'score_utterance',
    'score_corpus',
    'aggregate',
    'render',
    'dump_alignment',
    'POOLED_ID',
]

POOLED_ID = 'POOLED'
FORMATS = ('text', 'tsv', 'structured')
TSV_COLUMNS = ('utt_id', 'metric', 'numerator', 'denominator', 'rate_pct', 'n_sub', 'n_ins', 'n_del')
_KINDS = ('substitution', 'insertion', 'deletion')


def parse_metrics(value) -> Tuple[str, ...]:
    """``'wer,pier'`` -> ``('wer', 'pier')``, validated and in canonical order."""
    names = [v.strip().lower() for v in value.split(',')] if isinstance(value, str) else list(value)
    names = [n for n in names if n]
    unknown = [n for n in names if n not in METRIC_NAMES]
    if unknown or not names:
        raise ValueError(f'unknown metric(s) {unknown or value!r}; choose from {", ".join(METRIC_NAMES)}')
    return tuple(n for n in METRIC_NAMES if n in names)


@dataclass(frozen=True)
class UtteranceScore:
    id: str
    wer: Optional[MetricValue] = None
    cer: Optional[MetricValue] = None
    mer: Optional[MetricValue] = None
    pier: Optional[MetricValue] = None
    interest_ops: Tuple[EditOp, ...] = ()
    alignment: Optional[AlignmentTrace] = None
    interest: Optional[InterestSet] = None
    ref_tokens: Tuple[str, ...] = ()
    hyp_tokens: Tuple[str, ...] = ()

    def metrics(self) -> Dict[str, MetricValue]:
        return {name: getattr(self, name) for name in METRIC_NAMES if getattr(self, name) is not None}


def score_utterance(utt: Utterance, metrics: Sequence[str] = ('wer', 'pier')) -> UtteranceScore:
    """
    Score one utterance. WER and PIER share one alignment of the corpus
    tokens; CER and MER realign the normalized text in their own units.

    PIER is only produced when the utterance has a non-empty interest set.
    """
    trace = align(utt.ref_tokens, utt.hyp_tokens)
    values = {}
    if 'wer' in metrics:
        values['wer'] = wer(trace)
    if 'cer' in metrics:
        values['cer'] = cer(utt.ref_text, utt.hyp_text)
    if 'mer' in metrics:
        values['mer'] = mer(utt.ref_text, utt.hyp_text)
    interest_ops = ()
    if 'pier' in metrics and utt.interest is not None and utt.interest.indices:
        interest_ops = tuple(filter_ops_by_interest(error_ops(trace), utt.interest))
        values['pier'] = pier(trace, utt.interest)
    return UtteranceScore(
        id=utt.id,
        interest_ops=interest_ops,
        alignment=trace,
        interest=utt.interest,
        ref_tokens=tuple(t.text for t in utt.ref_tokens),
        hyp_tokens=tuple(t.text for t in utt.hyp_tokens),
        **values,
    )


def score_corpus(utts: Sequence[Utterance], metrics: Sequence[str] = ('wer', 'pier'), jobs: int = 1) -> List[UtteranceScore]:
    """Score utterances, in input order, with up to `jobs` worker processes."""
    worker = functools.partial(score_utterance, metrics=tuple(metrics))
    if jobs <= 1 or len(utts) < 2:
        return [worker(u) for u in utts]
    chunksize = max(1, len(utts) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, utts, chunksize=chunksize))


@dataclass(frozen=True)
class CorpusReport:
    per_utt: Tuple[UtteranceScore, ...]
    pooled: Dict[str, MetricValue]
    metrics: Tuple[str, ...] = METRIC_NAMES
    skipped_monolingual: int = 0
    skipped_empty_ref: int = 0
    missing_hyp_warnings: int = 0
    breakdown_at_poi: Dict[str, int] = field(default_factory=lambda: dict.fromkeys(_KINDS, 0))
    config_echo: dict = field(default_factory=dict)


def aggregate(
        scores: Iterable[UtteranceScore],
        metrics: Optional[Sequence[str]] = None,
        *,
        skipped_monolingual: int = 0,
        skipped_empty_ref: int = 0,
        missing_hyp_warnings: int = 0,
        config: Optional[dict] = None,
) -> CorpusReport:
    scores = tuple(scores)
    if metrics is None:
        metrics = tuple(n for n in METRIC_NAMES if any(getattr(s, n) is not None for s in scores))
    pooled = {}
    for name in metrics:
        values = [getattr(s, name) for s in scores if getattr(s, name) is not None]
        if values:
            pooled[name] = functools.reduce(lambda a, b: a + b, values)
    breakdown = dict.fromkeys(_KINDS, 0)
    for s in scores:
        for op in s.interest_ops:
            breakdown[op.kind.value] += 1
    return CorpusReport(
        per_utt=scores,
        pooled=pooled,
        metrics=tuple(metrics),
        skipped_monolingual=skipped_monolingual,
        skipped_empty_ref=skipped_empty_ref,
        missing_hyp_warnings=missing_hyp_warnings,
        breakdown_at_poi=breakdown,
        config_echo=dict(config or {}),
    )


def _pct(value: MetricValue) -> str:
    return f'{value.percent:.2f}'


def _metric_dict(value: MetricValue) -> dict:
    return {
        'numerator': value.numerator,
        'denominator': value.denominator,
        'rate': value.numerator / value.denominator,
        'rate_pct': round(value.percent, 2),
        'n_sub': value.n_sub,
        'n_ins': value.n_ins,
        'n_del': value.n_del,
    }


def _op_list(ops: Iterable[EditOp]) -> list:
    return [[op.kind.code, op.i_src, op.i_res] for op in ops]


def to_structured(report: CorpusReport) -> dict:
    config = dict(report.config_echo)
    config['metrics'] = list(report.metrics)
    return {
        'config': config,
        'pooled': {name: _metric_dict(v) for name, v in report.pooled.items()},
        'per_utt': [
            {
                'id': s.id,
                'metrics': {name: _metric_dict(v) for name, v in s.metrics().items()},
                'interest': list(s.interest.indices) if s.interest is not None else None,
                'interest_ops': _op_list(s.interest_ops),
                'alignment': _op_list(s.alignment.steps) if s.alignment is not None else None,
            }
            for s in report.per_utt
        ],
        'skipped': {
            'monolingual': report.skipped_monolingual,
            'empty_ref': report.skipped_empty_ref,
            'missing_hyp': report.missing_hyp_warnings,
        },
        'breakdown_at_poi': dict(report.breakdown_at_poi),
    }


def _render_text(report: CorpusReport, per_utt: bool, color: bool) -> str:
    bold, reset = ('\033[1m', '\033[0m') if color else ('', '')
    out = io.StringIO()
    header = f'{"":<6}{"Rate":<8}{"Errors":>8}{"Ref":>8}{"Sub":>7}{"Ins":>7}{"Del":>7}'
    out.write(f'{bold}{header}{reset}\n')
    for name in report.metrics:
        value = report.pooled.get(name)
        if value is None:
            out.write(f'{name.upper():<6}{"n/a":<8}\n')
            continue
        out.write(f'{name.upper():<6}{_pct(value):<8}{value.numerator:>8}{value.denominator:>8}'
                  f'{value.n_sub:>7}{value.n_ins:>7}{value.n_del:>7}\n')
    out.write('\n')
    out.write(f'utterances scored          {len(report.per_utt)}\n')
    out.write(f'skipped (monolingual)      {report.skipped_monolingual}\n')
    out.write(f'skipped (empty reference)  {report.skipped_empty_ref}\n')
    out.write(f'missing hypotheses         {report.missing_hyp_warnings}\n')
    if 'pier' in report.metrics:
        b = report.breakdown_at_poi
        out.write(f'errors at points of interest  sub {b["substitution"]}  ins {b["insertion"]}  del {b["deletion"]}\n')

    if per_utt and report.per_utt:
        out.write('\n')
        width = max(len('utt_id'), max(len(s.id) for s in report.per_utt))
        cols = ''.join(f'{name.upper():>18}' for name in report.metrics)
        out.write(f'{bold}{"utt_id":<{width}}{cols}{reset}\n')
        for s in report.per_utt:
            cells = []
            for name in report.metrics:
                v = getattr(s, name)
                cells.append(f'{"-":>18}' if v is None else f'{_pct(v) + f" ({v.numerator}/{v.denominator})":>18}')
            out.write(f'{s.id:<{width}}{"".join(cells)}\n')
    return out.getvalue()


def _render_tsv(report: CorpusReport) -> str:
    rows = ['\t'.join(TSV_COLUMNS)]

    def row(utt_id, name, v):
        return '\t'.join(map(str, (utt_id, name, v.numerator, v.denominator, _pct(v), v.n_sub, v.n_ins, v.n_del)))

    for s in report.per_utt:
        for name in report.metrics:
            v = getattr(s, name)
            if v is not None:
                rows.append(row(s.id, name, v))
    for name in report.metrics:
        if name in report.pooled:
            rows.append(row(POOLED_ID, name, report.pooled[name]))
    return '\n'.join(rows) + '\n'


def render(report: CorpusReport, fmt: str = 'text', *, per_utt: bool = False, color: bool = False) -> str:
    """Render a report as ``text``, ``tsv`` or ``structured`` (JSON)."""
    if fmt == 'text':
        return _render_text(report, per_utt, color)
    if fmt == 'tsv':
        return _render_tsv(report)
    if fmt == 'structured':
        return json.dumps(to_structured(report), indent=2, ensure_ascii=False) + '\n'
    raise ValueError(f'unknown format {fmt!r}, expected one of {FORMATS}')


def _display_width(text: str) -> int:
    return sum(2 if unicodedata.east_asian_width(c) in 'WF' else 0 if unicodedata.combining(c) else 1 for c in text)


def _pad(text: str, width: int) -> str:
    return text + ' ' * (width - _display_width(text))


def dump_alignment(score: UtteranceScore) -> str:
    """
    Three aligned rows (REF, HYP, OPS). Op codes are C, S, I, D; a ``*``
    marks columns at points of interest, including trailing insertions
    counted against the last reference token.
    """
    marked = set(score.interest_ops)
    interest = set(score.interest.indices) if score.interest is not None else set()
    ref_row, hyp_row, ops_row = [], [], []
    for op in score.alignment.steps:
        ref = score.ref_tokens[op.i_src - 1] if op.kind is not OpKind.INSERTION else ''
        hyp = score.hyp_tokens[op.i_res - 1] if op.kind is not OpKind.DELETION else ''
        star = op in marked or (op.kind is OpKind.MATCH and op.i_src in interest)
        code = op.kind.code + ('*' if star else '')
        width = max(_display_width(ref), _display_width(hyp), len(code))
        ref_row.append(_pad(ref, width))
        hyp_row.append(_pad(hyp, width))
        ops_row.append(_pad(code, width))

    summary = '  '.join(f'{name.upper()} {_pct(v)}' for name, v in score.metrics().items())
    lines = [
        f'{score.id}  {summary}'.rstrip(),
        ('REF: ' + ' '.join(ref_row)).rstrip(),
        ('HYP: ' + ' '.join(hyp_row)).rstrip(),
        ('OPS: ' + ' '.join(ops_row)).rstrip(),
    ]
    return '\n'.join(lines) + '\n'
