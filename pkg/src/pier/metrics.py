"""
Error rates over alignment traces.

All rates are exact: a `MetricValue` keeps the integer numerator and
denominator and exposes the rate as a `fractions.Fraction`. Rates may exceed
1 because insertions are counted.

PIER keeps the error operations whose reference index is a point of
interest. When the last reference token is a point of interest, operations
past the end of the reference (trailing insertions) are kept as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence

from .align import AlignmentTrace, EditOp, OpKind, align, error_ops
from .errors import UndefinedMetricError
from .poi import InterestSet
from .textnorm import tokenize_chars, tokenize_mixed

__all__ = [
    'MetricValue',
    'wer',
    'cer',
    'mer',
    'filter_ops_by_interest',
    'pier',
    'METRIC_NAMES',
]

METRIC_NAMES = ('wer', 'cer', 'mer', 'pier')


@dataclass(frozen=True)
class MetricValue:
    numerator: int
    denominator: int
    n_sub: int = 0
    n_ins: int = 0
    n_del: int = 0

    def __post_init__(self):
        if self.denominator <= 0:
            raise UndefinedMetricError('metric denominator must be positive')
        if self.numerator != self.n_sub + self.n_ins + self.n_del:
            raise ValueError(
                f'numerator {self.numerator} != sub {self.n_sub} + ins {self.n_ins} + del {self.n_del}')

    @classmethod
    def from_ops(cls, ops: Iterable[EditOp], denominator: int) -> 'MetricValue':
        counts = {OpKind.SUBSTITUTION: 0, OpKind.INSERTION: 0, OpKind.DELETION: 0}
        for op in ops:
            counts[op.kind] += 1
        return cls(
            sum(counts.values()), denominator,
            counts[OpKind.SUBSTITUTION], counts[OpKind.INSERTION], counts[OpKind.DELETION],
        )

    @property
    def rate(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def percent(self) -> float:
        return 100 * self.numerator / self.denominator

    @property
    def breakdown(self) -> dict:
        return {'substitution': self.n_sub, 'insertion': self.n_ins, 'deletion': self.n_del}

    def __add__(self, other: 'MetricValue') -> 'MetricValue':
        if not isinstance(other, MetricValue):
            return NotImplemented
        return MetricValue(
            self.numerator + other.numerator,
            self.denominator + other.denominator,
            self.n_sub + other.n_sub,
            self.n_ins + other.n_ins,
            self.n_del + other.n_del,
        )


def wer(trace: AlignmentTrace) -> MetricValue:
    if trace.ref_len == 0:
        raise UndefinedMetricError('error rate is undefined for an empty reference')
    return MetricValue(trace.errors, trace.ref_len, trace.n_sub, trace.n_ins, trace.n_del)


def cer(ref_text: str, hyp_text: str) -> MetricValue:
    """Character error rate; whitespace is ignored on both sides."""
    return wer(align(tokenize_chars(ref_text), tokenize_chars(hyp_text)))


def mer(ref_text: str, hyp_text: str) -> MetricValue:
    """Mixed error rate: Han characters and non-Han words as units."""
    return wer(align(tokenize_mixed(ref_text), tokenize_mixed(hyp_text)))


def filter_ops_by_interest(ops: Sequence[EditOp], interest: InterestSet) -> List[EditOp]:
    if not interest.indices:
        raise UndefinedMetricError('interest set is empty')
    keep = set(interest.indices)
    trailing = interest.covers_last
    ref_len = interest.ref_len
    return [op for op in ops if op.i_src in keep or (trailing and op.i_src > ref_len)]


def pier(trace: AlignmentTrace, interest: InterestSet) -> MetricValue:
    if trace.ref_len != interest.ref_len:
        raise ValueError(f'interest set built for {interest.ref_len} tokens, trace has {trace.ref_len}')
    kept = filter_ops_by_interest(error_ops(trace), interest)
    return MetricValue.from_ops(kept, len(interest))
