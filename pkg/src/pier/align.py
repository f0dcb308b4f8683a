"""
Minimal-cost edit alignment between a reference and a hypothesis.

The alignment is computed over the full table of suffix distances and then
traced forward from the start of both sequences. At every cell the first
optimal step in the order match, substitution, deletion, insertion is taken,
which makes the trace deterministic and prefers consuming reference tokens.

Indices follow the convention of the error-operation triple
``(kind, i_src, i_res)`` and are 1-based. An insertion carries the index of
the *next* reference token (``len(ref) + 1`` after the last one), a deletion
the index of the next hypothesis token.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

__all__ = [
    'OpKind',
    'EditOp',
    'AlignmentTrace',
    'align',
    'error_ops',
    'apply_ops',
    'brute_force_distance',
]


class OpKind(str, enum.Enum):
    MATCH = 'match'
    SUBSTITUTION = 'substitution'
    INSERTION = 'insertion'
    DELETION = 'deletion'

    @property
    def code(self) -> str:
        return _CODES[self]

    def __str__(self):
        return self.value


_CODES = {
    OpKind.MATCH: 'C',
    OpKind.SUBSTITUTION: 'S',
    OpKind.INSERTION: 'I',
    OpKind.DELETION: 'D',
}

MATCH = OpKind.MATCH
SUB = OpKind.SUBSTITUTION
INS = OpKind.INSERTION
DEL = OpKind.DELETION


class EditOp(NamedTuple):
    kind: OpKind
    i_src: int
    i_res: int


@dataclass(frozen=True)
class AlignmentTrace:
    steps: Tuple[EditOp, ...]
    n_sub: int
    n_ins: int
    n_del: int
    n_match: int
    ref_len: int
    hyp_len: int

    @property
    def errors(self) -> int:
        return self.n_sub + self.n_ins + self.n_del


def _texts(tokens) -> list:
    return [getattr(t, 'text', t) for t in tokens]


def _suffix_table(ref: list, hyp: list) -> List[List[int]]:
    # table[i][j] == distance(ref[i:], hyp[j:])
    n, m = len(ref), len(hyp)
    table = [None] * (n + 1)
    below = list(range(m, -1, -1))
    table[n] = below
    for i in range(n - 1, -1, -1):
        r = ref[i]
        row = [0] * (m + 1)
        row[m] = n - i
        for j in range(m - 1, -1, -1):
            diag = below[j + 1]
            if r == hyp[j]:
                row[j] = diag
            else:
                v = diag
                if below[j] < v:
                    v = below[j]
                if row[j + 1] < v:
                    v = row[j + 1]
                row[j] = v + 1
        table[i] = row
        below = row
    return table


def align(ref: Sequence, hyp: Sequence) -> AlignmentTrace:
    """
    Align two token sequences with unit costs.

    Tokens may be `Token` objects or plain strings; they are compared by text.

    >>> [(op.kind.code, op.i_src, op.i_res) for op in align('abc', 'ac').steps]
    [('C', 1, 1), ('D', 2, 2), ('C', 3, 2)]
    """
    r = _texts(ref)
    h = _texts(hyp)
    n, m = len(r), len(h)
    table = _suffix_table(r, h)

    steps = []
    n_sub = n_ins = n_del = n_match = 0
    i = j = 0
    while i < n or j < m:
        if i < n and j < m:
            cost = table[i][j]
            nxt = table[i + 1]
            if r[i] == h[j]:
                # a match is always on an optimal path
                steps.append(EditOp(MATCH, i + 1, j + 1))
                n_match += 1
                i += 1
                j += 1
            elif nxt[j + 1] + 1 == cost:
                steps.append(EditOp(SUB, i + 1, j + 1))
                n_sub += 1
                i += 1
                j += 1
            elif nxt[j] + 1 == cost:
                steps.append(EditOp(DEL, i + 1, j + 1))
                n_del += 1
                i += 1
            else:
                steps.append(EditOp(INS, i + 1, j + 1))
                n_ins += 1
                j += 1
        elif i < n:
            steps.append(EditOp(DEL, i + 1, j + 1))
            n_del += 1
            i += 1
        else:
            steps.append(EditOp(INS, i + 1, j + 1))
            n_ins += 1
            j += 1

    return AlignmentTrace(tuple(steps), n_sub, n_ins, n_del, n_match, n, m)


def error_ops(trace: AlignmentTrace) -> List[EditOp]:
    return [op for op in trace.steps if op.kind is not MATCH]


def apply_ops(trace: AlignmentTrace, ref: Sequence, hyp: Sequence) -> list:
    """
    Replay `trace` on `ref`, taking emitted tokens from `hyp`.

    Used to check that a trace really transforms the reference into the
    hypothesis.
    """
    r = _texts(ref)
    h = _texts(hyp)
    out = []
    for kind, i_src, i_res in trace.steps:
        if kind is MATCH:
            out.append(r[i_src - 1])
        elif kind is SUB or kind is INS:
            out.append(h[i_res - 1])
    return out


BRUTE_FORCE_LIMIT = 8


@functools.lru_cache(maxsize=1 << 17)
def _brute(ref: tuple, hyp: tuple) -> int:
    if not ref:
        return len(hyp)
    if not hyp:
        return len(ref)
    return min(
        _brute(ref[1:], hyp[1:]) + (ref[0] != hyp[0]),
        _brute(ref[1:], hyp) + 1,
        _brute(ref, hyp[1:]) + 1,
    )


def brute_force_distance(ref: Sequence, hyp: Sequence) -> int:
    """
    Edit distance by exhaustive recursion over edit scripts.

    Test oracle only; refuses inputs longer than 8 tokens.
    """
    if len(ref) > BRUTE_FORCE_LIMIT or len(hyp) > BRUTE_FORCE_LIMIT:
        raise ValueError(f'brute force oracle is limited to {BRUTE_FORCE_LIMIT} tokens per side')
    return _brute(tuple(_texts(ref)), tuple(_texts(hyp)))
