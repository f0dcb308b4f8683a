"""
Command line entry point.

    pier score   --ref REF.tsv --hyp HYP.tsv [--metrics wer,pier] [--poi markup] ...
    pier inspect --ref REF.tsv --hyp HYP.tsv (--utt ID ... | --worst N)
    pier tag     --ref REF.tsv [--poi script:Han-Latin]
    pier perturb --ref REF.tsv --p-sub 0.1 --seed 1 [--target interest_only]

Exit status: 0 on success, 1 for input or scoring errors, 2 for usage errors.
Reports go to standard output, diagnostics to standard error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from collections import Counter
from pathlib import Path
from typing import List, Optional

from .corpus import CorpusSpec, filter_scoreable, load_pairs, parse_poi_mode
from .errors import ConfigError, PierError
from .perturb import TARGETS, PerturbSpec, fresh_lexicon, inject_errors, parse_config
from .poi import parse_selector
from .report import FORMATS, aggregate, dump_alignment, parse_metrics, render, score_corpus, score_utterance
from .textnorm import NormConfig

logger = logging.getLogger('pier')


class UsageError(Exception):
    pass


def _arg_type(parse, what):
    def convert(value):
        try:
            parse(value)
        except (PierError, ValueError) as e:
            raise argparse.ArgumentTypeError(f'invalid {what}: {e}') from None
        return value
    convert.__name__ = what
    return convert


def _positive_int(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {value}')
    return n


def _add_corpus_args(p: argparse.ArgumentParser, hyp: bool):
    p.add_argument('--ref', required=True, metavar='PATH', help='reference TSV (utt_id<TAB>text)')
    if hyp:
        p.add_argument('--hyp', required=True, metavar='PATH', help='hypothesis TSV (utt_id<TAB>text)')
    p.add_argument('--tokenizer', choices=('word', 'char', 'mixed'), default='word',
                   help='token unit for WER and PIER (default: word)')
    p.add_argument('--poi', default='markup', type=_arg_type(parse_poi_mode, 'poi mode'),
                   help='points of interest: markup, script:MATRIX-EMBEDDED, annot:PATH or none (default: markup)')
    p.add_argument('--select', default='all', type=_arg_type(parse_selector, 'selector'),
                   help='which tagged points count: all, inter, intra or lang:LABEL (default: all)')
    p.add_argument('--lowercase', action=argparse.BooleanOptionalAction, default=True,
                   help='lowercase transcripts (default: on)')
    p.add_argument('--strip-punct', action=argparse.BooleanOptionalAction, default=True,
                   help='remove punctuation, keeping word-internal apostrophes and hyphens (default: on)')


def _spec(args, hyp: bool = True) -> CorpusSpec:
    return CorpusSpec(
        ref_path=args.ref,
        hyp_path=args.hyp if hyp else None,
        tokenizer_mode=args.tokenizer,
        norm=NormConfig(lowercase=args.lowercase, strip_punct=args.strip_punct),
        poi_mode=args.poi,
        selector=args.select,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='pier',
        description='Code-switching ASR scoring: WER, CER, MER and point-of-interest error rate (PIER).',
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    p = sub.add_parser('score', help='score a hypothesis corpus against references')
    _add_corpus_args(p, hyp=True)
    p.add_argument('--metrics', default='wer,pier', type=_arg_type(parse_metrics, 'metric list'),
                   help='comma-separated subset of wer,cer,mer,pier (default: wer,pier)')
    p.add_argument('--format', choices=FORMATS, default='text')
    p.add_argument('--per-utt', action='store_true', help='include a per-utterance table in text output')
    p.add_argument('--jobs', type=_positive_int, default=1, help='worker processes for scoring')
    p.set_defaults(func=run_score, parser=p)

    p = sub.add_parser('inspect', help='print alignments of selected utterances')
    _add_corpus_args(p, hyp=True)
    p.add_argument('--utt', action='append', default=[], metavar='ID', help='utterance id (repeatable)')
    p.add_argument('--worst', type=_positive_int, metavar='N', help='the N utterances with the highest PIER')
    p.add_argument('--jobs', type=_positive_int, default=1)
    p.set_defaults(func=run_inspect, parser=p)

    p = sub.add_parser('tag', help='list points of interest found in the references')
    _add_corpus_args(p, hyp=False)
    p.set_defaults(func=run_tag, parser=p)

    p = sub.add_parser('perturb', help='write a hypothesis TSV with synthetic errors')
    _add_corpus_args(p, hyp=False)
    p.add_argument('--config', metavar='PATH', help='key=value file with p_sub, p_del, p_ins, target, seed, lexicon')
    p.add_argument('--p-sub', type=float)
    p.add_argument('--p-del', type=float)
    p.add_argument('--p-ins', type=float)
    p.add_argument('--seed', type=int)
    p.add_argument('--target', choices=TARGETS)
    p.add_argument('--lexicon', metavar='PATH',
                   help='replacement tokens, one per line (default: generated tokens absent from the corpus)')
    p.set_defaults(func=run_perturb, parser=p)
    return parser


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get('PIER_NO_COLOR')


def run_score(args) -> int:
    metrics = parse_metrics(args.metrics)
    if 'pier' in metrics and parse_poi_mode(args.poi).kind == 'none':
        raise UsageError('PIER needs points of interest; use --poi markup, script:X-Y or annot:PATH')
    spec = _spec(args)
    corpus = load_pairs(spec)
    kept, mono, empty = filter_scoreable(corpus.utterances)
    scores = score_corpus(kept, metrics, jobs=args.jobs)
    config = spec.to_dict()
    report = aggregate(
        scores, metrics,
        skipped_monolingual=mono,
        skipped_empty_ref=empty,
        missing_hyp_warnings=corpus.missing_hyp,
        config=config,
    )
    sys.stdout.write(render(report, args.format, per_utt=args.per_utt, color=_use_color()))
    return 0


def run_inspect(args) -> int:
    if not args.utt and args.worst is None:
        raise UsageError('give --utt ID or --worst N')
    if args.worst is not None and parse_poi_mode(args.poi).kind == 'none':
        raise UsageError('--worst ranks by PIER and needs points of interest')
    corpus = load_pairs(_spec(args))
    by_id = corpus.by_id()
    unknown = [u for u in args.utt if u not in by_id]
    if unknown:
        raise PierError(f'unknown utterance id(s): {", ".join(unknown)}')

    def score(utt):
        metrics = ('wer', 'pier') if utt.ref_tokens else ()
        return score_utterance(utt, metrics)

    selected = [score(by_id[u]) for u in args.utt]
    if args.worst is not None:
        kept, _, _ = filter_scoreable(corpus.utterances)
        scores = [s for s in score_corpus(kept, ('wer', 'pier'), jobs=args.jobs) if s.pier is not None]
        scores.sort(key=lambda s: (-s.pier.rate, s.id))
        selected.extend(scores[:args.worst])
    sys.stdout.write('\n'.join(dump_alignment(s) for s in selected))
    return 0


def run_tag(args) -> int:
    poi = parse_poi_mode(args.poi)
    if poi.kind == 'none':
        raise UsageError('tag needs --poi markup, script:X-Y or annot:PATH')
    corpus = load_pairs(_spec(args, hyp=False))
    out = sys.stdout
    out.write('utt_id\tindex\ttoken\tlabel\tswitch_type\tsource\tselected\n')
    totals = Counter()
    monolingual = 0
    for utt in corpus:
        chosen = set(utt.interest.indices)
        if not chosen:
            monolingual += 1
        for tag in utt.tags:
            totals[tag.switch_type.value] += 1
            token = utt.ref_tokens[tag.index - 1].text
            out.write(f'{utt.id}\t{tag.index}\t{token}\t{tag.lang}\t{tag.switch_type}\t{tag.source}\t'
                      f'{"yes" if tag.index in chosen else "no"}\n')
    out.write('\n')
    out.write(f'utterances\t{len(corpus)}\n')
    out.write(f'with_interest\t{len(corpus) - monolingual}\n')
    out.write(f'monolingual\t{monolingual}\n')
    for kind in ('inter_word', 'intra_word', 'none'):
        out.write(f'{kind}\t{totals[kind]}\n')
    return 0


def _perturb_spec(args, corpus) -> PerturbSpec:
    values = {}
    if args.config:
        try:
            values = parse_config(Path(args.config).read_text(encoding='utf-8'))
        except OSError as e:
            raise PierError(f'cannot read config {args.config}: {e}') from e
        unknown = set(values) - {'p_sub', 'p_del', 'p_ins', 'target', 'seed', 'lexicon'}
        if unknown:
            raise UsageError(f'unknown config keys: {", ".join(sorted(unknown))}')
    for key in ('p_sub', 'p_del', 'p_ins', 'target', 'seed', 'lexicon'):
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    try:
        rates = {k: float(values.get(k, 0.0)) for k in ('p_sub', 'p_del', 'p_ins')}
        seed = int(values.get('seed', 0))
    except ValueError as e:
        raise UsageError(f'bad perturbation setting: {e}') from None

    lexicon_path = values.get('lexicon')
    if lexicon_path:
        try:
            lexicon = tuple(line.strip() for line in Path(lexicon_path).read_text(encoding='utf-8').splitlines() if line.strip())
        except OSError as e:
            raise PierError(f'cannot read lexicon {lexicon_path}: {e}') from e
    else:
        lexicon = fresh_lexicon({t.text for u in corpus for t in u.ref_tokens})
    try:
        return PerturbSpec(target=values.get('target', 'all'), seed=seed, lexicon=lexicon, **rates)
    except ConfigError as e:
        raise UsageError(str(e)) from None


def run_perturb(args) -> int:
    corpus = load_pairs(_spec(args, hyp=False))
    spec = _perturb_spec(args, corpus)
    if spec.target != 'all' and parse_poi_mode(args.poi).kind == 'none':
        raise UsageError(f'target {spec.target} needs points of interest')
    lines = [f'{utt.id}\t{" ".join(inject_errors(utt, spec))}\n' for utt in corpus]
    sys.stdout.write(''.join(lines))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format='%(levelname)s: %(message)s', stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as e:
        args.parser.print_usage(sys.stderr)
        print(f'pier {args.command}: error: {e}', file=sys.stderr)
        return 2
    except PierError as e:
        print(f'pier {args.command}: error: {e}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
