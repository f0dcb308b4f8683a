import pytest

from pier.corpus import (
    CorpusSpec,
    Utterance,
    build_corpus,
    filter_scoreable,
    load_pairs,
    parse_poi_mode,
    read_tsv,
)
from pier.errors import AnnotationError, CorpusError
from pier.poi import InterestSet, SwitchType
from pier.textnorm import NormConfig, Script, tokenize_words


def spec(**kw):
    kw.setdefault('ref_path', 'ref.tsv')
    kw.setdefault('hyp_path', 'hyp.tsv')
    return CorpusSpec(**kw)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_load_pairs_example(tmp_path):
    ref = write(tmp_path, 'ref.tsv', 'u1\tdas mit den <EN bots> glaub ich nicht\n')
    hyp = write(tmp_path, 'hyp.tsv', 'u1\tdas mit den bots glaub ich nicht\n')
    corpus = load_pairs(CorpusSpec(ref, hyp))
    assert len(corpus) == 1 and corpus.missing_hyp == 0
    utt = corpus[0]
    assert [t.text for t in utt.ref_tokens] == ['das', 'mit', 'den', 'bots', 'glaub', 'ich', 'nicht']
    assert utt.interest.indices == (4,)
    assert utt.ref_text == 'das mit den bots glaub ich nicht'


def test_missing_hypothesis_is_empty(caplog):
    corpus = build_corpus('u1\ta b\nu2\tc d\n', 'u1\ta b\n', spec())
    assert corpus.missing_hyp == 1
    assert corpus[1].hyp_tokens == ()
    assert 'u2' in caplog.text


def test_unknown_hypothesis_id():
    with pytest.raises(CorpusError, match='u9'):
        build_corpus('u1\ta\n', 'u9\ta\n', spec())


@pytest.mark.parametrize('ref, hyp, message', [
    ('u1\ta\nu1\tb\n', '', 'duplicate'),
    ('u1\ta\n', 'u1\ta\nu1\tb\n', 'duplicate'),
    ('', '', 'no reference'),
    ('u1\ta\tb\n', '', 'tab inside'),
    ('\tabc\n', '', 'empty utterance id'),
])
def test_corpus_errors(ref, hyp, message):
    with pytest.raises(CorpusError, match=message):
        build_corpus(ref, hyp, spec())


def test_missing_file(tmp_path):
    ref = write(tmp_path, 'ref.tsv', 'u1\ta\n')
    with pytest.raises(CorpusError, match='cannot read'):
        load_pairs(CorpusSpec(ref, str(tmp_path / 'nope.tsv')))


def test_read_tsv():
    assert read_tsv('a\tx y\n\nb\nc\t\n') == [('a', 'x y'), ('b', ''), ('c', '')]


def test_markup_after_normalization():
    corpus = build_corpus('u1\tDas, <EN Bots!> <EN ?> hier\n', None, spec(hyp_path=None))
    utt = corpus[0]
    assert [t.text for t in utt.ref_tokens] == ['das', 'bots', 'hier']
    # the tagged '?' vanished with punctuation stripping, so only 'bots' remains tagged
    assert utt.interest.indices == (2,)
    assert corpus.missing_hyp == 0


def test_markup_expands_to_character_tokens():
    corpus = build_corpus('u1\t我 <EN ok> 你\n', 'u1\t我 ok 你\n', spec(tokenizer_mode='char'))
    assert [t.text for t in corpus[0].ref_tokens] == ['我', 'o', 'k', '你']
    assert corpus[0].interest.indices == (2, 3)


def test_markup_error_reports_line():
    with pytest.raises(CorpusError, match='line 2'):
        build_corpus('u1\tok\nu2\tbad <EN markup\n', None, spec(hyp_path=None))


def test_script_mode():
    corpus = build_corpus('u1\t我 like 你\nu2\t我 你\n', 'u1\t我 你\n',
                          spec(poi_mode='script:Han-Latin', tokenizer_mode='mixed'))
    assert corpus[0].interest.indices == (2,)
    assert corpus[1].interest.indices == ()


def test_annotation_mode():
    s = spec(poi_mode='annot:side.tsv')
    corpus = build_corpus('u1\tich habe es downgeloadet\nu2\tnichts\n', None, s,
                          annotation_content='u1\t4\tEN+DE\nu1\t2\tNE\n')
    assert corpus[0].interest.indices == (4,)
    assert corpus[0].tags[0].switch_type is SwitchType.NONE
    assert corpus[1].interest.indices == ()


def test_annotation_errors():
    s = spec(poi_mode='annot:side.tsv')
    with pytest.raises(AnnotationError):
        build_corpus('u1\ta\n', None, s, annotation_content='u1\tx\tEN\n')
    with pytest.raises(CorpusError, match='token 5'):
        build_corpus('u1\ta b\n', None, s, annotation_content='u1\t5\tEN\n')
    with pytest.raises(CorpusError, match='unknown'):
        build_corpus('u1\ta b\n', None, s, annotation_content='u7\t1\tEN\n')


def test_annotation_file(tmp_path):
    ref = write(tmp_path, 'ref.tsv', 'u1\ta b\n')
    side = write(tmp_path, 'side.tsv', 'u1\t2\tEN\n')
    corpus = load_pairs(CorpusSpec(ref, poi_mode=f'annot:{side}'))
    assert corpus[0].interest.indices == (2,)


def test_poi_none_has_no_interest():
    corpus = build_corpus('u1\t<EN x> y\n', None, spec(poi_mode='none'))
    assert corpus[0].interest is None
    assert [t.text for t in corpus[0].ref_tokens] == ['<en', 'x>', 'y']


def test_spec_validation():
    with pytest.raises(CorpusError):
        spec(tokenizer_mode='bpe')
    with pytest.raises(CorpusError):
        spec(poi_mode='script:Latin-Latin')
    with pytest.raises(CorpusError):
        spec(poi_mode='auto')
    assert str(parse_poi_mode('script:han-latin')) == 'script:Han-Latin'
    assert parse_poi_mode('script:Han-Latin').embedded is Script.LATIN


def test_norm_flags():
    corpus = build_corpus('u1\tHallo, Welt!\n', None, spec(norm=NormConfig(lowercase=False, strip_punct=False)))
    assert corpus[0].ref_text == 'Hallo, Welt!'


def test_loading_is_idempotent(tmp_path):
    ref = write(tmp_path, 'ref.tsv', 'b\t<EN x> y\na\tz <EN w>\n')
    hyp = write(tmp_path, 'hyp.tsv', 'a\tz\n')
    first, second = load_pairs(CorpusSpec(ref, hyp)), load_pairs(CorpusSpec(ref, hyp))
    assert first == second
    assert [u.id for u in first] == ['b', 'a']


def utt(utt_id, ref, indices=None):
    tokens = tuple(tokenize_words(ref))
    chosen = None if indices is None else InterestSet(tuple(indices), len(tokens))
    return Utterance(utt_id, tokens, (), interest=chosen)


def test_filter_scoreable_examples():
    kept, mono, empty = filter_scoreable([utt('a', 'x y', [1]), utt('b', 'x y', []), utt('c', 'x', [1])])
    assert [u.id for u in kept] == ['a', 'c'] and (mono, empty) == (1, 0)

    kept, mono, empty = filter_scoreable([utt('a', 'x', [1]), utt('b', 'y', [1])])
    assert len(kept) == 2 and (mono, empty) == (0, 0)

    kept, mono, empty = filter_scoreable([utt('a', '', []), utt('b', 'y', [1])])
    assert [u.id for u in kept] == ['b'] and (mono, empty) == (0, 1)


def test_filter_without_interest_sets():
    kept, mono, empty = filter_scoreable([utt('a', 'x'), utt('b', '')])
    assert [u.id for u in kept] == ['a'] and (mono, empty) == (0, 1)
