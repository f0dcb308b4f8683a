import pytest
from hypothesis import given, strategies as st

from pier.errors import AnnotationError, ConfigError, MarkupError
from pier.poi import (
    InterestSet,
    SwitchType,
    TagSource,
    TokenTag,
    auto_tag_by_script,
    build_interest_set,
    load_annotations,
    parse_markup,
    parse_selector,
    render_markup,
)
from pier.textnorm import Script, classify_script, letter_scripts, tokenize_words


def tag(index, lang='EN', switch=SwitchType.INTER_WORD, source=TagSource.MARKUP):
    return TokenTag(index, lang, switch, source)


def test_markup_example():
    tokens, tags = parse_markup('das mit den <EN bots> glaub ich nicht')
    assert tokens == ['das', 'mit', 'den', 'bots', 'glaub', 'ich', 'nicht']
    assert tags == [tag(4)]


def test_markup_no_tags():
    assert parse_markup('no tags here') == (['no', 'tags', 'here'], [])


def test_markup_intra_word():
    tokens, tags = parse_markup('<EN+DE downgeloadet> ist fertig')
    assert tokens == ['downgeloadet', 'ist', 'fertig']
    assert tags == [tag(1, 'EN+DE', SwitchType.INTRA_WORD)]


def test_markup_name_label():
    _, tags = parse_markup('ich habe <NE obama> gesehen')
    assert tags == [tag(3, 'NE', SwitchType.NONE)]


def test_markup_escape():
    tokens, tags = parse_markup(r'a \<b c')
    assert tokens == ['a', '<b', 'c'] and tags == []
    assert render_markup(tokens, tags) == r'a \<b c'


@pytest.mark.parametrize('line, column', [
    ('das <EN bots glaub', 5),      # payload runs into the next word
    ('das <EN bots', 5),            # end of line before '>'
    ('das <EN >', 9),               # empty word
    ('das <en bots>', 6),           # lower-case label
    ('das <ENGLISHXX bots>', 6),    # label longer than 8
    ('das <bots>', 6),              # no label
    ('das <EN bots>x', 14),         # '>' glued to the next word
    ('<EN', 1),
])
def test_markup_errors(line, column):
    with pytest.raises(MarkupError) as info:
        parse_markup(line, line_no=7)
    assert info.value.line == 7
    assert info.value.column == column
    assert 'line 7' in str(info.value) and f'column {column}' in str(info.value)


plain_tokens = st.text(alphabet='ab<>\\x', min_size=1, max_size=4).filter(
    lambda t: not (t.startswith('\\<')))
labels = st.from_regex(r'[A-Z][A-Z+-]{0,7}', fullmatch=True)


@given(st.lists(st.tuples(plain_tokens, st.none() | labels), min_size=0, max_size=8))
def test_markup_round_trip(items):
    items = [(t.replace('>', 'x') if label else t, label) for t, label in items]
    tokens = [t for t, _ in items]
    tags = [tag(i, label) for i, (_, label) in enumerate(items, start=1) if label]
    line = render_markup(tokens, tags)
    parsed_tokens, parsed_tags = parse_markup(line)
    assert parsed_tokens == tokens
    assert [(t.index, t.lang) for t in parsed_tags] == [(t.index, t.lang) for t in tags]
    assert render_markup(parsed_tokens, parsed_tags) == line


def test_render_rejects_unrepresentable_payload():
    with pytest.raises(MarkupError):
        render_markup(['a>b'], [tag(1)])


def test_auto_tag_arabic_english():
    tokens = tokenize_words('أنا like ذلك')
    assert auto_tag_by_script(tokens, 'Arabic', 'Latin') == [
        TokenTag(2, 'Latin', SwitchType.INTER_WORD, TagSource.SCRIPT)]


def test_auto_tag_monolingual():
    assert auto_tag_by_script(tokenize_words('أنا لا ذلك'), Script.ARABIC, Script.LATIN) == []


def test_auto_tag_intra_word():
    tags = auto_tag_by_script(tokenize_words('كمبيوترhouse جديد'), 'arabic', 'latin')
    assert tags == [TokenTag(1, 'Arabic+Latin', SwitchType.INTRA_WORD, TagSource.SCRIPT)]


def test_auto_tag_skips_digits():
    assert auto_tag_by_script(tokenize_words('我 2024 like'), 'Han', 'Latin') == [
        TokenTag(3, 'Latin', SwitchType.INTER_WORD, TagSource.SCRIPT)]


def test_auto_tag_rejects_same_script():
    with pytest.raises(ConfigError):
        auto_tag_by_script([], 'Latin', 'Latin')
    with pytest.raises(ConfigError):
        auto_tag_by_script([], 'Latin', 'Common')


script_words = st.text(alphabet='abxy你好كم12', min_size=1, max_size=5)


@given(st.lists(script_words, max_size=8), st.sampled_from([
    ('Arabic', 'Latin'), ('Han', 'Latin'), ('Latin', 'Han'), ('Latin', 'Arabic')]))
def test_auto_tag_agrees_with_classify_script(words, pair):
    matrix, embedded = pair
    tags = {t.index: t for t in auto_tag_by_script(words, matrix, embedded)}
    for i, word in enumerate(words, start=1):
        script = classify_script(word)
        expect_inter = script.value == embedded
        expect_intra = script is Script.MIXED and Script(embedded) in letter_scripts(word)
        assert (i in tags) == (expect_inter or expect_intra)
        if i in tags:
            assert tags[i].switch_type is (SwitchType.INTER_WORD if expect_inter else SwitchType.INTRA_WORD)


def test_annotations_examples():
    assert load_annotations('utt1\t4\tEN') == {'utt1': [tag(4, source=TagSource.ANNOTATION)]}
    assert load_annotations('utt1\t2\tEN+DE\n') == {
        'utt1': [tag(2, 'EN+DE', SwitchType.INTRA_WORD, TagSource.ANNOTATION)]}
    assert load_annotations('u\t1\tNE')['u'][0].switch_type is SwitchType.NONE


def test_annotations_grouping_and_order():
    got = load_annotations('u2\t3\tEN\nu1\t5\tEN\nu1\t1\tEN\n\n')
    assert [t.index for t in got['u1']] == [1, 5]
    assert list(got) == ['u2', 'u1']


@pytest.mark.parametrize('content, line', [
    ('utt1\tx\tEN', 1),
    ('utt1\t1\tEN\nutt1\t1\tDE', 2),
    ('utt1\t1\ten', 1),
    ('utt1\t0\tEN', 1),
    ('utt1\t1', 1),
    ('u\t1\tEN\n\nu\t2\tEN\tx', 3),
])
def test_annotation_errors(content, line):
    with pytest.raises(AnnotationError) as info:
        load_annotations(content)
    assert info.value.line == line
    assert f'line {line}' in str(info.value)


def test_build_interest_set_examples():
    assert build_interest_set([tag(4)], 7, 'all').indices == (4,)
    mixed = [tag(1, 'EN+DE', SwitchType.INTRA_WORD), tag(4)]
    assert build_interest_set(mixed, 7, 'intra_word').indices == (1,)
    assert build_interest_set([], 7, 'all').indices == ()


def test_selectors():
    tags = [tag(1, 'EN+DE', SwitchType.INTRA_WORD), tag(3, 'NE', SwitchType.NONE), tag(2), tag(5, 'ES')]
    assert build_interest_set(tags, 5, 'all').indices == (1, 2, 5)
    assert build_interest_set(tags, 5, 'inter').indices == (2, 5)
    assert build_interest_set(tags, 5, 'intra').indices == (1,)
    assert build_interest_set(tags, 5, 'lang:NE').indices == (3,)
    assert build_interest_set(tags, 5, 'lang:ES').indices == (5,)
    assert build_interest_set(tags, 5, 'inter').selector == 'inter'
    with pytest.raises(ConfigError):
        parse_selector('english')


def test_build_interest_set_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_interest_set([tag(8)], 7)


tag_lists = st.lists(
    st.builds(tag, st.integers(1, 10), st.sampled_from(['EN', 'EN+DE', 'DE']),
              st.sampled_from([SwitchType.INTER_WORD, SwitchType.INTRA_WORD])),
    max_size=12,
)


@given(tag_lists)
def test_interest_set_sorted_unique(tags):
    indices = build_interest_set(tags, 10).indices
    assert list(indices) == sorted(set(indices))


@given(st.lists(st.tuples(st.integers(1, 10), st.booleans()), max_size=10, unique_by=lambda x: x[0]))
def test_selectors_partition(items):
    tags = [tag(i, 'EN+DE' if intra else 'EN', SwitchType.INTRA_WORD if intra else SwitchType.INTER_WORD)
            for i, intra in items]
    inter = set(build_interest_set(tags, 10, 'inter_word').indices)
    intra = set(build_interest_set(tags, 10, 'intra_word').indices)
    assert inter | intra == set(build_interest_set(tags, 10, 'all').indices)
    assert not inter & intra


def test_interest_set_validation():
    with pytest.raises(ValueError):
        InterestSet((2, 2), 5)
    with pytest.raises(ValueError):
        InterestSet((0,), 5)
    with pytest.raises(ValueError):
        InterestSet((6,), 5)
    assert InterestSet((2, 5), 5).covers_last
    assert not InterestSet((2,), 5).covers_last
