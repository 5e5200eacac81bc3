import itertools
import json

import _chat_helpers as _help
import numpy as np
import pytest

from chatwatch.modules.adapters import (
    AgreementTable,
    AnnotationError,
    AnnotationSet,
    Comment,
    DotaSentenceError,
    MergedSentence,
    SentenceLabel,
    Span,
    SplitError,
    SyntheticConfig,
    SyntheticConfigError,
    ThreadError,
    adapt_cc_threads,
    adapt_dota,
    aggregate_annotations,
    apply_annotations,
    build_agreement_table,
    build_annotation_sets,
    fleiss_kappa,
    generate_synthetic,
    part_sizes,
    read_annotation_records,
    read_comments,
    split_corpus,
)
from chatwatch.modules.adapters.dota import dota_line_label
from chatwatch.modules.chat import ChatType, ToxicClass, validate_session
from chatwatch.modules.evaluation import weighted_prf
from chatwatch.modules.model import SPECIAL_TOKENS, Tokenizer

NT = ToxicClass.NON_TOXIC
IF = ToxicClass.INSULTS_FLAMING
TH = ToxicClass.THREATS
SP = ToxicClass.SPAM
HH = ToxicClass.HATE_HARASSMENT
ME = ToxicClass.MINOR_ENDANGERMENT
EX = ToxicClass.EXTREMISM
SA = ToxicClass.SCAMS_ADS
OO = ToxicClass.OTHER_OFFENSIVE
TOKENIZER = Tokenizer(list(SPECIAL_TOKENS))


def _set(annotators, n_tokens=4, k=3):
    return AnnotationSet("m0", 0, n_tokens, annotators, k)


def test_aggregation_majority_span():
    a = _set({"x": (Span(0, 2, IF),), "y": (Span(1, 3, IF),), "z": ()})
    assert aggregate_annotations(a) == (NT, IF, NT, NT)


def test_aggregation_severity_tie_break():
    a = _set({"x": (Span(0, 1, IF),), "y": (Span(0, 1, TH),), "z": (Span(2, 3, SP),)})
    # token 0 has two votes, one each: the more severe class wins
    assert aggregate_annotations(a) == (TH, NT, NT, NT)


def test_aggregation_class_majority():
    a = _set({"x": (Span(0, 4, SP),), "y": (Span(0, 4, SP),), "z": (Span(0, 4, TH),)})
    assert aggregate_annotations(a) == (SP,) * 4


@pytest.mark.parametrize(
    "votes, expected",
    [
        ((None, None, None), NT),
        ((IF, None, None), NT),
        ((None, None, HH), NT),
        ((IF, IF, None), IF),
        ((TH, IF, None), TH),
        ((IF, TH, None), TH),
        ((SP, OO, None), SP),
        ((OO, SP, None), SP),
        ((SA, IF, None), SA),
        ((EX, ME, None), ME),
        ((HH, TH, None), HH),
        ((IF, IF, IF), IF),
        ((SP, SP, TH), SP),
        ((TH, SP, SP), SP),
        ((OO, OO, HH), OO),
        ((IF, SP, OO), IF),
        ((OO, SP, EX), EX),
        ((SA, ME, TH), TH),
        ((OO, SP, IF), IF),
        ((HH, OO, SP), HH),
    ],
)
def test_aggregation_tie_table(votes, expected):
    annotators = {
        name: () if c is None else (Span(0, 1, c),) for name, c in zip("xyz", votes)
    }
    assert aggregate_annotations(_set(annotators, n_tokens=1)) == (expected,)


def test_aggregation_minimum_intersecting_span():
    a = _set(
        {"x": (Span(1, 5, HH),), "y": (Span(2, 6, HH),), "z": (Span(2, 5, HH),)}, n_tokens=7
    )
    assert aggregate_annotations(a) == (NT, NT, HH, HH, HH, NT, NT)


def test_aggregation_ignores_annotator_order():
    rng = np.random.default_rng(0)
    classes = [IF, TH, SP, ToxicClass.SCAMS_ADS]
    for _ in range(1000):
        annotators = {}
        for name in ("x", "y", "z"):
            start = int(rng.integers(0, 5))
            end = int(rng.integers(start + 1, 7))
            annotators[name] = (Span(start, end, classes[int(rng.integers(0, 4))]),)
        expected = aggregate_annotations(_set(annotators, n_tokens=6))
        for order in itertools.permutations(annotators):
            shuffled = {name: annotators[name] for name in order}
            assert aggregate_annotations(_set(shuffled, n_tokens=6)) == expected


def test_annotation_set_validation():
    with pytest.raises(AnnotationError, match="expected 3 annotators"):
        _set({"x": (), "y": ()})
    with pytest.raises(AnnotationError, match="outside"):
        _set({"x": (Span(2, 9, IF),), "y": (), "z": ()})
    with pytest.raises(AnnotationError, match="overlapping"):
        _set({"x": (Span(0, 2, IF), Span(1, 3, IF)), "y": (), "z": ()})
    with pytest.raises(AnnotationError, match="non_toxic"):
        _set({"x": (Span(0, 2, NT),), "y": (), "z": ()})


def test_annotation_file_pipeline(tmp_path):
    s = _help.fruit_session()
    unlabeled = [ln.with_labels(None) for ln in s.lines]
    records = [
        {"match_id": "fruit", "line_index": 2, "annotator": name, "spans": spans}
        for name, spans in [
            ("x", [{"start": 0, "end": 2, "class": "scams_ads"}]),
            ("y", [{"start": 1, "end": 2, "class": "scams_ads"}]),
            ("z", []),
        ]
    ]
    path = _help.write_jsonl(tmp_path / "ann.jsonl", records)
    sets = build_annotation_sets(unlabeled, read_annotation_records(path), TOKENIZER)
    labeled = apply_annotations(unlabeled, sets)
    assert labeled[2].token_labels == (NT, ToxicClass.SCAMS_ADS, NT)
    assert all(ln.token_labels is None for i, ln in enumerate(labeled) if i != 2)


def test_annotation_for_unknown_line(tmp_path):
    records = [{"match_id": "nope", "line_index": 0, "annotator": "x", "spans": []}]
    path = _help.write_jsonl(tmp_path / "ann.jsonl", records)
    with pytest.raises(AnnotationError, match="no such chat line"):
        build_annotation_sets(list(_help.fruit_session().lines), read_annotation_records(path), TOKENIZER)


def _brute_force_kappa(counts):
    counts = np.asarray(counts, dtype=float)
    n, k = counts.shape[0], counts.sum(axis=1)[0]
    p_i = [(sum(c * c for c in row) - k) / (k * (k - 1)) for row in counts]
    p_bar = sum(p_i) / n
    p_j = [counts[:, j].sum() / (n * k) for j in range(counts.shape[1])]
    p_e = sum(p * p for p in p_j)
    return (p_bar - p_e) / (1 - p_e)


def test_fleiss_kappa_matches_definition():
    rng = np.random.default_rng(1)
    categories = tuple(ToxicClass)[:4]
    for _ in range(50):
        n_lines = int(rng.integers(2, 12))
        counts = np.stack([rng.multinomial(3, [0.25] * 4) for _ in range(n_lines)])
        if np.isclose(sum((counts.sum(axis=0) / counts.sum()) ** 2), 1.0):
            continue
        got = fleiss_kappa(AgreementTable(counts, categories))
        assert got == pytest.approx(_brute_force_kappa(counts), abs=1e-9)


def test_fleiss_kappa_extremes():
    two = (IF, NT)
    assert fleiss_kappa(AgreementTable(np.array([[2, 0], [0, 2]]), two)) == pytest.approx(1.0)
    assert fleiss_kappa(AgreementTable(np.array([[1, 1], [1, 1]]), two)) == pytest.approx(-1.0)
    assert fleiss_kappa(AgreementTable(np.array([[3, 0], [3, 0]]), two)) == 1.0
    # one category takes every vote
    assert fleiss_kappa(AgreementTable(np.array([[0, 3], [0, 3], [0, 3]]), two)) == 1.0


def test_agreement_table_validation():
    with pytest.raises(ValueError):
        AgreementTable(np.array([[2, 0], [1, 0]]), (IF, NT))
    with pytest.raises(ValueError):
        AgreementTable(np.array([[1, 0]]), (IF, NT))


def test_agreement_table_from_annotations():
    sets = [
        _set({"x": (Span(0, 1, IF),), "y": (Span(0, 1, IF),), "z": (Span(2, 3, TH),)}),
        _set({"x": (), "y": (), "z": ()}),
    ]
    t = build_agreement_table(sets)
    columns = list(t.categories)
    assert t.counts[0, columns.index(IF)] == 2
    assert t.counts[0, columns.index(TH)] == 1
    assert t.counts[1, columns.index(NT)] == 3
    assert t.k == 3 and len(t) == 2


def _dota_line(i, text, player="p0"):
    return _help.line(i, player, "radiant", text=text, chat_type=ChatType.ALL, match_id="d0")


def test_dota_explicit_sentence_splits_by_flags():
    sentence = MergedSentence(
        lines=(_dota_line(0, "you are"), _dota_line(1, "so bad noob")),
        label=SentenceLabel.EXPLICIT,
        toxic_tokens=((False, False), (False, False, True)),
    )
    first, second = adapt_dota([sentence], TOKENIZER)
    assert first.token_labels == (NT, NT)
    assert second.token_labels == (NT, NT, IF)
    assert dota_line_label(first) is SentenceLabel.OTHER
    assert dota_line_label(second) is SentenceLabel.EXPLICIT


def test_dota_implicit_and_action_sentences():
    implicit = MergedSentence((_dota_line(0, "nice try"),), SentenceLabel.IMPLICIT)
    action = MergedSentence((_dota_line(1, "buy wards", "p1"),), SentenceLabel.ACTION)
    a, b = adapt_dota([implicit, action], TOKENIZER)
    assert a.token_labels == (ToxicClass.OTHER_OFFENSIVE,) * 2
    assert b.token_labels == (NT, NT)
    assert dota_line_label(a) is SentenceLabel.IMPLICIT


def test_dota_sentence_errors():
    with pytest.raises(DotaSentenceError, match="different speaker"):
        adapt_dota(
            [MergedSentence((_dota_line(0, "a"), _dota_line(1, "b", "p1")), SentenceLabel.OTHER)],
            TOKENIZER,
        )
    with pytest.raises(DotaSentenceError, match="not consecutive"):
        adapt_dota(
            [MergedSentence((_dota_line(0, "a"), _dota_line(2, "b")), SentenceLabel.OTHER)],
            TOKENIZER,
        )
    with pytest.raises(DotaSentenceError, match="empty"):
        adapt_dota([MergedSentence((), SentenceLabel.OTHER)], TOKENIZER)


def _comments():
    return [
        Comment("1", None, "a1", "great article", False),
        Comment("2", "1", "a1", "you are an idiot", True),
        Comment("3", "2", "a1", "calm down", False),
        Comment("4", None, "a2", "first", False),
    ]


def test_cc_threads_become_sessions():
    sessions = {s.match_id: s for s in adapt_cc_threads(_comments(), TOKENIZER)}
    assert sorted(sessions) == ["a1/1", "a1/2", "a1/3", "a2/4"]

    s = sessions["a1/3"]
    assert [ln.text for ln in s.lines] == ["great article", "you are an idiot", "calm down"]
    assert [ln.token_labels for ln in s.lines[:-1]] == [None, None]
    assert s.lines[-1].token_labels == (NT, NT)
    assert sessions["a1/2"].lines[-1].token_labels == (ToxicClass.OTHER_OFFENSIVE,) * 4
    assert s.team_size is None and s.num_teams == 1
    assert validate_session(s) == []


def test_cc_dangling_parent():
    comments = _comments() + [Comment("9", "404", "a1", "orphan", False)]
    with pytest.raises(ThreadError, match="dangling parent: 404"):
        adapt_cc_threads(comments, TOKENIZER)


def test_read_comments_csv(tmp_path):
    path = tmp_path / "comments.csv"
    path.write_text(
        "id,parent_id,article_id,comment_text,toxicity\n"
        "1,,7,hello,0.1\n"
        "2,1,7,shut up,0.8\n"
    )
    first, second = read_comments(path)
    assert first.parent_id is None and not first.toxic
    assert second.parent_id == "1" and second.toxic and second.article_id == "7"


KEYWORD_ONLY = SyntheticConfig(n_matches=30, rules=("keyword",))
CONTEXT_ONLY = SyntheticConfig(n_matches=200, rules=("context",))


def test_synthetic_is_deterministic():
    assert generate_synthetic(KEYWORD_ONLY, seed=4) == generate_synthetic(KEYWORD_ONLY, seed=4)
    assert generate_synthetic(KEYWORD_ONLY, seed=4) != generate_synthetic(KEYWORD_ONLY, seed=5)


def test_synthetic_sessions_are_valid():
    config = SyntheticConfig(n_matches=20, rules=("keyword", "context", "speaker"))
    for s in generate_synthetic(config, seed=1):
        assert validate_session(s) == []
        assert s.match_id.startswith("syn-1-")
        for ln in s.lines:
            assert len(ln.token_labels) == TOKENIZER.count(ln.text)


def test_keyword_oracle_is_perfect_on_keyword_rule():
    sessions = generate_synthetic(KEYWORD_ONLY, seed=0)
    report = weighted_prf(*_help.keyword_oracle(KEYWORD_ONLY, sessions))
    assert report.f1 == pytest.approx(1.0)


def test_keyword_oracle_fails_on_context_rule():
    sessions = generate_synthetic(CONTEXT_ONLY, seed=0)
    report = weighted_prf(*_help.keyword_oracle(CONTEXT_ONLY, sessions))
    assert report.per_class[IF].f1 <= 0.7
    assert report.per_class[IF].recall == pytest.approx(1.0)


def test_synthetic_config_validation():
    with pytest.raises(SyntheticConfigError):
        SyntheticConfig(rules=("sarcasm",))
    with pytest.raises(SyntheticConfigError):
        SyntheticConfig(keywords=(("gg", "non_toxic"),))
    with pytest.raises(SyntheticConfigError):
        SyntheticConfig(context_words=("push",))
    with pytest.raises(SyntheticConfigError):
        SyntheticConfig.from_dict({"n_matchez": 3})
    config = SyntheticConfig.from_dict({"rules": ["context"], "keywords": {"dud": "spam"}})
    assert config.rules == ("context",)
    assert config.keywords == (("dud", "spam"),)


def test_part_sizes():
    assert part_sizes(10, (0.6, 0.2, 0.2)) == [6, 2, 2]
    assert part_sizes(3, (0.6, 0.2, 0.2)) == [1, 1, 1]
    assert sum(part_sizes(17, (0.6, 0.2, 0.2))) == 17
    with pytest.raises(SplitError):
        part_sizes(2, (0.6, 0.2, 0.2))


def test_split_partitions_whole_matches():
    sessions = generate_synthetic(SyntheticConfig(n_matches=10), seed=0)
    for seed in range(5):
        split = split_corpus(sessions, (0.6, 0.2, 0.2), seed)
        assert split.sizes == (6, 2, 2)
        ids = [s.match_id for part in (split.train, split.validation, split.test) for s in part]
        assert sorted(ids) == sorted(s.match_id for s in sessions)
    assert split_corpus(sessions, seed=1) == split_corpus(sessions, seed=1)


def test_split_rejects_bad_ratios():
    sessions = generate_synthetic(SyntheticConfig(n_matches=10), seed=0)
    with pytest.raises(SplitError):
        split_corpus(sessions, (0.5, 0.5, 0.5))
    with pytest.raises(SplitError):
        split_corpus(sessions + sessions[:1])


def test_annotation_records_reject_duplicates(tmp_path):
    record = {"match_id": "m", "line_index": 0, "annotator": "x", "spans": []}
    path = tmp_path / "dup.jsonl"
    path.write_text(json.dumps(record) + "\n" + json.dumps(record) + "\n")
    with pytest.raises(AnnotationError, match="duplicate"):
        read_annotation_records(path)
