import datetime as dt

import pytest

from crossnews import NewsArticle, load_articles, save_articles, tokenize


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


GOOD = [
    '{"id": "a1", "title": "First", "body": "one two", "lang": "en", "published_at": "2022-01-01"}',
    '{"id": "a2", "title": "第二", "body": "世界杯", "lang": "zh", "published_at": "2022-01-02", "label": "sports"}',
    '{"id": "a3", "title": "Third", "body": "", "tokens": ["pre", "tok"], "lang": "en", "published_at": "2022-01-03"}',
]


def test_load_valid_file_preserves_order(tmp_path):
    path = write_lines(tmp_path / "corpus.jsonl", GOOD)
    articles = load_articles(path)
    assert [a.id for a in articles] == ["a1", "a2", "a3"]
    assert articles[0].published_at == dt.date(2022, 1, 1)
    assert articles[1].label == "sports"
    assert articles[2].tokens == ["pre", "tok"]


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    assert load_articles(path) == []


def test_missing_title_names_line_and_field(tmp_path):
    bad = '{"id": "x", "body": "b", "lang": "en", "published_at": "2022-01-01"}'
    path = write_lines(tmp_path / "bad.jsonl", [GOOD[0], bad])
    with pytest.raises(ValueError) as err:
        load_articles(path)
    assert "line 2" in str(err.value)
    assert "title" in str(err.value)


def test_duplicate_id_names_both_lines(tmp_path):
    dup = GOOD[0]
    path = write_lines(tmp_path / "dup.jsonl", [GOOD[0], GOOD[1], dup])
    with pytest.raises(ValueError) as err:
        load_articles(path)
    msg = str(err.value)
    assert "duplicate id 'a1'" in msg
    assert "line 3" in msg and "line 1" in msg


def test_all_problems_collected(tmp_path):
    lines = [
        "not json",
        '{"id": "", "title": "t", "body": "", "lang": "en", "published_at": "2022-01-01"}',
        '{"id": "ok", "title": "t", "body": "", "lang": "fr", "published_at": "2022-01-01"}',
        '{"id": "ok2", "title": "t", "body": "", "lang": "en", "published_at": "Jan 1"}',
    ]
    path = write_lines(tmp_path / "many.jsonl", lines)
    with pytest.raises(ValueError) as err:
        load_articles(path)
    msg = str(err.value)
    assert "4 invalid line(s)" in msg
    for n in (1, 2, 3, 4):
        assert f"line {n}" in msg


def art(**kw):
    base = dict(
        id="a", title="t", body="The NBA Finals", lang="en", published_at=dt.date(2022, 1, 1)
    )
    base.update(kw)
    return NewsArticle(**base)


def test_tokenize_en_whitespace_lower_strip():
    doc = tokenize(art(body="The NBA Finals"))
    assert doc.tokens == ["the", "nba", "finals"]


def test_tokenize_en_strips_punctuation_edges():
    doc = tokenize(art(body='"Hello," she said.'))
    assert doc.tokens == ["hello", "she", "said"]


def test_tokenize_passthrough_pretokenized():
    doc = tokenize(art(body="ignored", tokens=["世界杯", "决赛"]))
    assert doc.tokens == ["世界杯", "决赛"]


def test_tokenize_zh_character_bigrams():
    # 3 chars -> 2 overlapping bigrams
    doc = tokenize(art(body="世界杯", lang="zh"))
    assert doc.tokens == ["世界", "界杯"]


def test_tokenize_zh_skips_punctuation_and_space():
    doc = tokenize(art(body="世界杯 决赛！", lang="zh"))
    assert doc.tokens == ["世界", "界杯", "杯决", "决赛"]


def test_tokenize_empty_document_error():
    with pytest.raises(ValueError, match="empty document"):
        tokenize(art(body="..."))
    with pytest.raises(ValueError, match="empty document"):
        tokenize(art(body="杯", lang="zh"))


def test_tokenize_deterministic():
    a = art(body="Some words repeated words")
    assert tokenize(a).tokens == tokenize(a).tokens


def test_roundtrip_lossless(tmp_path):
    path = write_lines(tmp_path / "corpus.jsonl", GOOD)
    articles = load_articles(path)
    out = tmp_path / "copy.jsonl"
    save_articles(articles, out)
    again = load_articles(out)
    assert [a.to_dict() for a in again] == [a.to_dict() for a in articles]
