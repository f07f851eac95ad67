"""News input parsing, validation, and tokenization.

Input is JSONL, one article per line:

    {"id": str, "title": str, "body": str, "tokens": [str]?,
     "lang": "zh"|"en", "published_at": "YYYY-MM-DD", "label": str?}

Pre-tokenized `tokens` are the preferred path (real pipelines bring their own
segmenter); the built-in fallbacks are whitespace tokens for English and
overlapping character bigrams for Chinese.
"""

from __future__ import annotations

import datetime as dt
import json
import string
import unicodedata
from dataclasses import dataclass, field

LANGS = ("zh", "en")

_REQUIRED_FIELDS = ("id", "title", "body", "lang", "published_at")

# ASCII punctuation plus the quote/dash/ellipsis characters common in headlines.
_PUNCT = string.punctuation + "‘’“”–—…·"


@dataclass
class NewsArticle:
    id: str
    title: str
    body: str
    lang: str
    published_at: dt.date
    tokens: list[str] | None = None
    label: str | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "title": self.title,
            "body": self.body,
            "lang": self.lang,
            "published_at": self.published_at.isoformat(),
        }
        if self.tokens is not None:
            out["tokens"] = list(self.tokens)
        if self.label is not None:
            out["label"] = self.label
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


@dataclass
class TokenizedDoc:
    article_id: str
    tokens: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.tokens:
            raise ValueError(f"empty document: {self.article_id!r}")
        if any(not t for t in self.tokens):
            raise ValueError(f"document {self.article_id!r} contains empty tokens")


def _parse_record(obj: dict, lineno: int) -> NewsArticle:
    for name in _REQUIRED_FIELDS:
        if name not in obj:
            raise ValueError(f"line {lineno}: missing required field {name!r}")
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise ValueError(f"line {lineno}: field 'id' must be a non-empty string")
    if not isinstance(obj["title"], str) or not obj["title"]:
        raise ValueError(f"line {lineno}: field 'title' must be a non-empty string")
    if obj["lang"] not in LANGS:
        raise ValueError(f"line {lineno}: field 'lang' must be one of {LANGS}, got {obj['lang']!r}")
    try:
        published = dt.date.fromisoformat(str(obj["published_at"]))
    except ValueError:
        raise ValueError(
            f"line {lineno}: field 'published_at' is not an ISO-8601 date: {obj['published_at']!r}"
        ) from None
    tokens = obj.get("tokens")
    if tokens is not None:
        if not isinstance(tokens, list) or not all(isinstance(t, str) and t for t in tokens):
            raise ValueError(f"line {lineno}: field 'tokens' must be a list of non-empty strings")
        tokens = list(tokens)
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise ValueError(f"line {lineno}: field 'label' must be a string")
    return NewsArticle(
        id=obj["id"],
        title=obj["title"],
        body=str(obj.get("body", "")),
        lang=obj["lang"],
        published_at=published,
        tokens=tokens,
        label=label,
    )


def load_articles(path) -> list[NewsArticle]:
    """Parse a JSONL corpus, preserving file order (stream order = arrival order).

    All malformed lines are collected and reported together, each with its
    line number; duplicate ids name both offending lines.
    """
    articles: list[NewsArticle] = []
    problems: list[str] = []
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"line {lineno}: invalid JSON ({exc.msg})")
                continue
            if not isinstance(obj, dict):
                problems.append(f"line {lineno}: expected a JSON object")
                continue
            try:
                art = _parse_record(obj, lineno)
            except ValueError as exc:
                problems.append(str(exc))
                continue
            if art.id in seen:
                problems.append(
                    f"line {lineno}: duplicate id {art.id!r} (first seen on line {seen[art.id]})"
                )
                continue
            seen[art.id] = lineno
            articles.append(art)
    if problems:
        raise ValueError(f"{path}: {len(problems)} invalid line(s)\n" + "\n".join(problems))
    return articles


def save_articles(articles, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for art in articles:
            fh.write(art.to_json_line() + "\n")


def _en_tokens(text: str) -> list[str]:
    out = []
    for raw in text.split():
        tok = raw.strip(_PUNCT).lower()
        if tok:
            out.append(tok)
    return out


def _zh_bigrams(text: str) -> list[str]:
    # Drop whitespace/punctuation/control chars, then take overlapping pairs
    # of the remaining characters.
    chars = [
        c
        for c in text
        if not c.isspace() and unicodedata.category(c)[0] not in ("P", "Z", "C")
    ]
    return ["".join(chars[i : i + 2]) for i in range(len(chars) - 1)]


def tokenize(article: NewsArticle) -> TokenizedDoc:
    """Tokenize the article body (pre-tokenized input passes through unchanged).

    Deterministic: the same article always yields the same token list. An
    article whose body produces no tokens raises "empty document".
    """
    if article.tokens is not None:
        return TokenizedDoc(article_id=article.id, tokens=list(article.tokens))
    if article.lang == "en":
        tokens = _en_tokens(article.body)
    else:
        tokens = _zh_bigrams(article.body)
    if not tokens:
        raise ValueError(f"empty document: {article.id!r}")
    return TokenizedDoc(article_id=article.id, tokens=tokens)
