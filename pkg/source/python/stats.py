"""Corpus descriptive statistics: signal phrase likelihoods and TLINK/SIGNAL counts."""
import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, fields

from .simple_tokenizer import normalize_text
from .timeml import load_corpus, resolve_tlink

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhraseStat:
    phrase: str
    corpus_freq: int
    signal_freq: int

    @property
    def likelihood(self):
        return self.signal_freq / self.corpus_freq if self.corpus_freq else 0.0


@dataclass(frozen=True)
class LinkCounts:
    corpus: str
    total_tlinks: int = 0
    with_signal: int = 0
    without_signal: int = 0
    event_event_total: int = 0
    event_event_with_signal: int = 0

    @property
    def signal_pct(self):
        return 100.0 * self.with_signal / self.total_tlinks if self.total_tlinks else 0.0

    @property
    def event_event_pct(self):
        return 100.0 * self.event_event_total / self.total_tlinks if self.total_tlinks else 0.0

    @property
    def event_event_signal_pct(self):
        return 100.0 * self.event_event_with_signal / self.event_event_total if self.event_event_total else 0.0

    def __add__(self, other):
        counts = {f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self) if f.name != "corpus"}
        return LinkCounts(self.corpus, **counts)

    def to_dict(self):
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["signal_pct"] = round(self.signal_pct, 1)
        out["event_event_pct"] = round(self.event_event_pct, 1)
        out["event_event_signal_pct"] = round(self.event_event_signal_pct, 1)
        return out


def count_ngrams(words, n):
    ngrams = [tuple(words[idx:idx + n])
              for idx in range(len(words) - n + 1)]
    return Counter(ngrams)


def signal_phrase_stats(corpus, min_freq=2):
    """Table of annotated signal phrases, their text frequency and how often they are SIGNALs."""
    signal_freq = Counter(sig.phrase for doc in corpus for sig in doc.signals)
    by_length = defaultdict(set)
    for phrase in signal_freq:
        by_length[len(phrase.split(" "))].add(tuple(phrase.split(" ")))

    corpus_freq = Counter()
    for doc in corpus:
        words = [normalize_text(t.text) for t in doc.tokens]
        for n, wanted in by_length.items():
            grams = count_ngrams(words, n)
            for gram in wanted:
                corpus_freq[" ".join(gram)] += grams[gram]

    rows = [PhraseStat(phrase, corpus_freq[phrase], count) for phrase, count in signal_freq.items()]
    for row in rows:
        if row.signal_freq > row.corpus_freq:
            logger.warning("phrase %r: %d SIGNALs but only %d textual matches",
                           row.phrase, row.signal_freq, row.corpus_freq)
    rows = [row for row in rows if row.corpus_freq >= min_freq]
    rows.sort(key=lambda row: (-row.likelihood, row.phrase))
    return rows


def document_link_counts(label, documents):
    total = with_signal = ee_total = ee_signal = 0
    for doc in documents:
        for link in doc.tlinks:
            total += 1
            signalled = link.signal is not None
            with_signal += signalled
            if resolve_tlink(doc, link).is_event_event:
                ee_total += 1
                ee_signal += signalled
    return LinkCounts(label, total, with_signal, total - with_signal, ee_total, ee_signal)


def tlink_counts(groups, combined_label="combined"):
    """One row per (label, documents) group plus a combined row summing them."""
    rows = [document_link_counts(label, documents) for label, documents in groups]
    combined = LinkCounts(combined_label)
    for row in rows:
        combined = combined + row
    return rows + [combined]


def group_corpus(paths, dialect_hint="auto"):
    """Load each top-level path as its own group, labeled by its base name."""
    groups, issues = [], []
    for path in paths:
        documents, path_issues = load_corpus([path], dialect_hint)
        groups.append((os.path.basename(os.path.normpath(path)), documents))
        issues.extend(path_issues)
    return groups, issues
