import html
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import lru_cache

import ftfy
import regex as re

PUNCTUATION = '.,;:!?"()'
SENTENCE_FINAL = frozenset(".!?")


@dataclass(frozen=True)
class Token:
    """One token of ``Document.text``.

    ``char_span`` is a half-open character range into that flattened text (tags
    removed), not into the raw XML source.
    """
    text: str
    index: int
    sentence_index: int
    char_span: tuple


def basic_clean(text):
    text = ftfy.fix_text(text)
    text = html.unescape(html.unescape(text))
    return text.strip()


def whitespace_clean(text):
    text = re.sub(r'\s+', ' ', text)
    text = text.strip()
    return text


@lru_cache(maxsize=65536)
def normalize_text(text):
    """Lowercased, single-spaced form used for signal phrases and event strings.

    ftfy also maps typographic apostrophes to ASCII, so "’s" and "'s" agree.
    """
    return whitespace_clean(basic_clean(text)).lower()


def normalize_tokens(tokens):
    return normalize_text(" ".join(t.text for t in tokens))


class SimpleTokenizer(object):
    """Whitespace tokenizer that also splits punctuation and the clitic 's.

    A sentence ends after . ! or ? unless the next token starts with a lowercase letter.
    Offsets in ``boundaries`` always separate tokens; offsets in ``sentence_starts``
    always open a new sentence.
    """

    def __init__(self):
        self.chunk_pat = re.compile(r"\S+")
        self.piece_pat = re.compile(r'[.,;:!?"()]|[^.,;:!?"()]+')
        self.clitic_pat = re.compile(r"^(.*?)(['’][sS])$")

    def _pieces(self, text, start, end):
        for m in self.piece_pat.finditer(text, start, end):
            piece = m.group()
            clitic = self.clitic_pat.match(piece)
            if clitic and clitic.group(1):
                cut = m.start() + len(clitic.group(1))
                yield m.start(), cut
                yield cut, m.end()
            else:
                yield m.start(), m.end()

    def spans(self, text, boundaries=()):
        cuts = sorted(set(boundaries))
        for m in self.chunk_pat.finditer(text):
            start, end = m.span()
            inner = cuts[bisect_right(cuts, start):bisect_left(cuts, end)]
            for left, right in zip([start] + inner, inner + [end]):
                if left < right:
                    yield from self._pieces(text, left, right)

    def tokenize(self, text, boundaries=(), sentence_starts=()):
        starts = sorted(set(sentence_starts))
        tokens = []
        sentence = 0
        pending_break = False
        prev_end = 0
        for start, end in self.spans(text, boundaries):
            word = text[start:end]
            if tokens:
                forced = bisect_right(starts, start) - bisect_left(starts, prev_end) > 0
                if forced or (pending_break and not word[0].islower()):
                    sentence += 1
            tokens.append(Token(word, len(tokens), sentence, (start, end)))
            pending_break = word in SENTENCE_FINAL
            prev_end = end
        return tokens


_default = SimpleTokenizer()


def tokenize(raw_text):
    return _default.tokenize(raw_text)
