"""Deterministic synthetic TimeML corpora in the inline dialect.

Signalled links take their class from the signal lexicon (with some noise);
unsignalled links draw it from the class distribution, independently of every
event attribute, so nothing but a signal can predict them.
"""
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from .base_info import DEFAULTS
from .errors import UsageError
from .file_io import File
from .relations import is_symmetric, parse_folded, unfold

logger = logging.getLogger(__name__)

SUBJECTS = ("the company", "the minister", "officials", "the bank", "investors", "the team")
VERBS = ("arrived", "left", "announced", "signed", "rose", "met")
EVENT_CLASSES = ("OCCURRENCE", "REPORTING", "STATE")
TENSES = ("PAST", "PRESENT", "FUTURE")
ASPECTS = ("NONE", "PERFECTIVE")
MODALITIES = ("NONE", "would")
DAYS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday")


def _default(name):
    return DEFAULTS["synth"][name]


@dataclass(frozen=True)
class SynthSpec:
    n_docs: int = _default("docs")
    seed: int = _default("seed")
    signal_fraction: float = _default("signal_fraction")
    class_distribution: dict = field(default_factory=lambda: dict(_default("class_distribution")))
    signal_lexicon: dict = field(default_factory=lambda: dict(_default("signal_lexicon")))
    noise: float = _default("noise")
    links_per_doc: int = _default("links_per_doc")

    def __post_init__(self):
        if self.n_docs < 0 or self.links_per_doc < 1:
            raise UsageError("n_docs must be >= 0 and links_per_doc >= 1")
        for name in ("signal_fraction", "noise"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise UsageError(f"{name} must lie in [0, 1], got {value}")
        weights = list(self.class_distribution.values())
        if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-6:
            raise UsageError(f"class_distribution weights must be >= 0 and sum to 1, got {sum(weights)}")
        for label in self.class_distribution:
            parse_folded(label)
        for label in self.signal_lexicon.values():
            parse_folded(label)
        if self.signal_fraction > 0 and not self.signal_lexicon:
            raise UsageError("a signal lexicon is needed when signal_fraction > 0")

    @classmethod
    def from_settings(cls, settings, **overrides):
        synth = dict(settings.get("synth", {}))
        values = {
            "n_docs": synth.get("docs", _default("docs")),
            "seed": synth.get("seed", _default("seed")),
            "signal_fraction": synth.get("signal_fraction", _default("signal_fraction")),
            "class_distribution": dict(synth.get("class_distribution", _default("class_distribution"))),
            "signal_lexicon": dict(synth.get("signal_lexicon", _default("signal_lexicon"))),
            "noise": synth.get("noise", _default("noise")),
            "links_per_doc": synth.get("links_per_doc", _default("links_per_doc")),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class _DocumentWriter:
    def __init__(self, rng, spec, doc_id):
        self.rng = rng
        self.spec = spec
        self.doc_id = doc_id
        self.sentences = []
        self.links = []
        self.n_events = self.n_signals = 0
        self.labels = sorted(spec.class_distribution)
        total = sum(spec.class_distribution[label] for label in self.labels)
        self.weights = np.array([spec.class_distribution[label] / total for label in self.labels])
        self.phrases = sorted(spec.signal_lexicon)

    def pick(self, options):
        return options[int(self.rng.integers(len(options)))]

    def draw_class(self):
        return parse_folded(self.labels[int(self.rng.choice(len(self.labels), p=self.weights))])

    def event(self):
        self.n_events += 1
        eid = f"e{self.n_events}"
        polarity = "NEG" if self.rng.random() < 0.1 else "POS"
        markup = (f'<EVENT id="{eid}" class="{self.pick(EVENT_CLASSES)}" tense="{self.pick(TENSES)}" '
                  f'aspect="{self.pick(ASPECTS)}" polarity="{polarity}" modality="{self.pick(MODALITIES)}">'
                  f'{self.pick(VERBS)}</EVENT>')
        return eid, markup

    def signal(self, phrase, capitalize=False):
        self.n_signals += 1
        sid = f"s{self.n_signals}"
        text = phrase[:1].upper() + phrase[1:] if capitalize else phrase
        return sid, f'<SIGNAL id="{sid}">{text}</SIGNAL>'

    def link(self, a, b, label, sid=None):
        # either "a LABEL b" or the inverse relType with the arguments swapped
        swap = bool(self.rng.random() < 0.5)
        rel = unfold(label, swap)
        # a symmetric relType cannot record the swap, so its arguments keep text order
        if is_symmetric(rel):
            swap = False
        source, target = (b, a) if swap else (a, b)
        attrs = f'lid="l{len(self.links) + 1}" eventID="{source}" relatedToEvent="{target}" relType="{rel.value}"'
        if sid is not None:
            attrs += f' signalID="{sid}"'
        self.links.append(f"<TLINK {attrs} />")

    def add_timex_sentence(self):
        eid, ev = self.event()
        day = self.pick(DAYS)
        self.sentences.append(f'{self.pick(SUBJECTS).capitalize()} {ev} on '
                              f'<TIMEX3 tid="t1" type="DATE" value="XXXX-WXX">{day}</TIMEX3> .')
        self.links.append(f'<TLINK lid="l{len(self.links) + 1}" eventID="{eid}" relatedToTime="t1" relType="IS_INCLUDED" />')

    def add_linked_sentence(self):
        if self.rng.random() < self.spec.signal_fraction:
            phrase = self.pick(self.phrases)
            label = parse_folded(self.spec.signal_lexicon[phrase])
            if self.rng.random() < self.spec.noise:
                label = self.draw_class()
            a, ev_a = self.event()
            b, ev_b = self.event()
            subj_a, subj_b = self.pick(SUBJECTS), self.pick(SUBJECTS)
            if self.rng.random() < 0.5:
                sid, sig = self.signal(phrase)
                self.sentences.append(f"{subj_a.capitalize()} {ev_a} {sig} {subj_b} {ev_b} .")
            else:
                sid, sig = self.signal(phrase, capitalize=True)
                self.sentences.append(f"{sig} {subj_b} {ev_b} , {subj_a} {ev_a} .")
            self.link(a, b, label, sid)
        else:
            label = self.draw_class()
            a, ev_a = self.event()
            b, ev_b = self.event()
            subj_a, subj_b = self.pick(SUBJECTS), self.pick(SUBJECTS)
            if self.rng.random() < 0.5:
                self.sentences.append(f"{subj_a.capitalize()} {ev_a} and {subj_b} {ev_b} .")
            else:
                self.sentences.append(f"{subj_a.capitalize()} {ev_a} . {subj_b.capitalize()} {ev_b} .")
            self.link(a, b, label)

    def render(self):
        body = "\n".join(self.sentences)
        links = "\n".join(self.links)
        return (f'<?xml version="1.0" encoding="UTF-8"?>\n<TimeML>\n<DOCID>{self.doc_id}</DOCID>\n'
                f"<TEXT>\n{body}\n</TEXT>\n{links}\n</TimeML>\n")


def generate(spec):
    """Return ``(file name, TimeML text)`` pairs; a pure function of ``spec``."""
    rng = np.random.default_rng(spec.seed)
    documents = []
    for i in range(spec.n_docs):
        doc_id = f"synth-{i + 1:04d}"
        writer = _DocumentWriter(rng, spec, doc_id)
        writer.add_timex_sentence()
        for _ in range(spec.links_per_doc):
            writer.add_linked_sentence()
        documents.append((f"{doc_id}.tml", writer.render()))
    logger.info("generated %d synthetic documents (seed %d)", len(documents), spec.seed)
    return documents


def write_corpus(spec, out_dir):
    file = File()
    paths = []
    for name, text in generate(spec):
        path = os.path.join(out_dir, name)
        file.save_file(path, text)
        paths.append(path)
    return paths
