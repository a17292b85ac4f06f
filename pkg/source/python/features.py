"""Link instances and their categorical features.

Features are read off the fold-normalized argument order (e1, e2), so a link
written AFTER(a, b) and one written BEFORE(b, a) give the same instance.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from typing import Optional

from .base import registry
from .relations import FoldedClass, fold
from .simple_tokenizer import normalize_text
from .timeml import NONE, ResolvedEvent, SignalAnn, resolve_tlink

logger = logging.getLogger(__name__)

BASE_FEATURES = (
    "e1.class", "e1.tense", "e1.aspect", "e1.modality", "e1.negation", "e1.string",
    "e2.class", "e2.tense", "e2.aspect", "e2.modality", "e2.negation", "e2.string",
    "sameTense", "sameAspect",
)
SIGNAL_FEATURES = (
    "sig.phrase", "order.e1e2", "order.sig_e1", "order.sig_e2",
    "dist.tok.e1e2", "dist.sent.e1e2", "dist.tok.sig_e1", "dist.tok.sig_e2",
)
HINT_FEATURE = "hint"
FEATURE_REGISTRY = BASE_FEATURES + SIGNAL_FEATURES + (HINT_FEATURE,)

TOKEN_BUCKETS = ((0, "0"), (1, "1"), (2, "2"), (3, "3"), (4, "4"), (9, "5-9"), (19, "10-19"))
SENTENCE_BUCKETS = ((0, "0"), (1, "1"), (2, "2"))


class FeatureSet:
    name = None
    names = ()
    uses_hint = False


@registry.register("base")
class BaseFeatures(FeatureSet):
    name = "base"
    names = BASE_FEATURES


@registry.register("base+signal")
class SignalFeatures(FeatureSet):
    name = "base+signal"
    names = BASE_FEATURES + SIGNAL_FEATURES


@registry.register("base+signal+hint")
class HintFeatures(FeatureSet):
    name = "base+signal+hint"
    names = FEATURE_REGISTRY
    uses_hint = True


def feature_set(name):
    if isinstance(name, type) and issubclass(name, FeatureSet):
        return name
    return registry.get_class(name)


@dataclass(frozen=True)
class FeatureVector:
    """Immutable name -> value pairs, kept in registry order."""

    items: tuple = ()

    @classmethod
    def from_dict(cls, values):
        unknown = set(values) - set(FEATURE_REGISTRY)
        if unknown:
            raise ValueError(f"unregistered feature names: {sorted(unknown)}")
        return cls(tuple((name, str(values[name])) for name in FEATURE_REGISTRY if name in values))

    def as_dict(self):
        return dict(self.items)

    def names(self):
        return tuple(name for name, _ in self.items)

    def __getitem__(self, name):
        return self.as_dict()[name]

    def __len__(self):
        return len(self.items)

    def merged(self, other):
        values = self.as_dict()
        values.update(other.as_dict())
        return FeatureVector.from_dict(values)

    def select(self, names):
        keep = set(names)
        return FeatureVector(tuple(item for item in self.items if item[0] in keep))

    def strings(self):
        return [f"{name}={value}" for name, value in self.items]


@dataclass(frozen=True)
class LinkInstance:
    doc_id: str
    lid: str
    label: FoldedClass
    e1: ResolvedEvent
    e2: ResolvedEvent
    signal: Optional[SignalAnn]
    features: FeatureVector = field(default_factory=FeatureVector)

    @property
    def has_signal(self):
        return self.signal is not None

    @property
    def key(self):
        return (self.doc_id, self.lid)


def canonical_order(instances):
    return sorted(instances, key=lambda inst: inst.key)


class HintTable:
    """Signal phrase -> most likely folded class, learned from training instances only."""

    def __init__(self, table=None):
        self._table = dict(sorted((table or {}).items()))

    def lookup(self, phrase):
        return self._table.get(phrase)

    def as_dict(self):
        return dict(self._table)

    def __len__(self):
        return len(self._table)

    def __eq__(self, other):
        return isinstance(other, HintTable) and self._table == other._table

    def __repr__(self):
        return f"HintTable({self._table!r})"


def build_instance(doc, link):
    """Fold one TLINK into a LinkInstance; None for links that are not event-event."""
    resolved = resolve_tlink(doc, link)
    if not resolved.is_event_event:
        return None
    label, swap = fold(link.rel_type)
    e1, e2 = (resolved.arg2, resolved.arg1) if swap else (resolved.arg1, resolved.arg2)
    return LinkInstance(doc.doc_id, link.lid, label, e1, e2, resolved.signal)


def _bool(flag):
    return "true" if flag else "false"


def _event_features(prefix, ev):
    inst = ev.instance
    return {
        f"{prefix}.class": ev.event.event_class,
        f"{prefix}.tense": inst.tense,
        f"{prefix}.aspect": inst.aspect,
        f"{prefix}.modality": inst.modality,
        f"{prefix}.negation": _bool(inst.polarity == "NEG"),
        f"{prefix}.string": normalize_text(ev.event.text),
    }


def extract_base_features(inst):
    values = _event_features("e1", inst.e1)
    values.update(_event_features("e2", inst.e2))
    values["sameTense"] = _bool(inst.e1.instance.tense == inst.e2.instance.tense)
    values["sameAspect"] = _bool(inst.e1.instance.aspect == inst.e2.instance.aspect)
    return FeatureVector.from_dict(values)


def token_distance(a, b):
    """Edge-to-edge distance between two inclusive token spans."""
    earlier, later = (a, b) if a[0] <= b[0] else (b, a)
    return abs(later[0] - earlier[1])


def _bucket(value, buckets, overflow):
    for limit, name in buckets:
        if value <= limit:
            return name
    return overflow


def token_bucket(distance):
    return _bucket(distance, TOKEN_BUCKETS, "20+")


def sentence_bucket(distance):
    return _bucket(distance, SENTENCE_BUCKETS, "3+")


def extract_signal_features(inst, hints=None):
    e1, e2 = inst.e1.token_span, inst.e2.token_span
    values = {
        "order.e1e2": "e1-e2" if e1[0] <= e2[0] else "e2-e1",
        "dist.tok.e1e2": token_bucket(token_distance(e1, e2)),
        "dist.sent.e1e2": sentence_bucket(abs(inst.e1.sentence_index - inst.e2.sentence_index)),
    }
    if inst.has_signal:
        sig = inst.signal.token_span
        values.update({
            "sig.phrase": inst.signal.phrase,
            "order.sig_e1": "sig-first" if sig[0] < e1[0] else "sig-second",
            "order.sig_e2": "sig-first" if sig[0] < e2[0] else "sig-second",
            "dist.tok.sig_e1": token_bucket(token_distance(sig, e1)),
            "dist.tok.sig_e2": token_bucket(token_distance(sig, e2)),
        })
    else:
        values.update({
            "sig.phrase": NONE,
            "order.sig_e1": "none",
            "order.sig_e2": "none",
            "dist.tok.sig_e1": NONE,
            "dist.tok.sig_e2": NONE,
        })
    if hints is not None:
        hint = hints.lookup(inst.signal.phrase) if inst.has_signal else None
        values[HINT_FEATURE] = hint.value if hint is not None else NONE
    return FeatureVector.from_dict(values)


def featurize(inst, hints=None):
    """Instance copy carrying base + signal features (+ hint when a table is given)."""
    vector = extract_base_features(inst).merged(extract_signal_features(inst, hints))
    return replace(inst, features=vector)


def compute_hint_table(training):
    counts = defaultdict(Counter)
    for inst in training:
        if inst.has_signal:
            counts[inst.signal.phrase][inst.label] += 1
    table = {}
    for phrase, labels in counts.items():
        table[phrase] = min(labels.items(), key=lambda kv: (-kv[1], kv[0].value))[0]
    return HintTable(table)


def apply_hints(instances, hints):
    """Copies of ``instances`` with the hint feature looked up in ``hints``."""
    out = []
    for inst in instances:
        hint = hints.lookup(inst.signal.phrase) if inst.has_signal else None
        extra = FeatureVector.from_dict({HINT_FEATURE: hint.value if hint is not None else NONE})
        out.append(replace(inst, features=inst.features.merged(extra)))
    return out


def build_instances(corpus):
    """All event-event instances of ``corpus`` with base + signal features, canonical order."""
    instances = []
    skipped = 0
    for doc in corpus:
        for link in doc.tlinks:
            inst = build_instance(doc, link)
            if inst is None:
                skipped += 1
                continue
            instances.append(featurize(inst))
    logger.info("built %d event-event instances (%d other links skipped)", len(instances), skipped)
    return canonical_order(instances)
