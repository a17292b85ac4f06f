"""TimeML reader.

Handles TimeBank/AQUAINT files (MAKEINSTANCE + eventInstanceID links) and the
short inline form where EVENT/SIGNAL carry ``id`` and TLINK uses ``eventID`` /
``relatedToEvent``. Documents are frozen once built.
"""
import logging
import os
from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import regex as re
from lxml import etree

from .errors import CorpusError, CorpusIoError, DanglingReference, DuplicateId, MalformedXml
from .file_io import File
from .relations import RelationType, parse_relation
from .simple_tokenizer import SimpleTokenizer, Token, normalize_tokens, tokenize  # noqa: F401

logger = logging.getLogger(__name__)

NONE = "NONE"
DIALECTS = ("auto", "timebank", "inline")
CORPUS_SUFFIXES = (".tml", ".xml")

# elements whose edges always separate sentences
SENTENCE_TAGS = frozenset(["s", "TEXT", "DOCID", "DOCNO", "DCT", "TITLE"])
INSTANCE_ATTRS = ("tense", "aspect", "polarity", "modality")

_PROLOG = re.compile(r"^\ufeff?\s*(<\?xml[^>]*\?>)?\s*(<!DOCTYPE[^>\[]*(\[[^\]]*\])?\s*>)?")
_WRAPPER = "timelink-fragment"


@dataclass(frozen=True)
class EventAnn:
    eid: str
    event_class: str
    token_span: tuple
    text: str


@dataclass(frozen=True)
class EventInstance:
    eiid: str
    eid: str
    tense: str = NONE
    aspect: str = NONE
    polarity: str = NONE
    modality: str = NONE
    synthesized: bool = False


@dataclass(frozen=True)
class TimexAnn:
    tid: str
    token_span: Optional[tuple]
    value: str
    type: str


@dataclass(frozen=True)
class SignalAnn:
    sid: str
    token_span: tuple
    phrase: str


@dataclass(frozen=True)
class IntervalRef:
    kind: str  # "instance" | "event" | "timex"
    id: str


@dataclass(frozen=True)
class TLinkAnn:
    lid: str
    source: IntervalRef
    target: IntervalRef
    rel_type: RelationType
    signal: Optional[str] = None


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    tokens: tuple
    events: tuple
    instances: tuple
    timexes: tuple
    signals: tuple
    tlinks: tuple
    source_path: str = ""

    @cached_property
    def event_by_id(self):
        return {e.eid: e for e in self.events}

    @cached_property
    def instance_by_id(self):
        return {i.eiid: i for i in self.instances}

    @cached_property
    def instances_by_event(self):
        table = {}
        for inst in self.instances:
            table.setdefault(inst.eid, []).append(inst)
        return table

    @cached_property
    def timex_by_id(self):
        return {t.tid: t for t in self.timexes}

    @cached_property
    def signal_by_id(self):
        return {s.sid: s for s in self.signals}


@dataclass(frozen=True)
class ResolvedEvent:
    instance: EventInstance
    event: EventAnn
    sentence_index: int

    @property
    def token_span(self):
        return self.event.token_span


@dataclass(frozen=True)
class ResolvedTimex:
    timex: TimexAnn
    sentence_index: Optional[int]

    @property
    def token_span(self):
        return self.timex.token_span


@dataclass(frozen=True)
class ResolvedLink:
    arg1: object
    arg2: object
    signal: Optional[SignalAnn]
    is_event_event: bool


@dataclass(frozen=True)
class CorpusIssue:
    path: str
    message: str


class _Record:
    __slots__ = ("tag", "attrib", "start", "end")

    def __init__(self, tag, attrib, start):
        self.tag = tag
        self.attrib = attrib
        self.start = start
        self.end = start


def _local(tag):
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _flatten(root):
    """Concatenate element text and record every element's character range."""
    pieces, records, boundaries, sentence_starts = [], [], [], []
    offset = 0

    def visit(elem):
        nonlocal offset
        tag = _local(elem.tag)
        rec = _Record(tag, dict(elem.attrib), offset)
        records.append(rec)
        boundaries.append(offset)
        if tag in SENTENCE_TAGS:
            sentence_starts.append(offset)
        if elem.text:
            pieces.append(elem.text)
            offset += len(elem.text)
        for child in elem:
            visit(child)
            if child.tail:
                pieces.append(child.tail)
                offset += len(child.tail)
        rec.end = offset
        boundaries.append(offset)
        if tag in SENTENCE_TAGS:
            sentence_starts.append(offset)

    visit(root)
    return "".join(pieces), records[1:], boundaries, sentence_starts


def _first(attrib, *names):
    for name in names:
        value = attrib.get(name)
        if value:
            return value
    return None


def _attr(attrib, name):
    value = (attrib.get(name) or "").strip()
    return value or NONE


class _Builder:
    def __init__(self, text, tokens, dialect_hint, where):
        self.text = text
        self.tokens = tokens
        self.starts = [t.char_span[0] for t in tokens]
        self.dialect_hint = dialect_hint
        self.where = where
        self.events, self.instances, self.timexes, self.signals, self.tlinks = [], [], [], [], []
        self.event_attrs = {}
        self.seen = {"EVENT": set(), "MAKEINSTANCE": set(), "TIMEX3": set(), "SIGNAL": set(), "TLINK": set()}
        self.doc_id = None

    def fail(self, cls, msg):
        raise cls(f"{self.where}: {msg}")

    def claim(self, tag, ident):
        if not ident:
            self.fail(MalformedXml, f"{tag} without an id attribute")
        if ident in self.seen[tag]:
            self.fail(DuplicateId, f"duplicate {tag} id {ident!r}")
        self.seen[tag].add(ident)
        return ident

    def token_span(self, rec, tag, ident, required=True):
        first = bisect_left(self.starts, rec.start)
        last = bisect_left(self.starts, rec.end) - 1
        if first > last:
            if required:
                self.fail(MalformedXml, f"{tag} {ident!r} covers no tokens")
            return None
        return (first, last)

    def add(self, rec):
        a = rec.attrib
        if rec.tag == "EVENT":
            eid = self.claim("EVENT", _first(a, "eid", "id"))
            span = self.token_span(rec, "EVENT", eid)
            text = " ".join(t.text for t in self.tokens[span[0]:span[1] + 1])
            self.events.append(EventAnn(eid, _attr(a, "class"), span, text))
            self.event_attrs[eid] = {k: _attr(a, k) for k in INSTANCE_ATTRS}
        elif rec.tag == "MAKEINSTANCE":
            eiid = self.claim("MAKEINSTANCE", _first(a, "eiid", "id"))
            eid = _first(a, "eventID")
            if not eid:
                self.fail(MalformedXml, f"MAKEINSTANCE {eiid!r} has no eventID")
            self.instances.append(EventInstance(eiid, eid, **{k: _attr(a, k) for k in INSTANCE_ATTRS}))
        elif rec.tag == "TIMEX3":
            tid = self.claim("TIMEX3", _first(a, "tid", "id"))
            # temporal-function timexes may carry no text
            span = self.token_span(rec, "TIMEX3", tid, required=False)
            self.timexes.append(TimexAnn(tid, span, _attr(a, "value"), _attr(a, "type")))
        elif rec.tag == "SIGNAL":
            sid = self.claim("SIGNAL", _first(a, "sid", "id"))
            span = self.token_span(rec, "SIGNAL", sid)
            self.signals.append(SignalAnn(sid, span, normalize_tokens(self.tokens[span[0]:span[1] + 1])))
        elif rec.tag == "TLINK":
            self.tlinks.append(self.tlink(a))
        elif rec.tag in ("DOCID", "DOCNO") and self.doc_id is None:
            self.doc_id = self.text[rec.start:rec.end].strip() or None

    def _ref(self, a, role):
        if role == "source":
            instance_names, event_names, time_names = ("eventInstanceID",), ("eventID",), ("timeID",)
        else:
            instance_names, event_names, time_names = ("relatedToEventInstance",), ("relatedToEvent",), ("relatedToTime",)
        options = []
        if self.dialect_hint in ("auto", "timebank"):
            options.append(("instance", instance_names))
        if self.dialect_hint in ("auto", "inline"):
            options.append(("event", event_names))
        options.append(("timex", time_names))
        for kind, names in options:
            value = _first(a, *names)
            if value:
                return IntervalRef(kind, value)
        return None

    def tlink(self, a):
        lid = self.claim("TLINK", _first(a, "lid", "id"))
        source, target = self._ref(a, "source"), self._ref(a, "target")
        if source is None or target is None:
            self.fail(MalformedXml, f"TLINK {lid!r} has no usable {'source' if source is None else 'target'} "
                                    f"argument for dialect {self.dialect_hint!r}")
        rel = a.get("relType")
        if not rel:
            self.fail(MalformedXml, f"TLINK {lid!r} has no relType")
        try:
            rel_type = parse_relation(rel)
        except CorpusError as e:
            raise type(e)(f"{self.where}: TLINK {lid!r}: {e}") from None
        return TLinkAnn(lid, source, target, rel_type, _first(a, "signalID"))

    def synthesize_instances(self):
        covered = {inst.eid for inst in self.instances}
        taken = {inst.eiid for inst in self.instances}
        for event in self.events:
            if event.eid in covered:
                continue
            eiid = f"syn-{event.eid}"
            if eiid in taken:
                self.fail(DuplicateId, f"synthesized instance id {eiid!r} already in use")
            self.instances.append(EventInstance(eiid, event.eid, synthesized=True, **self.event_attrs[event.eid]))

    def validate(self):
        events = {e.eid for e in self.events}
        instances = {i.eiid for i in self.instances}
        timexes = {t.tid for t in self.timexes}
        signals = {s.sid for s in self.signals}
        for inst in self.instances:
            if inst.eid not in events:
                self.fail(DanglingReference, f"MAKEINSTANCE {inst.eiid!r} refers to unknown EVENT {inst.eid!r}")
        known = {"instance": instances, "event": events, "timex": timexes}
        for link in self.tlinks:
            for ref in (link.source, link.target):
                if ref.id not in known[ref.kind]:
                    self.fail(DanglingReference, f"TLINK {link.lid!r} refers to unknown {ref.kind} {ref.id!r}")
            if link.signal is not None and link.signal not in signals:
                self.fail(DanglingReference, f"TLINK {link.lid!r} refers to unknown SIGNAL {link.signal!r}")


def _default_doc_id(source_path):
    if source_path:
        return os.path.splitext(os.path.basename(source_path))[0]
    return "doc"


def parse_document(xml_text, dialect_hint="auto", source_path="", doc_id=None):
    """Parse one TimeML document or inline fragment into a :class:`Document`."""
    if dialect_hint not in DIALECTS:
        raise ValueError(f"dialect_hint must be one of {DIALECTS}, got {dialect_hint!r}")
    where = source_path or "<string>"
    body = _PROLOG.sub("", xml_text, count=1)
    parser = etree.XMLParser(resolve_entities=False, no_network=True, remove_comments=True, remove_pis=True)
    try:
        root = etree.fromstring(f"<{_WRAPPER}>{body}</{_WRAPPER}>", parser)
    except etree.XMLSyntaxError as e:
        raise MalformedXml(f"{where}: {e}") from e

    text, records, boundaries, sentence_starts = _flatten(root)
    tokens = SimpleTokenizer().tokenize(text, boundaries, sentence_starts)
    builder = _Builder(text, tokens, dialect_hint, where)
    for rec in records:
        builder.add(rec)
    builder.synthesize_instances()
    builder.validate()

    doc = Document(
        doc_id=doc_id or builder.doc_id or _default_doc_id(source_path),
        text=text,
        tokens=tuple(tokens),
        events=tuple(builder.events),
        instances=tuple(builder.instances),
        timexes=tuple(builder.timexes),
        signals=tuple(builder.signals),
        tlinks=tuple(builder.tlinks),
        source_path=source_path,
    )
    logger.debug("parsed %s: %d tokens, %d events, %d signals, %d tlinks",
                 where, len(doc.tokens), len(doc.events), len(doc.signals), len(doc.tlinks))
    return doc


def corpus_files(paths):
    """Expand files and directories into a sorted list of .tml/.xml files."""
    file = File()
    found = set()
    for path in paths:
        if not file.is_exist(path):
            raise CorpusIoError(f"no such file or directory: {path}")
        if os.path.isdir(path):
            for parent, _, filenames in os.walk(path):
                for filename in filenames:
                    if filename.lower().endswith(CORPUS_SUFFIXES):
                        found.add(os.path.join(parent, filename))
        else:
            found.add(path)
    return sorted(found)


def load_corpus(paths, dialect_hint="auto"):
    """Parse every corpus file under ``paths``; unparseable files become issues."""
    file = File()
    documents, issues = [], []
    for path in corpus_files(paths):
        try:
            documents.append(parse_document(file.read_file(path), dialect_hint, source_path=path))
        except CorpusError as e:
            logger.warning("skipping %s: %s", path, e)
            issues.append(CorpusIssue(path, str(e)))
    logger.info("loaded %d documents (%d issues)", len(documents), len(issues))
    return documents, issues


def _resolve(doc, ref, lid):
    if ref.kind == "timex":
        timex = doc.timex_by_id.get(ref.id)
        if timex is None:
            raise DanglingReference(f"{doc.doc_id}: TLINK {lid!r} refers to unknown TIMEX3 {ref.id!r}")
        sentence = doc.tokens[timex.token_span[0]].sentence_index if timex.token_span else None
        return ResolvedTimex(timex, sentence)
    if ref.kind == "instance":
        instance = doc.instance_by_id.get(ref.id)
    else:
        candidates = doc.instances_by_event.get(ref.id)
        instance = candidates[0] if candidates else None
    if instance is None or instance.eid not in doc.event_by_id:
        raise DanglingReference(f"{doc.doc_id}: TLINK {lid!r} refers to unknown {ref.kind} {ref.id!r}")
    event = doc.event_by_id[instance.eid]
    return ResolvedEvent(instance, event, doc.tokens[event.token_span[0]].sentence_index)


def resolve_tlink(doc, link):
    arg1 = _resolve(doc, link.source, link.lid)
    arg2 = _resolve(doc, link.target, link.lid)
    signal = None
    if link.signal is not None:
        signal = doc.signal_by_id.get(link.signal)
        if signal is None:
            raise DanglingReference(f"{doc.doc_id}: TLINK {link.lid!r} refers to unknown SIGNAL {link.signal!r}")
    is_event_event = isinstance(arg1, ResolvedEvent) and isinstance(arg2, ResolvedEvent)
    return ResolvedLink(arg1, arg2, signal, is_event_event)
