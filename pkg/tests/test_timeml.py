import pytest

from source.python.errors import CorpusIoError, DanglingReference, DuplicateId, MalformedXml, UnknownRelation
from source.python.relations import RelationType
from source.python.timeml import (ResolvedEvent, ResolvedTimex, corpus_files, load_corpus, parse_document,
                                  resolve_tlink)

from conftest import BOARD_VOTE, DANGLING_SIGNAL, SMILED_AFTER_ATE, UNCLOSED


def test_inline_example(smiled_after_ate):
    doc = parse_document(smiled_after_ate)
    assert [(e.eid, e.text) for e in doc.events] == [("e1", "smiled"), ("e2", "ate")]
    assert [(s.sid, s.phrase) for s in doc.signals] == [("s1", "after")]
    assert len(doc.tlinks) == 1
    link = doc.tlinks[0]
    assert (link.lid, link.rel_type, link.signal) == ("l1", RelationType.AFTER, "s1")
    assert [t.text for t in doc.tokens] == ["John", "smiled", "after", "he", "ate", "."]
    assert len(doc.instances) == 2
    assert all(inst.synthesized for inst in doc.instances)
    assert {inst.eiid for inst in doc.instances} == {"syn-e1", "syn-e2"}
    assert all(inst.tense == "NONE" and inst.aspect == "NONE" for inst in doc.instances)


def test_timebank_dialect(board_vote):
    doc = parse_document(board_vote, source_path="corpus/board.tml")
    assert doc.doc_id == "board-vote"
    assert doc.instance_by_id["ei1"].tense == "PAST"
    assert doc.instance_by_id["ei3"].polarity == "NEG"
    assert not any(inst.synthesized for inst in doc.instances)
    assert doc.timex_by_id["t1"].value == "1998-02-06"
    sentences = {e.eid: doc.tokens[e.token_span[0]].sentence_index for e in doc.events}
    # DOCID is a sentence of its own
    assert sentences == {"e1": 1, "e2": 2, "e3": 2}


def test_event_level_attributes_reach_synthesized_instances():
    doc = parse_document('<EVENT id="e1" tense="FUTURE" polarity="NEG">go</EVENT> .')
    inst = doc.instances[0]
    assert (inst.eiid, inst.tense, inst.polarity, inst.synthesized) == ("syn-e1", "FUTURE", "NEG", True)


def test_parsing_is_pure(board_vote):
    assert parse_document(board_vote) == parse_document(board_vote)


def test_doc_id_falls_back_to_file_name(smiled_after_ate):
    assert parse_document(smiled_after_ate, source_path="/data/abc_19980108.tml").doc_id == "abc_19980108"


def test_empty_timex_is_kept():
    doc = parse_document('<TIMEX3 tid="t0" type="DATE" value="PRESENT_REF" /><EVENT id="e1">ran</EVENT> .')
    assert doc.timex_by_id["t0"].token_span is None


@pytest.mark.parametrize("text, error", [
    (UNCLOSED, MalformedXml),
    (DANGLING_SIGNAL, DanglingReference),
    ('<EVENT id="e1">a</EVENT> <EVENT id="e1">b</EVENT>', DuplicateId),
    ('<EVENT id="e1">a</EVENT> <EVENT id="e2">b</EVENT>'
     '<TLINK id="l1" eventID="e1" relatedToEvent="e2" relType="OVERLAPS" />', UnknownRelation),
    ('<EVENT id="e1">a</EVENT><TLINK id="l1" eventID="e1" relatedToEvent="e7" relType="BEFORE" />',
     DanglingReference),
    ('<EVENT id="e1">a</EVENT><MAKEINSTANCE eiid="ei1" eventID="e5" />', DanglingReference),
    ('<EVENT id="e1"></EVENT>', MalformedXml),
])
def test_malformed_documents(text, error):
    with pytest.raises(error):
        parse_document(text)


def test_dialect_hint_restricts_attributes(smiled_after_ate):
    with pytest.raises(MalformedXml):
        parse_document(smiled_after_ate, dialect_hint="timebank")
    assert len(parse_document(smiled_after_ate, dialect_hint="inline").tlinks) == 1


def test_resolve_example_link(smiled_after_ate):
    doc = parse_document(smiled_after_ate)
    resolved = resolve_tlink(doc, doc.tlinks[0])
    assert isinstance(resolved.arg1, ResolvedEvent) and isinstance(resolved.arg2, ResolvedEvent)
    assert resolved.arg1.instance.eid == "e1"
    assert resolved.arg2.instance.eid == "e2"
    assert resolved.signal.sid == "s1"
    assert resolved.is_event_event


def test_resolve_event_timex_and_unsignalled(board_vote):
    doc = parse_document(board_vote)
    links = {link.lid: link for link in doc.tlinks}
    to_time = resolve_tlink(doc, links["l2"])
    assert isinstance(to_time.arg2, ResolvedTimex)
    assert not to_time.is_event_event
    assert resolve_tlink(doc, links["l3"]).signal is None


def test_load_corpus(corpus_dir):
    documents, issues = load_corpus([str(corpus_dir)])
    assert len(documents) == 3
    assert issues == []
    again, _ = load_corpus([str(corpus_dir)])
    assert [d.source_path for d in documents] == [d.source_path for d in again]


def test_load_corpus_reports_bad_files(corpus_dir):
    bad = corpus_dir / "doc1.tml"
    bad.write_text(UNCLOSED, encoding="utf-8")
    documents, issues = load_corpus([str(corpus_dir)])
    assert len(documents) == 2
    assert len(issues) == 1
    assert issues[0].path == str(bad)


def test_missing_path_is_an_error(tmp_path):
    with pytest.raises(CorpusIoError):
        corpus_files([str(tmp_path / "nowhere")])


def test_corpus_files_filters_suffixes(tmp_path):
    (tmp_path / "a.tml").write_text(SMILED_AFTER_ATE, encoding="utf-8")
    (tmp_path / "b.xml").write_text(BOARD_VOTE, encoding="utf-8")
    (tmp_path / "notes.txt").write_text("not timeml", encoding="utf-8")
    assert [p.rsplit("/", 1)[-1] for p in corpus_files([str(tmp_path)])] == ["a.tml", "b.xml"]


def test_token_spans_index_the_flattened_text(smiled_after_ate):
    doc = parse_document(smiled_after_ate)
    assert "<" not in doc.text
    for token in doc.tokens:
        start, end = token.char_span
        assert doc.text[start:end] == token.text
