import pytest

from source.python.features import FeatureVector, LinkInstance
from source.python.relations import parse_folded
from source.python.timeml import SignalAnn

SMILED_AFTER_ATE = """John <EVENT id="e1"> smiled </EVENT> <SIGNAL id="s1"> after </SIGNAL>
he <EVENT id="e2"> ate </EVENT> .
<TLINK id="l1" eventID="e1" relatedToEvent="e2"
  relType="AFTER" signalID="s1" />
"""

BOARD_VOTE = """<?xml version="1.0" encoding="UTF-8"?>
<TimeML>
<DOCID>board-vote</DOCID>
<TEXT>
<s>The board <EVENT eid="e1" class="OCCURRENCE">met</EVENT> on <TIMEX3 tid="t1" type="DATE" value="1998-02-06">Friday</TIMEX3> .</s>
<s>It <EVENT eid="e2" class="OCCURRENCE">approved</EVENT> the plan <SIGNAL sid="s1">after</SIGNAL> the <EVENT eid="e3" class="STATE">vote</EVENT> .</s>
</TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1" tense="PAST" aspect="NONE" polarity="POS" />
<MAKEINSTANCE eiid="ei2" eventID="e2" tense="PAST" aspect="PERFECTIVE" polarity="POS" />
<MAKEINSTANCE eiid="ei3" eventID="e3" tense="NONE" aspect="NONE" polarity="NEG" />
<TLINK lid="l1" eventInstanceID="ei2" relatedToEventInstance="ei3" relType="AFTER" signalID="s1" />
<TLINK lid="l2" eventInstanceID="ei1" relatedToTime="t1" relType="IS_INCLUDED" />
<TLINK lid="l3" eventInstanceID="ei1" relatedToEventInstance="ei2" relType="BEFORE" />
</TimeML>
"""

UNCLOSED = """<TimeML><TEXT>The <EVENT eid="e1">storm</TEXT></TimeML>"""

DANGLING_SIGNAL = """<EVENT id="e1">rained</EVENT> <SIGNAL id="s1">before</SIGNAL> <EVENT id="e2">cleared</EVENT> .
<TLINK id="l1" eventID="e1" relatedToEvent="e2" relType="BEFORE" signalID="s9" />
"""


@pytest.fixture
def smiled_after_ate():
    return SMILED_AFTER_ATE


@pytest.fixture
def board_vote():
    return BOARD_VOTE


@pytest.fixture
def corpus_dir(tmp_path):
    """Three valid TimeML files."""
    for i, text in enumerate([SMILED_AFTER_ATE, BOARD_VOTE, SMILED_AFTER_ATE]):
        (tmp_path / f"doc{i}.tml").write_text(text, encoding="utf-8")
    return tmp_path


@pytest.fixture
def make_instance():
    """Factory for LinkInstances that only carry what training and splitting look at."""
    def make(doc_id, lid, label, values=None, phrase=None):
        signal = SignalAnn(f"s-{lid}", (0, 0), phrase) if phrase is not None else None
        values = dict(values or {})
        if phrase is not None:
            values.setdefault("sig.phrase", phrase)
        return LinkInstance(doc_id, lid, parse_folded(label), None, None, signal, FeatureVector.from_dict(values))
    return make
