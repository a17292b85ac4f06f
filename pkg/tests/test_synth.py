import math
import os

import pytest

from source.python.base_info import load_settings
from source.python.errors import UnknownRelation, UsageError
from source.python.experiment import SplitSpec, baseline_accuracy, run_subset_experiment
from source.python.features import build_instances
from source.python.relations import parse_folded
from source.python.synth import SynthSpec, generate, write_corpus
from source.python.timeml import load_corpus, parse_document


def instances_of(spec):
    return build_instances([parse_document(text, source_path=name) for name, text in generate(spec)])


def test_same_seed_same_corpus():
    spec = SynthSpec(n_docs=5, seed=1)
    assert generate(spec) == generate(SynthSpec(n_docs=5, seed=1))
    assert generate(spec) != generate(SynthSpec(n_docs=5, seed=2))


def test_documents_parse_cleanly(tmp_path):
    paths = write_corpus(SynthSpec(n_docs=4, links_per_doc=6), str(tmp_path))
    assert sorted(os.path.basename(p) for p in paths) == [f"synth-000{i}.tml" for i in range(1, 5)]
    documents, issues = load_corpus([str(tmp_path)])
    assert issues == []
    assert [doc.doc_id for doc in documents] == [f"synth-000{i}" for i in range(1, 5)]
    # one event-timex link per document besides the event-event ones
    assert all(len(doc.tlinks) == 7 for doc in documents)
    assert all(doc.timexes for doc in documents)


def test_signal_fraction_is_binomial():
    data = instances_of(SynthSpec(n_docs=100, links_per_doc=10, signal_fraction=0.5, seed=7))
    assert len(data) == 1000
    signalled = sum(inst.has_signal for inst in data)
    assert abs(signalled - 500) <= 3 * math.sqrt(1000 * 0.5 * 0.5)


def test_noise_free_lexicon_decides_the_label():
    spec = SynthSpec(n_docs=30, noise=0.0, seed=3)
    data = instances_of(spec)
    signalled = [inst for inst in data if inst.has_signal]
    assert signalled
    for inst in signalled:
        assert inst.label is parse_folded(spec.signal_lexicon[inst.signal.phrase])


def test_extreme_signal_fractions():
    assert not any(inst.has_signal for inst in instances_of(SynthSpec(n_docs=5, signal_fraction=0.0)))
    assert all(inst.has_signal for inst in instances_of(SynthSpec(n_docs=5, signal_fraction=1.0)))


def test_from_settings_with_overrides():
    spec = SynthSpec.from_settings(load_settings(), n_docs=12, seed=None)
    assert spec.n_docs == 12
    assert spec.seed == 1
    assert spec.class_distribution["BEFORE"] == 0.6


@pytest.mark.parametrize("kwargs, error", [
    ({"signal_fraction": 1.5}, UsageError),
    ({"noise": -0.1}, UsageError),
    ({"links_per_doc": 0}, UsageError),
    ({"class_distribution": {"BEFORE": 0.5}}, UsageError),
    ({"class_distribution": {"LATER": 1.0}}, UnknownRelation),
    ({"signal_lexicon": {}}, UsageError),
])
def test_spec_validation(kwargs, error):
    with pytest.raises(error):
        SynthSpec(**kwargs)


@pytest.mark.slow
def test_signal_features_pay_off_only_on_signalled_links():
    data = instances_of(SynthSpec(n_docs=300, links_per_doc=10, signal_fraction=0.5, noise=0.1, seed=1))
    assert len(data) == 3000
    spec = SplitSpec("xv", folds=10, seed=0)
    signalled_base = run_subset_experiment(data, spec, "base", subset="signalled")
    signalled_full = run_subset_experiment(data, spec, "base+signal", subset="signalled")
    assert signalled_base.accuracy <= signalled_base.baseline + 0.03
    assert signalled_full.accuracy >= 0.85
    for feature_set in ("base", "base+signal"):
        report = run_subset_experiment(data, spec, feature_set, subset="unsignalled")
        assert abs(report.accuracy - report.baseline) <= 0.03


def test_unsignalled_labels_follow_the_class_distribution():
    data = instances_of(SynthSpec(n_docs=60, signal_fraction=0.0, seed=5))
    before = sum(inst.label.value == "BEFORE" for inst in data) / len(data)
    assert abs(before - 0.6) <= 3 * math.sqrt(0.6 * 0.4 / len(data))
    assert baseline_accuracy(data, data) == pytest.approx(before)


def test_unsignalled_links_keep_text_order_for_every_class():
    data = instances_of(SynthSpec(n_docs=80, signal_fraction=0.0, seed=2))
    assert any(inst.label.value == "SIMULTANEOUS" for inst in data)
    assert {inst.features["order.e1e2"] for inst in data} == {"e1-e2"}
