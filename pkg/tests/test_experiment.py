import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from source.python.classifier import TrainConfig
from source.python.errors import DivisionByZero, EmptyData, TooFewInstances, UsageError
from source.python.experiment import (BoundInputs, SplitSpec, baseline_accuracy, feature_set_table, fit_fold,
                                      recompose_accuracy, replication_table, run_experiment,
                                      run_subset_experiment, select_subset, signalled_accuracy_bound,
                                      signalled_proportion, split_dataset, subset_table)
from source.python.features import compute_hint_table
from source.python.relations import FoldedClass

CFG = TrainConfig(max_iters=200)


@pytest.fixture
def cheap_instances(make_instance):
    def make(n, label="BEFORE"):
        return [make_instance(f"doc{i // 10:03d}", f"l{i % 10}", label) for i in range(n)]
    return make


@pytest.fixture
def signalled_mix(make_instance):
    """Signalled links labelled by their phrase, unsignalled ones by a fixed 3:1 pattern."""
    data = []
    for i in range(40):
        phrase, label = ("after", "BEFORE") if i % 2 else ("until", "ENDS")
        data.append(make_instance("s", f"l{i:02d}", label, {"e1.tense": "PAST"}, phrase=phrase))
    for i in range(40):
        data.append(make_instance("u", f"l{i:02d}", "INCLUDES" if i % 4 == 0 else "BEFORE", {"e1.tense": "PAST"}))
    return data


def test_split_spec_validation():
    with pytest.raises(UsageError):
        SplitSpec(mode="bootstrap")
    with pytest.raises(UsageError):
        SplitSpec(mode="xv", folds=1)
    with pytest.raises(UsageError):
        SplitSpec(mode="holdout", eval_fraction=1.0)


def test_holdout_sizes(cheap_instances):
    [fold] = split_dataset(cheap_instances(6234), SplitSpec("holdout", eval_fraction=0.3333333333333333))
    assert (len(fold.eval), len(fold.train)) == (2078, 4156)


def test_xv_partitions_the_data(cheap_instances):
    data = cheap_instances(103)
    folds = split_dataset(data, SplitSpec("xv", folds=10, seed=3))
    assert len(folds) == 10
    assert sorted(len(f.eval) for f in folds) == [10] * 7 + [11] * 3
    held = [inst.key for f in folds for inst in f.eval]
    assert sorted(held) == sorted(inst.key for inst in data)
    for f in folds:
        assert not {i.key for i in f.train} & {i.key for i in f.eval}
        assert len(f.train) + len(f.eval) == len(data)


def test_ten_instances_ten_folds(cheap_instances):
    assert [len(f.eval) for f in split_dataset(cheap_instances(10), SplitSpec("xv", folds=10))] == [1] * 10


def test_split_is_seeded_and_order_free(cheap_instances):
    data = cheap_instances(50)
    spec = SplitSpec("xv", folds=5, seed=11)
    first = [[i.key for i in f.eval] for f in split_dataset(data, spec)]
    again = [[i.key for i in f.eval] for f in split_dataset(list(reversed(data)), spec)]
    other = [[i.key for i in f.eval] for f in split_dataset(data, SplitSpec("xv", folds=5, seed=12))]
    assert first == again
    assert first != other


def test_split_errors(cheap_instances):
    with pytest.raises(EmptyData):
        split_dataset([], SplitSpec())
    with pytest.raises(TooFewInstances):
        split_dataset(cheap_instances(3), SplitSpec("xv", folds=10))


def test_single_label_accuracy_equals_baseline(cheap_instances):
    report = run_experiment(cheap_instances(30, "ENDS"), SplitSpec("xv", folds=3), "base", CFG)
    assert report.accuracy == 1.0
    assert report.baseline == 1.0
    assert report.n_eval == 30
    assert report.n_train == 20


def test_report_shape(signalled_mix):
    report = run_experiment(signalled_mix, SplitSpec("xv", folds=4), "base+signal", CFG, breakdown=True)
    payload = report.to_dict()
    assert set(payload) == {"feature_set", "mode", "seed", "n_train", "n_eval", "baseline", "accuracy",
                            "confusion", "hint_scope", "subset"}
    assert set(payload["confusion"]) == {c.value for c in FoldedClass}
    assert sum(sum(row.values()) for row in payload["confusion"].values()) == len(signalled_mix)
    assert payload["subset"]["signalled"]["n"] == 40
    assert payload["subset"]["unsignalled"]["n"] == 40
    assert payload["hint_scope"] == "none"


def test_signal_features_beat_base_features(signalled_mix):
    spec = SplitSpec("xv", folds=4)
    base = run_experiment(signalled_mix, spec, "base", CFG, breakdown=True)
    signal = run_experiment(signalled_mix, spec, "base+signal", CFG, breakdown=True)
    assert signal.subset["signalled"]["accuracy"] == 1.0
    assert signal.accuracy > base.accuracy


def test_baseline_accuracy(make_instance):
    train_part = [make_instance("t", f"l{i}", label) for i, label in enumerate(["BEFORE", "BEFORE", "ENDS"])]
    eval_part = [make_instance("e", f"l{i}", label) for i, label in enumerate(["BEFORE", "ENDS", "ENDS", "ENDS"])]
    assert baseline_accuracy(train_part, eval_part) == 0.25


def test_hints_come_from_the_training_side_only(make_instance):
    train_part = [make_instance("t", f"l{i}", "BEFORE", phrase="after") for i in range(3)]
    eval_only = make_instance("e", "l0", "ENDS", phrase="until")
    _, hints = fit_fold(train_part, "base+signal+hint", CFG)
    assert hints == compute_hint_table(train_part)
    assert hints.lookup(eval_only.signal.phrase) is None


def test_per_fold_hints_do_not_leak(make_instance):
    # every phrase occurs once, so no fold can have seen the phrase of its held-out link
    data = [make_instance("d", f"l{i:02d}", "ENDS" if i % 2 else "BEFORE", phrase=f"phrase{i}") for i in range(20)]
    report = run_experiment(data, SplitSpec("xv", folds=5), "base+signal+hint", CFG)
    assert report.hint_scope == "per-fold"
    plain = run_experiment(data, SplitSpec("xv", folds=5), "base+signal", CFG)
    assert report.accuracy == plain.accuracy


def test_holdout_hint_scope(signalled_mix):
    report = run_experiment(signalled_mix, SplitSpec("holdout"), "base+signal+hint", CFG)
    assert report.hint_scope == "holdout"
    assert report.mode == "holdout"


def test_subset_runs(signalled_mix):
    spec = SplitSpec("xv", folds=4)
    report = run_subset_experiment(signalled_mix, spec, "base+signal", CFG, "signalled")
    assert report.mode == "xv:signalled-only"
    assert report.n_eval == 40
    assert report.accuracy == 1.0
    assert report.subset["unsignalled"]["n"] == 0
    unsignalled = run_subset_experiment(signalled_mix, spec, "base", CFG, "unsignalled")
    assert unsignalled.baseline == pytest.approx(0.75, abs=0.1)


def test_subset_errors(make_instance):
    data = [make_instance("d", "l0", "BEFORE", phrase="after"), make_instance("d", "l1", "BEFORE")]
    with pytest.raises(TooFewInstances):
        run_subset_experiment(data, SplitSpec("xv", folds=10), "base", CFG, "signalled")
    with pytest.raises(UsageError):
        select_subset(data, "all")


def test_signalled_proportion(signalled_mix):
    assert signalled_proportion(signalled_mix) == 0.5
    with pytest.raises(EmptyData):
        signalled_proportion([])


def test_bound_example():
    result = signalled_accuracy_bound(BoundInputs(0.6146, 0.6032, 319 / 6234))
    assert result.a == pytest.approx(0.8263, abs=5e-4)
    assert result.in_range


@pytest.mark.parametrize("x, s", [(0.6, 0.05), (0.0, 0.5), (1.0, 1.0)])
def test_bound_without_gain(x, s):
    assert signalled_accuracy_bound(BoundInputs(x, x, s)).a == pytest.approx(x, abs=1e-12)


def test_bound_all_signalled():
    assert signalled_accuracy_bound(BoundInputs(0.7, 0.6, 1.0)).a == pytest.approx(0.7)


@settings(max_examples=200)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(1e-3, 1.0))
def test_bound_round_trip(P, P_n, s):
    a = signalled_accuracy_bound(BoundInputs(P, P_n, s)).a
    assert math.isclose(recompose_accuracy(P_n, a, s), P, abs_tol=1e-12)


def test_bound_out_of_range_is_flagged():
    result = signalled_accuracy_bound(BoundInputs(0.9, 0.5, 0.1))
    assert result.a == pytest.approx(4.5)
    assert not result.in_range


def test_bound_errors():
    with pytest.raises(DivisionByZero):
        signalled_accuracy_bound(BoundInputs(0.6, 0.6, 0.0))
    with pytest.raises(UsageError):
        BoundInputs(1.2, 0.5, 0.1)


def test_tables(signalled_mix):
    replication = replication_table(signalled_mix, folds=4, cfg=CFG)
    assert [label for label, _ in replication.rows] == ["Base features (4-fold XV)", "Base features (train/test)"]
    features = feature_set_table(signalled_mix, folds=4, cfg=CFG)
    assert features.columns == ("XV", "Split")
    assert len(features.rows) == 4
    xv = subset_table(signalled_mix, SplitSpec("xv", folds=4), CFG)
    assert xv.columns == ("Baseline", "base", "base+signal")
    holdout = subset_table(signalled_mix, SplitSpec("holdout"), CFG)
    assert holdout.columns == ("Baseline", "base", "base+signal", "base+signal+hint")
    pooled = subset_table(signalled_mix, SplitSpec("xv", folds=4), CFG, train_on_all=True)
    assert [label for label, _ in pooled.rows] == ["Unsignalled links", "Signalled links"]
    assert pooled.to_dict()["rows"][1]["values"]["base+signal"] == 1.0


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.data())
def test_held_out_labels_never_reach_the_fold(make_instance, data):
    labels = [c.value for c in FoldedClass]
    phrases = ["after", "before", "until", None]
    pool = [make_instance("d", f"l{i:02d}", labels[i % 3], {"e1.tense": ("PAST", "NONE")[i % 2]},
                          phrase=phrases[i % 4]) for i in range(24)]
    spec = SplitSpec("xv", folds=4, seed=data.draw(st.integers(0, 50)))
    for fold in split_dataset(pool, spec):
        drawn = data.draw(st.lists(st.sampled_from(labels), min_size=len(fold.eval), max_size=len(fold.eval)))
        relabelled = {inst.key: replace(inst, label=FoldedClass(label)) for inst, label in zip(fold.eval, drawn)}
        mutated = [relabelled.get(inst.key, inst) for inst in pool]
        twin = split_dataset(mutated, spec)[fold.index]
        assert [inst.key for inst in twin.eval] == [inst.key for inst in fold.eval]
        model, hints = fit_fold(fold.train, "base+signal+hint", CFG)
        twin_model, twin_hints = fit_fold(twin.train, "base+signal+hint", CFG)
        assert twin_hints == hints
        assert twin_model.labels == model.labels
        assert twin_model.feature_index == model.feature_index
        np.testing.assert_array_equal(twin_model.weights, model.weights)
