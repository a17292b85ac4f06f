"""Cross-validation / holdout harness, subset runs, result tables and the signalled-accuracy bound."""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sklearn.metrics import confusion_matrix

from .classifier import TrainConfig, most_common_class, predict_labels, train
from .errors import DivisionByZero, EmptyData, TooFewInstances, UsageError
from .features import apply_hints, canonical_order, compute_hint_table, feature_set as get_feature_set
from .relations import FoldedClass

logger = logging.getLogger(__name__)

SPLIT_MODES = ("xv", "holdout")
SUBSETS = ("signalled", "unsignalled")
LABEL_ORDER = tuple(sorted(c.value for c in FoldedClass))


@dataclass(frozen=True)
class SplitSpec:
    mode: str = "xv"
    folds: int = 10
    eval_fraction: float = 1 / 3
    seed: int = 0

    def __post_init__(self):
        if self.mode not in SPLIT_MODES:
            raise UsageError(f"split mode must be one of {SPLIT_MODES}, got {self.mode!r}")
        if self.mode == "xv" and self.folds < 2:
            raise UsageError(f"cross-validation needs at least 2 folds, got {self.folds}")
        if self.mode == "holdout" and not 0 < self.eval_fraction < 1:
            raise UsageError(f"eval fraction must be in (0, 1), got {self.eval_fraction}")


@dataclass(frozen=True)
class Fold:
    index: int
    train: tuple
    eval: tuple


@dataclass
class EvalReport:
    feature_set: str
    mode: str
    seed: int
    n_train: int
    n_eval: int
    baseline: float
    accuracy: float
    confusion: dict
    subset: Optional[dict] = None
    hint_scope: str = "none"

    def to_dict(self):
        out = {
            "feature_set": self.feature_set,
            "mode": self.mode,
            "seed": self.seed,
            "n_train": self.n_train,
            "n_eval": self.n_eval,
            "baseline": self.baseline,
            "accuracy": self.accuracy,
            "confusion": self.confusion,
            "hint_scope": self.hint_scope,
        }
        if self.subset is not None:
            out["subset"] = self.subset
        return out


@dataclass(frozen=True)
class BoundInputs:
    P: float
    P_n: float
    s: float

    def __post_init__(self):
        for name in ("P", "P_n", "s"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise UsageError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class BoundResult:
    a: float
    in_range: bool


@dataclass
class ResultTable:
    title: str
    columns: tuple
    rows: list = field(default_factory=list)

    def to_dict(self):
        return {
            "title": self.title,
            "columns": list(self.columns),
            "rows": [{"label": label, "values": dict(zip(self.columns, values))} for label, values in self.rows],
        }


def split_dataset(data, spec):
    """Seeded, non-stratified partition; always returns a list of folds (one for holdout)."""
    if not data:
        raise EmptyData("cannot split an empty dataset")
    ordered = canonical_order(data)
    n = len(ordered)
    perm = np.random.default_rng(spec.seed).permutation(n)
    if spec.mode == "xv":
        if n < spec.folds:
            raise TooFewInstances(f"{n} instances cannot fill {spec.folds} folds")
        parts = np.array_split(perm, spec.folds)
        folds = []
        for i, part in enumerate(parts):
            held = set(part.tolist())
            train_part = tuple(ordered[j] for j in range(n) if j not in held)
            eval_part = tuple(ordered[j] for j in sorted(held))
            folds.append(Fold(i, train_part, eval_part))
        return folds
    n_eval = int(math.floor(spec.eval_fraction * n + 0.5))
    if n_eval < 1 or n_eval >= n:
        raise TooFewInstances(f"{n} instances cannot be split with eval fraction {spec.eval_fraction}")
    held = set(perm[:n_eval].tolist())
    train_part = tuple(ordered[j] for j in range(n) if j not in held)
    eval_part = tuple(ordered[j] for j in sorted(held))
    return [Fold(0, train_part, eval_part)]


def fit_fold(train_part, feature_set="base", cfg=None):
    """Train on one fold's training side; the hint table (if any) comes from that side only."""
    fs = get_feature_set(feature_set)
    hints = None
    if fs.uses_hint:
        hints = compute_hint_table(train_part)
        train_part = apply_hints(train_part, hints)
    return train(list(train_part), fs, cfg), hints


def baseline_accuracy(train_part, eval_part):
    """Accuracy on ``eval_part`` of always answering the modal label of ``train_part``."""
    if not eval_part:
        raise EmptyData("cannot score an empty evaluation set")
    majority, _ = most_common_class(train_part)
    return sum(inst.label == majority for inst in eval_part) / len(eval_part)


def _confusion(gold, predicted):
    matrix = confusion_matrix([g.value for g in gold], [p.value for p in predicted], labels=list(LABEL_ORDER))
    return {g: {p: int(matrix[i, j]) for j, p in enumerate(LABEL_ORDER)} for i, g in enumerate(LABEL_ORDER)}


def _breakdown(gold, predicted, majority, signalled):
    out = {}
    for name, flag in (("signalled", True), ("unsignalled", False)):
        rows = [(g == p, g == m) for g, p, m, s in zip(gold, predicted, majority, signalled) if s == flag]
        n = len(rows)
        out[name] = {
            "accuracy": sum(hit for hit, _ in rows) / n if n else None,
            "baseline": sum(base for _, base in rows) / n if n else None,
            "n": n,
        }
    return out


def _hint_scope(fs, spec):
    if not fs.uses_hint:
        return "none"
    return "per-fold" if spec.mode == "xv" else "holdout"


def run_experiment(data, spec, feature_set="base", cfg=None, breakdown=False, mode_label=None):
    cfg = cfg or TrainConfig()
    fs = get_feature_set(feature_set)
    folds = split_dataset(data, spec)
    gold, predicted, majority, signalled = [], [], [], []
    for fold in folds:
        model, hints = fit_fold(fold.train, fs, cfg)
        eval_part = apply_hints(fold.eval, hints) if hints is not None else list(fold.eval)
        fold_pred = predict_labels(model, [inst.features for inst in eval_part])
        fold_majority, _ = most_common_class(fold.train)
        gold.extend(inst.label for inst in eval_part)
        predicted.extend(fold_pred)
        majority.extend([fold_majority] * len(eval_part))
        signalled.extend(inst.has_signal for inst in eval_part)
        logger.debug("fold %d: %d train, %d eval", fold.index, len(fold.train), len(eval_part))

    confusion = _confusion(gold, predicted)
    correct = sum(confusion[label][label] for label in LABEL_ORDER)
    total = sum(sum(row.values()) for row in confusion.values())
    report = EvalReport(
        feature_set=fs.name,
        mode=mode_label or spec.mode,
        seed=spec.seed,
        n_train=sum(len(f.train) for f in folds) // len(folds),
        n_eval=len(gold),
        baseline=sum(g == m for g, m in zip(gold, majority)) / len(gold),
        accuracy=correct / total,
        confusion=confusion,
        subset=_breakdown(gold, predicted, majority, signalled) if breakdown else None,
        hint_scope=_hint_scope(fs, spec),
    )
    logger.info("%s %s: accuracy %.4f baseline %.4f (%d eval)", report.mode, fs.name,
                report.accuracy, report.baseline, report.n_eval)
    return report


def select_subset(data, subset):
    if subset not in SUBSETS:
        raise UsageError(f"subset must be one of {SUBSETS}, got {subset!r}")
    want = subset == "signalled"
    return [inst for inst in data if inst.has_signal == want]


def run_subset_experiment(data, spec, feature_set="base", cfg=None, subset="signalled"):
    """Experiment run entirely inside one subset: its own folds, baseline and hint tables."""
    part = select_subset(data, subset)
    if not part:
        raise TooFewInstances(f"no {subset} instances")
    return run_experiment(part, spec, feature_set, cfg, breakdown=True, mode_label=f"{spec.mode}:{subset}-only")


def signalled_proportion(data):
    if not data:
        raise EmptyData("no instances")
    return sum(inst.has_signal for inst in data) / len(data)


def signalled_accuracy_bound(b):
    """Back-solve P = P_n (1 - s) + a s for a; the result is not clamped."""
    if b.s == 0:
        raise DivisionByZero("the bound is undefined when no links are signalled (s = 0)")
    a = (b.P - b.P_n * (1 - b.s)) / b.s
    in_range = 0.0 <= a <= 1.0
    if not in_range:
        logger.warning("signalled accuracy bound %.4f lies outside [0, 1]", a)
    return BoundResult(a, in_range)


def recompose_accuracy(P_n, a, s):
    return P_n * (1 - s) + a * s


def replication_table(data, folds=10, eval_fraction=1 / 3, seed=0, cfg=None):
    xv = run_experiment(data, SplitSpec("xv", folds, eval_fraction, seed), "base", cfg)
    split = run_experiment(data, SplitSpec("holdout", folds, eval_fraction, seed), "base", cfg)
    table = ResultTable("Replicated base-feature results", ("Predictive accuracy", "Baseline"))
    table.rows.append((f"Base features ({folds}-fold XV)", (xv.accuracy, xv.baseline)))
    table.rows.append(("Base features (train/test)", (split.accuracy, split.baseline)))
    return table


def feature_set_table(data, folds=10, eval_fraction=1 / 3, seed=0, cfg=None):
    xv_spec = SplitSpec("xv", folds, eval_fraction, seed)
    split_spec = SplitSpec("holdout", folds, eval_fraction, seed)
    table = ResultTable("TLINK classification with and without signal features", ("XV", "Split"))
    rows = [("Without signal features", "base"), ("With basic signal features", "base+signal"),
            ("With signal features including hint (per-fold under XV)", "base+signal+hint")]
    baseline = None
    for label, name in rows:
        xv = run_experiment(data, xv_spec, name, cfg)
        split = run_experiment(data, split_spec, name, cfg)
        if baseline is None:
            baseline = ("Baseline (most common class)", (xv.baseline, split.baseline))
            table.rows.append(baseline)
        table.rows.append((label, (xv.accuracy, split.accuracy)))
    return table


def subset_table(data, spec, cfg=None, train_on_all=False):
    """Signalled vs unsignalled accuracy per feature set.

    By default every cell is trained and evaluated inside its subset. With
    ``train_on_all`` one model per feature set is trained on every instance and
    its held-out predictions are broken down by subset.
    """
    names = ["base", "base+signal"]
    if spec.mode == "holdout" or train_on_all:
        names.append("base+signal+hint")
    columns = ("Baseline",) + tuple(names)
    title = f"Predictive accuracy over signalled and unsignalled links ({spec.mode}" \
            f"{', trained on all links' if train_on_all else ''})"
    table = ResultTable(title, columns)
    pooled = {}
    if train_on_all:
        pooled = {name: run_experiment(data, spec, name, cfg, breakdown=True) for name in names}
    for subset in ("unsignalled", "signalled"):
        cells = []
        for name in names:
            if train_on_all:
                cell = pooled[name].subset[subset]
                cells.append((cell["baseline"], cell["accuracy"]))
            else:
                report = run_subset_experiment(data, spec, name, cfg, subset)
                cells.append((report.baseline, report.accuracy))
        label = "Unsignalled links" if subset == "unsignalled" else "Signalled links"
        table.rows.append((label, (cells[0][0],) + tuple(acc for _, acc in cells)))
    return table
