"""Multinomial maximum-entropy classifier over categorical indicator features.

p(y|x) is proportional to exp(sum of w[y, f] over the features f of x). Training
maximizes sum_i log p(y_i|x_i) - l2_lambda * ||w||^2 by full-batch gradient
ascent with a backtracking line search, starting from zero weights.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.special import logsumexp, softmax

from .base_info import version
from .errors import EmptyData, MalformedModel, UnknownRelation, UsageError
from .features import canonical_order, feature_set as get_feature_set
from .file_io import File
from .ops import central_difference_gradient, one_hot, relative_error
from .relations import FoldedClass, parse_folded

logger = logging.getLogger(__name__)

MODEL_FORMAT = "timelink-maxent"
MODEL_FORMAT_VERSION = 1

ARMIJO_C = 1e-4
MIN_STEP = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    l2_lambda: float = 0.1
    max_iters: int = 500
    tol: float = 1e-7
    seed: int = 0  # reserved; training is deterministic

    def __post_init__(self):
        if self.l2_lambda < 0:
            raise UsageError(f"l2_lambda must be >= 0, got {self.l2_lambda}")
        if self.max_iters < 0:
            raise UsageError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.tol <= 0:
            raise UsageError(f"tol must be > 0, got {self.tol}")

    @classmethod
    def from_settings(cls, settings):
        train = settings.get("train", {})
        return cls(float(train.get("l2_lambda", 0.1)), int(train.get("max_iters", 500)),
                   float(train.get("tol", 1e-7)), int(train.get("seed", 0)))


class FeatureIndex:
    """Bijection between "name=value" strings and dense column ids."""

    def __init__(self, names=()):
        self.names = []
        self.ids = {}
        for name in names:
            self.add(name)

    def add(self, name):
        if name not in self.ids:
            self.ids[name] = len(self.names)
            self.names.append(name)
        return self.ids[name]

    @classmethod
    def build(cls, instances, fs):
        index = cls()
        for inst in canonical_order(instances):
            for name in inst.features.select(fs.names).strings():
                index.add(name)
        return index

    def encode(self, fv, fs=None):
        if fs is not None:
            fv = fv.select(fs.names)
        return sorted({self.ids[s] for s in fv.strings() if s in self.ids})

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, FeatureIndex) and self.names == other.names


@dataclass
class MaxEntModel:
    labels: tuple
    feature_index: FeatureIndex
    weights: np.ndarray
    config: TrainConfig = field(default_factory=TrainConfig)
    feature_set: str = "base"
    degenerate: bool = False
    iterations: int = 0
    # objective after each accepted step, starting from the zero weights
    trace: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        self.weights = np.array(self.weights, dtype=np.float64)
        if self.weights.shape != (len(self.labels), len(self.feature_index)):
            raise ValueError(f"weight matrix {self.weights.shape} does not match "
                             f"{len(self.labels)} labels x {len(self.feature_index)} features")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("model weights must be finite")
        self.weights.flags.writeable = False


@dataclass(frozen=True)
class Prediction:
    label: FoldedClass
    dist: dict


def design_matrix(index, vectors, fs=None):
    rows, cols = [], []
    for i, fv in enumerate(vectors):
        ids = index.encode(fv, fs)
        rows.extend([i] * len(ids))
        cols.extend(ids)
    data = np.ones(len(rows))
    return sparse.csr_matrix((data, (rows, cols)), shape=(len(vectors), len(index)))


def _objective(weights, X, Y, l2_lambda):
    penalty = l2_lambda * float(np.sum(weights * weights))
    if X.shape[0] == 0:
        return -penalty, -2 * l2_lambda * weights
    scores = np.asarray(X @ weights.T)
    log_z = logsumexp(scores, axis=1)
    value = float(np.sum(scores * Y) - np.sum(log_z)) - penalty
    probs = np.exp(scores - log_z[:, None])
    grad = np.asarray(X.T @ (Y - probs)).T - 2 * l2_lambda * weights
    return value, grad


def _encode_data(model, data):
    fs = get_feature_set(model.feature_set)
    X = design_matrix(model.feature_index, [inst.features for inst in data], fs)
    positions = {label: i for i, label in enumerate(model.labels)}
    missing = {inst.label for inst in data} - set(positions)
    if missing:
        raise ValueError(f"labels {sorted(m.value for m in missing)} are not in the model")
    Y = one_hot(np.array([positions[inst.label] for inst in data], dtype=int), len(model.labels))
    return X, Y


def objective_and_gradient(model, data, weights=None):
    """Regularized log-likelihood of ``data`` under ``model`` (or ``weights``) and its gradient."""
    X, Y = _encode_data(model, data)
    w = model.weights if weights is None else np.asarray(weights, dtype=np.float64)
    return _objective(w, X, Y, model.config.l2_lambda)


def check_gradient(model, data, h=1e-5, weights=None):
    """Relative error between the analytic gradient and central finite differences."""
    X, Y = _encode_data(model, data)
    w = np.array(model.weights if weights is None else weights, dtype=np.float64)
    lam = model.config.l2_lambda
    _, analytic = _objective(w, X, Y, lam)
    numeric = central_difference_gradient(lambda v: _objective(v, X, Y, lam)[0], w, h)
    return relative_error(analytic, numeric)


def sorted_labels(labels):
    return tuple(sorted(set(labels), key=lambda label: label.value))


def train(data, feature_set="base", cfg=None):
    cfg = cfg or TrainConfig()
    if not data:
        raise EmptyData("cannot train on an empty dataset")
    fs = get_feature_set(feature_set)
    ordered = canonical_order(data)
    labels = sorted_labels(inst.label for inst in ordered)
    index = FeatureIndex.build(ordered, fs)
    model = MaxEntModel(labels, index, np.zeros((len(labels), len(index))), cfg, fs.name)
    X, Y = _encode_data(model, ordered)

    degenerate = len(labels) == 1
    if degenerate:
        logger.warning("training data has a single label (%s); the model predicts it constantly", labels[0])

    weights = np.zeros((len(labels), len(index)))
    value, grad = _objective(weights, X, Y, cfg.l2_lambda)
    trace = [value]
    step = 1.0
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        gnorm2 = float(np.sum(grad * grad))
        if gnorm2 == 0.0:
            iterations -= 1
            break
        while True:
            candidate = weights + step * grad
            new_value, new_grad = _objective(candidate, X, Y, cfg.l2_lambda)
            if new_value >= value + ARMIJO_C * step * gnorm2:
                break
            step *= 0.5
            if step < MIN_STEP:
                break
        if step < MIN_STEP:
            logger.debug("line search failed at iteration %d", iterations)
            iterations -= 1
            break
        change = abs(new_value - value) / max(abs(value), 1.0)
        weights, value, grad = candidate, new_value, new_grad
        trace.append(value)
        logger.debug("iteration %d: objective %.6f step %.3g", iterations, value, step)
        step *= 2.0
        if change < cfg.tol:
            break
    logger.info("trained %s model: %d labels, %d features, %d iterations, objective %.4f",
                fs.name, len(labels), len(index), iterations, value)
    return MaxEntModel(labels, index, weights, cfg, fs.name, degenerate, iterations, tuple(trace))


def predict(model, fv):
    fs = get_feature_set(model.feature_set)
    ids = model.feature_index.encode(fv, fs)
    scores = model.weights[:, ids].sum(axis=1)
    probs = softmax(scores)
    # argmax returns the first maximum, and labels are sorted by name
    best = int(np.argmax(probs))
    return Prediction(model.labels[best], {label: float(p) for label, p in zip(model.labels, probs)})


def predict_labels(model, vectors):
    if not len(vectors):
        return []
    fs = get_feature_set(model.feature_set)
    X = design_matrix(model.feature_index, vectors, fs)
    scores = np.asarray(X @ model.weights.T)
    return [model.labels[i] for i in np.argmax(scores, axis=1)]


def score(model, data):
    if not data:
        raise EmptyData("cannot score an empty dataset")
    predicted = predict_labels(model, [inst.features for inst in data])
    return sum(p == inst.label for p, inst in zip(predicted, data)) / len(data)


def most_common_class(data):
    """Modal label and its relative frequency; ties go to the smallest label name."""
    labels = [getattr(item, "label", item) for item in data]
    if not labels:
        raise EmptyData("no labels to count")
    counts = Counter(labels)
    label, count = min(counts.items(), key=lambda kv: (-kv[1], kv[0].value))
    return label, count / len(labels)


def save_model(model, path):
    lines = [
        f"{MODEL_FORMAT}\t{MODEL_FORMAT_VERSION}",
        f"version\t{version}",
        f"feature_set\t{model.feature_set}",
        "labels\t" + "\t".join(label.value for label in model.labels),
        f"features\t{len(model.feature_index)}",
        f"config\tl2_lambda\t{model.config.l2_lambda!r}\tmax_iters\t{model.config.max_iters}"
        f"\ttol\t{model.config.tol!r}\tseed\t{model.config.seed}",
        f"degenerate\t{int(model.degenerate)}",
        f"iterations\t{model.iterations}",
        "weights",
    ]
    for li, label in enumerate(model.labels):
        for fi, name in enumerate(model.feature_index.names):
            lines.append(f"{label.value}\t{name}\t{float(model.weights[li, fi])!r}")
    File().save_file(path, "\n".join(lines) + "\n")


def load_model(path):
    lines = File().read_file(path).split("\n")
    try:
        fmt, fmt_version = lines[0].split("\t")
        if fmt != MODEL_FORMAT or int(fmt_version) != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format {lines[0]!r}")
        header = {}
        pos = 1
        while lines[pos] != "weights":
            key, _, rest = lines[pos].partition("\t")
            header[key] = rest.split("\t") if rest else []
            pos += 1
        labels = tuple(parse_folded(name) for name in header["labels"])
        n_features = int(header["features"][0])
        conf = header["config"]
        conf = dict(zip(conf[0::2], conf[1::2]))
        cfg = TrainConfig(float(conf["l2_lambda"]), int(conf["max_iters"]), float(conf["tol"]), int(conf["seed"]))
        index = FeatureIndex()
        weights = np.zeros((len(labels), n_features))
        body = [line for line in lines[pos + 1:] if line]
        if len(body) != len(labels) * n_features:
            raise ValueError(f"expected {len(labels) * n_features} weights, found {len(body)}")
        for k, line in enumerate(body):
            label_name, name, weight = line.split("\t")
            li, fi = divmod(k, n_features)
            if label_name != labels[li].value:
                raise ValueError(f"weight line {k} belongs to {label_name}, expected {labels[li].value}")
            if li == 0:
                index.add(name)
            elif index.names[fi] != name:
                raise ValueError(f"weight line {k} names feature {name!r}, expected {index.names[fi]!r}")
            weights[li, fi] = float(weight)
    except (ValueError, KeyError, IndexError, UnknownRelation) as e:
        raise MalformedModel(f"{path}: not a readable model file: {e}") from e
    return MaxEntModel(labels, index, weights, cfg, header["feature_set"][0],
                       bool(int(header["degenerate"][0])), int(header["iterations"][0]))
