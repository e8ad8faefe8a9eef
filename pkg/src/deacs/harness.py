"""Classification-accuracy evaluation of feature rankings.

Two deliberately simple classifiers over encoded categorical data (add-1
multinomial naive Bayes and overlap-distance kNN), k-fold accuracy curves
over growing feature prefixes, and JSON/CSV report emission.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, FoldAssignment
from .selector import SelectionTrace

CURVE_CAP = 30  # accuracy curves stop at this many features

NAIVE_BAYES = "nbc"
K_NEAREST = "knn"

_KNN_CHUNK = 512  # test rows per distance-matrix block


@dataclass(frozen=True)
class ClassifierKind:
    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in (NAIVE_BAYES, K_NEAREST):
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def label(self) -> str:
        return self.kind if self.kind == NAIVE_BAYES else f"knn{self.k}"


def naive_bayes() -> ClassifierKind:
    return ClassifierKind(kind=NAIVE_BAYES)


def k_nearest(k: int = 1) -> ClassifierKind:
    return ClassifierKind(kind=K_NEAREST, k=k)


def nbc_fit_predict(ds: Dataset, train_idx, test_idx, features) -> np.ndarray:
    """Multinomial naive Bayes with add-1 smoothing on both the
    class-conditional code frequencies and the class priors; prediction is
    the argmax log-posterior with ties to the lowest class code."""
    features = list(features)
    if not features:
        raise ValueError("empty feature subset")
    train_idx = np.asarray(train_idx, dtype=np.intp)
    test_idx = np.asarray(test_idx, dtype=np.intp)
    if train_idx.size == 0:
        raise ValueError("empty training set")
    y = ds.class_codes[train_idx]
    n_classes = ds.n_classes
    class_counts = np.bincount(y, minlength=n_classes)
    log_prior = np.log(
        (class_counts + 1.0) / (train_idx.size + n_classes)
    )
    posterior = np.tile(log_prior, (test_idx.size, 1))
    for f in features:
        card = ds.cardinalities[f]
        codes = ds.features[f][train_idx]
        table = np.bincount(
            y * card + codes, minlength=n_classes * card
        ).reshape(n_classes, card)
        log_lik = np.log(
            (table + 1.0) / (class_counts[:, None] + card)
        )
        posterior += log_lik[:, ds.features[f][test_idx]].T
    return np.argmax(posterior, axis=1)


def knn_predict(ds: Dataset, train_idx, test_idx, features, k: int = 1) -> np.ndarray:
    """k-nearest-neighbor with overlap distance (count of mismatching
    feature codes). Distance ties prefer the lower train index; vote ties
    prefer the lowest class code."""
    features = list(features)
    if not features:
        raise ValueError("empty feature subset")
    train_idx = np.asarray(train_idx, dtype=np.intp)
    test_idx = np.asarray(test_idx, dtype=np.intp)
    if k > train_idx.size:
        raise ValueError(f"k={k} exceeds training size {train_idx.size}")
    train = np.stack([ds.features[f][train_idx] for f in features], axis=1)
    test = np.stack([ds.features[f][test_idx] for f in features], axis=1)
    y = ds.class_codes[train_idx]
    n_classes = ds.n_classes

    predictions = np.empty(test_idx.size, dtype=np.int64)
    for start in range(0, test_idx.size, _KNN_CHUNK):
        chunk = test[start : start + _KNN_CHUNK]
        distances = (train[None, :, :] != chunk[:, None, :]).sum(axis=2)
        nearest = np.argsort(distances, axis=1, kind="stable")[:, :k]
        for i, row in enumerate(nearest):
            votes = np.bincount(y[row], minlength=n_classes)
            predictions[start + i] = np.argmax(votes)
    return predictions


def predict_with(ds, kind: ClassifierKind, train_idx, test_idx, features):
    if kind.kind == NAIVE_BAYES:
        return nbc_fit_predict(ds, train_idx, test_idx, features)
    return knn_predict(ds, train_idx, test_idx, features, k=kind.k)


@dataclass
class AccuracyCurve:
    """Mean CV accuracy per number of retained top-ranked features."""

    algorithm: str
    mean_accuracy: list  # entry m-1 is the accuracy using the top m features
    per_classifier: dict  # classifier label -> list like mean_accuracy
    folds: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "folds": self.folds,
            "seed": self.seed,
            "mean_accuracy": self.mean_accuracy,
            "per_classifier": self.per_classifier,
        }

    @classmethod
    def from_dict(cls, d) -> "AccuracyCurve":
        return cls(
            algorithm=d["algorithm"],
            mean_accuracy=list(d["mean_accuracy"]),
            per_classifier={k: list(v) for k, v in d["per_classifier"].items()},
            folds=d["folds"],
            seed=d["seed"],
        )


def fold_accuracy(ds, kind, folds: FoldAssignment, features) -> list:
    """Per-fold test accuracy for one classifier and feature subset."""
    accuracies = []
    for j in range(folds.k):
        test_idx = folds.test_indices(j)
        train_idx = folds.train_indices(j)
        pred = predict_with(ds, kind, train_idx, test_idx, features)
        accuracies.append(float(np.mean(pred == ds.class_codes[test_idx])))
    return accuracies


def evaluate_curve(
    ds: Dataset, trace: SelectionTrace, classifiers, folds: FoldAssignment,
    seed: int = 0,
) -> AccuracyCurve:
    """Accuracy curve over the trace's feature prefixes: for each m, run
    k-fold CV on the top-m features per classifier, average the fold
    accuracies, then average the classifiers."""
    if len(trace) == 0:
        raise ValueError("cannot evaluate an empty selection trace")
    classifiers = list(classifiers)
    if not classifiers:
        raise ValueError("need at least one classifier")
    top = min(len(trace), CURVE_CAP)
    per_classifier = {kind.label: [] for kind in classifiers}
    mean_accuracy = []
    for m in range(1, top + 1):
        features = trace.selected[:m]
        means = []
        for kind in classifiers:
            acc = float(np.mean(fold_accuracy(ds, kind, folds, features)))
            per_classifier[kind.label].append(acc)
            means.append(acc)
        mean_accuracy.append(float(np.mean(means)))
    return AccuracyCurve(
        algorithm=trace.algorithm,
        mean_accuracy=mean_accuracy,
        per_classifier=per_classifier,
        folds=folds.k,
        seed=seed,
    )


def emit_report(curves, out_base):
    """Write {out_base}.json (full curve structure) and {out_base}.csv
    (algorithm,m,mean_accuracy rows); returns the two paths."""
    json_path = f"{out_base}.json"
    csv_path = f"{out_base}.csv"
    doc = {"curves": [c.to_dict() for c in curves]}
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["algorithm", "m", "mean_accuracy"])
        for curve in curves:
            for m, acc in enumerate(curve.mean_accuracy, start=1):
                writer.writerow([curve.algorithm, m, repr(acc)])
    return json_path, csv_path


def load_report(json_path):
    with open(json_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return [AccuracyCurve.from_dict(d) for d in doc["curves"]]
