import json

import numpy as np
import pytest

from deacs import harness
from deacs.dataset import Dataset, FoldAssignment, stratified_kfold
from deacs.selector import SelectionTrace, mim_select
from oracles import random_dataset


def _dataset(features, cls):
    features = [np.asarray(f, dtype=np.int64) for f in features]
    cls = np.asarray(cls, dtype=np.int64)
    return Dataset(
        features=tuple(features),
        cardinalities=tuple(int(f.max()) + 1 for f in features),
        class_codes=cls,
        label_names=tuple(f"c{i}" for i in range(max(int(cls.max()) + 1, 2))),
        feature_names=tuple(f"f{j}" for j in range(len(features))),
    )


def _trace(ds, selected):
    return SelectionTrace(
        algorithm="test",
        selected=list(selected),
        scores=[0.0] * len(selected),
        iterations=[],
        stop_reason="ReachedDelta",
        feature_names=ds.feature_names,
    )


class TestClassifierKind:
    def test_labels(self):
        assert harness.naive_bayes().label == "nbc"
        assert harness.k_nearest(3).label == "knn3"

    def test_validation(self):
        with pytest.raises(ValueError):
            harness.ClassifierKind(kind="svm")
        with pytest.raises(ValueError):
            harness.k_nearest(0)


class TestNaiveBayes:
    def test_perfect_feature_is_perfect(self):
        cls = np.array([0, 1, 0, 1, 1, 0])
        ds = _dataset([cls.copy(), [0, 0, 1, 1, 0, 1]], cls)
        pred = harness.nbc_fit_predict(
            ds, np.arange(6), np.arange(6), [0]
        )
        assert np.array_equal(pred, cls)

    def test_single_class_training_predicts_it(self):
        ds = _dataset([[0, 0, 1, 1], [1, 0, 1, 0]], [0, 0, 0, 1])
        train = np.array([0, 1, 2])  # only class 0 present
        test = np.array([3])
        pred = harness.nbc_fit_predict(ds, train, test, [0])
        assert pred.tolist() == [0]

    def test_hand_computed_posteriors(self):
        # train: f0 = [0,0,1,1], f1 = [0,1,0,1], y = [0,0,1,1]
        # smoothed priors: p(c) = (2+1)/(4+2) = 1/2 for both classes
        # class 0: p(f0=0)=3/4 p(f0=1)=1/4 p(f1=0)=1/2 p(f1=1)=1/2
        # class 1: p(f0=0)=1/4 p(f0=1)=3/4 p(f1=*)=1/2
        ds = _dataset(
            [[0, 0, 1, 1, 0, 1], [0, 1, 0, 1, 0, 1]], [0, 0, 1, 1, 0, 1]
        )
        train = np.arange(4)
        test = np.array([4, 5])  # points (0,0) and (1,1)
        post_00 = (0.5 * 0.75 * 0.5, 0.5 * 0.25 * 0.5)  # (3/16, 1/16)
        post_11 = (0.5 * 0.25 * 0.5, 0.5 * 0.75 * 0.5)  # (1/16, 3/16)
        assert post_00[0] > post_00[1] and post_11[1] > post_11[0]
        pred = harness.nbc_fit_predict(ds, train, test, [0, 1])
        assert pred.tolist() == [0, 1]

    def test_posterior_tie_takes_lowest_class(self):
        # symmetric training data: both classes look identical
        ds = _dataset([[0, 0, 0, 0, 0]], [0, 1, 0, 1, 0])
        pred = harness.nbc_fit_predict(ds, np.arange(4), np.array([4]), [0])
        assert pred.tolist() == [0]

    def test_empty_feature_subset_rejected(self):
        ds = _dataset([[0, 1]], [0, 1])
        with pytest.raises(ValueError):
            harness.nbc_fit_predict(ds, np.array([0]), np.array([1]), [])


def _knn_oracle(ds, train_idx, test_idx, features, k):
    preds = []
    for t in test_idx:
        ranked = sorted(
            range(train_idx.size),
            key=lambda j: (
                sum(
                    ds.features[f][train_idx[j]] != ds.features[f][t]
                    for f in features
                ),
                j,
            ),
        )[:k]
        votes = np.bincount(
            ds.class_codes[train_idx[ranked]], minlength=ds.n_classes
        )
        preds.append(int(np.argmax(votes)))
    return np.array(preds)


class TestKnn:
    def test_exact_match_wins_with_k1(self):
        ds = _dataset([[0, 1, 2, 1], [1, 0, 2, 0]], [0, 1, 0, 1])
        pred = harness.knn_predict(
            ds, np.array([0, 1, 2]), np.array([3]), [0, 1], k=1
        )
        assert pred.tolist() == [1]  # identical to train row 1

    def test_all_equidistant_majority_vote(self):
        ds = _dataset([[0, 0, 0, 1]], [1, 1, 0, 0])
        pred = harness.knn_predict(
            ds, np.array([0, 1, 2]), np.array([3]), [0], k=3
        )
        assert pred.tolist() == [1]  # votes 2:1 for class 1

    def test_vote_tie_takes_lowest_class(self):
        ds = _dataset([[0, 0, 1]], [1, 0, 0])
        pred = harness.knn_predict(
            ds, np.array([0, 1]), np.array([2]), [0], k=2
        )
        assert pred.tolist() == [0]

    def test_distance_tie_prefers_lower_train_index(self):
        # probe (0,0): train rows (0,1) and (1,0) are both at distance 1
        ds = _dataset([[0, 1, 0], [1, 0, 0]], [1, 0, 0])
        pred = harness.knn_predict(
            ds, np.array([0, 1]), np.array([2]), [0, 1], k=1
        )
        assert pred.tolist() == [1]

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(503)
        for _ in range(10):
            ds = random_dataset(rng, n=40, n_features=4)
            perm = rng.permutation(40)
            train, test = perm[:30], perm[30:]
            k = int(rng.integers(1, 6))
            got = harness.knn_predict(ds, train, test, [0, 1, 2], k=k)
            assert np.array_equal(got, _knn_oracle(ds, train, test,
                                                   [0, 1, 2], k))

    def test_k_larger_than_train_rejected(self):
        ds = _dataset([[0, 1, 0]], [0, 1, 0])
        with pytest.raises(ValueError):
            harness.knn_predict(ds, np.array([0]), np.array([1]), [0], k=2)


class TestEvaluateCurve:
    def test_perfect_feature_gives_unit_curve(self):
        # a class-determining feature must be perfect for both classifiers,
        # in particular for 1-NN (a zero-distance same-class neighbor wins)
        rng = np.random.default_rng(509)
        cls = rng.integers(0, 2, 24)
        cls[:2] = [0, 1]
        ds = _dataset([cls.copy()], cls)
        folds = stratified_kfold(ds, 4, seed=0)
        curve = harness.evaluate_curve(
            ds, _trace(ds, [0]),
            [harness.naive_bayes(), harness.k_nearest(1)], folds,
        )
        assert curve.mean_accuracy == [1.0]
        assert curve.per_classifier["knn1"] == [1.0]

    def test_constant_class_is_degenerate_perfect(self):
        ds = Dataset(
            features=(np.array([0, 1, 0, 1]),),
            cardinalities=(2,),
            class_codes=np.zeros(4, dtype=np.int64),
            label_names=("a", "b"),
            feature_names=("f0",),
        )
        folds = FoldAssignment(k=2, fold_of=np.array([0, 1, 0, 1]))
        curve = harness.evaluate_curve(
            ds, _trace(ds, [0]),
            [harness.naive_bayes(), harness.k_nearest(1)], folds,
        )
        assert curve.mean_accuracy == [1.0]

    def test_matches_loop_based_recomputation(self):
        rng = np.random.default_rng(521)
        ds = random_dataset(rng, n=40, n_features=3)
        folds = stratified_kfold(ds, 4, seed=7)
        trace = mim_select(ds, 3)
        kinds = [harness.naive_bayes(), harness.k_nearest(1)]
        curve = harness.evaluate_curve(ds, trace, kinds, folds, seed=7)
        for m in range(1, 4):
            feats = trace.selected[:m]
            by_kind = []
            for kind in kinds:
                accs = []
                for j in range(folds.k):
                    te = np.flatnonzero(folds.fold_of == j)
                    tr = np.flatnonzero(folds.fold_of != j)
                    if kind.kind == harness.NAIVE_BAYES:
                        pred = harness.nbc_fit_predict(ds, tr, te, feats)
                    else:
                        pred = harness.knn_predict(ds, tr, te, feats, kind.k)
                    accs.append(np.mean(pred == ds.class_codes[te]))
                by_kind.append(np.mean(accs))
                assert curve.per_classifier[kind.label][m - 1] == (
                    pytest.approx(np.mean(accs), abs=1e-12)
                )
            assert curve.mean_accuracy[m - 1] == pytest.approx(
                np.mean(by_kind), abs=1e-12
            )

    def test_curve_capped_at_thirty(self):
        rng = np.random.default_rng(523)
        n = 80
        cls = rng.integers(0, 2, n)
        cls[:2] = [0, 1]
        features = [rng.integers(0, 2, n) for _ in range(35)]
        ds = _dataset(features, cls)
        folds = stratified_kfold(ds, 2, seed=0)
        trace = _trace(ds, list(range(35)))
        curve = harness.evaluate_curve(ds, trace, [harness.k_nearest(1)],
                                       folds)
        assert len(curve.mean_accuracy) == 30

    def test_fold_partition_integrity(self):
        rng = np.random.default_rng(541)
        ds = random_dataset(rng, n=30)
        folds = stratified_kfold(ds, 5, seed=1)
        seen = np.concatenate([folds.test_indices(j) for j in range(5)])
        assert sorted(seen.tolist()) == list(range(30))
        for j in range(5):
            overlap = np.intersect1d(folds.test_indices(j),
                                     folds.train_indices(j))
            assert overlap.size == 0

    def test_empty_trace_rejected(self):
        rng = np.random.default_rng(547)
        ds = random_dataset(rng, n=20)
        folds = stratified_kfold(ds, 2, seed=0)
        empty = _trace(ds, [])
        with pytest.raises(ValueError):
            harness.evaluate_curve(ds, empty, [harness.naive_bayes()], folds)


class TestEmitReport:
    def _curve(self, algorithm="mim", values=(0.5, 0.75)):
        return harness.AccuracyCurve(
            algorithm=algorithm,
            mean_accuracy=list(values),
            per_classifier={"nbc": list(values)},
            folds=10,
            seed=0,
        )

    def test_csv_rows(self, tmp_path):
        base = tmp_path / "report"
        _, csv_path = harness.emit_report([self._curve()], base)
        lines = open(csv_path).read().splitlines()
        assert lines[0] == "algorithm,m,mean_accuracy"
        assert len(lines) == 3
        assert lines[1].startswith("mim,1,")

    def test_empty_report(self, tmp_path):
        json_path, csv_path = harness.emit_report([], tmp_path / "report")
        assert open(csv_path).read().splitlines() == [
            "algorithm,m,mean_accuracy"
        ]
        assert json.load(open(json_path)) == {"curves": []}

    def test_json_round_trip(self, tmp_path):
        curves = [self._curve(), self._curve("dea-cs", (0.9, 0.95, 1.0))]
        json_path, _ = harness.emit_report(curves, tmp_path / "report")
        assert harness.load_report(json_path) == curves
