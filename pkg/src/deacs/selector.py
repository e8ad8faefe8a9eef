"""Feature-selection strategies over encoded datasets.

dea_cs_select ranks candidates each round by the super-efficiency of
their per-class-label conditional dependence scores and conditions the
next round on everything selected so far. The remaining selectors are
the classic mutual-information baselines (MIM, mRMR, DISR, the
three-coefficient pairwise criterion family) and ReliefF.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .dea import sup_dea_max
from .infotheory import (
    BlockPartition,
    ScoreMatrix,
    conditional_mi,
    entropy,
    mutual_information,
    r_scores,
    refine_partition,
)

REACHED_DELTA = "ReachedDelta"
ALL_SCORES_ZERO = "AllScoresZero"


@dataclass(frozen=True)
class IterationRecord:
    candidates: int  # candidate rows that survived the zero-score skip
    score_total: float  # sum of every candidate's score entries
    winner: int | None  # selected feature index; None on the stopping round
    winner_score: float | None


@dataclass
class SelectionTrace:
    algorithm: str
    selected: list
    scores: list  # winning score per iteration, aligned with `selected`
    iterations: list
    stop_reason: str
    feature_names: tuple = field(default=())

    def __len__(self):
        return len(self.selected)

    def _name(self, index):
        if index is None:
            return None
        if self.feature_names:
            return self.feature_names[index]
        return str(index)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "selected": [
                {"feature": self._name(f), "score": _json_score(s)}
                for f, s in zip(self.selected, self.scores)
            ],
            "stop_reason": self.stop_reason,
            "iterations": [
                {
                    "candidates": it.candidates,
                    "score_total": it.score_total,
                    "winner": self._name(it.winner),
                    "winner_score": _json_score(it.winner_score),
                }
                for it in self.iterations
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _json_score(value):
    if value is None:
        return None
    if math.isinf(value):
        return "inf"
    return value


def _check_delta(delta: int):
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")


def dea_cs_select(ds: Dataset, delta: int, threads: int = 1) -> SelectionTrace:
    """Greedy selection by super-efficiency of per-label dependence scores.

    Each round scores every unselected feature against all class labels
    given the current conditioning partition, drops candidates whose
    scores are all zero, stops early when nothing survives, and otherwise
    selects the ranking winner and refines the partition with it.
    """
    _check_delta(delta)
    target = min(delta, ds.n_features)
    part = BlockPartition.trivial(ds.n_samples)
    remaining = list(range(ds.n_features))
    selected, scores, iterations = [], [], []
    stop_reason = REACHED_DELTA

    def score_one(f):
        return r_scores(
            ds.features[f], ds.class_codes, part,
            n_labels=ds.n_classes, feature=f,
        )

    while len(selected) < target:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                vectors = list(pool.map(score_one, remaining))
        else:
            vectors = [score_one(f) for f in remaining]
        surviving = [v for v in vectors if v.total > 0.0]
        if not surviving:
            stop_reason = ALL_SCORES_ZERO
            iterations.append(IterationRecord(0, 0.0, None, None))
            break
        total = sum(v.total for v in surviving)
        matrix = ScoreMatrix.from_vectors(surviving)
        row, score = sup_dea_max(matrix)
        winner = int(matrix.features[row])
        selected.append(winner)
        scores.append(score)
        iterations.append(IterationRecord(len(surviving), total, winner, score))
        part = refine_partition(part, ds.features[winner], winner)
        remaining.remove(winner)

    return SelectionTrace(
        algorithm="dea-cs",
        selected=selected,
        scores=scores,
        iterations=iterations,
        stop_reason=stop_reason,
        feature_names=ds.feature_names,
    )


def _class_relevance(ds: Dataset):
    return [mutual_information(col, ds.class_codes) for col in ds.features]


def _ranking_trace(algorithm: str, ds: Dataset, values, delta: int) -> SelectionTrace:
    """One-shot ranking by a per-feature score, descending, ties by index."""
    order = sorted(range(ds.n_features), key=lambda i: (-values[i], i))
    picks = order[: min(delta, ds.n_features)]
    iterations = [
        IterationRecord(ds.n_features - t, float(np.sum(values)), f, values[f])
        for t, f in enumerate(picks)
    ]
    return SelectionTrace(
        algorithm=algorithm,
        selected=picks,
        scores=[values[f] for f in picks],
        iterations=iterations,
        stop_reason=REACHED_DELTA,
        feature_names=ds.feature_names,
    )


def mim_select(ds: Dataset, delta: int) -> SelectionTrace:
    """Rank by mutual information with the class; no redundancy term."""
    _check_delta(delta)
    return _ranking_trace("mim", ds, _class_relevance(ds), delta)


def _greedy_trace(algorithm, ds, delta, criterion) -> SelectionTrace:
    """Forward selection by `criterion(candidate, selected)`, one feature
    per round, first strict maximum wins (so ties go to the lowest index)."""
    _check_delta(delta)
    target = min(delta, ds.n_features)
    remaining = list(range(ds.n_features))
    selected, scores, iterations = [], [], []
    while len(selected) < target:
        best_f = None
        best_v = None
        total = 0.0
        for f in remaining:
            v = criterion(f, selected)
            total += v
            if best_f is None or v > best_v:
                best_f, best_v = f, v
        selected.append(best_f)
        scores.append(best_v)
        iterations.append(IterationRecord(len(remaining), total, best_f, best_v))
        remaining.remove(best_f)
    return SelectionTrace(
        algorithm=algorithm,
        selected=selected,
        scores=scores,
        iterations=iterations,
        stop_reason=REACHED_DELTA,
        feature_names=ds.feature_names,
    )


def mrmr_select(ds: Dataset, delta: int) -> SelectionTrace:
    """Relevance minus mean pairwise redundancy against the selected set."""
    relevance = _class_relevance(ds)
    pair_mi = {}

    def redundancy(f, selected):
        total = 0.0
        for s in selected:
            if (f, s) not in pair_mi:
                pair_mi[f, s] = mutual_information(ds.features[f], ds.features[s])
            total += pair_mi[f, s]
        return total

    def criterion(f, selected):
        if not selected:
            return relevance[f]
        return relevance[f] - redundancy(f, selected) / len(selected)

    return _greedy_trace("mrmr", ds, delta, criterion)


def _pair_codes(ds: Dataset, f: int, s: int) -> np.ndarray:
    return ds.features[f] * ds.cardinalities[s] + ds.features[s]


def _disr_criterion(ds: Dataset):
    n_classes = ds.n_classes

    def criterion(f, selected):
        if not selected:
            joint = ds.features[f] * n_classes + ds.class_codes
            h = entropy(joint)
            if h == 0.0:
                return 0.0
            return mutual_information(ds.features[f], ds.class_codes) / h
        total = 0.0
        for s in selected:
            pair = _pair_codes(ds, f, s)
            h = entropy(pair * n_classes + ds.class_codes)
            if h == 0.0:
                continue
            total += mutual_information(pair, ds.class_codes) / h
        return total

    return criterion


def disr_select(ds: Dataset, delta: int) -> SelectionTrace:
    """Sum over the selected set of joint relevance normalized by the
    joint entropy of (candidate, partner, class)."""
    return _greedy_trace("disr", ds, delta, _disr_criterion(ds))


@dataclass(frozen=True)
class CriterionConfig:
    """Coefficients of the pairwise criterion

        J(F) = alpha * I(F;C) - beta * sum_s I(F;F_s) + gamma * sum_s I(F;F_s|C)

    With pairwise_mean the two sums become means over the selected set
    (beta=1 with pairwise_mean reproduces the mRMR coefficient 1/|S|).
    disr_normalization switches to the per-pair joint-entropy-normalized
    form instead; the three coefficients are ignored in that mode.
    """

    alpha: float
    beta: float
    gamma: float
    pairwise_mean: bool = False
    disr_normalization: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def unified_select(ds: Dataset, delta: int, cfg: CriterionConfig) -> SelectionTrace:
    if cfg.disr_normalization:
        return _greedy_trace("unified", ds, delta, _disr_criterion(ds))

    relevance = _class_relevance(ds)
    pair_mi = {}
    cond_mi = {}
    class_part = None
    if cfg.gamma != 0.0:
        class_part = refine_partition(
            BlockPartition.trivial(ds.n_samples), ds.class_codes, -1
        )

    def criterion(f, selected):
        score = cfg.alpha * relevance[f]
        if not selected:
            return score
        k = len(selected)
        if cfg.beta != 0.0:
            red = 0.0
            for s in selected:
                if (f, s) not in pair_mi:
                    pair_mi[f, s] = mutual_information(
                        ds.features[f], ds.features[s]
                    )
                red += pair_mi[f, s]
            score -= cfg.beta * (red / k if cfg.pairwise_mean else red)
        if cfg.gamma != 0.0:
            cond = 0.0
            for s in selected:
                if (f, s) not in cond_mi:
                    cond_mi[f, s] = conditional_mi(
                        ds.features[f], ds.features[s], class_part
                    )
                cond += cond_mi[f, s]
            score += cfg.gamma * (cond / k if cfg.pairwise_mean else cond)
        return score

    return _greedy_trace("unified", ds, delta, criterion)


def relieff_weights(
    ds: Dataset, neighbors: int = 5, sampled_instances: int = 30, seed: int = 0
) -> np.ndarray:
    """Per-feature ReliefF weights on encoded data with overlap distance.

    For each sampled instance the weights move down by the mean per-feature
    mismatch against the nearest same-class neighbors and up by the
    prior-weighted mean mismatch against each other class's nearest
    neighbors. Classes short on members contribute whatever they have.
    """
    if neighbors < 1:
        raise ValueError("neighbors must be >= 1")
    if sampled_instances < 1:
        raise ValueError("sampled_instances must be >= 1")
    X = np.stack(ds.features, axis=1)
    y = ds.class_codes
    n = ds.n_samples
    priors = np.bincount(y, minlength=ds.n_classes) / n
    rng = np.random.default_rng(seed)
    m = min(sampled_instances, n)
    targets = rng.choice(n, size=m, replace=False)

    weights = np.zeros(ds.n_features)
    for idx in targets:
        mismatch = X != X[idx]
        distance = mismatch.sum(axis=1)
        order = np.argsort(distance, kind="stable")  # ties: lower index first
        order_classes = y[order]
        hits = order[(order_classes == y[idx]) & (order != idx)][:neighbors]
        if hits.size:
            weights -= mismatch[hits].mean(axis=0) / m
        for c in range(ds.n_classes):
            if c == y[idx] or priors[c] == 0.0:
                continue
            misses = order[order_classes == c][:neighbors]
            if misses.size:
                scale = priors[c] / (1.0 - priors[y[idx]])
                weights += scale * mismatch[misses].mean(axis=0) / m
    return weights


def relieff_select(
    ds: Dataset, delta: int, neighbors: int = 5, sampled_instances: int = 30,
    seed: int = 0,
) -> SelectionTrace:
    _check_delta(delta)
    weights = relieff_weights(ds, neighbors, sampled_instances, seed)
    return _ranking_trace("relieff", ds, [float(w) for w in weights], delta)
