"""Plug-in estimators for discrete data: entropy, mutual information, and
conditional mutual information evaluated as a size-weighted sum of local
MI values over the blocks of a conditioning partition.

All values are in bits. Probabilities are empirical frequencies with no
smoothing; log arguments are formed from integer count products so that
empirically independent columns score exactly 0.0.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# estimates may dip this far below zero from rounding before being clamped;
# anything more negative indicates a defect in the estimator itself
NEG_GUARD = 1e-9


class EstimationError(RuntimeError):
    """Internal-consistency failure (estimate negative beyond rounding noise)."""


def _clamped(value: float) -> float:
    if value < 0.0:
        if value < -NEG_GUARD:
            raise EstimationError(f"estimate {value} below -{NEG_GUARD}")
        return 0.0
    return float(value)


def _as_codes(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 1:
        raise ValueError(f"{name} must be a 1-d code column")
    return a


def entropy(codes, domain: int | None = None) -> float:
    """Empirical Shannon entropy of a code column, in bits."""
    codes = _as_codes(codes, "codes")
    if codes.size == 0:
        raise ValueError("entropy of an empty column")
    if domain is not None and codes.max() >= domain:
        raise ValueError(f"code {codes.max()} outside domain {domain}")
    counts = np.bincount(codes, minlength=domain or 0)
    counts = counts[counts > 0]
    p = counts / codes.size
    return _clamped(-(p * np.log2(p)).sum())


def _joint_counts(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    cx = int(x.max()) + 1 if x.size else 1
    cy = int(y.max()) + 1 if y.size else 1
    return np.bincount(x * cy + y, minlength=cx * cy).reshape(cx, cy)


def _sorted_sum(terms: np.ndarray) -> float:
    # canonical summation order: makes the estimate a function of the term
    # multiset only, so swapping arguments (or relabeling axes) is exact
    return float(np.sort(terms).sum())


def _mi_from_counts(joint: np.ndarray) -> float:
    """MI in bits from a 2-d contingency table; not clamped."""
    n = joint.sum()
    if n == 0:
        return 0.0
    rows = joint.sum(axis=1)
    cols = joint.sum(axis=0)
    nz = joint > 0
    num = joint * n
    den = rows[:, None] * cols[None, :]
    terms = joint[nz] * np.log2(num[nz] / den[nz])
    return _sorted_sum(terms) / float(n)


def mutual_information(x, y) -> float:
    """Plug-in MI between two code columns, clamped at zero."""
    x = _as_codes(x, "x")
    y = _as_codes(y, "y")
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size == 0:
        raise ValueError("mutual information of empty columns")
    return _clamped(_mi_from_counts(_joint_counts(x, y)))


def local_mi(x, y, block) -> float:
    """MI with probabilities estimated only on the samples in `block`.

    An empty block returns 0 by convention (its weight in the conditional
    decomposition is zero anyway).
    """
    x = _as_codes(x, "x")
    y = _as_codes(y, "y")
    block = np.asarray(block, dtype=np.intp)
    if block.size == 0:
        return 0.0
    return _clamped(_mi_from_counts(_joint_counts(x[block], y[block])))


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """Samples grouped by the joint value assignment of a conditioning set.

    `order` is a permutation of sample indices arranged so each block is
    contiguous; block j is order[bounds[j]:bounds[j+1]]. Blocks are kept in
    a deterministic order: parent-block order first, then code ascending,
    so every downstream ranking is reproducible.
    """

    order: np.ndarray
    bounds: np.ndarray
    conditioning: tuple = ()

    def __post_init__(self):
        self.order.flags.writeable = False
        self.bounds.flags.writeable = False

    @classmethod
    def trivial(cls, n_samples: int) -> "BlockPartition":
        if n_samples < 1:
            raise ValueError("partition needs at least one sample")
        return cls(
            order=np.arange(n_samples, dtype=np.intp),
            bounds=np.array([0, n_samples], dtype=np.intp),
        )

    @classmethod
    def group_by(cls, columns, feature_indices) -> "BlockPartition":
        """From-scratch grouping by a list of code columns (first is the
        primary sort key). Equals the result of refining by each in turn."""
        feature_indices = tuple(feature_indices)
        if len(columns) != len(feature_indices):
            raise ValueError("one code column per conditioning feature")
        if not columns:
            raise ValueError("use trivial() for an empty conditioning set")
        part = cls.trivial(len(columns[0]))
        for codes, idx in zip(columns, feature_indices):
            part = refine_partition(part, codes, idx)
        return part

    @property
    def n_samples(self) -> int:
        return int(self.order.size)

    @property
    def n_blocks(self) -> int:
        return int(self.bounds.size) - 1

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.diff(self.bounds)

    @cached_property
    def block_ids(self) -> np.ndarray:
        """Block index of each position of `order`."""
        return np.repeat(np.arange(self.n_blocks), self.sizes)

    @property
    def blocks(self):
        """Blocks as a list of sample-index arrays, in partition order."""
        return [
            self.order[self.bounds[j] : self.bounds[j + 1]]
            for j in range(self.n_blocks)
        ]

    def block_key_sets(self):
        """Frozenset of per-block index frozensets (order-insensitive view)."""
        return frozenset(frozenset(b.tolist()) for b in self.blocks)


def refine_partition(part: BlockPartition, codes, feature_index: int) -> BlockPartition:
    """Split every block of `part` by the values of one more feature.

    Within a parent block the new sub-blocks appear in ascending code
    order. O(n log n) via a stable lexicographic sort.
    """
    if feature_index in part.conditioning:
        raise ValueError(f"feature {feature_index} already conditions this partition")
    codes = _as_codes(codes, "codes")
    if codes.size != part.n_samples:
        raise ValueError("code column length does not match partition")
    key = codes[part.order]
    perm = np.lexsort((key, part.block_ids))
    order = part.order[perm]
    sorted_key = key[perm]
    sorted_ids = part.block_ids[perm]
    change = (sorted_ids[1:] != sorted_ids[:-1]) | (sorted_key[1:] != sorted_key[:-1])
    bounds = np.concatenate(
        ([0], np.flatnonzero(change) + 1, [part.n_samples])
    ).astype(np.intp)
    return BlockPartition(
        order=order, bounds=bounds, conditioning=part.conditioning + (feature_index,)
    )


def _weighted_local_mi(counts: np.ndarray) -> float:
    """Size-weighted sum of per-block MI from a (blocks, |X|, |Y|) count
    tensor; equals the conditional MI decomposition. Not clamped."""
    n = counts.sum()
    if n == 0:
        return 0.0
    nb = counts.sum(axis=(1, 2))
    rows = counts.sum(axis=2)
    cols = counts.sum(axis=1)
    nz = counts > 0
    num = counts * nb[:, None, None]
    den = rows[:, :, None] * cols[:, None, :]
    terms = counts[nz] * np.log2(num[nz] / den[nz])
    return _sorted_sum(terms) / float(n)


def conditional_mi(x, y, part: BlockPartition) -> float:
    """CMI between two code columns given the partition's conditioning set:
    the |block|/n weighted sum of local MI over blocks."""
    x = _as_codes(x, "x")
    y = _as_codes(y, "y")
    if x.size != part.n_samples or y.size != part.n_samples:
        raise ValueError("column length does not match partition")
    cx = int(x.max()) + 1
    cy = int(y.max()) + 1
    xs = x[part.order]
    ys = y[part.order]
    key = (part.block_ids * cx + xs) * cy + ys
    counts = np.bincount(key, minlength=part.n_blocks * cx * cy)
    return _clamped(_weighted_local_mi(counts.reshape(part.n_blocks, cx, cy)))


def binary_collapse(class_codes, label: int, n_labels: int | None = None) -> np.ndarray:
    """One-vs-rest view of the class column: 1 where class == label, else 0."""
    class_codes = _as_codes(class_codes, "class_codes")
    if n_labels is None:
        n_labels = int(class_codes.max()) + 1
    if not 0 <= label < n_labels:
        raise IndexError(f"label {label} out of range [0, {n_labels})")
    return (class_codes == label).astype(np.int64)


@dataclass(frozen=True)
class ScoreVector:
    """Per-class-label conditional dependence of one candidate feature."""

    feature: int
    values: np.ndarray  # bits, one entry per class label, all >= 0

    @property
    def total(self) -> float:
        return float(self.values.sum())


@dataclass(frozen=True)
class ScoreMatrix:
    """Stacked score vectors of the surviving candidates of one iteration."""

    features: np.ndarray  # candidate feature index per row
    values: np.ndarray  # rows x labels

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.int64)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or features.shape != (values.shape[0],):
            raise ValueError("need one feature index per score row")
        if np.any(values < 0.0):
            raise ValueError("score entries must be nonnegative")
        if values.size and np.any(values.sum(axis=1) == 0.0):
            raise ValueError("all-zero score rows must be dropped before ranking")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_vectors(cls, vectors) -> "ScoreMatrix":
        return cls(
            features=np.array([v.feature for v in vectors], dtype=np.int64),
            values=np.array([v.values for v in vectors], dtype=float),
        )

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_outputs(self) -> int:
        return int(self.values.shape[1])


def r_scores(
    feature_codes, class_codes, part: BlockPartition, n_labels: int | None = None,
    feature: int = -1,
) -> ScoreVector:
    """Conditional dependence of a feature on each class label given the
    partition's conditioning set.

    Entry i is conditional_mi(feature, one-vs-rest collapse of label i, part).
    A single traversal accumulates the per-block feature-by-class counts,
    from which every collapsed table is derived.
    """
    f = _as_codes(feature_codes, "feature_codes")
    c = _as_codes(class_codes, "class_codes")
    if f.size != part.n_samples or c.size != part.n_samples:
        raise ValueError("column length does not match partition")
    cf = int(f.max()) + 1
    if n_labels is None:
        n_labels = int(c.max()) + 1
    fs = f[part.order]
    cs = c[part.order]
    key = (part.block_ids * cf + fs) * n_labels + cs
    counts = np.bincount(key, minlength=part.n_blocks * cf * n_labels)
    counts = counts.reshape(part.n_blocks, cf, n_labels)
    row_totals = counts.sum(axis=2)
    values = np.empty(n_labels)
    for i in range(n_labels):
        pos = counts[:, :, i]
        collapsed = np.stack((row_totals - pos, pos), axis=2)
        values[i] = _clamped(_weighted_local_mi(collapsed))
    return ScoreVector(feature=feature, values=values)
