"""Tabular data ingestion: CSV parsing with type sniffing, supervised
entropy/MDL discretization of numeric columns, dense categorical encoding,
and stratified fold assignment for cross-validation.
"""

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"

MISSING_TOKENS = ("", "?")


class ParseError(ValueError):
    """Malformed input file."""


class ConfigError(ValueError):
    """Inconsistent request (bad column names, fold counts, missing cuts...)."""


@dataclass
class Column:
    name: str
    kind: str  # NUMERIC or CATEGORICAL
    values: list  # float|None per cell for numeric, str|None for categorical


@dataclass
class RawTable:
    """Sniffed but not yet encoded table; the class column must be categorical."""

    columns: list
    class_column: str

    def __post_init__(self):
        if not self.columns:
            raise ConfigError("table has no columns")
        n = len(self.columns[0].values)
        if n < 1:
            raise ParseError("table has no data rows")
        for col in self.columns:
            if len(col.values) != n:
                raise ParseError(f"column {col.name!r} has {len(col.values)} "
                                 f"cells, expected {n}")
        names = [c.name for c in self.columns]
        if self.class_column not in names:
            raise ConfigError(f"class column {self.class_column!r} not found "
                              f"(have: {', '.join(names)})")
        if self.class_col().kind != CATEGORICAL:
            raise ConfigError(
                f"class column {self.class_column!r} looks numeric; pass "
                "class_is_categorical=True to treat its values as labels"
            )

    @property
    def n_rows(self):
        return len(self.columns[0].values)

    def class_col(self) -> Column:
        return next(c for c in self.columns if c.name == self.class_column)

    def feature_cols(self):
        return [c for c in self.columns if c.name != self.class_column]


def _parse_cell(cell: str):
    """(missing, numeric_value_or_None) for one CSV cell."""
    if cell in MISSING_TOKENS:
        return True, None
    try:
        v = float(cell)
    except ValueError:
        return False, None
    return False, (v if math.isfinite(v) else None)


def load_csv(path, class_column, has_header=True, delimiter=",",
             class_is_categorical=False) -> RawTable:
    """Read a CSV file into a RawTable.

    A column is numeric iff every non-missing cell parses as a finite real
    number; empty cells and "?" count as missing. `class_column` may be a
    header name or a 0-based column index.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        rows = []
        names = None
        for lineno, row in enumerate(reader, start=1):
            if names is None:
                if has_header:
                    names = [cell.strip() for cell in row]
                    continue
                names = [f"col{i}" for i in range(len(row))]
            if len(row) != len(names):
                raise ParseError(
                    f"{path}: row {lineno} has {len(row)} cells, "
                    f"expected {len(names)}"
                )
            rows.append(row)
    if names is None or not rows:
        raise ParseError(f"{path}: no data rows")

    if isinstance(class_column, int):
        if not 0 <= class_column < len(names):
            raise ConfigError(f"class column index {class_column} out of range")
        class_name = names[class_column]
    else:
        class_name = class_column

    columns = []
    for j, name in enumerate(names):
        cells = [r[j] for r in rows]
        parsed = [_parse_cell(c) for c in cells]
        force_cat = class_is_categorical and name == class_name
        numeric = not force_cat and all(
            missing or value is not None for missing, value in parsed
        )
        if numeric:
            values = [value for _, value in parsed]
            columns.append(Column(name=name, kind=NUMERIC, values=values))
        else:
            values = [None if missing else cell.strip()
                      for cell, (missing, _) in zip(cells, parsed)]
            columns.append(Column(name=name, kind=CATEGORICAL, values=values))
    return RawTable(columns=columns, class_column=class_name)


# ---------------------------------------------------------------------------
# discretization


@dataclass(frozen=True)
class CutPoints:
    feature: str
    thresholds: tuple  # strictly increasing; empty means single-bin feature

    def __post_init__(self):
        t = tuple(float(x) for x in self.thresholds)
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError(f"{self.feature}: thresholds must strictly increase")
        object.__setattr__(self, "thresholds", t)


def _class_entropy(counts: np.ndarray):
    """(entropy in bits, #distinct labels) from a class-count vector."""
    n = counts.sum()
    nz = counts[counts > 0]
    if n == 0 or nz.size <= 1:
        return 0.0, int(nz.size)
    h = math.log2(n) - float(nz @ np.log2(nz)) / n
    return h, int(nz.size)


def _best_accepted_cut(v, y, prefix, lo, hi):
    """Best boundary cut of segment [lo, hi) if it passes the MDL test.

    Candidates are midpoints between adjacent distinct values, skipped when
    both neighbouring value groups are pure with the same label. Returns
    (split_position, threshold) or None.
    """
    n = hi - lo
    total = prefix[hi] - prefix[lo]
    h_all, k_all = _class_entropy(total)
    if k_all <= 1:
        return None

    best = None  # (weighted_entropy, split, threshold)
    group_start = lo
    for k in range(lo + 1, hi):
        if v[k] == v[k - 1]:
            continue
        left_group = prefix[k] - prefix[group_start]
        group_start = k
        right_end = k
        while right_end < hi and v[right_end] == v[k]:
            right_end += 1
        right_group = prefix[right_end] - prefix[k]
        l_nz = left_group[left_group > 0]
        r_nz = right_group[right_group > 0]
        if (l_nz.size == 1 and r_nz.size == 1
                and np.array_equal(left_group > 0, right_group > 0)):
            continue  # same pure label on both sides: not a boundary point

        left = prefix[k] - prefix[lo]
        nl = k - lo
        h_left, _ = _class_entropy(left)
        h_right, _ = _class_entropy(total - left)
        weighted = (nl * h_left + (n - nl) * h_right) / n
        if best is None or weighted < best[0] - 1e-12:
            best = (weighted, k, (v[k - 1] + v[k]) / 2.0)

    if best is None:
        return None
    weighted, k, threshold = best
    gain = h_all - weighted
    left = prefix[k] - prefix[lo]
    h_left, k_left = _class_entropy(left)
    h_right, k_right = _class_entropy(total - left)
    delta = math.log2(3 ** k_all - 2) - (
        k_all * h_all - k_left * h_left - k_right * h_right
    )
    if gain <= 0.0 or gain <= (math.log2(n - 1) + delta) / n:
        return None
    return k, threshold


def mdl_discretize(values, class_codes, name="") -> CutPoints:
    """Recursive entropy-minimizing binary splits with the MDL stopping
    rule; missing values are ignored while fitting."""
    values = np.asarray(values, dtype=float)
    y = np.asarray(class_codes, dtype=np.int64)
    if values.shape != y.shape:
        raise ValueError("column and class lengths differ")
    keep = np.isfinite(values)
    v = values[keep]
    yy = y[keep]
    if v.size == 0:
        return CutPoints(feature=name, thresholds=())
    order = np.argsort(v, kind="stable")
    v = v[order]
    yy = yy[order]
    n_labels = int(yy.max()) + 1
    onehot = np.zeros((v.size + 1, n_labels), dtype=np.int64)
    onehot[np.arange(1, v.size + 1), yy] = 1
    prefix = np.cumsum(onehot, axis=0)

    thresholds = []
    stack = [(0, v.size)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        cut = _best_accepted_cut(v, yy, prefix, lo, hi)
        if cut is None:
            continue
        k, threshold = cut
        thresholds.append(threshold)
        stack.append((lo, k))
        stack.append((k, hi))
    return CutPoints(feature=name, thresholds=tuple(sorted(thresholds)))


def save_cuts(cuts, path):
    doc = [{"feature": c.feature, "thresholds": list(c.thresholds)} for c in cuts]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_cuts(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return [CutPoints(feature=d["feature"], thresholds=tuple(d["thresholds"]))
            for d in doc]


def _encode_class(col: Column):
    seen = {}
    codes = np.empty(len(col.values), dtype=np.int64)
    for i, cell in enumerate(col.values):
        if cell is None:
            raise ConfigError(f"class column {col.name!r} has a missing value "
                              f"at row {i}")
        codes[i] = seen.setdefault(cell, len(seen))
    return codes, tuple(seen)


def fit_cut_points(table: RawTable, rows=None):
    """MDL cuts for every numeric column of the table, in column order.

    `rows` restricts the fit to a subset of samples (per-fold refitting);
    the cuts still apply to the whole table at encode time.
    """
    class_codes, _ = _encode_class(table.class_col())
    if rows is not None:
        rows = np.asarray(rows, dtype=np.intp)
    cuts = []
    for col in table.feature_cols():
        if col.kind != NUMERIC:
            continue
        values = np.array([math.nan if v is None else v for v in col.values])
        if rows is None:
            cuts.append(mdl_discretize(values, class_codes, name=col.name))
        else:
            cuts.append(
                mdl_discretize(values[rows], class_codes[rows], name=col.name)
            )
    return cuts


# ---------------------------------------------------------------------------
# encoded dataset


@dataclass(frozen=True, eq=False)
class Dataset:
    """Fully encoded sample table: integer code columns plus a class column.

    Constructed by encode(); restrict() produces row views that keep the
    parent's code space (cardinalities stay valid as upper bounds).
    """

    features: tuple
    cardinalities: tuple
    class_codes: np.ndarray
    label_names: tuple
    feature_names: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "features",
            tuple(np.asarray(col, dtype=np.int64) for col in self.features),
        )
        object.__setattr__(self, "cardinalities", tuple(self.cardinalities))
        object.__setattr__(
            self, "class_codes", np.asarray(self.class_codes, dtype=np.int64)
        )
        object.__setattr__(self, "label_names", tuple(self.label_names))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if len(self.label_names) < 2:
            raise ConfigError("need at least two class labels")
        n = self.class_codes.size
        if len(self.features) != len(self.cardinalities) or len(
            self.features
        ) != len(self.feature_names):
            raise ConfigError("feature columns, cardinalities, names disagree")
        for name, col, card in zip(self.feature_names, self.features,
                                   self.cardinalities):
            if col.size != n:
                raise ConfigError(f"feature {name!r} length {col.size} != {n}")
            if col.size and (col.min() < 0 or col.max() >= card):
                raise ConfigError(f"feature {name!r} codes exceed cardinality")
            col.flags.writeable = False
        self.class_codes.flags.writeable = False

    @property
    def n_samples(self):
        return int(self.class_codes.size)

    @property
    def n_features(self):
        return len(self.features)

    @property
    def n_classes(self):
        return len(self.label_names)

    def restrict(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=np.intp)
        return Dataset(
            features=tuple(col[indices] for col in self.features),
            cardinalities=self.cardinalities,
            class_codes=self.class_codes[indices],
            label_names=self.label_names,
            feature_names=self.feature_names,
        )


def _encode_categorical(values):
    seen = {}
    codes = np.empty(len(values), dtype=np.int64)
    missing = [i for i, cell in enumerate(values) if cell is None]
    for i, cell in enumerate(values):
        if cell is not None:
            codes[i] = seen.setdefault(cell, len(seen))
    for i in missing:  # missing is its own category, after all observed ones
        codes[i] = len(seen)
    return codes, len(seen) + (1 if missing else 0)


def _encode_numeric(values, thresholds):
    t = np.asarray(thresholds, dtype=float)
    raw = np.array([math.nan if v is None else v for v in values])
    observed = np.isfinite(raw)
    bins = np.full(len(values), -1, dtype=np.int64)
    bins[observed] = np.searchsorted(t, raw[observed], side="left")
    present = np.unique(bins[observed])
    remap = {int(b): i for i, b in enumerate(present)}
    codes = np.empty(len(values), dtype=np.int64)
    for i, b in enumerate(bins):
        codes[i] = remap[int(b)] if b >= 0 else len(present)
    return codes, len(present) + (0 if observed.all() else 1)


def encode(table: RawTable, cuts) -> Dataset:
    """Encode a RawTable using the given cut points for numeric columns.

    Categorical values map to dense codes in first-appearance order;
    numeric values to their bin index (count of thresholds below the
    value, then densified); missing cells get one extra trailing code.
    """
    by_name = {}
    for c in cuts:
        if c.feature in by_name:
            raise ConfigError(f"duplicate cut points for column {c.feature!r}")
        by_name[c.feature] = c
    known = {col.name for col in table.feature_cols()}
    for name in by_name:
        if name not in known:
            raise ConfigError(f"cut points reference unknown column {name!r}")

    features = []
    cardinalities = []
    names = []
    for col in table.feature_cols():
        if col.kind == NUMERIC:
            if col.name not in by_name:
                raise ConfigError(f"no cut points for numeric column {col.name!r}")
            codes, card = _encode_numeric(col.values, by_name[col.name].thresholds)
        else:
            codes, card = _encode_categorical(col.values)
        features.append(codes)
        cardinalities.append(card)
        names.append(col.name)

    class_codes, label_names = _encode_class(table.class_col())
    return Dataset(
        features=tuple(features),
        cardinalities=tuple(cardinalities),
        class_codes=class_codes,
        label_names=label_names,
        feature_names=tuple(names),
    )


# ---------------------------------------------------------------------------
# cross-validation folds


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    fold_of: np.ndarray

    def __post_init__(self):
        self.fold_of.flags.writeable = False

    def test_indices(self, fold):
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold):
        return np.flatnonzero(self.fold_of != fold)


def stratified_kfold(ds: Dataset, k: int, seed: int) -> FoldAssignment:
    """Deal each class's samples round-robin to folds after a seeded
    shuffle; per-class fold counts differ by at most one, and the dealing
    position carries across classes so no fold stays empty."""
    if k < 2:
        raise ConfigError(f"fold count {k} must be >= 2")
    if k > ds.n_samples:
        raise ConfigError(f"{k} folds for {ds.n_samples} samples")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(ds.n_samples, dtype=np.int64)
    slot = 0
    for c in range(ds.n_classes):
        members = np.flatnonzero(ds.class_codes == c)
        if members.size == 0:
            raise ConfigError(f"class {ds.label_names[c]!r} has no samples")
        for idx in rng.permutation(members):
            fold_of[idx] = slot % k
            slot += 1
    return FoldAssignment(k=k, fold_of=fold_of)
