"""Independent reference implementations used to check the library.

Everything here is deliberately straight-line: the CMI oracle is the
literal triple sum over value assignments (no partitions, no reuse), the
LP oracle enumerates polyhedron vertices, and the selection oracles
recompute every score from scratch each round.
"""

import itertools
import math

import numpy as np

from deacs import lp

SCORE_TOL = 1e-7


def direct_cmi(x, y, s_columns):
    """Triple-sum CMI estimate: sum_z p(z) sum_xy p(xy|z) log2 of the
    conditional ratio, with probabilities from raw counts."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    n = x.size
    z = np.zeros(n, dtype=np.int64)
    for col in s_columns:
        col = np.asarray(col, dtype=np.int64)
        z = z * (int(col.max()) + 1) + col
    cy = int(y.max()) + 1
    total = 0.0
    for zv in np.unique(z):
        idx = np.flatnonzero(z == zv)
        nz = idx.size
        xs = x[idx]
        ys = y[idx]
        cx = int(xs.max()) + 1
        table = np.bincount(xs * cy + ys, minlength=cx * cy).reshape(cx, cy)
        rows = table.sum(axis=1)
        cols = table.sum(axis=0)
        for xv in range(cx):
            for yv in range(cy):
                c = int(table[xv, yv])
                if c == 0:
                    continue
                total += (c / n) * math.log2((c * nz) / (rows[xv] * cols[yv]))
    return total


def direct_mi(x, y):
    return direct_cmi(x, y, [])


def class_divergence(feature, class_codes, label):
    """KL divergence of p(F) from p(F | C = label), in bits."""
    feature = np.asarray(feature, dtype=np.int64)
    class_codes = np.asarray(class_codes, dtype=np.int64)
    n = feature.size
    members = feature[class_codes == label]
    total = 0.0
    for v in np.unique(members):
        p_cond = np.mean(members == v)
        p_marg = np.mean(feature == v)
        total += p_cond * math.log2(p_cond / p_marg)
    return total


def vertex_minimize(objective, constraints):
    """Minimize over the vertices of {A x rel b, x >= 0}; valid whenever the
    optimum is attained at a vertex (feasible bounded programs). Returns
    (value, x) or None when no vertex is feasible."""
    c = np.asarray(objective, dtype=float)
    n = c.size
    planes = [(np.asarray(a, dtype=float), float(b)) for a, _, b in constraints]
    planes += [(np.eye(n)[i], 0.0) for i in range(n)]
    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        A = np.array([planes[i][0] for i in combo])
        b = np.array([planes[i][1] for i in combo])
        if abs(np.linalg.det(A)) < 1e-9:
            continue
        x = np.linalg.solve(A, b)
        if np.any(x < -1e-9):
            continue
        ok = True
        for a, rel, rhs in constraints:
            lhs = float(np.dot(a, x))
            if rel == lp.LE and lhs > rhs + 1e-9:
                ok = False
            elif rel == lp.GE and lhs < rhs - 1e-9:
                ok = False
            elif rel == lp.EQ and abs(lhs - rhs) > 1e-9:
                ok = False
            if not ok:
                break
        if not ok:
            continue
        value = float(c @ x)
        if best is None or value < best[0]:
            best = (value, x)
    return best


def model5_score(rows, p):
    """Constant-input super-efficiency of score row p, built directly as a
    linear program: min theta with peer output mixes covering row p."""
    rows = np.asarray(rows, dtype=float)
    k, s = rows.shape
    if k == 1:
        return math.inf
    peers = [j for j in range(k) if j != p]
    constraints = []
    for r in range(s):
        coeffs = np.append(rows[peers, r], 0.0)
        constraints.append((coeffs, lp.GE, float(rows[p, r])))
    coeffs = np.append(np.ones(len(peers)), -1.0)
    constraints.append((coeffs, lp.LE, 0.0))
    objective = np.zeros(len(peers) + 1)
    objective[-1] = 1.0
    sol = lp.solve(lp.LinearProgram(objective=objective, constraints=constraints))
    if sol.status == lp.INFEASIBLE:
        return math.inf
    assert sol.is_optimal
    return sol.objective


def pick_winner(features, rows, scores):
    """Replicates the ranking tie rules: +inf beats finite, +inf ties by
    larger entry sum then lowest feature index, finite ties by index."""
    rows = np.asarray(rows, dtype=float)
    infinite = [i for i, v in enumerate(scores) if math.isinf(v)]
    if infinite:
        sums = rows.sum(axis=1)
        best = max(sums[i] for i in infinite)
        tied = [i for i in infinite if sums[i] >= best - SCORE_TOL]
    else:
        best = max(scores)
        tied = [i for i, v in enumerate(scores) if v >= best - SCORE_TOL]
    return min(tied, key=lambda i: features[i])


def oracle_dea_cs(ds, delta):
    """Straight-line greedy selection: direct triple-sum CMI per label, a
    fresh LP per surviving row, no incremental structures anywhere."""
    selected = []
    remaining = list(range(ds.n_features))
    stop = "ReachedDelta"
    while len(selected) < min(delta, ds.n_features):
        conditioning = [ds.features[s] for s in selected]
        features, rows = [], []
        for f in remaining:
            values = []
            for i in range(ds.n_classes):
                collapsed = (ds.class_codes == i).astype(np.int64)
                v = direct_cmi(ds.features[f], collapsed, conditioning)
                values.append(v if v > 0.0 else 0.0)
            if sum(values) == 0.0:
                continue
            features.append(f)
            rows.append(values)
        if not features:
            stop = "AllScoresZero"
            break
        scores = [model5_score(rows, p) for p in range(len(rows))]
        winner = features[pick_winner(features, rows, scores)]
        selected.append(winner)
        remaining.remove(winner)
    return selected, stop


def oracle_greedy(ds, delta, criterion):
    """Forward selection with first-strict-max tie handling."""
    selected = []
    remaining = list(range(ds.n_features))
    while len(selected) < min(delta, ds.n_features):
        best_f, best_v = None, None
        for f in remaining:
            v = criterion(f, selected)
            if best_f is None or v > best_v:
                best_f, best_v = f, v
        selected.append(best_f)
        remaining.remove(best_f)
    return selected


def entropy_of(counts):
    n = sum(counts)
    return -sum(c / n * math.log2(c / n) for c in counts if c)


def random_dataset(rng, n=None, n_features=None, max_card=4, max_classes=4,
                   informative=0.5):
    """Random encoded dataset with dense codes and every class observed."""
    from deacs.dataset import Dataset

    if n is None:
        n = int(rng.integers(20, 201))
    if n_features is None:
        n_features = int(rng.integers(2, 9))
    n_classes = int(rng.integers(2, max_classes + 1))
    cls = rng.integers(0, n_classes, n)
    cls[:n_classes] = np.arange(n_classes)  # keep every label observed
    features = []
    cards = []
    for _ in range(n_features):
        card = int(rng.integers(2, max_card + 1))
        if rng.random() < informative:
            col = (cls + rng.integers(0, card, n)) % card
        else:
            col = rng.integers(0, card, n)
        _, dense = np.unique(col, return_inverse=True)
        features.append(dense.astype(np.int64))
        cards.append(int(dense.max()) + 1)
    return Dataset(
        features=tuple(features),
        cardinalities=tuple(cards),
        class_codes=cls,
        label_names=tuple(f"c{i}" for i in range(n_classes)),
        feature_names=tuple(f"f{j}" for j in range(n_features)),
    )
