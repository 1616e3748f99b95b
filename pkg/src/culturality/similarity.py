"""Weighted attribute similarity and similarity-driven k-medoids.

Two feature vectors in [0, 1] are compared attribute by attribute with
``1 - |a - b|`` and the results averaged under the importance weights::

    sim(I, R) = sum_i w_i * (1 - |I_i - R_i|) / sum_i w_i

Clustering works on the dissimilarity ``1 - sim`` with PAM (greedy BUILD then
best-improvement SWAP). No metric property of the dissimilarity is assumed.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import ClusteringError, DimensionMismatch, DomainError, InvalidK, ZeroWeightSum

# Relative slack below which a swap is not counted as an improvement; keeps
# rounding noise from producing swap cycles.
_IMPROVE_EPS = 1e-12


def attr_similarity(a: float, b: float) -> float:
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise DomainError(f"attribute values must lie in [0, 1], got {a}, {b}")
    return 1.0 - abs(a - b)


def check_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionMismatch("weights must be a vector")
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        raise DomainError("weights must be finite and non-negative")
    if not np.sum(w) > 0:
        raise ZeroWeightSum("weights sum to zero")
    return w


def check_features(v, name="features") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.size and not (np.all(v >= 0.0) and np.all(v <= 1.0)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return v


def _weighted_mean_sim(I: np.ndarray, R: np.ndarray, w: np.ndarray, wsum: float) -> float:
    # fsum is correctly rounded, so the result does not depend on summation order
    return math.fsum((w * (1.0 - np.abs(I - R))).tolist()) / wsum


def weighted_similarity(I, R, w) -> float:
    """Importance-weighted mean of per-attribute similarities.

    >>> weighted_similarity([0.5, 1.0], [1.0, 1.0], [2.0, 1.0])
    0.6666666666666666
    """
    I = check_features(I, "I")
    R = check_features(R, "R")
    w = check_weights(w)
    if not (I.shape == R.shape == w.shape):
        raise DimensionMismatch(f"shapes differ: {I.shape}, {R.shape}, {w.shape}")
    return _weighted_mean_sim(I, R, w, math.fsum(w.tolist()))


def similarity_matrix(features, w) -> np.ndarray:
    """Pairwise weighted similarity over the rows of ``features``.

    ``features`` is an (n, m) array or anything with a ``features`` attribute
    (e.g. a Population). Each unordered pair is evaluated once.
    """
    if hasattr(features, "features"):
        features = features.features
    X = check_features(features)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DimensionMismatch("need a non-empty (n_agents, n_attributes) matrix")
    w = check_weights(w)
    if X.shape[1] != w.size:
        raise DimensionMismatch(f"{X.shape[1]} attributes but {w.size} weights")
    n = X.shape[0]
    wsum = math.fsum(w.tolist())
    S = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            S[i, j] = S[j, i] = _weighted_mean_sim(X[i], X[j], w, wsum)
    S.setflags(write=False)
    return S


def check_similarity(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] == 0:
        raise DimensionMismatch("similarity matrix must be square and non-empty")
    if not np.array_equal(S, S.T):
        raise DomainError("similarity matrix is not symmetric")
    if np.any(np.diag(S) != 1.0):
        raise DomainError("similarity matrix diagonal must be 1")
    if np.any(S < 0) or np.any(S > 1):
        raise DomainError("similarity entries must lie in [0, 1]")
    return S


@dataclass(frozen=True, eq=False)
class Clustering:
    """A partition with one medoid per cluster.

    ``assignments[i]`` is the cluster id of agent ``i``; cluster ``c`` has
    medoid ``medoids[c]``. Cluster ids follow ascending medoid index.
    ``history`` is the objective after BUILD and after every accepted swap.
    """

    k: int
    assignments: np.ndarray
    medoids: np.ndarray
    objective: float
    history: tuple[float, ...] = ()

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == c)

    def to_csv(self, path=None, agent_ids=None) -> str:
        """Assignment table: agent id, cluster id, medoid flag."""
        ids = range(len(self.assignments)) if agent_ids is None else agent_ids
        medoids = set(self.medoids.tolist())
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["agent_id", "cluster", "is_medoid"])
        for i, (aid, c) in enumerate(zip(ids, self.assignments)):
            w.writerow([aid, int(c), int(i in medoids)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text


def matrix_to_csv(S, path=None, agent_ids=None) -> str:
    S = np.asarray(S)
    ids = list(range(S.shape[0])) if agent_ids is None else list(agent_ids)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["agent_id"] + ids)
    for aid, row in zip(ids, S):
        w.writerow([aid] + [repr(float(v)) for v in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _assign(D: np.ndarray, medoids: np.ndarray) -> np.ndarray:
    # argmin picks the first (lowest-index) medoid on ties
    labels = np.argmin(D[:, medoids], axis=1)
    labels[medoids] = np.arange(len(medoids))
    return labels


def total_cost(D: np.ndarray, medoids) -> float:
    """Sum over points of the dissimilarity to their assigned medoid."""
    medoids = np.asarray(medoids, dtype=int)
    labels = _assign(D, medoids)
    return math.fsum(D[np.arange(len(D)), medoids[labels]].tolist())


def _build(D: np.ndarray, k: int) -> list[int]:
    first = int(np.argmin(D.sum(axis=1)))
    medoids = [first]
    nearest = D[:, first].copy()
    for _ in range(1, k):
        # gain of adding candidate c: sum_j max(nearest_j - D[j, c], 0)
        gains = np.maximum(nearest[:, None] - D, 0.0).sum(axis=0)
        gains[medoids] = -np.inf
        best = int(np.argmax(gains))
        medoids.append(best)
        nearest = np.minimum(nearest, D[:, best])
    return medoids


def _best_swap(D: np.ndarray, medoids: list[int]):
    """Lowest-cost (medoid, candidate) swap; ties go to the lowest pair of ids."""
    n = len(D)
    best = None
    med = np.array(medoids)
    for pos in sorted(range(len(medoids)), key=lambda p: medoids[p]):
        others = np.delete(med, pos)
        base = D[:, others].min(axis=1) if len(others) else np.full(n, np.inf)
        costs = np.minimum(base[:, None], D).sum(axis=0)
        costs[med] = np.inf
        c = int(np.argmin(costs))
        if best is None or costs[c] < best[0]:
            best = (float(costs[c]), pos, c)
    return best


def _swap_phase(D: np.ndarray, medoids: list[int], max_iter: int):
    cost = total_cost(D, medoids)
    history = [cost]
    for _ in range(max_iter):
        if len(medoids) == len(D):
            break
        _, pos, cand = _best_swap(D, medoids)
        trial = medoids.copy()
        trial[pos] = cand
        new_cost = total_cost(D, trial)
        if not new_cost < cost - _IMPROVE_EPS * max(1.0, abs(cost)):
            break
        medoids, cost = trial, new_cost
        history.append(cost)
    else:
        raise ClusteringError(f"swap phase did not converge in {max_iter} iterations")
    if any(b > a for a, b in zip(history, history[1:])):
        raise ClusteringError("objective increased during swap phase")
    return medoids, cost, history


def cluster_kmedoids(S, k: int, seed: int = 0, n_init: int = 10, max_iter: int = 1000) -> Clustering:
    """PAM k-medoids on ``D = 1 - S``.

    The swap phase starts from the greedy BUILD medoids and from ``n_init``
    further random medoid sets drawn with ``seed``; the lowest objective wins
    (earliest start on ties). Each swap phase applies the best swap while it
    lowers the objective, so PAM's single-swap local optima are escaped only
    through the restarts.
    """
    S = check_similarity(S)
    n = S.shape[0]
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= n):
        raise InvalidK(f"k must be an integer in [1, {n}], got {k}")
    k = int(k)
    D = 1.0 - S
    rng = np.random.default_rng(seed)
    starts = [_build(D, k)]
    if k < n:
        starts += [sorted(rng.choice(n, size=k, replace=False).tolist()) for _ in range(n_init)]
    best = None
    for start in starts:
        medoids, cost, history = _swap_phase(D, list(start), max_iter)
        if best is None or cost < best[1]:
            best = (medoids, cost, history)
    medoids, cost, history = best
    med = np.array(sorted(medoids), dtype=int)
    labels = _assign(D, med)
    return Clustering(k, labels, med, cost, tuple(history))


def exhaustive_kmedoids(S, k: int) -> tuple[float, tuple[int, ...]]:
    """Optimal medoid set by enumeration; only for small instances."""
    D = 1.0 - check_similarity(S)
    best = None
    for meds in combinations(range(len(D)), k):
        c = total_cost(D, meds)
        if best is None or c < best[0]:
            best = (c, meds)
    return best


def silhouette(S, clustering: Clustering) -> float:
    """Mean silhouette coefficient with dissimilarity ``1 - S``.

    Points in singleton clusters score 0, and ``0/0`` (a point with zero
    intra- and inter-cluster dissimilarity) is taken as 0.
    """
    S = check_similarity(S)
    if clustering.k < 2:
        raise InvalidK("silhouette needs k >= 2")
    D = 1.0 - S
    labels = np.asarray(clustering.assignments)
    n = len(D)
    sizes = np.bincount(labels, minlength=clustering.k)
    present = np.flatnonzero(sizes)
    if len(present) < 2:
        raise InvalidK("silhouette needs at least two non-empty clusters")
    scores = np.zeros(n)
    for i in range(n):
        own = labels[i]
        if sizes[own] == 1:
            continue
        a = D[i, labels == own].sum() / (sizes[own] - 1)
        b = min(D[i, labels == c].mean() for c in present if c != own)
        m = max(a, b)
        scores[i] = 0.0 if m == 0 else (b - a) / m
    return float(scores.mean())


def auto_k(S, k_range=(2, 10), seed: int = 0) -> tuple[Clustering, dict[int, float]]:
    """Cluster for every k in the inclusive range and keep the best silhouette.

    Ties go to the smaller k. Returns the chosen clustering and all scores.
    """
    S = check_similarity(S)
    n = S.shape[0]
    lo, hi = k_range
    hi = min(hi, n - 1)
    if lo < 2 or hi < lo:
        raise InvalidK(f"no admissible k in [{k_range[0]}, {k_range[1]}] for {n} agents")
    best, scores = None, {}
    for k in range(lo, hi + 1):
        cl = cluster_kmedoids(S, k, seed)
        scores[k] = silhouette(S, cl)
        if best is None or scores[k] > scores[best.k]:
            best = cl
    return best, scores


def purity(assignments, labels) -> float:
    """Fraction of items whose cluster's majority label equals their own."""
    assignments = np.asarray(assignments)
    labels = np.asarray(labels)
    if assignments.shape != labels.shape or assignments.size == 0:
        raise DimensionMismatch("assignments and labels must be equal-length and non-empty")
    hits = 0
    for c in np.unique(assignments):
        members = labels[assignments == c]
        _, counts = np.unique(members, return_counts=True)
        hits += int(counts.max())
    return hits / assignments.size
