"""Dataset assembly, train/val/test splits, and label-noise injection.

File formats:
  features: first line `N F`, then N lines of F space-separated reals
  labels:   N lines of `node_id label_id` (0-based integers)
  edges:    one `u v` pair per line, `#` comment lines ignored
  splits:   JSON object {"train": [...], "val": [...], "test": [...]}

All split and noise operations are pure functions of their inputs plus a seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .graph import Graph, build_graph, read_edge_list, sbm_generate


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """A graph with dense node features and ground-truth class labels."""

    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    num_classes: int

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class SplitMasks:
    """Disjoint train/val/test node-id sets, each sorted ascending."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class NoisyLabels:
    """Corrupted label array plus the set of flipped node ids.

    `flipped` is bookkeeping for analysis only; training code never reads it.
    """

    observed: np.ndarray
    flipped: np.ndarray


def row_normalize(features: np.ndarray) -> np.ndarray:
    """Scale each feature row to unit L1 norm; zero rows are left unchanged."""
    norms = np.abs(features).sum(axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return features / norms


def from_sbm(num_nodes: int, num_classes: int, p_in: float, p_out: float,
             feature_dim: int, feature_noise: float, seed: int) -> Dataset:
    """Build a Dataset from a stochastic-block-model draw."""
    graph, labels, features = sbm_generate(
        num_nodes, num_classes, p_in, p_out, feature_dim, feature_noise, seed
    )
    return Dataset(graph, features, labels, num_classes)


def _read_feature_file(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(path, 1, "header must be `N F`")
        try:
            n, f = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(path, 1, f"non-integer header {header!r}") from None
        if n < 1 or f < 1:
            raise ParseError(path, 1, "N and F must be positive")
        features = np.empty((n, f))
        for i in range(n):
            lineno = i + 2
            line = fh.readline()
            if not line:
                raise ParseError(path, lineno, f"expected {n} feature rows, file ended at row {i}")
            parts = line.split()
            if len(parts) != f:
                raise ParseError(path, lineno, f"expected {f} values, found {len(parts)}")
            try:
                features[i] = np.asarray(parts, dtype=np.float64)
            except ValueError:
                raise ParseError(path, lineno, "non-numeric feature value") from None
    return features


def _read_label_file(path, num_nodes: int) -> np.ndarray:
    labels = np.full(num_nodes, -1, dtype=np.int64)
    count = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(path, lineno, "expected `node_id label_id`")
            try:
                node, label = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer field in {parts!r}") from None
            if not 0 <= node < num_nodes:
                raise ParseError(path, lineno, f"node id {node} outside [0, {num_nodes})")
            if label < 0:
                raise ParseError(path, lineno, f"negative label {label}")
            if labels[node] != -1:
                raise ParseError(path, lineno, f"duplicate label for node {node}")
            labels[node] = label
            count += 1
    if count != num_nodes:
        raise ParseError(path, None, f"labeled {count} of {num_nodes} nodes")
    return labels


def load_dataset(edge_path, feature_path, label_path, row_normalize_features: bool = False) -> Dataset:
    """Assemble a Dataset from the three documented text files.

    num_classes is inferred as max(label) + 1; every class below the maximum
    must occur at least once.
    """
    features = _read_feature_file(feature_path)
    num_nodes = features.shape[0]
    labels = _read_label_file(label_path, num_nodes)
    edges = read_edge_list(edge_path, num_nodes=num_nodes)
    graph = build_graph(num_nodes, edges)

    num_classes = int(labels.max()) + 1
    present = np.bincount(labels, minlength=num_classes)
    if (present == 0).any():
        missing = int(np.flatnonzero(present == 0)[0])
        raise ParseError(label_path, None, f"class {missing} never occurs")

    if row_normalize_features:
        features = row_normalize(features)
    return Dataset(graph, _readonly(features), _readonly(labels), num_classes)


def standard_split(dataset: Dataset, per_class: int = 20, val_size: int = 500,
                   test_size: int = 1000, *, seed: int) -> SplitMasks:
    """Class-balanced training set plus uniform validation/test sets.

    Picks per_class training nodes from every class, then draws val and test
    uniformly without replacement from the remaining nodes.
    """
    if per_class < 1:
        raise ValueError("per_class must be positive")
    rng = np.random.default_rng(seed)
    train_parts = []
    for c in range(dataset.num_classes):
        ids = np.flatnonzero(dataset.labels == c)
        if ids.size < per_class:
            raise ValueError(f"class {c} has {ids.size} nodes, fewer than per_class={per_class}")
        train_parts.append(rng.choice(ids, size=per_class, replace=False))
    train = np.sort(np.concatenate(train_parts))
    rest = np.setdiff1d(np.arange(dataset.num_nodes, dtype=np.int64), train)
    return _draw_val_test(train, rest, val_size, test_size, rng)


def random_split(dataset: Dataset, label_rate: float, val_size: int = 500,
                 test_size: int = 1000, *, seed: int, max_attempts: int = 100) -> SplitMasks:
    """Uniformly labeled training set of round(label_rate * num_nodes) nodes.

    Redraws up to max_attempts times until every class has at least one
    training node, then errors.
    """
    if not 0.0 <= label_rate <= 1.0:
        raise ValueError("label_rate must lie in [0, 1]")
    n_train = int(round(label_rate * dataset.num_nodes))
    if n_train < 1:
        raise ValueError(f"label_rate {label_rate} yields an empty training set")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        perm = rng.permutation(dataset.num_nodes).astype(np.int64)
        train = perm[:n_train]
        if np.unique(dataset.labels[train]).size == dataset.num_classes:
            rest = perm[n_train:]
            return _draw_val_test(np.sort(train), np.sort(rest), val_size, test_size, rng)
    raise ValueError(
        f"could not cover all {dataset.num_classes} classes with "
        f"{n_train} training nodes in {max_attempts} attempts"
    )


def _draw_val_test(train, rest, val_size, test_size, rng) -> SplitMasks:
    if val_size < 0 or test_size < 0:
        raise ValueError("val_size and test_size must be non-negative")
    if rest.size < val_size + test_size:
        raise ValueError(
            f"{rest.size} nodes remain after the training set, "
            f"need {val_size} + {test_size} for val + test"
        )
    perm = rng.permutation(rest)
    val = np.sort(perm[:val_size])
    test = np.sort(perm[val_size : val_size + test_size])
    return SplitMasks(_readonly(train), _readonly(val), _readonly(test))


def inject_uniform_noise(labels: np.ndarray, targets, p: float, num_classes: int,
                         *, seed: int) -> NoisyLabels:
    """Flip each target label with probability p to a uniformly random other class."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("noise rate must lie in [0, 1]")
    if num_classes < 2 and p > 0.0:
        raise ValueError("uniform noise needs at least two classes")
    targets = np.sort(np.asarray(targets, dtype=np.int64))
    rng = np.random.default_rng(seed)
    observed = np.array(labels, dtype=np.int64)
    flip = rng.random(targets.size) < p
    flipped = targets[flip]
    if flipped.size:
        # draw from the other num_classes-1 classes, skipping the clean label
        draws = rng.integers(0, num_classes - 1, size=flipped.size)
        draws += draws >= observed[flipped]
        observed[flipped] = draws
    return NoisyLabels(_readonly(observed), _readonly(flipped))


def default_pair_map(num_classes: int) -> np.ndarray:
    """The fixed-point-free pairing c -> (c + 1) mod num_classes."""
    if num_classes < 2:
        raise ValueError("no fixed-point-free pair map exists for fewer than 2 classes")
    return (np.arange(num_classes, dtype=np.int64) + 1) % num_classes


def inject_pair_noise(labels: np.ndarray, targets, p: float, pair_map,
                      *, seed: int) -> NoisyLabels:
    """Flip each target label with probability p to its fixed pair class."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("noise rate must lie in [0, 1]")
    pair_map = np.asarray(pair_map, dtype=np.int64)
    if (pair_map == np.arange(pair_map.size)).any():
        fixed = int(np.flatnonzero(pair_map == np.arange(pair_map.size))[0])
        raise ValueError(f"pair_map maps class {fixed} to itself")
    targets = np.sort(np.asarray(targets, dtype=np.int64))
    rng = np.random.default_rng(seed)
    observed = np.array(labels, dtype=np.int64)
    flip = rng.random(targets.size) < p
    flipped = targets[flip]
    observed[flipped] = pair_map[observed[flipped]]
    return NoisyLabels(_readonly(observed), _readonly(flipped))


def save_split(masks: SplitMasks, path) -> None:
    doc = {"train": masks.train.tolist(), "val": masks.val.tolist(), "test": masks.test.tolist()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_split(path) -> SplitMasks:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("train", "val", "test"):
        if key not in doc:
            raise ParseError(path, None, f"missing key {key!r}")
    masks = SplitMasks(
        _readonly(np.sort(np.asarray(doc["train"], dtype=np.int64))),
        _readonly(np.sort(np.asarray(doc["val"], dtype=np.int64))),
        _readonly(np.sort(np.asarray(doc["test"], dtype=np.int64))),
    )
    if masks.train.size == 0:
        raise ParseError(path, None, "train set is empty")
    combined = np.concatenate([masks.train, masks.val, masks.test])
    if np.unique(combined).size != combined.size:
        raise ParseError(path, None, "split sets overlap")
    return masks
