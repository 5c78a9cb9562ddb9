"""Difficulty scoring from neighborhood label distributions, plus pacing.

Training nodes are scored by how much their neighborhood disagrees with
them: the diversity score is the entropy of the label distribution over the
closed neighborhood (flags boundary nodes that touch several classes), and
the consistency score is the fraction of neighbors whose label differs from
the node's own (flags mislabeled nodes). Unlabeled nodes contribute
pseudo-labels from a preliminary model; labeled nodes always keep their given
labels so that a mislabeled node cannot be rescued by a correct prediction.

A pacing schedule then maps each training epoch to the fraction of easiest
nodes used that epoch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import neighbor_label_counts
from .graph import Graph

# Entropy base for the diversity score. Base 10 keeps scores on a scale
# comparable to the consistency score's [0, 1] for typical class counts;
# per-call log_base overrides rescale the diversity term and therefore
# interact with the alpha weight.
DEFAULT_LOG_BASE = 10.0

_PACING_KINDS = ("linear", "root", "geometric")


@dataclass(frozen=True)
class MergedLabels:
    """Full label array: given labels on training nodes, pseudo elsewhere."""

    labels: np.ndarray
    is_ground_truth: np.ndarray


@dataclass(frozen=True)
class DifficultyTable:
    """Per-training-node scores and the ascending-difficulty ordering.

    `nodes` lists the training ids ascending; the parallel arrays hold their
    scores. `order` is the same ids sorted by (difficulty, node id).
    """

    nodes: np.ndarray
    score_div: np.ndarray
    score_cons: np.ndarray
    difficulty: np.ndarray
    order: np.ndarray


@dataclass(frozen=True)
class PacingSchedule:
    """Pacing curve: fraction of easiest nodes in use at each epoch.

    Starts at initial_fraction, reaches 1 at epoch epochs_to_full, stays 1.
    """

    kind: str
    initial_fraction: float = 0.5
    epochs_to_full: int = 100

    def __post_init__(self):
        if self.kind not in _PACING_KINDS:
            raise ValueError(f"unknown pacing kind {self.kind!r}")
        if not 0.0 < self.initial_fraction <= 1.0:
            raise ValueError("initial fraction must be positive and at most 1")
        if self.epochs_to_full < 1:
            raise ValueError("epochs_to_full must be at least 1")


def merge_labels(given_labels: np.ndarray, pseudo_labels: np.ndarray,
                 train_ids: np.ndarray) -> MergedLabels:
    """Overwrite predictions with the given labels on training nodes."""
    merged = np.array(pseudo_labels, dtype=np.int64)
    merged[train_ids] = given_labels[train_ids]
    is_gt = np.zeros(merged.shape[0], dtype=bool)
    is_gt[train_ids] = True
    merged.setflags(write=False)
    is_gt.setflags(write=False)
    return MergedLabels(merged, is_gt)


def pseudo_label(dataset, masks, labels, backbone_config, trainer_config) -> MergedLabels:
    """Train a preliminary model on the training set and label every node.

    The model trains with the standard (non-curriculum) loop and early
    stopping on the validation set; its best-snapshot predictions fill in the
    unlabeled nodes, while training nodes keep their given labels.
    """
    from .training import predict_all, train_standard  # deferred: trainer imports this module

    params, _ = train_standard(dataset, masks, labels, backbone_config,
                               replace(trainer_config, schedule=None))
    predictions = predict_all(params, backbone_config, dataset)
    return merge_labels(labels, predictions, masks.train)


def _closed_counts(g: Graph, labels: np.ndarray, nodes: np.ndarray,
                   num_classes: int) -> tuple[np.ndarray, np.ndarray]:
    """Label histograms over open and closed neighborhoods of `nodes`."""
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    open_counts = neighbor_label_counts(g.row_offsets, g.col_indices, labels,
                                        np.ascontiguousarray(nodes, dtype=np.int64),
                                        num_classes)
    closed_counts = open_counts.copy()
    closed_counts[np.arange(nodes.shape[0]), labels[nodes]] += 1
    return open_counts, closed_counts


def _entropy_rows(counts: np.ndarray, log_base: float) -> np.ndarray:
    sizes = counts.sum(axis=1, keepdims=True)
    probs = counts / sizes
    plogp = np.zeros_like(probs)
    np.log(probs, out=plogp, where=probs > 0.0)
    plogp *= probs
    return -plogp.sum(axis=1) / math.log(log_base)


def diversity_score(g: Graph, labels: np.ndarray, u: int, *,
                    log_base: float = DEFAULT_LOG_BASE) -> float:
    """Entropy of the label distribution over u's closed neighborhood.

    Zero when the whole neighborhood shares one label; at most
    log(num_classes) in the chosen base.
    """
    num_classes = int(labels.max()) + 1
    _, closed = _closed_counts(g, labels, np.asarray([u]), num_classes)
    return float(_entropy_rows(closed, log_base)[0])


def consistency_score(g: Graph, labels: np.ndarray, u: int) -> float:
    """Fraction of u's neighbors whose label differs from u's own.

    Isolated nodes score 0: with no neighborhood evidence against them they
    are treated as maximally easy.
    """
    nbrs = g.neighbors(u)
    if nbrs.size == 0:
        return 0.0
    return float(np.mean(labels[nbrs] != labels[u]))


def difficulty_table(g: Graph, labels: np.ndarray, train_ids, alpha: float = 1.0,
                     *, div_weight: float = 1.0,
                     log_base: float = DEFAULT_LOG_BASE) -> DifficultyTable:
    """Score every training node and sort ascending by difficulty.

    difficulty = div_weight * score_div + alpha * score_cons (div_weight is 1
    except for the consistency-only ablation). Ties break by smaller node id.
    """
    nodes = np.sort(np.asarray(train_ids, dtype=np.int64))
    if nodes.size == 0:
        raise ValueError("train set is empty")
    num_classes = int(labels.max()) + 1
    open_counts, closed_counts = _closed_counts(g, labels, nodes, num_classes)

    score_div = _entropy_rows(closed_counts, log_base)
    degrees = open_counts.sum(axis=1)
    agreeing = open_counts[np.arange(nodes.shape[0]), np.asarray(labels)[nodes]]
    score_cons = np.where(degrees > 0, (degrees - agreeing) / np.maximum(degrees, 1), 0.0)

    difficulty = div_weight * score_div + alpha * score_cons
    order = nodes[np.lexsort((nodes, difficulty))]
    for arr in (nodes, score_div, score_cons, difficulty, order):
        arr.setflags(write=False)
    return DifficultyTable(nodes, score_div, score_cons, difficulty, order)


def pacing(schedule: PacingSchedule, t: int) -> float:
    """Fraction of the training set available at epoch t."""
    if t < 0:
        raise ValueError("epoch must be non-negative")
    if t == 0:
        return schedule.initial_fraction
    if t >= schedule.epochs_to_full:
        return 1.0
    lam0 = schedule.initial_fraction
    s = t / schedule.epochs_to_full
    if schedule.kind == "linear":
        value = lam0 + (1.0 - lam0) * s
    elif schedule.kind == "root":
        value = math.sqrt(lam0 * lam0 + (1.0 - lam0 * lam0) * s)
    else:
        value = 2.0 ** (math.log2(lam0) * (1.0 - s))
    return min(1.0, value)


def subset_at_epoch(table: DifficultyTable, fraction: float) -> np.ndarray:
    """The round(fraction * l) easiest training nodes, at least one."""
    total = table.order.shape[0]
    count = min(total, max(1, round(fraction * total)))
    return table.order[:count].copy()


def format_difficulty_table(table: DifficultyTable) -> str:
    """Plain-text export: `node_id score_div score_cons difficulty rank`.

    One line per training node in node-id order; rank is the 0-based position
    in the ascending-difficulty ordering.
    """
    rank_of = {int(u): r for r, u in enumerate(table.order)}
    lines = ["# node_id score_div score_cons difficulty rank"]
    for i, u in enumerate(table.nodes):
        lines.append(f"{int(u)} {table.score_div[i]!r} {table.score_cons[i]!r} "
                     f"{table.difficulty[i]!r} {rank_of[int(u)]}")
    return "\n".join(lines) + "\n"
