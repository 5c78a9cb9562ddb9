"""Minimal SGC and GCN backbones: forward pass, analytic gradients, Adam.

GCN is the standard two-layer form softmax(A ReLU(A X W0) W1) with inverted
dropout on the inputs of each layer during training. SGC is logistic
regression on K-step propagated features, softmax((A^K X) W). All math is
float64 and gradients are derived by hand for these two fixed architectures.

The training loss is the mean cross-entropy over the current training subset
plus (weight_decay / 2) * sum of squared weights across all layers. Averaging
(rather than summing) keeps the effective learning rate independent of the
subset size as a curriculum grows it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import NumericError
from .graph import SparseMatrix

_KINDS = ("gcn", "sgc")


@dataclass(frozen=True)
class BackboneConfig:
    """Architecture and optimizer hyper-parameters for one backbone."""

    kind: str
    hidden_dim: int = 16
    propagation_steps: int = 2
    learning_rate: float = 0.01
    weight_decay: float = 5e-4
    dropout_rate: float = 0.5

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown backbone kind {self.kind!r}")
        if self.kind == "gcn" and self.hidden_dim < 1:
            raise ValueError("hidden_dim must be positive")
        if self.propagation_steps < 0:
            raise ValueError("propagation_steps must be non-negative")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.weight_decay < 0.0:
            raise ValueError("weight_decay must be non-negative")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must lie in [0, 1)")


def gcn_config(**overrides) -> BackboneConfig:
    """Two-layer GCN with the published defaults: hidden 16, dropout 0.5, lr 0.01."""
    base = dict(kind="gcn", hidden_dim=16, propagation_steps=0,
                learning_rate=0.01, weight_decay=5e-4, dropout_rate=0.5)
    base.update(overrides)
    return BackboneConfig(**base)


def sgc_config(**overrides) -> BackboneConfig:
    """SGC with the published defaults: K=2, lr 0.2, weight decay 1e-5, no dropout."""
    base = dict(kind="sgc", hidden_dim=0, propagation_steps=2,
                learning_rate=0.2, weight_decay=1e-5, dropout_rate=0.0)
    base.update(overrides)
    return BackboneConfig(**base)


@dataclass
class ModelParams:
    """Weight matrices plus Adam moment buffers and step counter."""

    kind: str
    weights: list[np.ndarray]
    adam_m: list[np.ndarray]
    adam_v: list[np.ndarray]
    step_count: int = 0

    def copy_weights(self) -> list[np.ndarray]:
        return [w.copy() for w in self.weights]


@dataclass
class ForwardCache:
    """Activations kept from a forward pass for the backward pass.

    agg_input is the matrix multiplied into the first weight (A X_drop for
    GCN, the propagated features for SGC); agg_hidden is A H_drop for GCN.
    """

    probs: np.ndarray
    log_probs: np.ndarray
    agg_input: np.ndarray
    pre_hidden: np.ndarray | None = None
    agg_hidden: np.ndarray | None = None
    hidden_dropout: np.ndarray | None = None


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_params(config: BackboneConfig, feature_dim: int, num_classes: int,
                seed: int) -> ModelParams:
    """Glorot-uniform weights with zeroed Adam moments, deterministic in seed."""
    rng = np.random.default_rng(seed)
    if config.kind == "gcn":
        shapes = [(feature_dim, config.hidden_dim), (config.hidden_dim, num_classes)]
    else:
        shapes = [(feature_dim, num_classes)]
    weights = [_glorot(rng, fi, fo) for fi, fo in shapes]
    return ModelParams(
        kind=config.kind,
        weights=weights,
        adam_m=[np.zeros(s) for s in shapes],
        adam_v=[np.zeros(s) for s in shapes],
    )


def sgc_precompute(a_hat: SparseMatrix, features: np.ndarray, steps: int) -> np.ndarray:
    """Propagate features `steps` times through the normalized adjacency."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    out = features
    for _ in range(steps):
        out = a_hat.matmul(out)
    return out


def _softmax_rows(logits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return np.exp(log_probs), log_probs


def _dropout_mask(rng: np.random.Generator, shape, rate: float) -> np.ndarray:
    keep = 1.0 - rate
    return (rng.random(shape) < keep) / keep


def forward(params: ModelParams, config: BackboneConfig, a_hat: SparseMatrix,
            x: np.ndarray, dropout_active: bool = False,
            seed: int | None = None) -> ForwardCache:
    """Full-graph forward pass returning class probabilities per node.

    For SGC, x must already be the propagated feature matrix (sgc_precompute).
    Dropout masks are a deterministic function of seed; with dropout_active
    False the pass is a pure function of (params, a_hat, x).
    """
    use_dropout = dropout_active and config.dropout_rate > 0.0 and config.kind == "gcn"
    rng = np.random.default_rng(seed) if use_dropout else None

    pre_hidden = agg_hidden = hidden_mask = None
    if config.kind == "sgc":
        agg_input = x
        logits = x @ params.weights[0]
    else:
        x_used = x * _dropout_mask(rng, x.shape, config.dropout_rate) if use_dropout else x
        agg_input = a_hat.matmul(x_used)
        pre_hidden = agg_input @ params.weights[0]
        hidden = np.maximum(pre_hidden, 0.0)
        if use_dropout:
            hidden_mask = _dropout_mask(rng, hidden.shape, config.dropout_rate)
            hidden = hidden * hidden_mask
        agg_hidden = a_hat.matmul(hidden)
        logits = agg_hidden @ params.weights[1]

    if not np.isfinite(logits).all():
        raise NumericError("forward pass produced non-finite logits")
    probs, log_probs = _softmax_rows(logits)
    return ForwardCache(probs=probs, log_probs=log_probs, agg_input=agg_input,
                        pre_hidden=pre_hidden, agg_hidden=agg_hidden,
                        hidden_dropout=hidden_mask)


def loss_and_grads(params: ModelParams, config: BackboneConfig, a_hat: SparseMatrix,
                   x: np.ndarray, labels: np.ndarray, subset,
                   seed: int | None = None) -> tuple[float, list[np.ndarray]]:
    """Mean cross-entropy over `subset` plus L2 decay, with exact gradients.

    Runs a training-mode forward (dropout on for GCN) whose masks are fixed
    by seed, so the returned loss is a deterministic, differentiable function
    of the weights for that seed.
    """
    subset = np.asarray(subset, dtype=np.int64)
    if subset.size == 0:
        raise ValueError("training subset is empty")
    cache = forward(params, config, a_hat, x, dropout_active=True, seed=seed)

    wd = config.weight_decay
    ce = -float(cache.log_probs[subset, labels[subset]].mean())
    decay = 0.5 * wd * sum(float((w * w).sum()) for w in params.weights)
    loss = ce + decay

    g_logits = np.zeros_like(cache.probs)
    g_logits[subset] = cache.probs[subset]
    g_logits[subset, labels[subset]] -= 1.0
    g_logits[subset] /= subset.size

    if config.kind == "sgc":
        grads = [cache.agg_input.T @ g_logits + wd * params.weights[0]]
    else:
        g_w1 = cache.agg_hidden.T @ g_logits + wd * params.weights[1]
        g_hidden = a_hat.matmul(g_logits) @ params.weights[1].T
        if cache.hidden_dropout is not None:
            g_hidden = g_hidden * cache.hidden_dropout
        g_pre = g_hidden * (cache.pre_hidden > 0.0)
        g_w0 = cache.agg_input.T @ g_pre + wd * params.weights[0]
        grads = [g_w0, g_w1]
    return loss, grads


def adam_step(params: ModelParams, grads: list[np.ndarray], lr: float,
              beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> ModelParams:
    """Standard bias-corrected Adam update, applied in place."""
    params.step_count += 1
    t = params.step_count
    for w, g, m, v in zip(params.weights, grads, params.adam_m, params.adam_v):
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1 ** t)
        v_hat = v / (1.0 - beta2 ** t)
        w -= lr * m_hat / (np.sqrt(v_hat) + eps)
    return params


def predict(cache: ForwardCache) -> np.ndarray:
    """Per-node argmax class; ties resolve to the lowest class id."""
    return np.argmax(cache.probs, axis=1)


def save_params(params: ModelParams, path) -> None:
    """Checkpoint weights as JSON: kind, shape header, row-major flat arrays."""
    doc = {
        "kind": params.kind,
        "shapes": [list(w.shape) for w in params.weights],
        "weights": [w.ravel().tolist() for w in params.weights],
        "step_count": params.step_count,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_params(path) -> ModelParams:
    """Load a checkpoint written by save_params; Adam moments start at zero."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    shapes = [tuple(s) for s in doc["shapes"]]
    weights = [np.asarray(flat, dtype=np.float64).reshape(shape)
               for flat, shape in zip(doc["weights"], shapes)]
    return ModelParams(
        kind=doc["kind"],
        weights=weights,
        adam_m=[np.zeros(s) for s in shapes],
        adam_v=[np.zeros(s) for s in shapes],
        step_count=int(doc.get("step_count", 0)),
    )
