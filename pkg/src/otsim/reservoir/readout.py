"""Input masking, time multiplexing and the linear readout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DomainError, NumericError


@dataclass(frozen=True)
class MaskSpec:
    """Mask over the virtual nodes of one delay period.

    ``mask`` is (n_virtual_nodes,) for a scalar input or
    (n_virtual_nodes, n_channels) for a vector input.
    """

    mask: np.ndarray
    theta: float

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=float)
        if m.ndim not in (1, 2) or m.shape[0] == 0:
            raise ConfigError("mask must be a non-empty vector or (nodes, channels) matrix")
        if not self.theta > 0:
            raise ConfigError("node spacing theta must be positive")
        object.__setattr__(self, "mask", m)

    @property
    def n_virtual_nodes(self) -> int:
        return self.mask.shape[0]

    @property
    def tau(self) -> float:
        return self.n_virtual_nodes * self.theta

    def check_delay(self, tau: float) -> None:
        if abs(self.tau - tau) > 1e-9 * tau:
            raise ConfigError(f"{self.n_virtual_nodes} nodes x theta = {self.tau} s does not match tau = {tau} s")

    @classmethod
    def random_binary(cls, n_nodes: int, theta: float, n_channels: int | None = None, seed: int = 0) -> "MaskSpec":
        """Random +-1 mask from a seeded generator."""
        rng = np.random.default_rng(seed)
        shape = (n_nodes,) if n_channels is None else (n_nodes, n_channels)
        return cls(rng.choice([-1.0, 1.0], size=shape), theta)


def steps_per_node(mask: MaskSpec, step: float) -> int:
    s = int(round(mask.theta / step))
    if s < 1 or abs(s * step - mask.theta) > 1e-9 * mask.theta:
        raise ConfigError(f"integrator step {step} must divide theta = {mask.theta}")
    return s


def node_values(u, mask: MaskSpec) -> np.ndarray:
    """Per-node drive levels for one held input: mask * u or mask @ u."""
    u = np.asarray(u, dtype=float)
    m = mask.mask
    if m.ndim == 1:
        if u.ndim != 0 and u.size != 1:
            raise ConfigError("a 1-D mask takes a scalar input")
        return m * float(u)
    if u.shape[-1] != m.shape[1]:
        raise ConfigError(f"input has {u.shape[-1]} channels, mask expects {m.shape[1]}")
    return u @ m.T


def mask_and_multiplex(u, mask: MaskSpec, step: float) -> np.ndarray:
    """Piecewise-constant drive over one delay period on the integrator grid.

    Each node level is held for theta; the result has n_nodes * theta/step samples.
    """
    s = steps_per_node(mask, step)
    return np.repeat(node_values(u, mask), s, axis=-1)


def sample_nodes(drive: np.ndarray, mask: MaskSpec, step: float) -> np.ndarray:
    """Values of a multiplexed signal at the node centres."""
    s = steps_per_node(mask, step)
    return np.asarray(drive)[..., s // 2::s][..., : mask.n_virtual_nodes]


@dataclass(frozen=True)
class ReadoutModel:
    weights: np.ndarray  # (n_features + 1, n_classes), last row is the bias
    ridge: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)):
            raise NumericError("readout weights are not finite")

    def decision(self, states) -> np.ndarray:
        x = np.asarray(states, dtype=float)
        return x @ self.weights[:-1] + self.weights[-1]

    def predict(self, states) -> np.ndarray:
        return np.argmax(self.decision(states), axis=1)


def one_hot(labels, n_classes: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=int)
    n = int(labels.max()) + 1 if n_classes is None else n_classes
    out = np.zeros((labels.size, n))
    out[np.arange(labels.size), labels] = 1.0
    return out


def train_readout(states, targets, ridge: float = 0.0) -> ReadoutModel:
    """Ridge least squares with an unpenalized bias column.

    Solves min ||[X 1] W - Y||^2 + ridge ||W_features||^2 through an augmented
    least-squares system (no normal equations).
    """
    x = np.asarray(states, dtype=float)
    y = np.asarray(targets, dtype=float)
    if x.ndim != 2:
        raise DomainError("states must be a 2-D matrix")
    if y.ndim == 1:
        y = y[:, None]
    if x.shape[0] != y.shape[0]:
        raise DomainError("states and targets must have the same number of rows")
    if ridge < 0:
        raise DomainError("ridge must be non-negative")
    n, p = x.shape
    a = np.hstack([x, np.ones((n, 1))])
    if ridge > 0:
        reg = np.hstack([np.sqrt(ridge) * np.eye(p), np.zeros((p, 1))])
        a = np.vstack([a, reg])
        y = np.vstack([y, np.zeros((p, y.shape[1]))])
    w, _, rank, _ = np.linalg.lstsq(a, y, rcond=None)
    if rank < a.shape[1]:
        raise NumericError("readout system is singular; add a ridge term or informative states")
    return ReadoutModel(w, float(ridge))


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=int)
    np.add.at(cm, (np.asarray(y_true, dtype=int), np.asarray(y_pred, dtype=int)), 1)
    return cm


def format_confusion(cm: np.ndarray, labels) -> str:
    """Plain-text table: rows are true classes, columns predictions."""
    w = max(max(len(str(lb)) for lb in labels), 5)
    head = " " * (w + 2) + " ".join(f"{str(lb):>{w}}" for lb in labels)
    rows = [head]
    for lb, row in zip(labels, cm):
        rows.append(f"{str(lb):>{w}}  " + " ".join(f"{v:>{w}d}" for v in row))
    return "\n".join(rows) + "\n"
