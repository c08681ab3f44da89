"""Iris classification with the delayed-feedback reservoir.

Each of the four flower measurements is translated linearly into the
frequency of a unit-amplitude sine (2 Hz at the data-set minimum, 10 Hz at the
maximum) that is played for 3 s, followed by 3 s of silence.  The sines are
sampled and held once per delay period, projected onto the virtual nodes by
the input mask, and fed to the node.  Per-node first and second moments of
the response over the active segment form the feature vector for a ridge
readout.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..errors import ConfigError, IngestError
from ..oect import OectParams
from .delay import NONLINEARITIES, DelayFeedbackConfig, OectNonlinearity, integrate_delay_system
from .readout import MaskSpec, ReadoutModel, confusion_matrix, one_hot, train_readout

F_MIN, F_MAX = 2.0, 10.0  # Hz
ACTIVE, GAP = 3.0, 3.0  # s
AMPLITUDE = 1.0  # V


class ClipWarning(UserWarning):
    """A feature fell outside the encoder range and was clipped."""


@dataclass(frozen=True)
class IrisData:
    features: np.ndarray  # (n, 4) in cm
    labels: np.ndarray  # (n,) int
    species: tuple[str, ...]
    columns: tuple[str, ...]

    @property
    def ranges(self) -> tuple[np.ndarray, np.ndarray]:
        return self.features.min(axis=0), self.features.max(axis=0)


def load_iris(path: str | Path | None = None) -> IrisData:
    """Read the 150-row Iris CSV (four numeric columns and a species label)."""
    if path is None:
        src = resources.files("otsim.reservoir").joinpath("data/iris.csv")
        text = src.read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise IngestError(f"cannot read Iris data: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows or len(rows[0]) != 5:
        raise IngestError("Iris file needs a header with four features and a label", row=1)
    header, body = rows[0], [r for r in rows[1:] if r]
    feats = np.empty((len(body), 4))
    names = []
    for i, r in enumerate(body, start=2):
        if len(r) != 5:
            raise IngestError(f"expected 5 fields, got {len(r)}", row=i)
        for j in range(4):
            try:
                feats[i - 2, j] = float(r[j])
            except ValueError:
                raise IngestError(f"non-numeric value {r[j]!r}", row=i, column=header[j]) from None
        names.append(r[4].strip())
    species = tuple(sorted(set(names)))
    labels = np.array([species.index(s) for s in names])
    return IrisData(feats, labels, species, tuple(header[:4]))


def iris_frequencies(records, lo, hi) -> np.ndarray:
    """Linear map of each feature onto [F_MIN, F_MAX] Hz; out-of-range values are clipped."""
    x = np.asarray(records, dtype=float)
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    if np.any(hi <= lo):
        raise ConfigError("feature ranges must have max > min")
    if np.any(x < lo) or np.any(x > hi):
        warnings.warn("feature outside the encoder range; clipped", ClipWarning, stacklevel=2)
        x = np.clip(x, lo, hi)
    return F_MIN + (F_MAX - F_MIN) * (x - lo) / (hi - lo)


def encode_iris(record, lo, hi, t) -> np.ndarray:
    """Four sinusoidal channels at times ``t`` (s): active for ACTIVE s, then silent."""
    f = iris_frequencies(record, lo, hi)
    t = np.asarray(t, dtype=float)
    on = (t >= 0) & (t < ACTIVE)
    return AMPLITUDE * np.sin(2 * np.pi * t[..., None] * f) * on[..., None]


def default_oect_nonlinearity() -> OectNonlinearity:
    """OECT with V_P = 0.8 V, gate swept over [0, V_P] at V_DS = 0.4 V."""
    p = OectParams(mobility=1e-4, p0=1e25, t_osc=100e-9, width=100e-6, length=10e-6, c_d=0.16021766 / 0.8)
    return OectNonlinearity(p, v_ds=0.4, v_offset=0.0, v_span=0.8)


@dataclass(frozen=True)
class IrisReservoirConfig:
    n_nodes: int = 50
    tau: float = 10e-3  # s; also the input sample-and-hold period
    steps_per_node: int = 4
    tau_nl_nodes: float = 1.0  # node response time in units of theta
    gain: float = 0.9
    input_scale: float = 0.1
    node_bias: float = 1.0  # spread of the per-node bias channel
    nonlinearity: str = "tanh"
    mask_seed: int = 0
    ridge: float = 1e-2
    n_test_per_class: int = 10

    def __post_init__(self):
        if self.n_nodes < 1 or self.steps_per_node < 1:
            raise ConfigError("n_nodes and steps_per_node must be >= 1")
        if self.nonlinearity not in (*NONLINEARITIES, "oect"):
            raise ConfigError(f"unknown nonlinearity {self.nonlinearity!r}")
        if self.steps_per_node * self.n_nodes < 50:
            raise ConfigError("need at least 50 integrator steps per delay period")
        if self.ridge < 0:
            raise ConfigError("ridge must be non-negative")

    @property
    def theta(self) -> float:
        return self.tau / self.n_nodes

    @property
    def step(self) -> float:
        return self.theta / self.steps_per_node

    def mask(self) -> MaskSpec:
        return MaskSpec.random_binary(self.n_nodes, self.theta, n_channels=4, seed=self.mask_seed)

    def biases(self) -> np.ndarray:
        rng = np.random.default_rng([self.mask_seed, 1])
        return self.node_bias * rng.uniform(-1.0, 1.0, self.n_nodes)

    def delay_config(self) -> DelayFeedbackConfig:
        f = default_oect_nonlinearity() if self.nonlinearity == "oect" else NONLINEARITIES[self.nonlinearity]
        return DelayFeedbackConfig(
            tau=self.tau, step=self.step, gain=self.gain, tau_nl=self.tau_nl_nodes * self.theta, nonlinearity=f,
        )


def node_states(freqs: np.ndarray, cfg: IrisReservoirConfig) -> np.ndarray:
    """Virtual-node responses, shape (n_holds, n_nodes, n_records).

    All records run in parallel from a zero history; the silent gap between
    records is represented by that reset.
    """
    freqs = np.atleast_2d(freqs)
    n_hold = int(round(ACTIVE / cfg.tau))
    t_hold = cfg.tau * np.arange(n_hold)
    x = AMPLITUDE * np.sin(2 * np.pi * t_hold[:, None, None] * freqs[None])  # (hold, rec, 4)
    mask = cfg.mask()
    mask.check_delay(cfg.tau)
    proj = cfg.input_scale * np.einsum("hrc,nc->hnr", x, mask.mask) + cfg.biases()[None, :, None]
    spn, n_nodes = cfg.steps_per_node, cfg.n_nodes

    def drive(t, n):
        return proj[n // (n_nodes * spn), (n // spn) % n_nodes]

    traj = integrate_delay_system(cfg.delay_config(), drive, n_steps=n_hold * n_nodes * spn)
    y = traj.y[1:].reshape(n_hold, n_nodes, spn, -1)
    return y[:, :, -1, :]  # node value at the end of its theta slot


def reservoir_features(freqs: np.ndarray, cfg: IrisReservoirConfig) -> np.ndarray:
    """Per-node mean and mean square over the active segment, shape (n_records, 2 n_nodes)."""
    s = node_states(freqs, cfg)
    return np.concatenate([s.mean(axis=0), (s * s).mean(axis=0)], axis=0).T


def stratified_split(labels, seed: int, n_test_per_class: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded split with ``n_test_per_class`` test records per class."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == c))
        test.extend(idx[:n_test_per_class])
        train.extend(idx[n_test_per_class:])
    return np.sort(np.array(train)), np.sort(np.array(test))


def _standardize(train: np.ndarray, other: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mu = train.mean(axis=0)
    sd = train.std(axis=0)
    sd[sd == 0] = 1.0
    return (train - mu) / sd, (other - mu) / sd


@dataclass
class IrisResult:
    seed: int
    accuracy: float
    confusion: np.ndarray
    species: tuple[str, ...]
    readout: ReadoutModel = field(repr=False)
    test_index: np.ndarray = field(repr=False)
    predictions: np.ndarray = field(repr=False)


def evaluate_split(features, data: IrisData, seed: int, cfg: IrisReservoirConfig) -> IrisResult:
    train, test = stratified_split(data.labels, seed, cfg.n_test_per_class)
    x_tr, x_te = _standardize(features[train], features[test])
    k = len(data.species)
    model = train_readout(x_tr, one_hot(data.labels[train], k), cfg.ridge)
    pred = model.predict(x_te)
    cm = confusion_matrix(data.labels[test], pred, k)
    return IrisResult(seed, float(np.trace(cm) / cm.sum()), cm, data.species, model, test, pred)


def run_iris_experiment(
    cfg: IrisReservoirConfig | None = None,
    seed: int = 0,
    data: IrisData | None = None,
    features: np.ndarray | None = None,
) -> IrisResult:
    """Encode, simulate, train on the training split and test on the held-out records."""
    cfg = cfg or IrisReservoirConfig()
    data = data or load_iris()
    if features is None:
        lo, hi = data.ranges
        features = reservoir_features(iris_frequencies(data.features, lo, hi), cfg)
    return evaluate_split(features, data, seed, cfg)


def run_iris_seeds(cfg: IrisReservoirConfig | None = None, seeds=range(10), data: IrisData | None = None):
    """Simulate once and evaluate several split seeds; returns the list of results."""
    cfg = cfg or IrisReservoirConfig()
    data = data or load_iris()
    lo, hi = data.ranges
    feats = reservoir_features(iris_frequencies(data.features, lo, hi), cfg)
    return [evaluate_split(feats, data, s, cfg) for s in seeds]
