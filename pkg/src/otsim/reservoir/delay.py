"""Single-node delayed-feedback dynamics.

The node obeys

    tau_nl * dy/dt + y(t) = gain * f(y(t - tau), J(t))

where J is the (masked) input drive.  Integration uses an exponential Euler
step: the linear relaxation is exact over a step and the nonlinear term is
held at its value at the start of the step.  Delayed values come from a ring
buffer, linearly interpolated when tau is not a whole number of steps.

Everything is vectorized over a trailing batch axis so many independent
records (or gains) run in one pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import DomainError, InstabilityError
from ..oect import OectParams, steady_state_current

Nonlinearity = Callable[[np.ndarray, np.ndarray], np.ndarray]


def logistic(feedback, u):
    """r (1 - r) with r = feedback + u."""
    r = feedback + u
    return r * (1.0 - r)


def tanh(feedback, u):
    return np.tanh(feedback + u)


@dataclass(frozen=True)
class Sin2:
    """Ikeda-type sin^2(feedback + u + phase), bounded in [0, 1]."""

    phase: float = 0.2

    def __call__(self, feedback, u):
        return np.sin(feedback + u + self.phase) ** 2


@dataclass(frozen=True)
class OectNonlinearity:
    """Normalized OECT steady-state current as the node nonlinearity.

    The fed-back signal sets the gate voltage, V_GS = v_offset + v_span (y + u),
    at fixed V_DS; the drain current is rescaled so that the extremes reached on
    V_GS in [v_offset, v_offset + v_span] map to 0 and 1, and clipped outside.
    """

    params: OectParams
    v_ds: float
    v_offset: float = 0.0
    v_span: float = 1.0
    _lo: float = field(init=False, repr=False, default=0.0)
    _hi: float = field(init=False, repr=False, default=1.0)

    def __post_init__(self):
        if self.v_span == 0:
            raise DomainError("v_span must be non-zero")
        grid = self.v_offset + self.v_span * np.linspace(0.0, 1.0, 513)
        i = steady_state_current(self.params, grid, self.v_ds)
        lo, hi = float(np.min(i)), float(np.max(i))
        if hi == lo:
            raise DomainError("OECT current is flat over the configured gate window")
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)

    def __call__(self, feedback, u):
        vgs = self.v_offset + self.v_span * (feedback + u)
        i = steady_state_current(self.params, vgs, self.v_ds)
        return np.clip((i - self._lo) / (self._hi - self._lo), 0.0, 1.0)


NONLINEARITIES: dict[str, Nonlinearity] = {"logistic": logistic, "tanh": tanh, "sin2": Sin2()}


@dataclass(frozen=True)
class DelayFeedbackConfig:
    tau: float  # delay-line time, s
    step: float  # integrator step, s
    gain: float | np.ndarray = 1.0
    tau_nl: float = 0.0  # node response time, s
    nonlinearity: Nonlinearity = logistic
    history: float | Callable[[np.ndarray], np.ndarray] = 0.0
    bound: float = 1e6

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau!r}")
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step!r}")
        if self.step > self.tau / 50 * (1 + 1e-12):
            raise DomainError(f"step {self.step} exceeds tau/50 = {self.tau / 50}")
        if self.tau_nl < 0:
            raise DomainError("tau_nl must be non-negative")
        if not self.bound > 0:
            raise DomainError("bound must be positive")

    @property
    def delay_steps(self) -> float:
        return self.tau / self.step


@dataclass
class Trajectory:
    t: np.ndarray  # (n_steps + 1,)
    y: np.ndarray  # (n_steps + 1,) or (n_steps + 1, batch)
    step: float

    def at(self, t_query) -> np.ndarray:
        """Linear interpolation in time (first axis)."""
        idx = np.asarray(t_query, dtype=float) / self.step
        k = np.clip(np.floor(idx).astype(int), 0, len(self.t) - 2)
        w = idx - k
        if self.y.ndim == 2:
            w = w[..., None]
        return (1 - w) * self.y[k] + w * self.y[k + 1]

    def to_csv(self, path, column: int = 0) -> None:
        y = self.y if self.y.ndim == 1 else self.y[:, column]
        with open(path, "w", newline="") as fh:
            fh.write("t_s,y\n")
            for ti, yi in zip(self.t, y):
                fh.write(f"{ti:.12g},{yi:.17g}\n")


def _history_values(cfg: DelayFeedbackConfig, n_hist: int, batch_shape) -> np.ndarray:
    t = -cfg.step * np.arange(n_hist)[::-1]  # oldest first, ends at t = 0
    if callable(cfg.history):
        vals = np.asarray(cfg.history(t), dtype=float)
        if vals.shape == t.shape and batch_shape:
            vals = np.broadcast_to(vals[:, None], (n_hist,) + batch_shape)
    else:
        vals = np.full((n_hist,) + batch_shape, float(cfg.history))
    return np.array(vals, dtype=float)


def integrate_delay_system(
    cfg: DelayFeedbackConfig,
    drive=None,
    horizon: float | None = None,
    n_steps: int | None = None,
    batch: int | None = None,
    record_every: int = 1,
) -> Trajectory:
    """Fixed-step integration on [0, horizon].

    ``drive`` is None (no input), a scalar, an array of shape (n_steps, ...)
    holding J(t_n) on the step grid, or a callable ``drive(t_n, n)``.  The
    batch shape is taken from the drive, from an array-valued gain, or from
    ``batch``.  Raises InstabilityError when |y| exceeds ``cfg.bound``.
    """
    if n_steps is None:
        if horizon is None or horizon < 0:
            raise DomainError("give a non-negative horizon or n_steps")
        n_steps = int(round(horizon / cfg.step))
        if abs(n_steps * cfg.step - horizon) > 1e-9 * max(horizon, cfg.step):
            raise DomainError("horizon must be a whole number of steps")
    if record_every < 1:
        raise DomainError("record_every must be >= 1")

    gain = np.asarray(cfg.gain, dtype=float)
    if isinstance(drive, np.ndarray) and drive.ndim >= 1:
        if drive.shape[0] < n_steps:
            raise DomainError(f"drive has {drive.shape[0]} samples, need {n_steps}")
        batch_shape = drive.shape[1:]
        drive_at = lambda t, n: drive[n]  # noqa: E731
    elif callable(drive):
        batch_shape = np.shape(drive(0.0, 0))
        drive_at = drive
    else:
        const = 0.0 if drive is None else float(drive)
        batch_shape = ()
        drive_at = lambda t, n: const  # noqa: E731
    if gain.ndim:
        batch_shape = np.broadcast_shapes(batch_shape, gain.shape)
    if batch is not None:
        batch_shape = np.broadcast_shapes(batch_shape, (batch,))

    d = cfg.delay_steps
    m = int(math.floor(d + 1e-9))
    frac = d - m
    if frac < 1e-9:
        frac = 0.0
    n_buf = m + 2
    buf = _history_values(cfg, n_buf, batch_shape)
    head = n_buf - 1  # slot holding y(t_n)

    decay = math.exp(-cfg.step / cfg.tau_nl) if cfg.tau_nl > 0 else 0.0
    kick = 1.0 - decay
    f = cfg.nonlinearity
    bound = cfg.bound

    n_rec = n_steps // record_every + 1
    out = np.empty((n_rec,) + batch_shape)
    y = buf[head].copy()
    out[0] = y
    r = 1
    for n in range(n_steps):
        # y(t_n - tau) sits m (and m + 1) slots behind the head
        a = buf[(head - m) % n_buf]
        if frac:
            b = buf[(head - m - 1) % n_buf]
            yd = a + frac * (b - a)
        else:
            yd = a
        target = gain * f(yd, drive_at(n * cfg.step, n))
        y = decay * y + kick * target
        if not np.all(np.abs(y) <= bound):
            raise InstabilityError(f"|y| exceeded {bound} at t = {(n + 1) * cfg.step:.6g} s")
        head = (head + 1) % n_buf
        buf[head] = y
        if (n + 1) % record_every == 0:
            out[r] = y
            r += 1
    t = cfg.step * record_every * np.arange(n_rec)
    return Trajectory(t, out, cfg.step * record_every)
