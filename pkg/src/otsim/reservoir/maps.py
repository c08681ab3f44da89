"""Adiabatic (tau_nl << tau) limit of the delay system and its bifurcations.

When the node responds much faster than the delay, each virtual node obeys
the discrete map y_k = gain * f(y_{k-1}, x_k).  With the logistic
nonlinearity this is the textbook logistic map.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..errors import DomainError
from .delay import DelayFeedbackConfig, Nonlinearity, integrate_delay_system, logistic


def logistic_map(y, gain):
    return gain * y * (1.0 - y)


def iterate_adiabatic_map(
    gain,
    inputs=None,
    n: int | None = None,
    y0=0.5,
    nonlinearity: Nonlinearity = logistic,
) -> np.ndarray:
    """Return y_1..y_n of y_k = gain * f(y_{k-1}, x_k).

    ``inputs`` may be None (x = 0) or a sequence of length >= n.  ``gain`` and
    ``y0`` broadcast, so a vector of gains iterates in parallel.
    """
    if inputs is not None:
        inputs = np.asarray(inputs, dtype=float)
        n = len(inputs) if n is None else n
        if len(inputs) < n:
            raise DomainError("input sequence shorter than n")
    if n is None or n < 1:
        raise DomainError("n must be >= 1")
    gain = np.asarray(gain, dtype=float)
    y = np.broadcast_to(np.asarray(y0, dtype=float), np.broadcast_shapes(np.shape(y0), gain.shape)).copy()
    out = np.empty((n,) + y.shape)
    for k in range(n):
        x = 0.0 if inputs is None else inputs[k]
        y = gain * nonlinearity(y, x)
        out[k] = y
    return out


def bifurcation_diagram(
    step: Callable[[np.ndarray, np.ndarray], np.ndarray],
    params: Sequence[float],
    n_transient: int,
    n_sample: int,
    y0: float = 0.5,
) -> np.ndarray:
    """Asymptotic samples of y <- step(y, param) for each parameter.

    Returns an array of shape (len(params), n_sample).  All parameters are
    iterated in parallel.
    """
    if n_transient < 1 or n_sample < 1:
        raise DomainError("n_transient and n_sample must be >= 1")
    p = np.asarray(params, dtype=float)
    y = np.full(p.shape, float(y0))
    for _ in range(n_transient):
        y = step(y, p)
    out = np.empty((p.size, n_sample))
    for k in range(n_sample):
        y = step(y, p)
        out[:, k] = y
    return out


def count_clusters(samples, tol: float = 1e-6) -> int:
    """Number of distinct values in ``samples`` (gaps larger than ``tol``)."""
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    if s.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(s) > tol))


def detect_period(samples, tol: float = 1e-6, max_period: int = 64) -> int:
    """Smallest p with |s[i + p] - s[i]| < tol for all i, or 0 if none up to max_period."""
    s = np.asarray(samples, dtype=float)
    for p in range(1, min(max_period, len(s) - 1) + 1):
        if np.all(np.abs(s[p:] - s[:-p]) < tol):
            return p
    return 0


def first_period_doubling(params, diagram, tol: float = 1e-6) -> float:
    """First parameter whose asymptotic orbit has period >= 2 (clusters > 1)."""
    for p, row in zip(params, diagram):
        if count_clusters(row, tol) > 1:
            return float(p)
    return float("nan")


def logistic_doubling_oracle() -> float:
    """Gain where the logistic fixed point 1 - 1/g loses stability: |f'(y*)| = |2 - g| = 1."""
    return 3.0


def delay_bifurcation(
    cfg: DelayFeedbackConfig,
    gains: Sequence[float],
    n_transient_delays: int,
    n_sample_delays: int,
    probe: float = 0.5,
) -> np.ndarray:
    """Stroboscopic samples y(t0 + k tau) of the full delay system for each gain.

    ``probe`` places the sampling instant within the delay window (fraction of tau).
    """
    gains = np.asarray(gains, dtype=float)
    spd = int(round(cfg.tau / cfg.step))
    if abs(spd * cfg.step - cfg.tau) > 1e-9 * cfg.tau:
        raise DomainError("stroboscopic sampling needs tau to be a whole number of steps")
    total = (n_transient_delays + n_sample_delays) * spd
    run = DelayFeedbackConfig(
        tau=cfg.tau, step=cfg.step, gain=gains, tau_nl=cfg.tau_nl, nonlinearity=cfg.nonlinearity,
        history=cfg.history, bound=cfg.bound,
    )
    traj = integrate_delay_system(run, n_steps=total)
    off = int(round(probe * spd))
    idx = off + spd * np.arange(n_transient_delays, n_transient_delays + n_sample_delays)
    idx = np.clip(idx, 0, total)
    return traj.y[idx].T
