"""Delay-embedding phase portraits and box-counting dimension."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .delay import Trajectory


class ResolutionWarning(UserWarning):
    """Too few points to resolve the smallest box size."""


@dataclass
class PhasePortrait:
    points: np.ndarray  # (n, 2): columns y(t), y(t - tau)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("y_t,y_t_minus_tau\n")
            for a, b in self.points:
                fh.write(f"{a:.17g},{b:.17g}\n")


def phase_portrait(traj: Trajectory | np.ndarray, tau: float, step: float | None = None,
                   transient: float = 0.0) -> PhasePortrait:
    """Pairs (y(t), y(t - tau)) for t in [transient + tau, end].

    ``traj`` is a Trajectory or a 1-D sample array (then ``step`` is required).
    ``tau`` must be a whole number of samples.
    """
    if isinstance(traj, Trajectory):
        y, step = traj.y, traj.step
        if y.ndim != 1:
            raise DomainError("phase portrait needs a single trajectory")
    else:
        y = np.asarray(traj, dtype=float)
        if step is None:
            raise DomainError("step is required for raw sample arrays")
    lag = int(round(tau / step))
    if lag < 1 or abs(lag * step - tau) > 1e-9 * tau:
        raise DomainError("tau must be a positive whole number of samples")
    skip = int(round(transient / step))
    if len(y) <= lag + skip:
        raise DomainError("trajectory is shorter than tau plus the transient")
    y = y[skip:]
    return PhasePortrait(np.column_stack([y[lag:], y[:-lag]]))


def box_counts(points: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """Number of occupied grid cells of side eps (grid anchored at the minimum corner).

    The upper edge is closed: points on the maximum fall into the last cell.
    """
    pts = np.asarray(points, dtype=float)
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    out = np.empty(len(eps), dtype=int)
    for k, e in enumerate(eps):
        top = np.maximum(np.ceil(span / e * (1 - 1e-12)).astype(np.int64) - 1, 0)
        cells = np.minimum(np.floor((pts - lo) / e).astype(np.int64), top)
        out[k] = np.unique(cells, axis=0).shape[0]
    return out


def box_counting_dimension(
    points,
    scale_range: tuple[float, float] = (1 / 4, 1 / 64),
    n_scales: int = 5,
    min_points_per_box: float = 4.0,
) -> float:
    """Least-squares slope of log N(eps) against log(1/eps).

    ``scale_range`` gives the largest and smallest box sizes as fractions of the
    data extent (largest side of the bounding box).  The default five scales
    are dyadic, so each grid tiles the extent exactly; scales that are not
    whole fractions of the extent bias the slope low.  Emits ResolutionWarning
    when the smallest boxes hold fewer than ``min_points_per_box`` points on
    average, where the count is starved by sampling rather than geometry.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] < 2:
        raise DomainError("need at least two points")
    extent = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    if extent == 0:
        return 0.0
    hi, lo = scale_range
    if not (0 < lo < hi <= 1):
        raise DomainError("scale_range must satisfy 0 < smallest < largest <= 1")
    if n_scales < 2:
        raise DomainError("need at least two scales")
    eps = extent * np.geomspace(hi, lo, n_scales)
    n = box_counts(pts, eps)
    if pts.shape[0] < min_points_per_box * n[-1]:
        warnings.warn(
            f"{pts.shape[0]} points for {n[-1]} occupied boxes at the smallest scale; "
            "the dimension estimate is resolution limited",
            ResolutionWarning,
            stacklevel=2,
        )
    slope = np.polyfit(np.log(1.0 / eps), np.log(n), 1)[0]
    return float(slope)
