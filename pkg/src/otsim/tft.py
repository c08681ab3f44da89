"""Gradual-channel compact model for lateral organic thin-film transistors.

All quantities are SI (m, F/m^2, m^2/(V s)).  Currents follow the user's sign
convention: for a p-type device a negative gate and drain bias give a negative
drain current.

Below threshold the drain current decays exponentially with the configured
subthreshold slope.  The exponential branch is anchored at a small overdrive
``stitch_overdrive`` above threshold, where it takes the value of the
gradual-channel expression, so the full characteristic is continuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import K_B_EV, ROOM_TEMPERATURE
from .errors import DegenerateInputError, DomainError


@dataclass(frozen=True)
class TftParams:
    mobility: float
    c_ins: float
    width: float
    length: float
    v_th: float = 0.0
    overlap: float = 0.0
    subthreshold_slope: float = 0.1
    polarity: str = "n"
    temperature: float = ROOM_TEMPERATURE
    stitch_overdrive: float = 1e-3

    def __post_init__(self):
        for name in ("mobility", "c_ins", "width", "length", "temperature", "stitch_overdrive"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.overlap < 0:
            raise DomainError(f"overlap must be non-negative, got {self.overlap!r}")
        if self.polarity not in ("n", "p"):
            raise DomainError(f"polarity must be 'n' or 'p', got {self.polarity!r}")
        s_min = thermal_slope_limit(self.temperature)
        if self.subthreshold_slope < s_min * (1 - 1e-12):
            raise DomainError(
                f"subthreshold slope {self.subthreshold_slope} V/dec is below the "
                f"thermal limit {s_min:.4g} V/dec at {self.temperature} K"
            )

    @property
    def beta(self) -> float:
        """mu * C * W / L in A/V^2."""
        return self.mobility * self.c_ins * self.width / self.length


def thermal_slope_limit(temperature: float = ROOM_TEMPERATURE) -> float:
    """Smallest physical subthreshold slope k_B T ln(10) / e in V/decade."""
    return K_B_EV * temperature * math.log(10.0)


def _sign(p: TftParams) -> float:
    return 1.0 if p.polarity == "n" else -1.0


def _gradual_channel(beta: float, vov: float, vds: float) -> tuple[float, float]:
    """Current and d/dVov for the n-type normalized gradual-channel branch.

    ``vds`` must be non-negative.  Returns zeros for ``vov <= 0``.
    """
    if vov <= 0.0:
        return 0.0, 0.0
    if vds <= vov:
        return beta * (vov * vds - 0.5 * vds * vds), beta * vds
    return 0.5 * beta * vov * vov, beta * vov


def _forward(p: TftParams, vgs: float, vds: float) -> tuple[float, float]:
    """n-type normalized current and gm for vds >= 0."""
    vov = vgs - _n_threshold(p)
    eps = p.stitch_overdrive
    if vov >= eps:
        return _gradual_channel(p.beta, vov, vds)
    i_eps, _ = _gradual_channel(p.beta, eps, vds)
    i = i_eps * 10.0 ** ((vov - eps) / p.subthreshold_slope)
    return i, i * math.log(10.0) / p.subthreshold_slope


def _n_threshold(p: TftParams) -> float:
    return _sign(p) * p.v_th


def _evaluate(p: TftParams, v_gs: float, v_ds: float) -> tuple[float, float]:
    s = _sign(p)
    vgs, vds = s * v_gs, s * v_ds
    if vds >= 0.0:
        i, gm = _forward(p, vgs, vds)
    else:
        # source and drain swap roles; the gate now references the drain
        i, gm = _forward(p, vgs - vds, -vds)
        i, gm = -i, -gm
    # d(s*i)/d(v_gs) = s * gm * s
    return s * i, gm


def drain_current(p: TftParams, v_gs: float, v_ds: float) -> float:
    """Drain current in A for gate-source and drain-source voltages in V."""
    return _evaluate(p, float(v_gs), float(v_ds))[0]


def transconductance(p: TftParams, v_gs: float, v_ds: float) -> float:
    """Analytic dI_D/dV_GS at fixed V_DS, in S."""
    return _evaluate(p, float(v_gs), float(v_ds))[1]


def above_threshold_current(p: TftParams, v_gs: float, v_ds: float) -> float:
    """Gradual-channel current without the subthreshold branch (zero below V_th)."""
    s = _sign(p)
    vov = s * v_gs - _n_threshold(p)
    vds = s * v_ds
    if vds >= 0:
        return s * _gradual_channel(p.beta, vov, vds)[0]
    return -s * _gradual_channel(p.beta, vov - vds, -vds)[0]


def above_threshold_transconductance(p: TftParams, v_gs: float, v_ds: float) -> float:
    """dI/dV_GS of the gradual-channel branch alone; vanishes at threshold."""
    s = _sign(p)
    vov = s * v_gs - _n_threshold(p)
    vds = s * v_ds
    if vds >= 0:
        return _gradual_channel(p.beta, vov, vds)[1]
    return -_gradual_channel(p.beta, vov - vds, -vds)[1]


def saturation_voltage(p: TftParams, v_gs: float) -> float:
    """V_DS at the linear/saturation boundary, in the user's sign convention."""
    return v_gs - p.v_th


def transition_frequency(p: TftParams, g_m: float) -> float:
    """Upper bound of f_T using the minimal gate capacitance C W (L + 2 L_ov)."""
    if g_m < 0:
        raise DomainError("transconductance must be non-negative")
    c_tot = p.c_ins * p.width * (p.length + 2.0 * p.overlap)
    return g_m / (2.0 * math.pi * c_tot)


def minimum_gate_capacitance(p: TftParams) -> float:
    return p.c_ins * p.width * (p.length + 2.0 * p.overlap)


def differential_gain(g_m: float, f: float, c_tot: float) -> float:
    """Small-signal current gain |i_D / i_G| = g_m / (2 pi f C_tot)."""
    if not f > 0:
        raise DomainError(f"frequency must be positive, got {f!r}")
    if not c_tot > 0:
        raise DomainError(f"total capacitance must be positive, got {c_tot!r}")
    return g_m / (2.0 * math.pi * f * c_tot)


@dataclass(frozen=True)
class TlmPoint:
    length: float
    r_tot_w: float

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError(f"channel length must be positive, got {self.length!r}")
        if not self.r_tot_w > 0:
            raise DomainError(f"width-normalized resistance must be positive, got {self.r_tot_w!r}")


@dataclass(frozen=True)
class TlmResult:
    r_c_w: float
    transfer_length: float
    channel_slope: float
    residual_norm: float
    physical: bool = True

    def report(self) -> str:
        lines = [
            f"r_c_w_ohm_m = {self.r_c_w:.9g}",
            f"transfer_length_m = {self.transfer_length:.9g}",
            f"channel_slope_ohm = {self.channel_slope:.9g}",
            f"residual_norm_ohm_m = {self.residual_norm:.9g}",
            f"physical = {str(self.physical).lower()}",
        ]
        return "\n".join(lines) + "\n"


def tlm_extract(points: Sequence[TlmPoint]) -> TlmResult:
    """Transmission-line extraction of contact resistance and transfer length.

    Fits R_tot*W = R_c*W + slope * L by least squares.  The transfer length is
    the magnitude of the abscissa intercept, R_c*W / slope.  A negative slope
    or intercept is returned with ``physical=False`` rather than raised.
    """
    lengths = np.array([pt.length for pt in points], dtype=float)
    r = np.array([pt.r_tot_w for pt in points], dtype=float)
    if np.unique(lengths).size < 2:
        raise DegenerateInputError("TLM needs at least two distinct channel lengths")
    # centred design keeps the normal equations well conditioned for micrometre lengths
    l_mean = lengths.mean()
    x = lengths - l_mean
    slope = float(np.dot(x, r - r.mean()) / np.dot(x, x))
    intercept = float(r.mean() - slope * l_mean)
    resid = r - (intercept + slope * lengths)
    physical = slope > 0 and intercept >= 0
    if slope != 0:
        l_t = abs(intercept / slope)
    else:
        l_t = math.inf
        physical = False
    return TlmResult(
        r_c_w=intercept,
        transfer_length=l_t,
        channel_slope=slope,
        residual_norm=float(np.linalg.norm(resid)),
        physical=physical,
    )
