"""Zero-dimensional electrothermal model of organic permeable-base transistors.

The on-state current follows a power law in voltage, both on- and off-state
contributions are thermally activated, and the device temperature is set by
the balance between dissipated power and heat removed through a constant
substrate thermal resistance:

    I(V, T) = I_ref (V / V_ref)^alpha F1(T) + I_off F2(T)
    T       = T_a + theta_th * V * I(V, T)

Strong positive thermal feedback makes the voltage-controlled balance
multi-valued and bends the current-controlled V(I) curve back (S-shaped
negative differential resistance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .constants import K_B_EV, ROOM_TEMPERATURE
from .errors import DomainError, NumericError, ThermalRunawayError

DEFAULT_T_MAX = 600.0
DEFAULT_GRID_POINTS = 2000


@dataclass(frozen=True)
class OpbtThermalParams:
    i_ref: float
    v_ref: float
    alpha: float
    theta_th: float
    i_off: float = 0.0
    e_act_on: float = 0.3
    e_act_off: float | None = None
    t_ambient: float = ROOM_TEMPERATURE

    def __post_init__(self):
        if self.e_act_off is None:
            object.__setattr__(self, "e_act_off", self.e_act_on)
        if not (self.i_ref > 0 and self.v_ref > 0 and self.t_ambient > 0):
            raise DomainError("i_ref, v_ref and t_ambient must be positive")
        if not self.alpha >= 1:
            raise DomainError(f"power-law exponent must be >= 1, got {self.alpha!r}")
        if self.theta_th < 0 or self.i_off < 0:
            raise DomainError("theta_th and i_off must be non-negative")
        if self.e_act_on < 0 or self.e_act_off < 0:
            raise DomainError("activation energies must be non-negative")


@dataclass(frozen=True)
class OperatingPoint:
    voltage: float
    current: float
    temperature: float
    stable: bool

    @property
    def power(self) -> float:
        return self.voltage * self.current


@dataclass(frozen=True)
class PulseSpec:
    pulse_width: float
    duty_cycle: float
    thermal_capacitance: float

    def __post_init__(self):
        if not self.pulse_width > 0:
            raise DomainError("pulse width must be positive")
        if not 0 < self.duty_cycle <= 1:
            raise DomainError("duty cycle must lie in (0, 1]")
        if not self.thermal_capacitance > 0:
            raise DomainError("thermal capacitance must be positive")

    @property
    def period(self) -> float:
        return self.pulse_width / self.duty_cycle


def activation_factor(e_act, t, t_ambient):
    """Arrhenius factor exp(-(E_act/k_B)(1/T - 1/T_a)), unity at ambient."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or t_ambient <= 0:
        raise DomainError("temperatures must be positive")
    out = np.exp(-(e_act / K_B_EV) * (1.0 / t - 1.0 / t_ambient))
    return float(out) if out.ndim == 0 else out


def _factors(p: OpbtThermalParams, t):
    f1 = activation_factor(p.e_act_on, t, p.t_ambient)
    f2 = activation_factor(p.e_act_off, t, p.t_ambient)
    return f1, f2


def current_at(p: OpbtThermalParams, v, t):
    """Device current in A at voltage ``v`` and device temperature ``t``."""
    if np.any(np.asarray(v) < 0):
        raise DomainError("voltage must be non-negative")
    f1, f2 = _factors(p, t)
    return p.i_ref * (np.asarray(v, dtype=float) / p.v_ref) ** p.alpha * f1 + p.i_off * f2


def _dcurrent_dt(p: OpbtThermalParams, v, t):
    f1, f2 = _factors(p, t)
    on = p.i_ref * (v / p.v_ref) ** p.alpha * f1 * p.e_act_on
    off = p.i_off * f2 * p.e_act_off
    return (on + off) / (K_B_EV * t * t)


def balance_residual(p: OpbtThermalParams, v, t):
    """T_a + theta_th * V * I(V, T) - T; zero at a steady state."""
    return p.t_ambient + p.theta_th * v * current_at(p, v, t) - t


def balance_slope(p: OpbtThermalParams, v, t):
    """d(residual)/dT = theta_th * dP/dT - 1.  Negative means thermally stable."""
    return p.theta_th * v * _dcurrent_dt(p, v, t) - 1.0


def energy_residual(p: OpbtThermalParams, op: OperatingPoint) -> float:
    """Balance mismatch normalized by the operating temperature."""
    return abs(balance_residual(p, op.voltage, op.temperature)) / op.temperature


def _point(p, v, t) -> OperatingPoint:
    return OperatingPoint(
        voltage=float(v),
        current=float(current_at(p, v, t)),
        temperature=float(t),
        stable=balance_slope(p, v, t) < 0,
    )


def solve_steady_state(
    p: OpbtThermalParams,
    v: float,
    t_max: float = DEFAULT_T_MAX,
    n_grid: int = DEFAULT_GRID_POINTS,
    xtol: float = 1e-10,
) -> list[OperatingPoint]:
    """All voltage-controlled steady states with T in [T_a, t_max], ascending in T.

    Roots are bracketed on a uniform temperature grid and refined with Brent's
    method.  Raises ThermalRunawayError when the balance has no root below
    ``t_max`` (dissipated power outruns substrate cooling everywhere).
    """
    if v < 0:
        raise DomainError("voltage must be non-negative")
    if t_max <= p.t_ambient:
        raise DomainError("t_max must exceed the ambient temperature")
    grid = np.linspace(p.t_ambient, t_max, n_grid)
    g = balance_residual(p, v, grid)
    slope = balance_slope(p, v, grid)

    def resid(t):
        return balance_residual(p, v, t)

    def refine(a, b):
        return brentq(resid, a, b, xtol=xtol, rtol=1e-15)

    roots = []
    for i in range(n_grid):
        if g[i] == 0.0:
            roots.append(grid[i])
        if i + 1 == n_grid:
            break
        a, b = grid[i], grid[i + 1]
        if g[i] * g[i + 1] < 0:
            roots.append(refine(a, b))
        elif g[i] * g[i + 1] > 0 and slope[i] * slope[i + 1] < 0:
            # an extremum inside the cell may hide a pair of close roots
            t_ext = brentq(lambda t: balance_slope(p, v, t), a, b, xtol=xtol)
            g_ext = resid(t_ext)
            if g_ext * g[i] < 0:
                roots.extend([refine(a, t_ext), refine(t_ext, b)])
    if not roots:
        raise ThermalRunawayError(
            f"no steady state below {t_max} K at V = {v} V: thermal runaway",
            voltage=v,
            t_max=t_max,
        )
    return [_point(p, v, t) for t in roots]


def voltage_for_current(p: OpbtThermalParams, i: float, t: float) -> float:
    """Invert the power law for V at current ``i`` and temperature ``t``.

    Returns 0 when the thermally activated off-current alone exceeds ``i``.
    """
    f1, f2 = _factors(p, t)
    excess = i - p.i_off * f2
    if excess <= 0:
        return 0.0
    return p.v_ref * (excess / (p.i_ref * f1)) ** (1.0 / p.alpha)


def operating_point_at_current(p: OpbtThermalParams, i: float, maxiter: int = 200) -> OperatingPoint:
    """Current-controlled steady state.  Unique: the balance is monotone in T for fixed I."""
    if not i > 0:
        raise DomainError("current must be positive")
    v_cold = voltage_for_current(p, i, p.t_ambient)
    if v_cold <= 0:
        raise DomainError(f"current {i} A is below the ambient off-current {p.i_off} A")
    hi = p.t_ambient + p.theta_th * i * v_cold
    if hi == p.t_ambient:
        return _point(p, v_cold, p.t_ambient)

    def h(t):
        return p.t_ambient + p.theta_th * i * voltage_for_current(p, i, t) - t

    try:
        t = brentq(h, p.t_ambient, hi, xtol=1e-10, rtol=1e-15, maxiter=maxiter)
    except RuntimeError as exc:
        raise NumericError(f"current-controlled solve did not converge at I = {i} A: {exc}") from exc
    return _point(p, voltage_for_current(p, i, t), t)


def trace_current_controlled(p: OpbtThermalParams, currents: Iterable[float]) -> list[OperatingPoint]:
    """Trace V(I) including the negative-differential-resistance branch."""
    currents = np.asarray(list(currents), dtype=float)
    if currents.size and np.any(np.diff(currents) <= 0):
        raise DomainError("currents must be strictly ascending")
    return [operating_point_at_current(p, float(i)) for i in currents]


def ndr_sign_changes(trace: list[OperatingPoint]) -> int:
    """Number of sign changes of dV/dI along a traced curve."""
    v = np.array([op.voltage for op in trace])
    dv = np.sign(np.diff(v))
    dv = dv[dv != 0]
    return int(np.count_nonzero(dv[1:] != dv[:-1]))


def power_density(op: OperatingPoint, area: float) -> float:
    """Dissipated power per device area, W/m^2."""
    return op.power / area


@dataclass
class PulsedResult:
    peak_temperature: float
    periods: int
    peaks: list[float] = field(repr=False, default_factory=list)


def pulsed_steady_state(
    p: OpbtThermalParams,
    pulse: PulseSpec,
    v: float,
    t_max: float = DEFAULT_T_MAX,
    tol: float = 1e-6,
    max_periods: int = 200_000,
) -> PulsedResult:
    """Periodic steady state of a single-pole thermal network under pulsed bias.

    C dT/dt = V I(V, T) - (T - T_a)/theta_th during the pulse; passive cooling
    between pulses.  Periods are stepped until the end-of-pulse temperature
    changes by less than ``tol`` from one period to the next.
    """
    if v < 0:
        raise DomainError("voltage must be non-negative")
    if p.theta_th == 0:
        return PulsedResult(p.t_ambient, 0, [p.t_ambient])
    c = pulse.thermal_capacitance
    tau = p.theta_th * c
    t_off = pulse.period - pulse.pulse_width
    cool = math.exp(-t_off / tau)

    def rhs(_, y):
        # trial stages of a runaway step can leave the physical range
        temp_eval = min(max(y[0], 1.0), 1e3 * t_max)
        return [(v * current_at(p, v, temp_eval) - (y[0] - p.t_ambient) / p.theta_th) / c]

    def runaway(_, y):
        return y[0] - t_max

    runaway.terminal = True
    runaway.direction = 1

    temp = p.t_ambient
    peaks = []
    for k in range(max_periods):
        sol = solve_ivp(
            rhs, (0.0, pulse.pulse_width), [temp], method="DOP853",
            rtol=1e-11, atol=1e-10, events=runaway,
        )
        if sol.status == 1:
            raise ThermalRunawayError(
                f"temperature exceeded {t_max} K during pulse {k + 1} at V = {v} V",
                voltage=v,
                t_max=t_max,
            )
        if sol.status < 0:
            raise NumericError(f"pulse integration failed: {sol.message}")
        peak = float(sol.y[0, -1])
        peaks.append(peak)
        if len(peaks) > 1 and abs(peaks[-1] - peaks[-2]) < tol:
            return PulsedResult(peak, k + 1, peaks)
        temp = p.t_ambient + (peak - p.t_ambient) * cool
    raise NumericError(f"pulsed steady state not reached within {max_periods} periods")


def pulsed_steady_temperature(p: OpbtThermalParams, pulse: PulseSpec, v: float, **kwargs) -> float:
    """Peak (end-of-pulse) temperature of the periodic steady state, in K."""
    return pulsed_steady_state(p, pulse, v, **kwargs).peak_temperature
