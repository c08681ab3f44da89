"""Bernards-type model of organic electro-chemical transistors.

The ionic and electronic sub-circuits are coupled only through the double-layer
capacitance, which yields closed forms for the steady-state current, the
transient after a gate step, and two independent time constants.  The
steady-state equations are implemented in their literal algebraic form
(depletion-mode, hole-doped channel): V_DS <= V_GS selects the first branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import K_B_EV, Q_E, ROOM_TEMPERATURE
from .errors import DomainError


@dataclass(frozen=True)
class OectParams:
    mobility: float  # m^2/(V s)
    p0: float  # m^-3
    t_osc: float  # m
    width: float  # m
    length: float  # m
    c_d: float  # F/m^2
    f_nonuniform: float = 0.5
    gate_distance: float = 1e-3  # m
    kappa_ionic: float = 1e-3  # s m^-1 (mol/l)^(1/2)

    def __post_init__(self):
        for name in ("mobility", "p0", "t_osc", "width", "length", "c_d", "gate_distance", "kappa_ionic"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not 0.0 <= self.f_nonuniform <= 1.0:
            raise DomainError(f"f_nonuniform must lie in [0, 1], got {self.f_nonuniform!r}")

    @property
    def conductance(self) -> float:
        """Undoped-channel conductance G0 = mu e p0 t W / L, in S."""
        return self.mobility * Q_E * self.p0 * self.t_osc * self.width / self.length


@dataclass(frozen=True)
class ElectrolyteSpec:
    concentration: float  # mol/l
    z: int = 1
    temperature: float = ROOM_TEMPERATURE

    def __post_init__(self):
        if not self.concentration > 0:
            raise DomainError("electrolyte concentration must be positive")
        if not self.temperature > 0:
            raise DomainError("temperature must be positive")
        if self.z == 0:
            raise DomainError("ion valence must be non-zero")


def pinch_off_voltage(p: OectParams) -> float:
    """V_P = e p0 t / c_d."""
    return Q_E * p.p0 * p.t_osc / p.c_d


def steady_state_current(p: OectParams, v_gs, v_ds):
    """Drain current in A.  Accepts scalars or broadcastable arrays."""
    vp = pinch_off_voltage(p)
    g0 = p.conductance
    vgs = np.asarray(v_gs, dtype=float)
    vds = np.asarray(v_ds, dtype=float)
    lin = g0 * (1.0 - (vgs - 0.5 * vds) / vp) * vds
    sat = g0 * (vds - vgs * vgs / (2.0 * vp))
    out = np.where(vds <= vgs, lin, sat)
    return float(out) if out.ndim == 0 else out


def delta_steady_state(p: OectParams, v_gs: float, v_ds: float) -> float:
    """Delta I_SS = I_SS(V_GS = 0) - I_SS(V_GS) at fixed V_DS."""
    return steady_state_current(p, 0.0, v_ds) - steady_state_current(p, v_gs, v_ds)


def transient_prefactor(f_nonuniform: float, tau_e: float, tau_i: float) -> float:
    """1 - f tau_e / tau_i."""
    return 1.0 - f_nonuniform * tau_e / tau_i


def transient_regime(f_nonuniform: float, tau_e: float, tau_i: float) -> str:
    """'monotone' (ionically limited), 'flat', or 'spike' (electronically limited)."""
    k = f_nonuniform * tau_e / tau_i
    if k < 1.0:
        return "monotone"
    if k > 1.0:
        return "spike"
    return "flat"


def transient_current(p: OectParams, t, i_ss_on: float, i_ss_off_delta: float, tau_e: float, tau_i: float):
    """I(t) = I_SS + dI_SS (1 - f tau_e/tau_i) exp(-t/tau_i) after a gate step at t = 0."""
    if not (tau_e > 0 and tau_i > 0):
        raise DomainError("time constants must be positive")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    pref = transient_prefactor(p.f_nonuniform, tau_e, tau_i)
    out = i_ss_on + i_ss_off_delta * pref * np.exp(-t / tau_i)
    return float(out) if out.ndim == 0 else out


def time_constants(p: OectParams, v_ds: float, electrolyte: ElectrolyteSpec) -> tuple[float, float]:
    """Electronic transit time L^2/(mu |V_DS|) and ionic RC time kappa l / sqrt(c)."""
    if v_ds == 0:
        raise DomainError("electronic transit time is undefined at V_DS = 0")
    tau_e = p.length**2 / (p.mobility * abs(v_ds))
    tau_i = p.kappa_ionic * p.gate_distance / math.sqrt(electrolyte.concentration)
    return tau_e, tau_i


def gate_step_response(p: OectParams, t, v_gs: float, v_ds: float, electrolyte: ElectrolyteSpec):
    """Drain current after stepping the gate from 0 to ``v_gs`` at t = 0."""
    tau_e, tau_i = time_constants(p, v_ds, electrolyte)
    i_on = steady_state_current(p, v_gs, v_ds)
    return transient_current(p, t, i_on, delta_steady_state(p, v_gs, v_ds), tau_e, tau_i)


def nernst_potential(e_f0: float, electrolyte: ElectrolyteSpec, activity_ratio: float) -> float:
    """Electro-chemical potential E_F0 + k_B T/(z e) ln(ratio), in eV."""
    if not activity_ratio > 0:
        raise DomainError("activity ratio must be positive")
    return e_f0 + K_B_EV * electrolyte.temperature / electrolyte.z * math.log(activity_ratio)


def turn_off_voltage(c: float, slope: float, v_ref: float, c_ref: float) -> float:
    """Turn-off voltage from a log-linear calibration: V_ref - slope log10(c / c_ref)."""
    if not (c > 0 and c_ref > 0):
        raise DomainError("concentrations must be positive")
    return v_ref - slope * math.log10(c / c_ref)


def concentration_from_turn_off(v_to: float, slope: float, v_ref: float, c_ref: float) -> float:
    """Inverse of :func:`turn_off_voltage`."""
    if slope == 0:
        raise DomainError("zero sensitivity cannot be inverted")
    return c_ref * 10.0 ** ((v_ref - v_to) / slope)
