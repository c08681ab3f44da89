"""Phenomenological model of field-directed polymerized (grown) synapses.

Synapses appear only where the superposed potential of two nodes exceeds a
growth threshold within a short synchrony window.  Once created, the
conductance follows a self-limiting logistic curve; it decays over hours at a
rate set by how strongly the fibre was reinforced.  Spike-timing and
paired-pulse windows are simple exponential shapes.  All numbers are
configurable defaults chosen to reproduce the qualitative anchors: a 3 V
pulse alone does not grow a fibre while two coincident ones do, a reinforced
fibre keeps >= 98 % of its conductance over 48 h while a weak one loses about
half, and paired pulses closer than 1 ms are not depressed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError

HOURS_48 = 48 * 3600.0


@dataclass(frozen=True)
class GrowthRule:
    growth_threshold: float = 4.0  # V
    synchrony_window: float = 1e-3  # s
    s_curve_rate: float = 1e-2  # 1/s
    g_max: float = 1e-6  # S
    g_seed: float = 1e-9  # S, conductance at creation
    jitter: float = 0.0  # relative spread of s_curve_rate per synapse
    seed: int = 0

    def __post_init__(self):
        for name in ("growth_threshold", "synchrony_window", "s_curve_rate", "g_max", "g_seed"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.g_seed >= self.g_max:
            raise DomainError("g_seed must be below g_max")
        if not 0 <= self.jitter < 1:
            raise DomainError("jitter must lie in [0, 1)")


@dataclass(frozen=True)
class DecayCalibration:
    """Long-term decay rate k(r) = k_weak^(1 - r) * k_strong^r.

    The two rates are fixed by retention anchors over ``horizon`` seconds:
    ``retention_strong`` at r = 1 and ``retention_weak`` at r = ``r_weak``.
    """

    retention_strong: float = 0.99
    retention_weak: float = 0.5
    r_weak: float = 0.05
    horizon: float = HOURS_48

    def __post_init__(self):
        if not (0 < self.retention_weak < 1 and 0 < self.retention_strong < 1):
            raise DomainError("retentions must lie in (0, 1)")
        if not 0 <= self.r_weak < 1:
            raise DomainError("r_weak must lie in [0, 1)")
        if not self.horizon > 0:
            raise DomainError("horizon must be positive")

    @property
    def k_strong(self) -> float:
        return -math.log(self.retention_strong) / self.horizon

    @property
    def k_weak(self) -> float:
        k_at = -math.log(self.retention_weak) / self.horizon
        return math.exp((math.log(k_at) - self.r_weak * math.log(self.k_strong)) / (1 - self.r_weak))

    def rate(self, reinforcement: float) -> float:
        r = float(np.clip(reinforcement, 0.0, 1.0))
        return self.k_weak ** (1 - r) * self.k_strong**r


DEFAULT_DECAY = DecayCalibration()


@dataclass(frozen=True)
class SynapseState:
    conductance: float = 0.0
    reinforcement: float = 0.0
    exists: bool = False
    age: float = 0.0  # s since creation
    calibration: DecayCalibration = field(default=DEFAULT_DECAY, repr=False)

    def __post_init__(self):
        if self.conductance < 0:
            raise DomainError("conductance must be non-negative")
        if not self.exists and self.conductance != 0:
            raise DomainError("a synapse that does not exist carries no conductance")
        if not 0 <= self.reinforcement <= 1:
            raise DomainError("reinforcement must lie in [0, 1]")

    @property
    def decay_rate(self) -> float:
        return self.calibration.rate(self.reinforcement)


@dataclass(frozen=True)
class PlasticityWindows:
    a_plus: float = 1.0
    tau_plus: float = 20e-3
    a_minus: float = 0.5
    tau_minus: float = 20e-3
    std_floor: float = 1e-3  # s, no depression at or below this interval
    std_amplitude: float = 0.5
    std_tau: float = 1.0  # s

    def __post_init__(self):
        for name in ("tau_plus", "tau_minus", "std_tau"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.std_floor < 0:
            raise DomainError("std_floor must be non-negative")
        for name in ("a_plus", "a_minus", "std_amplitude"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


def conductance_curve(t, rule: GrowthRule, g0: float | None = None, rate: float | None = None):
    """Closed-form logistic G(t) = g_max / (1 + (g_max/g0 - 1) exp(-r t))."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time since creation must be non-negative")
    g0 = rule.g_seed if g0 is None else g0
    r = rule.s_curve_rate if rate is None else rate
    if not 0 < g0 <= rule.g_max:
        raise DomainError("initial conductance must lie in (0, g_max]")
    out = rule.g_max / (1.0 + (rule.g_max / g0 - 1.0) * np.exp(-r * t))
    return float(out) if out.ndim == 0 else out


def long_term_decay(s: SynapseState, elapsed: float) -> SynapseState:
    """Exponential loss of conductance at the reinforcement-dependent rate."""
    if elapsed < 0:
        raise DomainError("elapsed time must be non-negative")
    if elapsed == 0 or not s.exists:
        return s
    return replace(s, conductance=s.conductance * math.exp(-s.decay_rate * elapsed))


def stdp_update(delta_t, w: PlasticityWindows = PlasticityWindows()):
    """Relative weight change for delta_t = t_post - t_pre (s).

    Potentiation a_plus exp(-dt/tau_plus) for dt >= 0, depression
    -a_minus exp(dt/tau_minus) for dt < 0.
    """
    dt = np.asarray(delta_t, dtype=float)
    pos = w.a_plus * np.exp(-np.abs(dt) / w.tau_plus)
    neg = -w.a_minus * np.exp(-np.abs(dt) / w.tau_minus)
    out = np.where(dt >= 0, pos, neg)
    return float(out) if out.ndim == 0 else out


def paired_pulse_ratio(delta_t, w: PlasticityWindows = PlasticityWindows()):
    """Second-to-first response ratio for two pulses delta_t apart."""
    dt = np.asarray(delta_t, dtype=float)
    if np.any(dt <= 0):
        raise DomainError("pulse interval must be positive")
    depth = w.std_amplitude * (1.0 - np.exp(-np.clip(dt - w.std_floor, 0, None) / w.std_tau))
    out = np.where(dt <= w.std_floor, 1.0, 1.0 - depth)
    return float(out) if out.ndim == 0 else out


# ----------------------------------------------------------------------------
# networks


Pulse = tuple[float, float]  # (time s, amplitude V)


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass
class SynapticNetwork:
    nodes: tuple[str, ...]
    rule: GrowthRule = field(default_factory=GrowthRule)
    synapses: dict[tuple[str, str], SynapseState] = field(default_factory=dict)
    candidates: set[tuple[str, str]] | None = None  # None: every pair may grow

    def __post_init__(self):
        self.nodes = tuple(self.nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise DomainError("node names must be unique")
        if self.candidates is not None:
            self.candidates = {_key(*p) for p in self.candidates}
        self._rates: dict[tuple[str, str], float] = {}

    def pairs(self) -> list[tuple[str, str]]:
        if self.candidates is not None:
            return sorted(self.candidates)
        n = self.nodes
        return [_key(n[i], n[j]) for i in range(len(n)) for j in range(i + 1, len(n))]

    def synapse(self, a: str, b: str) -> SynapseState:
        return self.synapses.get(_key(a, b), SynapseState())

    def connected(self, a: str, b: str) -> bool:
        return self.synapse(a, b).exists

    def transmission(self, a: str, b: str) -> float:
        """Fraction of a node potential conducted to the partner, G / g_max."""
        s = self.synapse(a, b)
        return s.conductance / self.rule.g_max if s.exists else 0.0

    def add_synapse(self, a: str, b: str, conductance: float, reinforcement: float | None = None) -> None:
        r = conductance / self.rule.g_max if reinforcement is None else reinforcement
        self.synapses[_key(a, b)] = SynapseState(conductance, min(r, 1.0), True)

    def growth_rate(self, key: tuple[str, str]) -> float:
        if self.rule.jitter == 0:
            return self.rule.s_curve_rate
        if key not in self._rates:
            # seeded per synapse so results do not depend on evaluation order
            seed = [self.rule.seed, *map(ord, key[0]), 0, *map(ord, key[1])]
            z = np.random.default_rng(seed).uniform(-1.0, 1.0)
            self._rates[key] = self.rule.s_curve_rate * (1.0 + self.rule.jitter * z)
        return self._rates[key]

    def effective_potentials(self, signals: Mapping[str, Sequence[Pulse]]) -> dict[str, list[Pulse]]:
        """Node pulses plus pulses conducted one hop through existing synapses."""
        out = {n: [tuple(p) for p in signals.get(n, ())] for n in self.nodes}
        for (a, b), s in self.synapses.items():
            if not s.exists:
                continue
            k = s.conductance / self.rule.g_max
            out[b].extend((t, k * v) for t, v in signals.get(a, ()))
            out[a].extend((t, k * v) for t, v in signals.get(b, ()))
        return out

    def coincidence(self, a: str, b: str, pot: Mapping[str, Sequence[Pulse]]) -> float:
        """Largest superposed amplitude of the two nodes within the synchrony window."""
        best = 0.0
        win = self.rule.synchrony_window
        pa, pb = pot.get(a, ()), pot.get(b, ())
        for ta, va in pa:
            best = max(best, va)
            for tb, vb in pb:
                if abs(ta - tb) <= win:
                    best = max(best, va + vb)
        for _, vb in pb:
            best = max(best, vb)
        return best


def growth_step(net: SynapticNetwork, signals: Mapping[str, Sequence[Pulse]], dt: float) -> SynapticNetwork:
    """Advance synaptogenesis by ``dt`` seconds of repeated stimulation with ``signals``.

    A pair whose superposed potential exceeds the growth threshold creates a
    synapse (at g_seed) if needed and moves it along the logistic curve by dt.
    Returns a new network; the input is left untouched.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    for n in signals:
        if n not in net.nodes:
            raise DomainError(f"unknown node {n!r}")
    pot = net.effective_potentials(signals)
    new = SynapticNetwork(net.nodes, net.rule, dict(net.synapses), None if net.candidates is None else set(net.candidates))
    new._rates = dict(net._rates)
    for a, b in net.pairs():
        if net.coincidence(a, b, pot) <= net.rule.growth_threshold:
            continue
        s = net.synapse(a, b)
        g0 = s.conductance if s.exists and s.conductance > 0 else net.rule.g_seed
        g = conductance_curve(dt, net.rule, g0=g0, rate=new.growth_rate((a, b)))
        new.synapses[(a, b)] = SynapseState(g, g / net.rule.g_max, True, s.age + dt, s.calibration)
    return new


def decay_network(net: SynapticNetwork, elapsed: float) -> SynapticNetwork:
    new = SynapticNetwork(net.nodes, net.rule, {k: long_term_decay(s, elapsed) for k, s in net.synapses.items()},
                          None if net.candidates is None else set(net.candidates))
    new._rates = dict(net._rates)
    return new


# ----------------------------------------------------------------------------
# Pavlovian conditioning


@dataclass(frozen=True)
class PavlovResult:
    phase: str
    link_present: bool
    output_activated: bool


PAVLOV_EXPECTED = {
    "initial": (False, False),
    "asynchronous": (False, False),
    "synchronous": (True, True),
    "conditioned": (True, True),
}


def run_pavlov_protocol(
    rule: GrowthRule | None = None,
    amplitude: float = 3.0,
    training_time: float = 1800.0,
    activation_threshold: float = 1.5,
    async_offset: float = 0.5,
) -> list[PavlovResult]:
    """Four-phase conditioning: initial, asynchronous pairing, synchronous pairing, bell alone.

    Food drives salivation through an innate synapse.  Each phase reports
    whether a bell-salivation synapse exists and whether ringing the bell alone
    raises the salivation node above ``activation_threshold``.
    """
    rule = rule or GrowthRule()
    net = SynapticNetwork(("bell", "food", "salivation"), rule, candidates={("bell", "salivation")})
    net.add_synapse("food", "salivation", rule.g_max, 1.0)

    def probe(n: SynapticNetwork, phase: str) -> PavlovResult:
        pot = n.effective_potentials({"bell": [(0.0, amplitude)]})
        v = max((p[1] for p in pot["salivation"]), default=0.0)
        return PavlovResult(phase, n.connected("bell", "salivation"), v > activation_threshold)

    out = [probe(net, "initial")]
    net = growth_step(net, {"bell": [(0.0, amplitude)], "food": [(async_offset, amplitude)]}, training_time)
    out.append(probe(net, "asynchronous"))
    net = growth_step(net, {"bell": [(0.0, amplitude)], "food": [(0.0, amplitude)]}, training_time)
    out.append(probe(net, "synchronous"))
    out.append(probe(net, "conditioned"))
    return out


def pavlov_truth_table(results: Iterable[PavlovResult]) -> dict[str, tuple[bool, bool]]:
    return {r.phase: (r.link_present, r.output_activated) for r in results}


# ----------------------------------------------------------------------------
# 15-pixel digit recognition

DIGIT_FIVE = "111100111001111"  # 3 x 5, row major


def parse_bitmap(bitmap: str | Sequence[int]) -> np.ndarray:
    """15-pixel bitmap from a '01' string, a 3x5 text grid, or a sequence of 0/1."""
    if isinstance(bitmap, str):
        s = "".join(ch for ch in bitmap if not ch.isspace())
        if set(s) - {"0", "1"}:
            raise DomainError("bitmap strings may contain only 0 and 1")
        bits = np.array([int(c) for c in s])
    else:
        bits = np.asarray(bitmap, dtype=int)
        if np.any((bits != 0) & (bits != 1)):
            raise DomainError("bitmap entries must be 0 or 1")
    if bits.shape != (15,):
        raise DomainError(f"bitmap must have 15 pixels, got {bits.size}")
    return bits


@dataclass(frozen=True)
class DigitReadout:
    black_voltage: float = 5.0
    void_voltage: float = 2.0
    training_time: float = 1800.0
    depression_per_mismatch: float = 1.0 / 15.0
    read_voltage: float = 0.1


def train_digit(pattern, rule: GrowthRule | None = None, cfg: DigitReadout = DigitReadout()) -> SynapticNetwork:
    """Grow one synapse per black pixel between pixel node k and the output node."""
    rule = rule or GrowthRule()
    bits = parse_bitmap(pattern)
    names = tuple(f"p{k:02d}" for k in range(15)) + ("out",)
    net = SynapticNetwork(names, rule, candidates={(f"p{k:02d}", "out") for k in range(15)})
    signals = {f"p{k:02d}": [(0.0, cfg.black_voltage if b else cfg.void_voltage)] for k, b in enumerate(bits)}
    return growth_step(net, signals, cfg.training_time)


def digit_score(net: SynapticNetwork, trained, query, cfg: DigitReadout = DigitReadout()) -> float:
    """Normalized read current through the trained synapses.

    Every query pixel that differs from the trained pattern adds one unit of
    short-term depression to the output; the current is scaled by
    max(0, 1 - mismatches * depression_per_mismatch).
    """
    t = parse_bitmap(trained)
    q = parse_bitmap(query)
    g = np.array([net.synapse(f"p{k:02d}", "out").conductance for k in range(15)])
    i_max = float(np.sum(g * cfg.read_voltage))
    if i_max == 0:
        return 0.0
    mismatches = int(np.count_nonzero(t != q))
    depression = max(0.0, 1.0 - mismatches * cfg.depression_per_mismatch)
    return i_max * depression / i_max


def train_and_read_digits(pattern_train, pattern_query, rule: GrowthRule | None = None,
                          cfg: DigitReadout = DigitReadout()) -> float:
    net = train_digit(pattern_train, rule, cfg)
    return digit_score(net, pattern_train, pattern_query, cfg)
