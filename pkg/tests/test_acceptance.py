"""Acceptance suite: one printed PASS/FAIL line per criterion.

Every criterion is checked at its stated tolerance against an independent
oracle (closed form, dense grid or hand value).  Suite wall times are
accumulated and checked against the runtime budgets in the last test.
"""

import cmath
import math
import time
from collections import defaultdict

import numpy as np
import pytest

from otsim.cli import dispatch
from otsim.errors import ThermalRunawayError
from otsim.impedance import (
    CircuitModel,
    ImpedanceSpectrum,
    WarburgParams,
    circuit_impedance,
    diffusion_constant,
    extract_rw_star,
    fit_spectrum,
    warburg_impedance,
)
from otsim.oect import OectParams, transient_current, transient_regime, turn_off_voltage
from otsim.opbt import (
    OpbtThermalParams,
    PulseSpec,
    ndr_sign_changes,
    power_density,
    pulsed_steady_temperature,
    solve_steady_state,
    trace_current_controlled,
)
from otsim.reservoir.iris import IrisReservoirConfig, run_iris_seeds
from otsim.reservoir.maps import bifurcation_diagram, first_period_doubling, logistic_map
from otsim.reservoir.portrait import box_counting_dimension
from otsim.synapse import (
    DIGIT_FIVE,
    HOURS_48,
    PAVLOV_EXPECTED,
    SynapseState,
    digit_score,
    long_term_decay,
    parse_bitmap,
    pavlov_truth_table,
    run_pavlov_protocol,
    train_digit,
)
from otsim.tft import TftParams, TlmPoint, drain_current, tlm_extract, transconductance

BUDGET = {"tft": 5.0, "electrothermal": 30.0, "oect": 5.0, "impedance": 60.0, "reservoir": 300.0,
          "synapse": 10.0}
ELAPSED: dict[str, float] = defaultdict(float)


@pytest.fixture
def report(capsys):
    def emit(criterion: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPT {'PASS' if ok else 'FAIL'} | {criterion} | {detail}")
        assert ok, f"{criterion}: {detail}"

    return emit


class timed:
    def __init__(self, suite):
        self.suite = suite

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        ELAPSED[self.suite] += time.perf_counter() - self.t0


# ---------------------------------------------------------------- TFT

TFT = TftParams(mobility=1e-4, c_ins=1e-3, width=100e-6, length=10e-6, v_th=0.5, subthreshold_slope=0.1)


def test_tft_gm_vs_finite_difference(report):
    with timed("tft"):
        rng = np.random.default_rng(0)
        worst, n = 0.0, 0
        while n < 1000:
            vgs, vds = rng.uniform(-1.0, 4.0), rng.uniform(-4.0, 4.0)
            h = 1e-6
            # keep the stencil on one side of the saturation and subthreshold seams
            seams = [TFT.v_th, TFT.v_th + TFT.stitch_overdrive, TFT.v_th + abs(vds), TFT.v_th + vds]
            if min(abs(vgs - s) for s in seams) < 100 * h:
                continue
            fd = (drain_current(TFT, vgs + h, vds) - drain_current(TFT, vgs - h, vds)) / (2 * h)
            g = transconductance(TFT, vgs, vds)
            worst = max(worst, abs(g - fd) / max(abs(fd), 1e-300))
            n += 1
    report("TFT g_m vs finite differences (1e3 biases)", worst < 1e-6, f"max rel err {worst:.2e} < 1e-6")


def test_tft_tlm_round_trip(report):
    with timed("tft"):
        r_c_w, slope = 1.0, 2.5e5
        lengths = [2e-6, 5e-6, 10e-6, 20e-6, 50e-6]
        res = tlm_extract([TlmPoint(x, r_c_w + slope * x) for x in lengths])
        err = max(abs(res.r_c_w / r_c_w - 1), abs(res.channel_slope / slope - 1),
                  abs(res.transfer_length / (r_c_w / slope) - 1))
    report("TFT TLM round trip on noiseless data", err < 1e-12, f"max rel err {err:.1e} (exact to rounding)")


def test_tft_branch_continuity(report):
    with timed("tft"):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(1000):
            vov = rng.uniform(0.01, 5.0)
            vgs = TFT.v_th + vov
            below = drain_current(TFT, vgs, vov * (1 - 1e-15))
            at = drain_current(TFT, vgs, vov)
            above = drain_current(TFT, vgs, vov * (1 + 1e-15))
            worst = max(worst, abs(below - at) / at, abs(above - at) / at)
    report("TFT linear/saturation branch continuity", worst < 1e-12, f"max rel jump {worst:.1e} < 1e-12")


# ---------------------------------------------------------------- electrothermal

HOT = OpbtThermalParams(i_ref=1e-3, v_ref=1.0, alpha=2.5, theta_th=4000.0, i_off=1e-7, e_act_on=0.3)
AREA = 1e-8  # (100 um)^2


def test_electrothermal_s_ndr(report):
    with timed("electrothermal"):
        trace = trace_current_controlled(HOT, np.geomspace(1e-4, 5e-2, 200))
        changes = ndr_sign_changes(trace)
        peak = max(power_density(op, AREA) for op in trace) / 1e4
    ok = changes >= 1 and peak > 10.0
    report("Electrothermal S-shaped V(I), E_act = 300 meV, > 10 W/cm^2", ok,
           f"{changes} sign change(s) of dV/dI, peak {peak:.0f} W/cm^2")


def _grid_roots(p, v, t_max, n=10_000):
    k_b = 8.617333262e-5
    t = np.linspace(p.t_ambient, t_max, n)
    i = (p.i_ref * (v / p.v_ref) ** p.alpha * np.exp(-(p.e_act_on / k_b) * (1 / t - 1 / p.t_ambient))
         + p.i_off * np.exp(-(p.e_act_off / k_b) * (1 / t - 1 / p.t_ambient)))
    s = np.sign(p.t_ambient + p.theta_th * v * i - t)
    zeros = np.count_nonzero(s == 0)
    s = s[s != 0]
    return int(zeros + np.count_nonzero(s[1:] != s[:-1]))


def test_electrothermal_root_counts(report):
    with timed("electrothermal"):
        rng = np.random.default_rng(7)
        agree, histogram = 0, defaultdict(int)
        for _ in range(100):
            p = OpbtThermalParams(
                i_ref=10 ** rng.uniform(-4, -2), v_ref=1.0, alpha=rng.uniform(1.0, 4.0),
                theta_th=10 ** rng.uniform(2, 4.5), i_off=10 ** rng.uniform(-9, -5),
                e_act_on=rng.uniform(0.05, 0.6), e_act_off=rng.uniform(0.05, 0.6),
            )
            v = rng.uniform(0.1, 3.0)
            try:
                n = len(solve_steady_state(p, v))
            except ThermalRunawayError:
                n = 0
            agree += n == _grid_roots(p, v, 600.0)
            histogram[n] += 1
    report("Electrothermal root counts vs 1e4-point grid (100 draws)", agree == 100,
           f"{agree}/100 agree; root-count histogram {dict(sorted(histogram.items()))}")


def test_electrothermal_pulsed_dc_limit(report):
    with timed("electrothermal"):
        pulse = PulseSpec(pulse_width=1e-3, duty_cycle=1.0, thermal_capacitance=2.5e-7)
        worst = 0.0
        for v in (0.8, 1.0, 1.2):
            dc = solve_steady_state(HOT, v)[0].temperature
            worst = max(worst, abs(pulsed_steady_temperature(HOT, pulse, v) - dc))
    report("Electrothermal pulsed duty = 1 equals DC", worst < 1e-3, f"max |dT| {worst:.1e} K < 1e-3 K")


# ---------------------------------------------------------------- OECT

OECT = OectParams(mobility=1e-4, p0=1e26, t_osc=100e-9, width=100e-6, length=10e-6, c_d=1e-2)


def test_oect_prefactor_cancellation(report):
    with timed("oect"):
        t = np.linspace(0, 0.1, 200)
        worst = 0.0
        for f, tau_e, tau_i in [(0.5, 2e-3, 1e-3), (1.0, 1e-3, 1e-3), (0.25, 4e-2, 1e-2), (0.1, 10.0, 1.0)]:
            p = OectParams(**{**OECT.__dict__, "f_nonuniform": f})
            i = transient_current(p, t, 1e-6, 5e-6, tau_e, tau_i)
            worst = max(worst, float(np.max(np.abs(i - 1e-6))))
    report("OECT transient prefactor cancels at f tau_e/tau_i = 1", worst == 0.0,
           f"max |I - I_ss| = {worst:g} A (exact)")


def test_oect_regime_classification(report):
    with timed("oect"):
        rng = np.random.default_rng(3)
        t = np.linspace(0, 10, 200)
        agree = 0
        for _ in range(1000):
            f = rng.uniform(0, 1)
            tau_i = 10 ** rng.uniform(-4, 0)
            tau_e = tau_i * 10 ** rng.uniform(-2, 2)
            d_i = rng.uniform(-1e-5, 1e-5)
            p = OectParams(**{**OECT.__dict__, "f_nonuniform": f})
            i0 = transient_current(p, 0.0, 1e-6, d_i, tau_e, tau_i)
            # closed-form sign analysis: I(0) - I_ss = dI (1 - f tau_e/tau_i)
            expected = {1: "monotone", -1: "spike", 0: "flat"}[int(np.sign(1 - f * tau_e / tau_i))]
            observed = np.sign(i0 - 1e-6) * np.sign(d_i)
            classified = transient_regime(f, tau_e, tau_i)
            consistent = {"monotone": observed > 0, "spike": observed < 0, "flat": observed == 0}[classified]
            agree += classified == expected and consistent
    report("OECT spike/monotone classification (1e3 draws)", agree == 1000, f"{agree}/1000 match sign analysis")


def test_oect_turn_off_sensitivity(report):
    with timed("oect"):
        c = np.logspace(-6, 0, 7)
        v = np.array([turn_off_voltage(x, 0.1, 0.4, 1e-3) for x in c])
        slopes = -np.diff(v) / np.diff(np.log10(c))
        worst = float(np.max(np.abs(slopes - 0.1)))
    report("OECT turn-off sensitivity 100 mV/dec over 6 decades", worst < 1e-12,
           f"slopes {slopes.min() * 1e3:.6f}..{slopes.max() * 1e3:.6f} mV/dec")


# ---------------------------------------------------------------- impedance

W = WarburgParams(r_w=5e4, omega_d=0.1)
TRUTH = CircuitModel(r_s=50.0, r1=200.0, c1=1e-6, r2=1000.0, c2=1e-5, warburg=W)
OMEGA = np.geomspace(1e-4, 1e6, 100)
GUESS = CircuitModel(50.0 * 1.3, 200.0 / 1.3, 1e-6 * 1.3, 1000.0 * 1.3, 1e-5 / 1.3,
                     WarburgParams(5e4 / 1.3, 0.1 * 1.3))


def test_impedance_low_frequency_limit(report):
    with timed("impedance"):
        z = warburg_impedance(W, 1e-6 * W.omega_d)
        rel_direct = abs(z.real / (W.r_w / 3) - 1)
        rel_star = abs(extract_rw_star(TRUTH) / (W.r_w / 3) - 1)
    ok = rel_direct < 1e-3 and rel_star < 1e-3
    report("Impedance reflecting Warburg Re Z -> R_W/3", ok,
           f"rel err {rel_direct:.1e} at 1e-6 omega_D, R_W* rel err {rel_star:.1e} (< 1e-3)")


def test_impedance_high_frequency_phase(report):
    with timed("impedance"):
        phases = [math.degrees(cmath.phase(warburg_impedance(W, k * W.omega_d))) for k in (1e3, 1e4, 1e6, 1e9)]
        worst = max(abs(p + 45.0) for p in phases)
    report("Impedance high-frequency phase -45 deg", worst < 0.1, f"max |phase + 45| {worst:.1e} deg < 0.1")


def _fit_errors(model):
    w = model.warburg
    return abs(w.r_w / W.r_w - 1), abs(w.omega_d / W.omega_d - 1)


def test_impedance_fit_noiseless(report):
    with timed("impedance"):
        res = fit_spectrum(ImpedanceSpectrum.from_model(TRUTH, OMEGA), GUESS)
        worst = max(_fit_errors(res.model))
    report("Impedance fit round trip, noiseless", worst < 0.01, f"max rel err R_W, omega_D {worst:.1e} < 1%")


def test_impedance_fit_noise(report):
    with timed("impedance"):
        worst = 0.0
        clean = circuit_impedance(TRUTH, OMEGA)
        for seed in range(100):
            rng = np.random.default_rng(seed)
            noise = 1 + 0.01 * (rng.standard_normal(OMEGA.size) + 1j * rng.standard_normal(OMEGA.size))
            res = fit_spectrum(ImpedanceSpectrum(OMEGA, clean * noise), GUESS)
            worst = max(worst, *_fit_errors(res.model))
    report("Impedance fit with 1% noise (100 seeds)", worst < 0.05, f"worst rel err {worst:.2%} < 5%")


def test_impedance_diffusion_constant(report):
    with timed("impedance"):
        d = diffusion_constant(0.1, 100e-6)
    report("Impedance D from b = 100 um, omega_D = 0.1 rad/s", abs(d / 1e-9 - 1) < 1e-12,
           f"D = {d:.6e} m^2/s")


# ---------------------------------------------------------------- reservoir


def test_reservoir_period_doubling(report):
    with timed("reservoir"):
        gains = np.linspace(2.9, 3.1, 2001)
        diag = bifurcation_diagram(logistic_map, gains, 20000, 64)
        lam = first_period_doubling(gains, diag, tol=1e-3)
        oracle = 3.0  # |f'(y*)| = |2 - lambda| reaches 1 at the fixed point y* = 1 - 1/lambda
    report("Reservoir logistic first period doubling", abs(lam - oracle) <= 0.01,
           f"lambda = {lam:.4f} vs stability oracle {oracle:.2f} (+-0.01)")


def test_reservoir_box_counting(report):
    with timed("reservoir"):
        rng = np.random.default_rng(1)
        s = rng.uniform(0, 1, 100000)
        d_seg = box_counting_dimension(np.column_stack([s, 0.5 * s]))
        d_sq = box_counting_dimension(rng.uniform(0, 1, (100000, 2)))
    ok = abs(d_seg - 1) <= 0.05 and abs(d_sq - 2) <= 0.05
    report("Reservoir box-counting dimension, segment and square", ok,
           f"segment {d_seg:.3f} (1 +- 0.05), square {d_sq:.3f} (2 +- 0.05)")


def test_reservoir_iris(report):
    with timed("reservoir"):
        acc = [r.accuracy for r in run_iris_seeds(IrisReservoirConfig(), seeds=range(10))]
        mean = float(np.mean(acc))
    report("Reservoir Iris mean test accuracy (10 seeds, 120/30)", mean >= 0.9,
           f"mean {mean:.3f} (min {min(acc):.3f}) >= 0.90; hardware reference 0.97")


def test_reservoir_gain_zero_control(report):
    with timed("reservoir"):
        acc = [r.accuracy for r in run_iris_seeds(IrisReservoirConfig(gain=0.0), seeds=range(10))]
        mean = float(np.mean(acc))
    report("Reservoir gain-0 control near chance", abs(mean - 1 / 3) <= 0.05, f"mean {mean:.3f} (1/3 +- 0.05)")


# ---------------------------------------------------------------- synapse


def test_synapse_pavlov(report):
    with timed("synapse"):
        table = pavlov_truth_table(run_pavlov_protocol())
        hits = sum(table.get(k) == v for k, v in PAVLOV_EXPECTED.items())
    report("Synapse Pavlov truth table", hits == 4, f"{hits}/4 phases match")


def test_synapse_digits(report):
    with timed("synapse"):
        net = train_digit(DIGIT_FIVE)
        base = parse_bitmap(DIGIT_FIVE)
        top = digit_score(net, base, base)
        flips = []
        for k in range(15):
            q = base.copy()
            q[k] ^= 1
            flips.append(digit_score(net, base, q))
        inverse = digit_score(net, base, 1 - base)
        by_distance = [digit_score(net, base, np.where(np.arange(15) < d, 1 - base, base)) for d in range(16)]
    ok = all(s < top for s in flips) and inverse == 0.0 and all(np.diff(by_distance) < 0)
    report("Synapse digit score decreasing, inverse reads zero", ok,
           f"trained {top:.3f}, single flips max {max(flips):.3f}, inverse {inverse:.3f}")


def test_synapse_decay_contrast(report):
    with timed("synapse"):
        strong = long_term_decay(SynapseState(1.0, 1.0, True), HOURS_48).conductance
        weak = long_term_decay(SynapseState(1.0, 0.05, True), HOURS_48).conductance
    ok = strong >= 0.98 and abs(weak - 0.5) <= 0.05
    report("Synapse 48 h decay contrast", ok, f"reinforced {strong:.1%} (>= 98%), weak {weak:.1%} (50 +- 5)")


# ---------------------------------------------------------------- harness


def test_harness_byte_identical(report, tmp_path):
    runs = [["synapse", "digits"], ["impedance", "simulate"], ["tft", "iv"], ["reservoir", "logistic"]]
    cfg = tmp_path / "p.cfg"
    cfg.write_text("[sweep]\nnoise = 0.01\n")
    same, total = 0, 0
    for argv in runs:
        outs = []
        for rep in ("a", "b"):
            out = tmp_path / f"{argv[0]}-{argv[1]}-{rep}"
            assert dispatch(argv + ["--seed", "42", "--config", str(cfg), "--out", str(out)]) == 0
            outs.append(sorted(p for p in out.iterdir() if p.name != "manifest.json"))
        for x, y in zip(*outs):
            total += 1
            same += x.read_bytes() == y.read_bytes()
    report("Harness identical seeded runs are byte-identical", same == total and total > 0,
           f"{same}/{total} data files identical")


def test_runtime_budgets(report):
    over = {k: v for k, v in ELAPSED.items() if v >= BUDGET[k]}
    detail = ", ".join(f"{k} {ELAPSED[k]:.1f}/{BUDGET[k]:.0f} s" for k in BUDGET if k in ELAPSED)
    report("Suite runtimes within budget", not over and len(ELAPSED) == len(BUDGET), detail)
