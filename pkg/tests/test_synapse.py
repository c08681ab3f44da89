import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otsim.errors import DomainError
from otsim.synapse import (
    DIGIT_FIVE,
    HOURS_48,
    PAVLOV_EXPECTED,
    DecayCalibration,
    GrowthRule,
    PlasticityWindows,
    SynapseState,
    SynapticNetwork,
    conductance_curve,
    decay_network,
    digit_score,
    growth_step,
    long_term_decay,
    paired_pulse_ratio,
    parse_bitmap,
    pavlov_truth_table,
    run_pavlov_protocol,
    stdp_update,
    train_and_read_digits,
    train_digit,
)

RULE = GrowthRule()


def pair_net():
    return SynapticNetwork(("a", "b"), RULE)


# growth


def test_single_node_below_threshold_does_not_grow():
    net = growth_step(pair_net(), {"a": [(0.0, 3.0)]}, 100.0)
    assert not net.connected("a", "b")
    assert net.synapse("a", "b").conductance == 0.0


def test_synchronous_signals_grow():
    net = growth_step(pair_net(), {"a": [(0.0, 3.0)], "b": [(0.0, 3.0)]}, 100.0)
    s = net.synapse("a", "b")
    assert s.exists and s.conductance > RULE.g_seed


def test_asynchronous_signals_do_not_grow():
    sig = {"a": [(0.0, 3.0), (0.02, 3.0)], "b": [(0.01, 3.0), (0.03, 3.0)]}
    assert not growth_step(pair_net(), sig, 100.0).connected("a", "b")


def test_coincidence_window_edge():
    w = RULE.synchrony_window
    assert growth_step(pair_net(), {"a": [(0.0, 3.0)], "b": [(w, 3.0)]}, 1.0).connected("a", "b")
    assert not growth_step(pair_net(), {"a": [(0.0, 3.0)], "b": [(1.01 * w, 3.0)]}, 1.0).connected("a", "b")


def test_growth_step_leaves_input_untouched():
    net = pair_net()
    growth_step(net, {"a": [(0.0, 3.0)], "b": [(0.0, 3.0)]}, 10.0)
    assert net.synapses == {}


def test_growth_steps_compose_like_closed_form():
    sig = {"a": [(0.0, 3.0)], "b": [(0.0, 3.0)]}
    net = pair_net()
    for _ in range(10):
        net = growth_step(net, sig, 60.0)
    assert net.synapse("a", "b").conductance == pytest.approx(conductance_curve(600.0, RULE), rel=1e-12)


def test_growth_monotone_and_bounded():
    sig = {"a": [(0.0, 3.0)], "b": [(0.0, 3.0)]}
    net, prev = pair_net(), 0.0
    for _ in range(40):
        net = growth_step(net, sig, 50.0)
        g = net.synapse("a", "b").conductance
        assert prev <= g <= RULE.g_max
        prev = g


def test_growth_step_validation():
    with pytest.raises(DomainError):
        growth_step(pair_net(), {}, 0.0)
    with pytest.raises(DomainError):
        growth_step(pair_net(), {"zz": [(0.0, 5.0)]}, 1.0)


def test_jitter_seeded_and_bounded():
    rule = GrowthRule(jitter=0.3, seed=7)
    sig = {"a": [(0.0, 3.0)], "b": [(0.0, 3.0)], "c": [(0.0, 3.0)]}
    n1 = growth_step(SynapticNetwork(("a", "b", "c"), rule), sig, 300.0)
    n2 = growth_step(SynapticNetwork(("a", "b", "c"), rule), sig, 300.0)
    g1 = [n1.synapse(*p).conductance for p in n1.pairs()]
    assert g1 == [n2.synapse(*p).conductance for p in n2.pairs()]
    assert len(set(g1)) == 3
    lo = conductance_curve(300.0, rule, rate=0.7 * rule.s_curve_rate)
    hi = conductance_curve(300.0, rule, rate=1.3 * rule.s_curve_rate)
    assert all(lo <= g <= hi for g in g1)


def test_rule_validation():
    with pytest.raises(DomainError):
        GrowthRule(growth_threshold=0.0)
    with pytest.raises(DomainError):
        GrowthRule(g_seed=2e-6)
    with pytest.raises(DomainError):
        GrowthRule(jitter=1.0)


# conductance curve


def test_curve_limits():
    assert conductance_curve(0.0, RULE) == pytest.approx(RULE.g_seed, rel=1e-14)
    assert conductance_curve(1e6, RULE) == pytest.approx(RULE.g_max, rel=1e-14)


def test_curve_inflection_slope():
    r, gm, g0 = RULE.s_curve_rate, RULE.g_max, RULE.g_seed
    t_half = math.log(gm / g0 - 1.0) / r
    h = 1e-3 / r
    slope = (conductance_curve(t_half + h, RULE) - conductance_curve(t_half - h, RULE)) / (2 * h)
    assert slope == pytest.approx(r * gm / 4, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 5000.0))
def test_curve_satisfies_logistic_ode(t):
    r, gm = RULE.s_curve_rate, RULE.g_max
    h = 0.5
    g = conductance_curve(t + h, RULE)
    dg = (conductance_curve(t + 2 * h, RULE) - conductance_curve(t, RULE)) / (2 * h)
    assert dg == pytest.approx(r * g * (1 - g / gm), rel=1e-4, abs=1e-7 * r * gm)


def test_curve_rejects_negative_time():
    with pytest.raises(DomainError):
        conductance_curve(-1.0, RULE)


# decay


def test_decay_contrast_over_48h():
    strong = long_term_decay(SynapseState(1e-6, 1.0, True), HOURS_48)
    weak = long_term_decay(SynapseState(1e-6, 0.05, True), HOURS_48)
    assert strong.conductance / 1e-6 >= 0.98
    assert weak.conductance / 1e-6 == pytest.approx(0.5, abs=0.05)


def test_decay_rates_hand_values():
    c = DecayCalibration()
    assert c.k_strong == pytest.approx(-math.log(0.99) / 172800, rel=1e-12)
    assert c.k_weak == pytest.approx(5.01e-6, rel=2e-3)


def test_decay_identity_and_nonexistent():
    s = SynapseState(3e-7, 0.4, True)
    assert long_term_decay(s, 0.0) == s
    assert long_term_decay(SynapseState(), 1e5).conductance == 0.0
    with pytest.raises(DomainError):
        long_term_decay(s, -1.0)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1e7))
def test_decay_ordering(r1, r2, elapsed):
    lo, hi = sorted((r1, r2))
    g_lo = long_term_decay(SynapseState(1.0, lo, True), elapsed).conductance
    g_hi = long_term_decay(SynapseState(1.0, hi, True), elapsed).conductance
    assert g_hi >= g_lo >= 0.0


def test_decay_network_applies_to_all():
    net = SynapticNetwork(("a", "b", "c"), RULE)
    net.add_synapse("a", "b", 1e-6, 1.0)
    net.add_synapse("b", "c", 1e-6, 0.05)
    out = decay_network(net, HOURS_48)
    assert out.synapse("a", "b").conductance > out.synapse("b", "c").conductance
    assert net.synapse("a", "b").conductance == 1e-6


def test_state_invariants():
    with pytest.raises(DomainError):
        SynapseState(-1.0, 0.0, True)
    with pytest.raises(DomainError):
        SynapseState(1e-9, 0.0, False)
    with pytest.raises(DomainError):
        SynapseState(1e-9, 1.5, True)


# plasticity windows


def test_stdp_shape():
    w = PlasticityWindows()
    assert stdp_update(1e-9, w) == pytest.approx(w.a_plus, rel=1e-6)
    assert stdp_update(-1e-9, w) < 0
    assert abs(stdp_update(10.0, w)) < 1e-100 and abs(stdp_update(-10.0, w)) < 1e-100
    dts = np.linspace(0, 0.2, 50)
    assert np.all(np.diff(stdp_update(dts, w)) < 0)
    assert stdp_update(0.0, w) == max(stdp_update(np.linspace(-0.2, 0.2, 401), w))


def test_ppr_floor_and_monotone():
    w = PlasticityWindows()
    assert paired_pulse_ratio(0.5e-3, w) == 1.0
    assert paired_pulse_ratio(1e-3, w) == 1.0
    assert paired_pulse_ratio(0.1, w) > paired_pulse_ratio(10.0, w)
    r = paired_pulse_ratio(np.geomspace(1e-3, 100, 60), w)
    assert np.all(np.diff(r) <= 0)


def test_ppr_disabled_window():
    w = PlasticityWindows(std_amplitude=0.0)
    assert np.all(paired_pulse_ratio(np.geomspace(1e-4, 1e3, 30), w) == 1.0)


def test_ppr_validation():
    with pytest.raises(DomainError):
        paired_pulse_ratio(0.0)
    with pytest.raises(DomainError):
        PlasticityWindows(tau_plus=0.0)
    with pytest.raises(DomainError):
        PlasticityWindows(a_plus=float("inf"))


# scenarios


def test_pavlov_truth_table():
    assert pavlov_truth_table(run_pavlov_protocol()) == PAVLOV_EXPECTED


def test_pavlov_depends_on_synchrony_window():
    # exactly coincident pulses count however narrow the window
    res = pavlov_truth_table(run_pavlov_protocol(GrowthRule(synchrony_window=1e-9)))
    assert res == PAVLOV_EXPECTED
    # a window wide enough to cover the asynchronous offset links the bell early
    res = pavlov_truth_table(run_pavlov_protocol(GrowthRule(synchrony_window=1.0)))
    assert res["asynchronous"] == (True, True)


def test_parse_bitmap_forms():
    grid = "111\n100\n111\n001\n111\n"
    assert np.array_equal(parse_bitmap(grid), parse_bitmap(DIGIT_FIVE))
    assert np.array_equal(parse_bitmap([int(c) for c in DIGIT_FIVE]), parse_bitmap(DIGIT_FIVE))
    with pytest.raises(DomainError):
        parse_bitmap("0101")
    with pytest.raises(DomainError):
        parse_bitmap("11110011100111x")
    with pytest.raises(DomainError):
        parse_bitmap([2] * 15)


def test_training_grows_only_black_pixels():
    net = train_digit(DIGIT_FIVE)
    bits = parse_bitmap(DIGIT_FIVE)
    for k, b in enumerate(bits):
        assert net.connected(f"p{k:02d}", "out") == bool(b)


def test_digit_scores():
    inv = "".join("1" if c == "0" else "0" for c in DIGIT_FIVE)
    assert train_and_read_digits(DIGIT_FIVE, DIGIT_FIVE) == 1.0
    assert train_and_read_digits(DIGIT_FIVE, inv) == 0.0


def test_digit_score_strictly_decreasing_in_hamming_distance():
    net = train_digit(DIGIT_FIVE)
    base = parse_bitmap(DIGIT_FIVE)
    rng = np.random.default_rng(0)
    prev = digit_score(net, base, base)
    for d in range(1, 16):
        scores = set()
        for _ in range(5):
            q = base.copy()
            idx = rng.choice(15, d, replace=False)
            q[idx] ^= 1
            scores.add(digit_score(net, base, q))
        assert len(scores) == 1
        s = scores.pop()
        assert s < prev
        prev = s


def test_single_flips_all_below_trained():
    net = train_digit(DIGIT_FIVE)
    base = parse_bitmap(DIGIT_FIVE)
    top = digit_score(net, base, base)
    for k in range(15):
        q = base.copy()
        q[k] ^= 1
        assert digit_score(net, base, q) < top


def test_untrained_network_scores_zero():
    net = train_digit("000000000000000")
    assert digit_score(net, "000000000000000", "000000000000000") == 0.0
