import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otsim.errors import DegenerateInputError, DomainError
from otsim.tft import (
    TftParams,
    TlmPoint,
    above_threshold_current,
    above_threshold_transconductance,
    differential_gain,
    drain_current,
    thermal_slope_limit,
    tlm_extract,
    transconductance,
    transition_frequency,
)

# 1 cm^2/Vs, 100 nF/cm^2, W/L = 10
REF = TftParams(mobility=1e-4, c_ins=1e-3, width=100e-6, length=10e-6, v_th=0.0)


def test_threshold_boundary_is_zero():
    assert above_threshold_current(REF, 0.0, 1.0) == 0.0
    assert above_threshold_transconductance(REF, 0.0, 1.0) == 0.0


def test_saturation_hand_value():
    assert drain_current(REF, 2.0, 2.0) == pytest.approx(2.0e-6, rel=1e-12)


def test_linear_hand_value():
    assert drain_current(REF, 2.0, 0.1) == pytest.approx(1.95e-7, rel=1e-12)


def test_gm_saturation_hand_value():
    assert transconductance(REF, 2.0, 2.0) == pytest.approx(2.0e-6, rel=1e-12)


def _fd_gm(p, vgs, vds, h=1e-5):
    return (drain_current(p, vgs + h, vds) - drain_current(p, vgs - h, vds)) / (2 * h)


@pytest.mark.parametrize("vgs,vds", [(2.0, 2.5), (3.0, 0.5), (-0.2, 1.0), (1.0, -0.4)])
def test_gm_matches_finite_difference(vgs, vds):
    assert transconductance(REF, vgs, vds) == pytest.approx(_fd_gm(REF, vgs, vds), rel=1e-6)


def test_p_type_mirrors_n_type():
    p = TftParams(mobility=1e-4, c_ins=1e-3, width=100e-6, length=10e-6, v_th=-0.5, polarity="p")
    n = TftParams(mobility=1e-4, c_ins=1e-3, width=100e-6, length=10e-6, v_th=0.5, polarity="n")
    for vgs, vds in [(-2.0, -1.0), (-1.0, -3.0), (-0.2, -1.0), (-2.0, 0.5)]:
        assert drain_current(p, vgs, vds) == pytest.approx(-drain_current(n, -vgs, -vds), rel=1e-14)
        assert transconductance(p, vgs, vds) == pytest.approx(transconductance(n, -vgs, -vds), rel=1e-14)
    assert drain_current(p, -3.0, -3.0) < 0


def test_reverse_drain_bias_antisymmetric():
    # swapping source and drain: I(Vgs, -Vds) = -I(Vgs - Vds... ) with the gate re-referenced
    i_fwd = drain_current(REF, 2.0, 0.5)
    i_rev = drain_current(REF, 2.0 - 0.5, -0.5)
    assert i_rev == pytest.approx(-i_fwd, rel=1e-14)


def test_subthreshold_decade_per_slope():
    p = TftParams(mobility=1e-4, c_ins=1e-3, width=100e-6, length=10e-6, v_th=1.0, subthreshold_slope=0.2)
    i1 = drain_current(p, 0.5, 2.0)
    i2 = drain_current(p, 0.3, 2.0)
    assert math.log10(i1) - math.log10(i2) == pytest.approx(1.0, abs=1e-12)


def test_subthreshold_slope_below_thermal_limit_rejected():
    with pytest.raises(DomainError):
        TftParams(mobility=1e-4, c_ins=1e-3, width=1e-4, length=1e-5, subthreshold_slope=0.05)
    assert thermal_slope_limit(293.15) == pytest.approx(0.05817, rel=1e-3)


@pytest.mark.parametrize("field", ["mobility", "c_ins", "width", "length"])
def test_nonpositive_params_rejected(field):
    kwargs = dict(mobility=1e-4, c_ins=1e-3, width=1e-4, length=1e-5)
    kwargs[field] = 0.0
    with pytest.raises(DomainError):
        TftParams(**kwargs)


params_st = st.builds(
    TftParams,
    mobility=st.floats(1e-6, 1e-2),
    c_ins=st.floats(1e-5, 1e-2),
    width=st.floats(1e-6, 1e-3),
    length=st.floats(1e-7, 1e-4),
    v_th=st.floats(-2.0, 2.0),
    subthreshold_slope=st.floats(0.06, 1.0),
)


@settings(max_examples=200, deadline=None)
@given(p=params_st, vov=st.floats(0.01, 20.0))
def test_branch_continuity(p, vov):
    vgs = p.v_th + vov
    lin = p.beta * (vov * vov - 0.5 * vov * vov)
    sat = 0.5 * p.beta * vov * vov
    i = drain_current(p, vgs, vov)
    assert abs(lin - sat) <= 1e-12 * sat
    assert abs(i - sat) <= 1e-12 * sat
    # approaching from either side of the boundary
    below = drain_current(p, vgs, vov * (1 - 1e-13))
    above = drain_current(p, vgs, vov * (1 + 1e-13))
    assert abs(below - above) <= 1e-12 * sat


@settings(max_examples=200, deadline=None)
@given(p=params_st, vds=st.floats(0.0, 10.0))
def test_subthreshold_stitch_continuous(p, vds):
    eps = p.stitch_overdrive
    at = drain_current(p, p.v_th + eps, vds)
    just_below = drain_current(p, p.v_th + eps * (1 - 1e-9), vds)
    assert just_below == pytest.approx(at, rel=1e-8, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(p=params_st, vov1=st.floats(0.01, 5.0), dv=st.floats(0.01, 5.0))
def test_saturation_monotone_in_overdrive(p, vov1, dv):
    vds = 100.0
    assert drain_current(p, p.v_th + vov1 + dv, vds) > drain_current(p, p.v_th + vov1, vds)


def test_transition_frequency_hand_value():
    p = TftParams(mobility=1e-4, c_ins=1e-3, width=20e-6, length=5e-6)
    assert transition_frequency(p, 2e-6) == pytest.approx(3.1831e6, rel=1e-4)
    assert transition_frequency(p, 4e-6) == pytest.approx(2 * transition_frequency(p, 2e-6), rel=1e-15)


def test_transition_frequency_decreases_with_overlap():
    vals = [
        transition_frequency(TftParams(mobility=1e-4, c_ins=1e-3, width=20e-6, length=5e-6, overlap=lov), 2e-6)
        for lov in [0.0, 1e-6, 1e-5, 1e-3, 1.0]
    ]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-5 * vals[0]


def test_gain_unity_at_transition_frequency():
    p = TftParams(mobility=1e-4, c_ins=1e-3, width=20e-6, length=5e-6, overlap=2e-6)
    gm = 3e-6
    f_t = transition_frequency(p, gm)
    c_tot = p.c_ins * p.width * (p.length + 2 * p.overlap)
    assert differential_gain(gm, f_t, c_tot) == pytest.approx(1.0, rel=1e-14)
    assert differential_gain(gm, f_t / 2, c_tot) == pytest.approx(2.0, rel=1e-14)


def test_gain_hand_value():
    # 1 uS at 1 MHz into 1 pF
    assert differential_gain(1e-6, 1e6, 1e-12) == pytest.approx(0.159155, rel=1e-5)
    assert differential_gain(1e-3, 1e6, 1e-12) == pytest.approx(159.155, rel=1e-5)


@pytest.mark.parametrize("f,c", [(0.0, 1e-12), (-1.0, 1e-12), (1e6, 0.0)])
def test_gain_domain_errors(f, c):
    with pytest.raises(DomainError):
        differential_gain(1e-6, f, c)


def test_tlm_round_trip_exact():
    r_c_w = 100.0 * 1e-2  # 100 Ohm cm in Ohm m
    slope = 2.5e5  # Ohm m per m
    lengths = np.array([2e-6, 5e-6, 10e-6, 20e-6, 50e-6])
    pts = [TlmPoint(l, r_c_w + slope * l) for l in lengths]
    res = tlm_extract(pts)
    assert res.r_c_w == pytest.approx(r_c_w, rel=1e-9)
    assert res.channel_slope == pytest.approx(slope, rel=1e-9)
    assert res.transfer_length == pytest.approx(r_c_w / slope, rel=1e-9)
    assert res.physical


def test_tlm_zero_contact_resistance():
    pts = [TlmPoint(l, 3e5 * l) for l in (1e-6, 4e-6, 9e-6)]
    res = tlm_extract(pts)
    assert res.transfer_length == pytest.approx(0.0, abs=1e-15)


def test_tlm_degenerate():
    with pytest.raises(DegenerateInputError):
        tlm_extract([TlmPoint(5e-6, 10.0), TlmPoint(5e-6, 12.0)])


def test_tlm_negative_slope_flagged():
    res = tlm_extract([TlmPoint(1e-6, 10.0), TlmPoint(5e-6, 8.0)])
    assert not res.physical
