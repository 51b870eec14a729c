import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrqubit import DomainError
from mrqubit.hamiltonian import PhysicsConfig
from mrqubit.relaxation import (
    CpmgSequence,
    computation_window,
    echo_count,
    relax,
    signal_equation,
    simulate_cpmg,
)
from mrqubit.spin import BlochVector
from oracles import cpmg_fixed_step

# mpmath, 40 digits: exp(-2) * (1 - exp(-1))
SIGNAL_4S = 0.08554821486874874891
TWO_PI_50 = 2 * math.pi * 50


def test_signal_equation_at_zero():
    assert signal_equation(1.0, 0.0, 3.0, 1.0) == 0.0


def test_signal_equation_far_tail():
    assert signal_equation(1.0, 1e4, 4.0, 2.0) == pytest.approx(0.0, abs=1e-300)
    assert signal_equation(1.0, math.inf, 4.0, 2.0) == 0.0


def test_signal_equation_reference_point():
    assert signal_equation(1.0, 4.0, 4.0, 2.0) == pytest.approx(SIGNAL_4S, abs=1e-15)


def test_signal_equation_negative_time():
    with pytest.raises(DomainError):
        signal_equation(1.0, -0.1, 4.0, 2.0)


@given(st.floats(0, 1e3), st.floats(0.01, 10), st.floats(0.01, 10))
def test_signal_nonnegative(t, t1, t2):
    assert signal_equation(1.0, t, t1, t2) >= 0.0


def test_relax_identity_at_zero(water):
    m = BlochVector(0.3, -0.2, 0.1)
    assert relax(m, 0.0, water) == m


def test_relax_one_t2_with_equal_times():
    cfg = PhysicsConfig(t1=1.5, t2=1.5)
    m = relax(BlochVector(1.0, 0.0, 0.0), 1.5, cfg)
    assert m.as_tuple() == pytest.approx((0.36787944117144233, 0.0, 0.6321205588285577), abs=1e-15)


@given(st.floats(0, 1e4))
def test_equilibrium_is_fixed(t):
    cfg = PhysicsConfig(t1=4.0, t2=2.0)
    assert relax(BlochVector(0.0, 0.0, 1.0), t, cfg) == BlochVector(0.0, 0.0, 1.0)


def test_relax_negative_duration(water):
    with pytest.raises(DomainError):
        relax(BlochVector(0, 0, 1), -1.0, water)


def test_window_and_count():
    assert computation_window(4.0) == 20.0
    assert computation_window(3.5) == 17.5
    assert computation_window(1.0, factor=1) == 1.0
    assert echo_count(20.0, 0.02) == 1000
    assert echo_count(1.0, 1.0) == 1
    assert echo_count(19.99, 0.02) == 999


def test_sequence_schedule():
    seq = CpmgSequence(te=0.02, n_echoes=3)
    assert seq.refocus_times() == pytest.approx([0.01, 0.03, 0.05])
    assert seq.echo_times() == pytest.approx([0.02, 0.04, 0.06])
    with pytest.raises(DomainError):
        CpmgSequence(te=0.0, n_echoes=3)
    with pytest.raises(DomainError):
        CpmgSequence(te=0.02, n_echoes=0)


def test_refocusing_without_relaxation(no_relax):
    seq = CpmgSequence(te=0.02, n_echoes=10, off_resonance=TWO_PI_50)
    train = simulate_cpmg(seq, no_relax)
    assert all(abs(a - 1) <= 1e-9 for a in train.amplitudes)


def test_t2_envelope_first_echoes(water):
    train = simulate_cpmg(CpmgSequence(te=0.02, n_echoes=2), water)
    assert train.amplitudes[0] == pytest.approx(math.exp(-0.01), abs=1e-9)
    assert train.amplitudes[1] == pytest.approx(math.exp(-0.02), abs=1e-9)


def test_thousand_echo_train_timing(water):
    train = simulate_cpmg(CpmgSequence(te=0.02, n_echoes=1000), water)
    assert len(train) == 1000
    assert train.entries[-1].time == pytest.approx(20.0, abs=1e-12)
    times = train.times
    assert all(b > a for a, b in zip(times, times[1:]))
    amps = train.amplitudes
    assert all(b <= a for a, b in zip(amps, amps[1:]))


@settings(max_examples=25, deadline=None)
@given(st.floats(-2e3, 2e3), st.sampled_from(["x", "y"]))
def test_refocusing_any_offset_any_transverse_axis(w, axis):
    cfg = PhysicsConfig(t1=math.inf, t2=math.inf)
    train = simulate_cpmg(CpmgSequence(te=0.013, n_echoes=50, refocus_axis=axis, off_resonance=w), cfg)
    assert max(abs(a - 1) for a in train.amplitudes) <= 1e-9


def test_event_driven_matches_fixed_step_oracle():
    cfg = PhysicsConfig(t1=0.5, t2=0.25)
    w = 2 * math.pi * 40
    train = simulate_cpmg(CpmgSequence(te=0.02, n_echoes=10, off_resonance=w), cfg)
    ref = cpmg_fixed_step(0.02, 10, w, 0.5, 0.25, max_step=1e-5)
    assert max(abs(a - b) for a, b in zip(train.amplitudes, ref)) <= 1e-6
