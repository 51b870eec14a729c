import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mrqubit import DegenerateTableError, DomainError, EmptyTableError, SelectivityError
from mrqubit.hamiltonian import PhysicsConfig
from mrqubit.platform import assign_sites, default_coils
from mrqubit.relaxation import CpmgSequence, EchoSample, EchoTrain, simulate_cpmg
from mrqubit.tepa import (
    GenerationRequest,
    TepaModel,
    build_tepa_table,
    generate_qubits,
    lookup_gate_time,
    measure_tepa_table,
)
from oracles import tepa_scan

TWO_PI = 2 * math.pi
SQ = 1 / math.sqrt(2)
# mpmath: beta^2 = exp(-0.695) at echo 139 of a T1 = 4 s, TE = 20 ms table
B139 = 0.70645201392956335
A139 = 0.70776094270231105


@pytest.fixture
def table(water):
    return build_tepa_table(water, 0.02, 20.0)


def test_thousand_entries(table):
    assert len(table) == 1000
    assert table.entries[-1].time == pytest.approx(20.0)
    assert table.is_monotone()


def test_entry_139(table):
    e = table.entry(139)
    assert e.time == pytest.approx(2.78, abs=1e-15)
    assert e.beta**2 == pytest.approx(0.49907444798513597, abs=1e-15)
    assert e.beta == pytest.approx(B139, abs=1e-14)
    assert e.alpha == pytest.approx(A139, abs=1e-14)


def test_long_window_limit():
    t = build_tepa_table(PhysicsConfig(t1=0.1, t2=0.05), 0.02, 20.0)
    assert t.entries[-1].beta < 1e-40
    assert t.entries[-1].alpha == 1.0


def test_window_shorter_than_te(water):
    with pytest.raises(EmptyTableError):
        build_tepa_table(water, 0.02, 0.01)


@pytest.mark.parametrize("model", list(TepaModel))
def test_normalization_every_model(water, model):
    t = build_tepa_table(water, 0.02, 20.0, model)
    assert np.all(np.abs(t.alphas**2 + t.betas**2 - 1) <= 1e-12)
    assert [e.time for e in t.entries] == [i * 0.02 for i in range(1, 1001)]


def test_t2_model_uses_t2(water):
    t = build_tepa_table(water, 0.02, 20.0, "T2Decay")
    assert t.entry(100).beta ** 2 == pytest.approx(math.exp(-1.0), abs=1e-15)
    assert t.is_monotone()


def test_combined_model_peaks_at_one(water):
    t = build_tepa_table(water, 0.001, 20.0, TepaModel.COMBINED_EQ2)
    # continuous peak at T1 ln(1 + T2/T1) = 4 ln 1.5
    k = int(np.argmax(t.betas))
    assert t.entries[k].time == pytest.approx(4 * math.log(1.5), abs=1e-3)
    assert t.betas.max() == pytest.approx(1.0, abs=1e-6)
    assert not t.is_monotone()


def test_measured_matches_analytic(water):
    analytic = build_tepa_table(water, 0.02, 20.0)
    train = simulate_cpmg(CpmgSequence(0.02, 1000, off_resonance=TWO_PI * 30), water)
    measured = measure_tepa_table(train, "T1Decay", water)
    assert np.max(np.abs(measured.betas - analytic.betas)) < 1e-3


@pytest.mark.parametrize("model", ["T2Decay", "CombinedEq2"])
def test_measured_matches_analytic_other_models(water, model):
    analytic = build_tepa_table(water, 0.02, 20.0, model)
    train = simulate_cpmg(CpmgSequence(0.02, 1000), water)
    measured = measure_tepa_table(train, model, water)
    assert np.max(np.abs(measured.betas - analytic.betas)) < 1e-3


def test_measured_flat_train(no_relax):
    train = simulate_cpmg(CpmgSequence(0.02, 20), no_relax)
    measured = measure_tepa_table(train, "T1Decay", no_relax)
    assert np.all(measured.betas == 1.0)
    assert not measured.is_monotone()


def test_measured_single_echo(water):
    train = simulate_cpmg(CpmgSequence(0.02, 1), water)
    assert len(measure_tepa_table(train, "T1Decay", water)) == 1


def test_measured_degenerate_and_reference_checks(water):
    dead = EchoTrain(0.02, (EchoSample(1, 0.02, 0.0), EchoSample(2, 0.04, 0.0)))
    with pytest.raises(DegenerateTableError):
        measure_tepa_table(dead, "T2Decay")
    live = simulate_cpmg(CpmgSequence(0.02, 3), water)
    with pytest.raises(DomainError):
        measure_tepa_table(live, "T1Decay")


def test_lookup_worked_example(table):
    hit = lookup_gate_time(table, SQ)
    assert (hit.echo_index, hit.time) == (139, pytest.approx(2.78))
    assert hit.error == pytest.approx(9.2555e-4, abs=1e-7)
    assert (hit.echo_index, pytest.approx(hit.error)) == tepa_scan(4.0, 0.02, 1000, SQ)


def test_lookup_boundaries(table):
    assert lookup_gate_time(table, 1.0).echo_index == 1
    assert lookup_gate_time(table, 0.0).echo_index == 1000
    with pytest.raises(DomainError):
        lookup_gate_time(table, 1.5)


def test_lookup_ties_go_early():
    flat = build_tepa_table(PhysicsConfig(t1=math.inf, t2=math.inf), 0.02, 1.0)
    assert lookup_gate_time(flat, 0.3).echo_index == 1


def test_round_trip(table):
    for e in table.entries:
        assert lookup_gate_time(table, e.beta).echo_index == e.echo_index


@given(st.floats(0, 1), st.floats(0, 1))
def test_lookup_monotone(b1, b2):
    t = build_tepa_table(PhysicsConfig(t1=4.0, t2=2.0), 0.02, 20.0)
    lo, hi = sorted((b1, b2))
    assert lookup_gate_time(t, hi).time <= lookup_gate_time(t, lo).time


def test_request_validation():
    with pytest.raises(DomainError):
        GenerationRequest(0)
    with pytest.raises(DomainError):
        GenerationRequest(0, beta=0.5, echo_index=3)
    with pytest.raises(DomainError):
        GenerationRequest(0, alpha=0.5, beta=0.5)
    assert GenerationRequest(0, alpha=0.6).beta == pytest.approx(0.8)


@pytest.fixture
def platform(water):
    sites = assign_sites(3, 1e-3, water)
    return sites, default_coils(sites, TWO_PI * 200)


def test_generate_two_bell_targets(water, platform):
    sites, coils = platform
    res = generate_qubits([GenerationRequest(0, beta=SQ), GenerationRequest(2, beta=SQ)], sites, coils, water, 0.02, 20.0)
    assert res.ok
    for q in res.qubits:
        assert q.gate.echo_index == 139
        assert q.gate.gate_time == pytest.approx(2.78)
        assert q.state.alpha.real == pytest.approx(A139, abs=1e-12)
        assert q.state.beta.real == pytest.approx(B139, abs=1e-12)
        assert abs(q.state.norm2 - 1) <= 1e-12
    main = [p for p in res.schedule if p.is_main]
    assert len(main) == 1 and main[0].flip_angle == pytest.approx(math.pi / 2)
    for sid in (0, 2):
        assert sum(1 for p in res.schedule if p.coil == sid) == 139
    assert res.refocus_counts == {0: 139, 1: 0, 2: 139}


def test_generate_last_echo(water, platform):
    sites, coils = platform
    res = generate_qubits([GenerationRequest(1, echo_index=1000)], sites, coils, water, 0.02, 20.0)
    (q,) = res.qubits
    assert q.gate.gate_time == pytest.approx(20.0)
    assert q.schedule[-1].start_time < q.gate.gate_time
    times = [p.start_time for p in res.schedule]
    assert times == sorted(times)


def test_generate_empty(water, platform):
    sites, coils = platform
    res = generate_qubits([], sites, coils, water, 0.02, 20.0)
    assert res.qubits == [] and res.ok
    assert len(res.schedule) == 1 and res.schedule[0].is_main


def test_generate_failures(water, platform):
    sites, coils = platform
    reqs = [
        GenerationRequest(0, echo_index=1001),
        GenerationRequest(7, beta=0.5),
        GenerationRequest(1, beta=0.5),
        GenerationRequest(1, beta=0.6),
    ]
    res = generate_qubits(reqs, sites, coils, water, 0.02, 20.0)
    assert [f.site_id for f in res.failures] == [0, 7, 1]
    assert [q.site_id for q in res.qubits] == [1]
    assert not res.ok


def test_generate_unreachable(water, platform):
    sites, coils = platform
    # a coarse grid: TE = 2 s leaves big gaps in beta^2
    res = generate_qubits([GenerationRequest(0, beta=0.9)], sites, coils, water, 2.0, 20.0)
    (f,) = res.failures
    assert f.error > 0.01


def test_generate_selectivity_abort(water):
    sites = assign_sites(3, 1e-3, water)
    coils = default_coils(sites, TWO_PI * 900)
    with pytest.raises(SelectivityError) as err:
        generate_qubits([GenerationRequest(0, beta=SQ)], sites, coils, water, 0.02, 20.0)
    assert (0, 1) in err.value.report.failures
