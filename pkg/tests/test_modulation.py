"""Gating waveforms, harmonic synthesis, and bit maps."""

import cmath
import math

import numpy as np
import pytest

from rmslink.errors import ModulationError
from rmslink.modulation import (MAX_FIRST_HARMONIC, GatingWaveform,
                                bits_per_symbol, compose_coefficient,
                                constellation_points, design_gating,
                                fft_oracle, gating_schedule,
                                harmonic_coefficient, map_bits,
                                static_phase_modulate, write_schedule,
                                SCHEDULE_HEADER)
from rmslink.system import TransmissiveCoefficient


def test_waveform_sample_levels():
    wf = GatingWaveform(start_time=0.0, duration=0.5, period=1.0)
    s = wf.sample(np.array([0.25, 0.75]))
    np.testing.assert_allclose(s, [-1.0, 1.0])
    # wrap-around window
    wrapped = GatingWaveform(start_time=0.75, duration=0.5, period=1.0)
    np.testing.assert_allclose(wrapped.sample(np.array([0.1, 0.5, 0.9])), [-1.0, 1.0, -1.0])


def test_waveform_validation():
    with pytest.raises(ModulationError):
        GatingWaveform(start_time=0.0, duration=0.5, period=0.0)
    with pytest.raises(ModulationError):
        GatingWaveform(start_time=1.0, duration=0.5, period=1.0)
    with pytest.raises(ModulationError):
        GatingWaveform(start_time=0.0, duration=1.5, period=1.0)


def test_harmonic_full_duty_first_order_vanishes():
    wf = GatingWaveform(start_time=0.0, duration=1.0, period=1.0)
    assert harmonic_coefficient(wf, 1) == pytest.approx(0.0, abs=1e-15)
    # constant -1 waveform: DC term is -1
    assert harmonic_coefficient(wf, 0) == pytest.approx(-1.0)


def test_harmonic_half_duty_hits_maximum():
    wf = GatingWaveform(start_time=0.0, duration=0.5, period=1.0)
    c = harmonic_coefficient(wf, 1)
    # -(2/pi) e^{-j pi/2} = (2/pi) j
    assert abs(c) == pytest.approx(MAX_FIRST_HARMONIC, rel=1e-15)
    assert cmath.phase(c) == pytest.approx(math.pi / 2, abs=1e-15)


def test_harmonic_zero_duty():
    wf = GatingWaveform(start_time=0.3, duration=0.0, period=1.0)
    assert harmonic_coefficient(wf, 0) == pytest.approx(1.0)
    for order in (1, 2, 3):
        assert harmonic_coefficient(wf, order) == pytest.approx(0.0, abs=1e-15)


def test_harmonic_dc_linear_in_duty():
    wf = GatingWaveform(start_time=0.1, duration=0.25, period=1.0)
    assert harmonic_coefficient(wf, 0) == pytest.approx(0.5)
    assert harmonic_coefficient(wf, 0).imag == 0.0


def test_harmonic_rejects_negative_order():
    wf = GatingWaveform(start_time=0.0, duration=0.5, period=1.0)
    with pytest.raises(ModulationError):
        harmonic_coefficient(wf, -1)


def test_first_harmonic_amplitude_monotone_in_duty():
    taus = np.linspace(0.0, 0.5, 101)
    amps = [abs(harmonic_coefficient(GatingWaveform(0.0, t, 1.0), 1)) for t in taus]
    assert np.all(np.diff(amps) > 0.0)
    np.testing.assert_allclose(amps, (2 / math.pi) * np.sin(math.pi * taus), atol=1e-15)


def test_design_zero_target():
    wf = design_gating(0.0)
    assert wf.start_time == 0.0 and wf.duration == 0.0


def test_design_max_amplitude_gives_half_duty():
    wf = design_gating(MAX_FIRST_HARMONIC)
    assert wf.duration == pytest.approx(0.5, abs=1e-12)


def test_design_rejects_overdrive():
    with pytest.raises(ModulationError):
        design_gating(MAX_FIRST_HARMONIC * 1.01)


def test_design_round_trip():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(1000):
        target = (rng.uniform(0, MAX_FIRST_HARMONIC)
                  * cmath.exp(1j * rng.uniform(0, 2 * math.pi)))
        wf = design_gating(target, period=2.5)
        worst = max(worst, abs(harmonic_coefficient(wf, 1) - target))
    assert worst < 1e-12


def test_design_phase_only_moves_start_time():
    a = design_gating(0.4 * cmath.exp(0.3j))
    b = design_gating(0.4 * cmath.exp(1.7j))
    assert a.duration == pytest.approx(b.duration, abs=1e-15)
    assert a.start_time != b.start_time


def test_fft_oracle_matches_closed_form_half_duty():
    wf = GatingWaveform(start_time=0.0, duration=0.5, period=1.0)
    assert abs(fft_oracle(wf, 1, 2 ** 14) - harmonic_coefficient(wf, 1)) < 1e-3


def test_fft_oracle_constant_waveform_exact():
    wf = GatingWaveform(start_time=0.0, duration=1.0, period=1.0)
    assert abs(fft_oracle(wf, 1, 2 ** 14)) < 1e-9


def test_fft_oracle_dc_quarter_duty():
    wf = GatingWaveform(start_time=0.0, duration=0.25, period=1.0)
    assert abs(fft_oracle(wf, 0, 2 ** 14) - 0.5) < 1e-3


def test_fft_oracle_sample_count_validation():
    wf = GatingWaveform(start_time=0.0, duration=0.5, period=1.0)
    with pytest.raises(ModulationError):
        fft_oracle(wf, 3, 8)  # below 4*(l+1)
    with pytest.raises(ModulationError):
        fft_oracle(wf, 1, 100)  # not a power of two


def test_fft_oracle_random_waveforms_all_orders():
    rng = np.random.default_rng(29)
    samples = 2 ** 14
    for _ in range(200):
        wf = GatingWaveform(start_time=rng.uniform(0, 1), duration=rng.uniform(0, 1),
                            period=1.0)
        for order in range(5):
            err = abs(fft_oracle(wf, order, samples) - harmonic_coefficient(wf, order))
            assert err < 10.0 / samples


def test_static_phase_depth_one():
    np.testing.assert_allclose(static_phase_modulate("01", 1), [0.0, math.pi])


def test_static_phase_depth_two_gray():
    np.testing.assert_allclose(static_phase_modulate("00011110", 2),
                               [0.0, math.pi / 2, math.pi, 3 * math.pi / 2])


def test_static_phase_empty():
    assert static_phase_modulate("", 1).shape == (0,)


def test_static_phase_validation():
    with pytest.raises(ModulationError):
        static_phase_modulate("012", 1)
    with pytest.raises(ModulationError):
        static_phase_modulate("0", 2)
    with pytest.raises(ModulationError):
        static_phase_modulate("00", 3)


def test_compose_identity():
    beam = TransmissiveCoefficient.from_values(np.array([0.5j, -0.25, 1.0 + 0j]))
    out = compose_coefficient(beam, 1.0)
    np.testing.assert_allclose(out.values, beam.values, atol=1e-15)


def test_compose_rotation():
    beam = TransmissiveCoefficient.ones(4)
    out = compose_coefficient(beam, cmath.exp(1j * math.pi / 4))
    np.testing.assert_allclose(out.amplitude, 1.0, atol=1e-15)
    np.testing.assert_allclose(out.phase, math.pi / 4, atol=1e-14)


def test_compose_scaling():
    out = compose_coefficient(TransmissiveCoefficient.ones(3), 0.5j)
    np.testing.assert_allclose(out.amplitude, 0.5, atol=1e-15)
    np.testing.assert_allclose(out.phase, math.pi / 2, atol=1e-14)


def test_compose_rejects_gain():
    with pytest.raises(ModulationError):
        compose_coefficient(TransmissiveCoefficient.ones(2), 1.5)


def test_bits_per_symbol():
    assert bits_per_symbol("bpsk") == 1
    assert bits_per_symbol("qpsk") == 2
    assert bits_per_symbol("qam16") == 4
    with pytest.raises(ModulationError):
        bits_per_symbol("qam64")


def test_constellation_outer_ring_at_max():
    for scheme in ("bpsk", "qpsk", "qam16"):
        pts = constellation_points(scheme)
        assert np.max(np.abs(pts)) == pytest.approx(MAX_FIRST_HARMONIC, rel=1e-15)
    assert len(constellation_points("qam16")) == 16
    assert len(set(np.round(constellation_points("qam16"), 12).tolist())) == 16


def test_constellation_points_all_realizable():
    for scheme in ("bpsk", "qpsk", "qam16"):
        for p in constellation_points(scheme):
            wf = design_gating(p)
            assert abs(harmonic_coefficient(wf, 1) - p) < 1e-12


def test_map_bits_bpsk():
    sym = map_bits("01", "bpsk")
    np.testing.assert_allclose(sym, [MAX_FIRST_HARMONIC, -MAX_FIRST_HARMONIC], atol=1e-15)


def test_map_bits_qpsk_gray():
    sym = map_bits("00011110", "qpsk")
    expected = MAX_FIRST_HARMONIC * np.exp(1j * (np.array([0, 0.5, 1, 1.5]) * math.pi
                                                 + math.pi / 4))
    np.testing.assert_allclose(sym, expected, atol=1e-14)


def test_map_bits_qam16_axis_gray():
    # I bits "00" -> -3, Q bits "10" -> +3, corner normalized to the 2/pi disk
    sym = map_bits("0010", "qam16")
    scale = MAX_FIRST_HARMONIC / (3.0 * math.sqrt(2.0))
    np.testing.assert_allclose(sym, [(-3 + 3j) * scale], atol=1e-15)
    assert abs(sym[0]) == pytest.approx(MAX_FIRST_HARMONIC, rel=1e-12)


def test_map_bits_qam16_full_alphabet():
    bits = "".join(format(i, "04b") for i in range(16))
    sym = map_bits(bits, "qam16")
    assert len(set(np.round(sym, 12).tolist())) == 16
    # Gray property: adjacent levels along one axis differ in one bit
    levels = {"00": -3, "01": -1, "11": 1, "10": 3}
    ordered = sorted(levels, key=levels.get)
    for a, b in zip(ordered, ordered[1:]):
        assert sum(x != y for x, y in zip(a, b)) == 1


def test_map_bits_validation():
    with pytest.raises(ModulationError):
        map_bits("0a1", "bpsk")
    with pytest.raises(ModulationError):
        map_bits("010", "qpsk")


def test_gating_schedule_shape_and_fidelity():
    sym = map_bits("0010" * 3, "qam16")
    beam = TransmissiveCoefficient.from_values(
        0.9 * np.exp(1j * np.linspace(0, 1, 4)))
    rows = gating_schedule(sym, beamformer=beam)
    assert len(rows) == len(sym) * 4
    for el, si, ton, tau, target, realized in rows:
        assert 0.0 <= ton < 1.0 and 0.0 <= tau <= 1.0
        assert abs(realized - target) < 1e-12


def test_write_schedule_format(tmp_path):
    rows = gating_schedule(map_bits("01", "bpsk"), num_elements=2)
    path = tmp_path / "sched.csv"
    write_schedule(path, rows, "bpsk")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and "scheme=bpsk" in lines[0]
    assert lines[1] == SCHEDULE_HEADER
    assert len(lines) == 2 + len(rows)
    first = lines[2].split(",")
    assert len(first) == 8
    assert abs(float(first[4]) - MAX_FIRST_HARMONIC) < 1e-15
