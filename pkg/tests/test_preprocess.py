import numpy as np
import pytest
from scipy import signal as sp_signal

from eegauth.corpus import SynthConfig, load_manifest, load_session_epochs, save_corpus, synth_corpus
from eegauth.errors import DegenerateChannelError, ValidationError
from eegauth.preprocess import (
    apply_car,
    bandpass_spec,
    design_fir,
    filter_zero_phase,
    notch_50hz,
    notch_spec,
    preprocess_corpus,
    preprocess_pipeline,
    response_db,
    robust_normalize,
)

RATE = 500.0


def _tone(freq, seconds=4.0, rate=RATE, channels=1):
    t = np.arange(int(seconds * rate)) / rate
    return np.tile(np.sin(2 * np.pi * freq * t), (channels, 1))


# ----------------------------------------------------------------------- CAR

def test_car_column_example():
    x = np.array([[1.0], [2.0], [3.0]])
    np.testing.assert_allclose(apply_car(x), [[-1.0], [0.0], [1.0]])


def test_car_identical_channels_zero():
    x = np.tile(np.arange(10.0), (4, 1))
    np.testing.assert_allclose(apply_car(x), 0.0)


def test_car_idempotent():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(5, 100))
    once = apply_car(x)
    np.testing.assert_allclose(apply_car(once), once, atol=1e-15)


def test_car_single_channel_rejected():
    with pytest.raises(ValidationError, match="2 channels"):
        apply_car(np.zeros((1, 10)))


def test_car_instantaneous_mean_below_rms_bound():
    rng = np.random.default_rng(1)
    x = rng.normal(0, 2, size=(93, 2000))
    out = apply_car(x)
    rms = np.sqrt(np.mean(x ** 2))
    assert np.abs(out.mean(axis=0)).max() < 1e-6 * rms


# ------------------------------------------------------------------- design

def test_bandpass_response_targets():
    taps = design_fir(bandpass_spec(), RATE)
    # oracle: transfer-function magnitude at probe frequencies
    assert response_db(taps, RATE, [10.0])[0] == pytest.approx(0.0, abs=1.0)
    assert response_db(taps, RATE, [100.0])[0] <= -40.0
    assert response_db(taps, RATE, [0.2])[0] <= -40.0
    for f in (5.0, 10.0, 20.0, 40.0):
        assert abs(response_db(taps, RATE, [f])[0]) <= 1.0


def test_taps_symmetric_linear_phase():
    for spec in (bandpass_spec(), notch_spec()):
        taps = design_fir(spec, RATE)
        assert len(taps) % 2 == 1
        np.testing.assert_allclose(taps, taps[::-1], atol=1e-15)


def test_design_rejects_frequencies_above_nyquist():
    with pytest.raises(ValidationError, match="Nyquist"):
        design_fir(bandpass_spec(low_hz=1.0, high_hz=300.0), RATE)


# --------------------------------------------------------------- zero phase

def test_zero_phase_lag_is_zero_for_inband_tone():
    x = _tone(10.0)
    taps = design_fir(bandpass_spec(), RATE)
    y = filter_zero_phase(x, taps)[0]
    xc = x[0]
    # oracle: argmax of cross-correlation over +-20 samples
    lags = range(-20, 21)
    corr = [np.dot(y[200:-200], np.roll(xc, lag)[200:-200]) for lag in lags]
    assert lags[int(np.argmax(corr))] == 0


def test_out_of_band_tone_suppressed():
    x = _tone(60.0)
    taps = design_fir(bandpass_spec(), RATE)
    y = filter_zero_phase(x, taps)[0]
    mid = slice(500, -500)
    rms_ratio = np.sqrt(np.mean(y[mid] ** 2)) / np.sqrt(np.mean(x[0][mid] ** 2))
    assert rms_ratio <= 0.01


def test_zero_signal_stays_zero():
    taps = design_fir(bandpass_spec(), RATE)
    y = filter_zero_phase(np.zeros((2, 3000)), taps)
    np.testing.assert_allclose(y, 0.0, atol=1e-18)


def test_filter_rejects_short_signal():
    taps = design_fir(bandpass_spec(), RATE)
    with pytest.raises(ValidationError, match="exceed"):
        filter_zero_phase(np.zeros((1, len(taps) - 10)), taps)


# -------------------------------------------------------------------- notch

def test_notch_50hz_attenuation():
    x = _tone(50.0)
    y = notch_50hz(x, RATE)[0]
    mid = slice(500, -500)
    ratio = np.sqrt(np.mean(y[mid] ** 2)) / np.sqrt(np.mean(x[0][mid] ** 2))
    assert 20 * np.log10(ratio) <= -20.0


def test_notch_leaves_40hz_alone():
    x = _tone(40.0)
    y = notch_50hz(x, RATE)[0]
    mid = slice(500, -500)
    ratio = np.sqrt(np.mean(y[mid] ** 2)) / np.sqrt(np.mean(x[0][mid] ** 2))
    assert abs(20 * np.log10(ratio)) <= 1.0


def test_notch_white_noise_variance_barely_reduced():
    ratios = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(1, 4000))
        y = notch_50hz(x, RATE)
        mid = slice(500, -500)
        ratios.append(np.var(y[0][mid]) / np.var(x[0][mid]))
    assert 0.85 < np.mean(ratios) <= 1.05


# ---------------------------------------------------------------- normalize

def test_robust_normalize_hand_example():
    x = np.array([[1.0, 2.0, 3.0, 4.0, 5.0]])
    np.testing.assert_allclose(robust_normalize(x), [[-1.0, -0.5, 0.0, 0.5, 1.0]])


def test_robust_normalize_affine_equivariance():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(4, 400))
    a = rng.uniform(0.5, 4.0, size=(4, 1))
    b = rng.normal(size=(4, 1))
    np.testing.assert_allclose(robust_normalize(a * x + b), robust_normalize(x), atol=1e-9)


def test_robust_normalize_constant_channel_error_names_channel():
    x = np.vstack([np.random.default_rng(0).normal(size=100), np.full(100, 3.0)])
    with pytest.raises(DegenerateChannelError) as err:
        robust_normalize(x, labels=["ok", "dead"])
    assert err.value.channels == ["dead"]


def test_robust_normalize_median_zero_iqr_one():
    rng = np.random.default_rng(4)
    x = rng.normal(3, 10, size=(6, 999))
    out = robust_normalize(x)
    med = np.median(out, axis=1)
    q1, q3 = np.percentile(out, [25, 75], axis=1)
    np.testing.assert_allclose(med, 0.0, atol=1e-6)
    np.testing.assert_allclose(q3 - q1, 1.0, atol=1e-6)


# ----------------------------------------------------------------- pipeline

def test_pipeline_suppresses_line_noise_in_epochs():
    rng = np.random.default_rng(5)
    t = np.arange(6000) / RATE
    rec = rng.normal(size=(4, 6000)) * 0.5
    rec += np.sin(2 * np.pi * 10.0 * t)          # in-band content
    rec += 3.0 * np.sin(2 * np.pi * 60.0 * t)    # line-like contamination
    res = preprocess_pipeline(rec, RATE, [0, 500, 1000, 1500])
    assert len(res.epochs) == 4
    for epoch in res.epochs:
        freqs, pxx = sp_signal.welch(epoch.samples, fs=RATE, nperseg=256, axis=-1)
        p60 = pxx[:, np.argmin(np.abs(freqs - 60.0))]
        p10 = pxx[:, np.argmin(np.abs(freqs - 10.0))]
        assert np.all(10 * np.log10(p60 / p10) <= -40.0)


def test_pipeline_deterministic():
    rng = np.random.default_rng(6)
    rec = rng.normal(size=(3, 5000))
    a = preprocess_pipeline(rec, RATE, [0, 1000])
    b = preprocess_pipeline(rec.copy(), RATE, [0, 1000])
    for ea, eb in zip(a.epochs, b.epochs):
        np.testing.assert_array_equal(ea.samples, eb.samples)


def test_pipeline_short_recording_names_stage():
    with pytest.raises(ValidationError, match="stage 'bandpass'"):
        preprocess_pipeline(np.zeros((3, 600)), RATE, [0])


def test_preprocess_corpus_round_trip_and_refusal(tmp_path):
    cfg = SynthConfig(n_subjects=2, sessions_per_subject=2, epochs_per_session=4, seed=3)
    index = save_corpus(synth_corpus(cfg), tmp_path / "raw")
    out = preprocess_corpus(index, tmp_path / "clean")
    assert out.preprocessed
    loaded = load_manifest(tmp_path / "clean")
    assert loaded.preprocessed
    data = load_session_epochs(loaded, loaded.sessions[0])
    assert data.shape == (4, 93, 500)
    with pytest.raises(ValidationError, match="already preprocessed"):
        preprocess_corpus(loaded, tmp_path / "again")


def test_zero_phase_shift_below_one_degree():
    x = _tone(10.0, seconds=6.0)
    taps = design_fir(bandpass_spec(), RATE)
    y = filter_zero_phase(x, taps)[0]
    mid = slice(1000, -1000)
    seg_x, seg_y = x[0][mid], y[mid]
    t = np.arange(seg_x.size) / RATE
    basis = np.exp(-2j * np.pi * 10.0 * t)
    phase = np.angle(np.vdot(basis, seg_y) / np.vdot(basis, seg_x))
    assert abs(np.degrees(phase)) < 1.0
