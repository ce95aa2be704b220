"""Acceptance suite: one pass/fail line per criterion (run with -s to see them).

The synthetic end-to-end trends use the full chain (generate ->
preprocess -> handcrafted features -> trials -> EER); absolute numbers
from large-corpus studies are not reproducible at desk scale, so the
assertions target properties and trend directions.
"""

import hashlib
import json
import time
from pathlib import Path

import numpy as np
import pytest

from eegauth.cli.main import main as cli_main
from eegauth.corpus.synth import SynthConfig
from eegauth.features import burg, import_embeddings, welch_psd_matrix
from eegauth.features.spec import PsdSpec
from eegauth.metrics import eer_from_scores, frr_at_far, roc_curve
from eegauth.preprocess import (
    apply_car,
    bandpass_spec,
    design_fir,
    filter_zero_phase,
    notch_50hz,
    response_db,
    robust_normalize,
)
from eegauth.protocol import (
    ProtocolConfig,
    bootstrap_subject_count,
    fit_scaling_curve,
    generate_trials,
    split_enroll_verify,
)

from oracles import eer_midpoint_sweep
from pipeline_helpers import corpus_features, pipeline_eer
from test_protocol import _cloud

RATE = 500.0


def check(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{name} {detail}"


def _random_scoreset(rng):
    n_g = int(rng.integers(5, 501))
    n_i = int(rng.integers(5, 501))
    gen = rng.normal(rng.uniform(0, 1.5), rng.uniform(0.3, 2.0), n_g)
    imp = rng.normal(0.0, rng.uniform(0.3, 2.0), n_i)
    return gen, imp


def test_eer_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.time()
    worst = 0.0
    for _ in range(1000):
        gen, imp = _random_scoreset(rng)
        worst = max(worst, abs(eer_from_scores(gen, imp) - eer_midpoint_sweep(gen, imp)))
    elapsed = time.time() - start
    check("EER oracle equivalence (1000 sets, 1e-9)", worst < 1e-9 and elapsed < 30.0,
          f"max abs diff {worst:.2e}, {elapsed:.1f}s")


def test_monotone_transform_invariance():
    rng = np.random.default_rng(7)
    ok = True
    for _ in range(100):
        gen, imp = _random_scoreset(rng)
        base = eer_from_scores(gen, imp)
        # rank-preserving random remap: strictly increasing values assigned by rank
        pooled = np.concatenate([gen, imp])
        uniq = np.unique(pooled)
        new_vals = np.cumsum(rng.uniform(0.1, 2.0, size=uniq.size))
        remap = dict(zip(uniq.tolist(), new_vals.tolist()))
        t = np.vectorize(remap.__getitem__)
        ok &= eer_from_scores(t(gen), t(imp)) == base
    check("EER invariant under 100 strictly increasing transforms (exact)", ok)


def test_frr_at_far_monotonicity():
    rng = np.random.default_rng(11)
    ok = True
    for _ in range(1000):
        gen, imp = _random_scoreset(rng)
        roc = roc_curve(gen, imp)
        f1, f01, f001 = (frr_at_far(roc, t) for t in (0.01, 0.001, 0.0001))
        ok &= f001 >= f01 >= f1
    check("FRR@FAR monotonicity FRR(0.01%) >= FRR(0.1%) >= FRR(1%) on 1000 sets", ok)


def test_dsp_suite():
    start = time.time()
    rng = np.random.default_rng(5)

    x = rng.normal(0, 2, size=(93, 2000))
    car = apply_car(x)
    rms = np.sqrt(np.mean(x ** 2))
    car_ok = np.abs(car.mean(axis=0)).max() < 1e-6 * rms

    bp = design_fir(bandpass_spec(), RATE)
    stop_ok = (response_db(bp, RATE, [0.2])[0] <= -40.0
               and response_db(bp, RATE, [100.0])[0] <= -40.0)
    ripple_ok = all(abs(response_db(bp, RATE, [f])[0]) <= 1.0 for f in (5, 10, 20, 40))

    t = np.arange(int(4 * RATE)) / RATE
    tone50 = np.sin(2 * np.pi * 50.0 * t)[None, :]
    tone40 = np.sin(2 * np.pi * 40.0 * t)[None, :]
    mid = slice(500, -500)

    def rms_db(y, x_):
        return 20 * np.log10(np.sqrt(np.mean(y[0][mid] ** 2)) / np.sqrt(np.mean(x_[0][mid] ** 2)))

    notch_ok = rms_db(notch_50hz(tone50, RATE), tone50) <= -20.0
    notch_pass_ok = abs(rms_db(notch_50hz(tone40, RATE), tone40)) <= 1.0

    tone10 = np.sin(2 * np.pi * 10.0 * t)[None, :]
    y = filter_zero_phase(tone10, bp)[0]
    lags = range(-20, 21)
    corr = [np.dot(y[300:-300], np.roll(tone10[0], lag)[300:-300]) for lag in lags]
    lag_ok = lags[int(np.argmax(corr))] == 0

    elapsed = time.time() - start
    check("DSP suite (CAR, bandpass, notch, zero phase)",
          car_ok and stop_ok and ripple_ok and notch_ok and notch_pass_ok
          and lag_ok and elapsed < 60.0,
          f"{elapsed:.1f}s")


def test_robust_normalization():
    rng = np.random.default_rng(13)
    x = rng.normal(3.0, 7.0, size=(8, 1501))
    out = robust_normalize(x)
    med = np.abs(np.median(out, axis=1)).max()
    q1, q3 = np.percentile(out, [25, 75], axis=1)
    iqr_err = np.abs((q3 - q1) - 1.0).max()
    a = rng.uniform(0.5, 5.0, size=(8, 1))
    b = rng.normal(size=(8, 1))
    affine_err = np.abs(robust_normalize(a * x + b) - out).max()
    check("Robust normalization (median 0, IQR 1, affine invariance)",
          med < 1e-6 and iqr_err < 1e-6 and affine_err < 1e-9,
          f"median {med:.1e}, iqr err {iqr_err:.1e}, affine err {affine_err:.1e}")


def test_ar_recovery():
    from scipy import signal as sp_signal
    est = []
    for seed in range(100):
        e = np.random.default_rng(seed).normal(size=1000)
        x = sp_signal.lfilter([1.0], [1.0, -0.75, 0.5], e)[-500:]
        est.append(burg(x[None, :], 2)[0])
    mean = np.mean(est, axis=0)
    ok = abs(mean[0] - 0.75) <= 0.1 and abs(mean[1] + 0.5) <= 0.1
    check("Burg AR(2) recovery within +-0.1", ok, f"mean estimate {mean.round(4).tolist()}")


def test_psd_criteria():
    t = np.arange(500) / RATE
    epoch = np.sin(2 * np.pi * 10.0 * t)[None, None, :]
    freqs, pxx = welch_psd_matrix(epoch, RATE, PsdSpec())
    df = freqs[1] - freqs[0]
    peak_ok = abs(freqs[np.argmax(pxx[0, 0])] - 10.0) <= df / 2

    spec = PsdSpec(band_hz=(1e-9, RATE / 2))
    ratios = []
    for seed in range(50):
        x = np.random.default_rng(seed).normal(size=(1, 1, 500))
        f2, p2 = welch_psd_matrix(x, RATE, spec)
        ratios.append(np.sum(p2) * (f2[1] - f2[0]) / np.var(x))
    parseval_ok = abs(np.mean(ratios) - 1.0) <= 0.10
    check("PSD peak bin + Parseval within 10%", peak_ok and parseval_ok,
          f"energy ratio {np.mean(ratios):.4f}")


def test_protocol_enumeration():
    idx, feats = _cloud(n_subjects=2, n_sessions=2, n_epochs=2, seed=1)
    split = split_enroll_verify(idx, ProtocolConfig())
    ts1 = generate_trials(feats, split, ProtocolConfig(verification_samples=1))
    ts2 = generate_trials(feats, split, ProtocolConfig(verification_samples=2))
    ts4 = generate_trials(feats, split, ProtocolConfig(verification_samples=4))
    counts_ok = (ts1.n_genuine, ts1.n_impostor) == (4, 4) and \
        (ts2.n_genuine, ts2.n_impostor) == (2, 2) and len(ts4.trials) == 0

    rng = np.random.default_rng(3)
    clean = True
    for _ in range(100):
        n_subj, n_sess = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        k = int(rng.integers(1, n_sess))
        idx, feats = _cloud(n_subjects=n_subj, n_sessions=n_sess,
                            n_epochs=int(rng.integers(1, 5)),
                            seed=int(rng.integers(1 << 30)))
        cfg = ProtocolConfig(enroll_k=k,
                             verify_rule="all_remaining" if rng.random() < 0.5 else "next_session_only",
                             verification_samples=int(rng.integers(1, 4)))
        split = split_enroll_verify(idx, cfg)
        ts = generate_trials(feats, split, cfg)
        for t in ts.trials:
            enroll_keys = {m.key for m in split.subjects[t.claimed_subject].enroll}
            clean &= (t.probe_subject, t.probe_session) not in enroll_keys
            clean &= t.genuine == (t.claimed_subject == t.probe_subject)
    check("Protocol enumeration (4+4 hand count, blocking, no enrollment probes x100 configs)",
          counts_ok and clean)


@pytest.fixture(scope="module")
def e2e():
    """10-seed trend statistics for the synthetic end-to-end criteria."""
    start = time.time()
    stats = {"n1": [], "n4": [], "k1": [], "k2": [], "muse": [], "n1_double": []}
    keep = {}
    for seed in range(10):
        low = SynthConfig(n_subjects=20, sessions_per_subject=3, epochs_per_session=16,
                          session_drift_scale=0.1, noise_scale=3.0, seed=seed)
        idx, feats = corpus_features(low)
        eer1, ts, scores = pipeline_eer(idx, feats, 1)
        stats["n1"].append(eer1)
        stats["n4"].append(pipeline_eer(idx, feats, 4)[0])
        stats["k1"].append(pipeline_eer(idx, feats, 1, 1, "next_session_only")[0])
        stats["k2"].append(pipeline_eer(idx, feats, 1, 2, "next_session_only")[0])
        idxm, featsm = corpus_features(low, preset="muse4")
        stats["muse"].append(pipeline_eer(idxm, featsm, 1)[0])
        double = SynthConfig(n_subjects=20, sessions_per_subject=3, epochs_per_session=16,
                             session_drift_scale=0.2, noise_scale=3.0, seed=seed)
        idx2, feats2 = corpus_features(double)
        stats["n1_double"].append(pipeline_eer(idx2, feats2, 1)[0])
    stats["elapsed"] = time.time() - start
    return stats


def test_e2e_low_drift_eer_below_10pct(e2e):
    mean = float(np.mean(e2e["n1"]))
    check("(a) EER <= 10% at low drift", mean <= 0.10,
          f"mean EER {100 * mean:.2f}%, runtime {e2e['elapsed']:.0f}s")


def test_e2e_drift_doubling_raises_eer(e2e):
    low, high = float(np.mean(e2e["n1"])), float(np.mean(e2e["n1_double"]))
    check("(b) EER strictly larger when drift doubles", high > low,
          f"{100 * low:.2f}% -> {100 * high:.2f}%")


def test_e2e_probe_averaging_helps(e2e):
    n1, n4 = float(np.mean(e2e["n1"])), float(np.mean(e2e["n4"]))
    check("(c) mean EER(n=4) < EER(n=1)", n4 < n1, f"{100 * n4:.2f}% < {100 * n1:.2f}%")


def test_e2e_second_enrollment_session_helps(e2e):
    k1, k2 = float(np.mean(e2e["k1"])), float(np.mean(e2e["k2"]))
    check("(d) 2 enrollment sessions <= 1 session", k2 <= k1,
          f"{100 * k2:.2f}% <= {100 * k1:.2f}%")


def test_e2e_channel_reduction_costs_accuracy(e2e):
    full, muse = float(np.mean(e2e["n1"])), float(np.mean(e2e["muse"]))
    check("(e) muse4 EER >= full-channel EER - 0.5pt", muse >= full - 0.005,
          f"{100 * muse:.2f}% vs {100 * full:.2f}%")


def test_subject_count_bootstrap_trend():
    cfg = SynthConfig(n_subjects=24, sessions_per_subject=3, epochs_per_session=12,
                      session_drift_scale=0.1, noise_scale=3.0, seed=0)
    idx, feats = corpus_features(cfg)
    _, ts, scores = pipeline_eer(idx, feats, 1)
    rows = {r.n_subjects: r for r in
            bootstrap_subject_count(ts.trials, scores, [5, 20, 24], repeats=50, seed=1)}
    ok = rows[5].std_eer > rows[20].std_eer and rows[24].std_eer == 0.0
    check("Bootstrap: std(N=5) > std(N=20), std(N=full) = 0", ok,
          f"std5 {rows[5].std_eer:.4f}, std20 {rows[20].std_eer:.4f}, std24 {rows[24].std_eer}")


def test_scaling_fit_criteria():
    fit = fit_scaling_curve([(10, 20.0), (100, 15.0)])
    exact_ok = (abs(fit.intercept - 25.0) < 1e-12 and abs(fit.slope + 5.0) < 1e-12
                and abs(fit.predict(1000)[0] - 10.0) < 1e-12)
    rng = np.random.default_rng(17)
    ns = np.array([4, 8, 16, 32, 64, 128, 256, 512])
    eers = 28.0 - 5.0 * np.log10(ns) + rng.normal(0, 0.15, size=ns.size)
    noisy = fit_scaling_curve(list(zip(ns, eers)))
    noisy_ok = abs(noisy.slope + 5.0) <= 0.5
    check("Scaling fit: exact 2-point + slope within 10% on noisy data",
          exact_ok and noisy_ok, f"noisy slope {noisy.slope:.3f}")


def _digest(path: Path) -> str:
    h = hashlib.sha256()
    for p in sorted(path.rglob("*")):
        if p.is_file():
            h.update(p.name.encode())
            h.update(p.read_bytes())
    return h.hexdigest()


def test_cli_determinism(tmp_path):
    root = tmp_path
    cfg = {
        "seed": 3,
        "paths": {"corpus": str(root / "raw"), "preprocessed": str(root / "clean"),
                  "features": str(root / "features.jsonl"), "out_dir": ""},
        "synth": {"n_subjects": 6, "sessions_per_subject": 3, "epochs_per_session": 8,
                  "devices": [{"device_id": "devA"}, {"device_id": "devB"}],
                  "session_drift_scale": 0.1, "noise_scale": 3.0},
        "analysis": {"subject_count": {"min": 2, "max": 6, "step": 2, "repeats": 10}},
    }
    points = root / "points.tsv"
    points.write_text("5\t12.0\n10\t10.5\n20\t9.0\n")
    cfg_path = root / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    assert cli_main(["--config", str(cfg_path), "synth"]) == 0
    assert cli_main(["--config", str(cfg_path), "preprocess"]) == 0
    assert cli_main(["--config", str(cfg_path), "extract"]) == 0

    runs = [["evaluate"]] + [["analyze", name] for name in
                             ("time-intervals", "subject-count", "cross-device", "scaling",
                              "enroll-update")]
    runs.append(["analyze", "channels", "--preset", "muse4", "--corpus", str(root / "raw")])
    extra = {"scaling": ["--points", str(points)]}
    ok = True
    details = []
    for i, argv in enumerate(runs):
        out = root / f"out-{i}"
        name = argv[1] if argv[0] == "analyze" else argv[0]
        full = ["--config", str(cfg_path), "--out-dir", str(out)] + argv
        full += extra.get(name, [])
        assert cli_main(list(full)) == 0, argv
        first = _digest(out)
        assert cli_main(list(full)) == 0, argv
        same = _digest(out) == first
        ok &= same
        details.append(f"{name}:{'=' if same else '!'}")
    check("CLI determinism: evaluate + every analyze byte-identical", ok, " ".join(details))


def test_external_embeddings_fixture_without_secondary(tmp_path):
    from eegauth.corpus import save_corpus
    from eegauth.corpus.synth import synth_corpus
    cfg = SynthConfig(n_subjects=2, sessions_per_subject=2, epochs_per_session=2, seed=11)
    index = save_corpus(synth_corpus(cfg), tmp_path / "c")
    vectors = import_embeddings(Path(__file__).parent / "data" / "embeddings_fixture.jsonl", index)
    check("External-embedding path runs from checked-in fixture (no secondary needed)",
          len(vectors) == 8 and all(v.vec.shape == (8,) for v in vectors))
