"""Batch command-line front end.

Commands: synth | preprocess | extract | evaluate | analyze | report.
Every run validates its configuration up front, writes outputs under a
config-hash-stamped directory with the resolved config alongside, and
is byte-identical across reruns with the same config and seed.

Exit codes: 0 success, 2 validation error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..errors import DataError, EegAuthError, ValidationError
from .config import ENV_CONFIG, RunConfig, load_config


def _run_dir(cfg: RunConfig, command: str, tag: str | None = None) -> str:
    base = cfg.paths.get("out_dir", "runs")
    name = command + (f"-{tag}" if tag else "") + "-" + cfg.config_hash()
    path = os.path.join(base, name)
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "resolved_config.json"), "w") as f:
        json.dump(cfg.to_dict(), f, indent=1, sort_keys=True)
        f.write("\n")
    return path


def _write_json(path, doc):
    with open(path, "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")


def _header(cfg: RunConfig) -> dict:
    return {"seed": int(cfg.seed), "config_hash": cfg.config_hash(),
            "per_subject_std": "population"}


# ---------------------------------------------------------------- commands

def cmd_synth(cfg: RunConfig, args) -> int:
    from ..corpus.synth import save_corpus, synth_corpus
    out = args.out or cfg.path("corpus")
    scfg = cfg.synth_config()
    corpus = synth_corpus(scfg)
    index = save_corpus(corpus, out)
    n_epochs = sum(r.n_epochs for r in index.sessions)
    print(f"synth corpus written to {out}: {len(index.subjects())} subjects, "
          f"{len(index.sessions)} sessions, {n_epochs} epochs, seed {scfg.seed}")
    return 0


def cmd_preprocess(cfg: RunConfig, args) -> int:
    from ..corpus.io import load_manifest
    from ..preprocess.pipeline import preprocess_corpus
    index = load_manifest(args.corpus or cfg.path("corpus"))
    out = args.out or cfg.path("preprocessed")
    new_index = preprocess_corpus(index, out, cfg.preprocess_config())
    print(f"preprocessed corpus written to {out}: {len(new_index.sessions)} sessions")
    return 0


def cmd_extract(cfg: RunConfig, args) -> int:
    from ..corpus.io import load_manifest
    from ..features.extract import extract_features
    from ..features.interchange import export_embeddings, import_embeddings
    index = load_manifest(args.corpus or cfg.path("preprocessed"))
    out = args.out or cfg.path("features")
    fspec = cfg.feature_spec()
    if fspec.kind == "external":
        emb_path = cfg.path("embeddings")
        vectors = import_embeddings(emb_path, index)
        export_embeddings(vectors, out)
        print(f"validated {len(vectors)} external embeddings -> {out}")
        return 0
    vectors = extract_features(index, fspec, reference_subjects=cfg.reference_subjects())
    export_embeddings(vectors, out)
    dim = vectors[0].vec.size if vectors else 0
    print(f"extracted {len(vectors)} vectors of dim {dim} ({fspec.feature_id()}) -> {out}")
    return 0


def _load_eval_inputs(cfg: RunConfig, args, **pcfg_overrides):
    from ..corpus.io import load_manifest
    from ..features.interchange import import_embeddings
    from ..protocol.split import split_enroll_verify
    index = load_manifest(args.corpus or cfg.path("preprocessed"))
    store = getattr(args, "features", None) or cfg.path("features")
    if not os.path.exists(store):
        raise DataError(f"feature store not found: {store}")
    features = import_embeddings(store, index)
    pcfg = cfg.protocol_config(**pcfg_overrides)
    if pcfg.channel_subset:
        raise ValidationError(
            "channel_subset requires recomputing features on reduced channels; "
            "run 'analyze channels' against the raw corpus instead"
        )
    split = split_enroll_verify(index, pcfg)
    scorer = cfg.scorer_config()

    held_out = set(scorer.negative_cohort) | set(cfg.reference_subjects())
    if held_out:
        split.subjects = {s: sp for s, sp in split.subjects.items() if s not in held_out}
        if not split.subjects:
            raise ValidationError("all subjects are held out as reference/negative cohort")
    negatives = None
    if scorer.kind != "distance":
        import numpy as np
        neg = [v.vec for v in features if v.meta.subject_id in set(scorer.negative_cohort)]
        if not neg:
            raise ValidationError("negative cohort has no feature vectors")
        negatives = np.stack(neg)
    return index, features, pcfg, split, scorer, negatives


def _score_pipeline(cfg, args, **pcfg_overrides):
    from ..protocol.trials import generate_trials, score_trials
    index, features, pcfg, split, scorer, negatives = _load_eval_inputs(cfg, args, **pcfg_overrides)
    ts = generate_trials(features, split, pcfg, metric=scorer.metric)
    scores = score_trials(ts, scorer, negatives)
    return index, pcfg, split, ts, scores


def _scenario_name(pcfg) -> str:
    rule = f"first{pcfg.enroll_k}" if pcfg.enroll_rule == "first_k" else "explicit"
    return f"{rule}|{pcfg.verify_rule}|n{pcfg.verification_samples}"


def cmd_evaluate(cfg: RunConfig, args) -> int:
    from ..metrics.report import SubjectScores, roc_points, summarize
    from ..protocol.trials import export_trial_table, filter_by_device_pair
    index, pcfg, split, ts, scores = _score_pipeline(cfg, args)
    trials = ts.trials
    if pcfg.device_pair_filter:
        trials, scores, no_data = filter_by_device_pair(trials, scores, *pcfg.device_pair_filter)
        if no_data:
            raise ValidationError(
                f"no trials match device pair {pcfg.device_pair_filter} (no data available)"
            )
    run = _run_dir(cfg, "evaluate")

    trials_path = os.path.join(run, "trials.tsv")
    export_trial_table(trials, scores, trials_path)

    name = _scenario_name(pcfg)
    ss = SubjectScores.from_rows([t.claimed_subject for t in trials],
                                 [t.genuine for t in trials], scores)
    report = summarize({name: ss}, {**_header(cfg), **pcfg.echo()})
    _write_report(cfg, run, report)
    if split.excluded:
        _write_json(os.path.join(run, "split_excluded.json"), split.excluded)

    import numpy as np
    pts = roc_points(*ss.pooled())
    np.savetxt(os.path.join(run, "roc.tsv"), pts, fmt="%.9g", delimiter="\t",
               header="far\tfrr", comments="")
    print(f"report written to {run}")
    return 0


def _write_report(cfg: RunConfig, run: str, report) -> None:
    formats = cfg.report.get("formats", ["text", "json"])
    if "json" in formats:
        _write_json(os.path.join(run, "report.json"), report.to_dict())
    if "text" in formats:
        with open(os.path.join(run, "report.txt"), "w") as f:
            f.write(json.dumps(report.protocol, sort_keys=True) + "\n\n")
            f.write(report.render_text())


def cmd_report(cfg: RunConfig, args) -> int:
    from ..metrics.report import SubjectScores, summarize
    from ..protocol.trials import import_trial_table
    trials, scores = import_trial_table(args.trials)
    pcfg = cfg.protocol_config()
    ss = SubjectScores.from_rows([t.claimed_subject for t in trials],
                                 [t.genuine for t in trials], scores)
    report = summarize({_scenario_name(pcfg): ss}, {**_header(cfg), **pcfg.echo()})
    run = _run_dir(cfg, "report")
    _write_report(cfg, run, report)
    print(f"report written to {run}")
    return 0


# ----------------------------------------------------------------- analyze

def _analyze_time_intervals(cfg, args) -> tuple[str, list[dict]]:
    import numpy as np
    from ..metrics.roc import eer_from_scores
    from ..protocol.trials import bin_by_interval
    _, pcfg, _, ts, scores = _score_pipeline(cfg, args)
    binned, unbinned = bin_by_interval(ts.trials, scores, pcfg.interval_bins)
    rows = []
    for label, (trials, sc) in binned.items():
        gen = sc[[t.genuine for t in trials]] if trials else np.empty(0)
        imp = sc[[not t.genuine for t in trials]] if trials else np.empty(0)
        row = {"bin": label, "n_genuine": int(gen.size), "n_impostor": int(imp.size)}
        row["eer"] = eer_from_scores(gen, imp) if gen.size and imp.size else None
        rows.append(row)
    rows.append({"bin": "(unbinned)", "n_genuine": unbinned, "n_impostor": 0, "eer": None})
    return "time-intervals", rows


def _analyze_subject_count(cfg, args) -> tuple[str, list[dict]]:
    from ..protocol.bootstrap import bootstrap_subject_count
    _, pcfg, split, ts, scores = _score_pipeline(cfg, args)
    acfg = cfg.analysis.get("subject_count", {})
    lo = args.min or int(acfg.get("min", 2))
    hi = args.max or int(acfg.get("max", len(split.subjects)))
    step = args.step or int(acfg.get("step", max(1, (hi - lo) // 8)))
    repeats = args.repeats or int(acfg.get("repeats", 50))
    n_values = sorted(set(list(range(lo, hi + 1, step)) + [hi]))
    rows = bootstrap_subject_count(ts.trials, scores, n_values, repeats, int(cfg.seed))
    return "subject-count", [
        {"n_subjects": r.n_subjects, "mean_eer": r.mean_eer, "std_eer": r.std_eer,
         "repeats": r.n_repeats} for r in rows
    ]


def _analyze_cross_device(cfg, args) -> tuple[str, list[dict]]:
    import numpy as np
    from ..metrics.roc import eer_from_scores
    from ..protocol.trials import filter_by_device_pair
    index, pcfg, _, ts, scores = _score_pipeline(cfg, args)
    devices = sorted({r.meta.device_id for r in index.sessions})
    rows = []
    for enroll_dev in devices:
        for probe_dev in devices:
            kept, sc, no_data = filter_by_device_pair(ts.trials, scores, enroll_dev, probe_dev)
            row = {"enroll_device": enroll_dev, "probe_device": probe_dev,
                   "n_genuine": sum(t.genuine for t in kept),
                   "n_impostor": sum(not t.genuine for t in kept)}
            if no_data or row["n_genuine"] == 0 or row["n_impostor"] == 0:
                row["eer"] = None
                row["no_data"] = True
            else:
                gen = sc[[t.genuine for t in kept]]
                imp = sc[[not t.genuine for t in kept]]
                row["eer"] = eer_from_scores(gen, imp)
                row["no_data"] = False
            rows.append(row)
    return "cross-device", rows


def _analyze_channels(cfg, args) -> tuple[str, list[dict]]:
    import numpy as np
    from ..corpus.io import load_manifest, load_session_epochs
    from ..features.ar import ar_features
    from ..features.psd import psd_features
    from ..features.spec import FeatureVector
    from ..metrics.roc import eer_from_scores
    from ..preprocess.pipeline import preprocess_recording
    from ..protocol.presets import CHANNEL_PRESETS, preset_labels, select_channels
    from ..protocol.split import split_enroll_verify
    from ..protocol.trials import generate_trials, score_trials

    index = load_manifest(args.corpus or cfg.path("corpus"))
    if index.preprocessed:
        raise ValidationError("channel analysis starts from the raw corpus "
                              "(reduced-channel preprocessing differs from full-channel)")
    presets = [args.preset] if args.preset else ["full"] + sorted(CHANNEL_PRESETS)
    fspec = cfg.feature_spec()
    pcfg = cfg.protocol_config()
    scorer = cfg.scorer_config()
    ppcfg = cfg.preprocess_config()
    split = split_enroll_verify(index, pcfg)

    rows = []
    for preset in presets:
        labels = index.channels if preset == "full" else preset_labels(preset)
        vectors = []
        for rec in index.sessions:
            epochs = load_session_epochs(index, rec)
            if preset != "full":
                epochs, labels = select_channels(epochs, index.channels, preset)
            recording = epochs.transpose(1, 0, 2).reshape(epochs.shape[1], -1)
            clean = preprocess_recording(recording, index.rate_hz, ppcfg, labels=labels)
            t_len = int(round(index.rate_hz))
            eps = clean.reshape(clean.shape[0], epochs.shape[0], t_len).transpose(1, 0, 2)
            parts = []
            if fspec.kind in ("psd", "psd+ar"):
                parts.append(psd_features(eps, index.rate_hz, fspec.psd))
            if fspec.kind in ("ar", "psd+ar"):
                parts.append(ar_features(eps, fspec.ar, labels=labels))
            mat = np.concatenate(parts, axis=1)
            fid = f"{fspec.feature_id()}-{preset}"
            for e in range(mat.shape[0]):
                vectors.append(FeatureVector(meta=rec.meta, epoch_index=e,
                                             vec=mat[e], feature_id=fid))
        ts = generate_trials(vectors, split, pcfg, metric=scorer.metric)
        scores = score_trials(ts, scorer)
        gen = scores[[t.genuine for t in ts.trials]]
        imp = scores[[not t.genuine for t in ts.trials]]
        rows.append({"preset": preset, "n_channels": len(labels),
                     "eer": eer_from_scores(gen, imp)})
    return "channels", rows


def _analyze_scaling(cfg, args) -> tuple[str, list[dict]]:
    from ..protocol.scaling import fit_scaling_curve
    points_path = args.points or cfg.analysis.get("scaling", {}).get("points_file")
    if not points_path:
        raise ValidationError("scaling analysis needs a points file (--points or config)")
    points = []
    try:
        with open(points_path) as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("n"):
                    continue
                n, eer = line.replace(",", "\t").split("\t")[:2] if "\t" in line \
                    else line.split()[:2]
                points.append((float(n), float(eer)))
    except FileNotFoundError:
        raise DataError(f"points file not found: {points_path}")
    fit = fit_scaling_curve(points)
    rows = [{"intercept": fit.intercept, "slope": fit.slope,
             "max_observed_n": fit.max_observed_n}]
    targets = [float(x) for x in (args.predict.split(",") if args.predict else [])]
    for n in targets:
        value, extrapolated = fit.predict(n)
        rows.append({"predict_n": n, "eer": value, "extrapolated": extrapolated})
    return "scaling", rows


def _analyze_enroll_update(cfg, args) -> tuple[str, list[dict]]:
    import numpy as np
    from ..protocol.enrollment_update import simulate_enrollment_update
    from ..protocol.split import EvalSplit
    index, features, pcfg, split, scorer, _ = _load_eval_inputs(cfg, args)
    acfg = cfg.analysis.get("enroll_update", {})
    frac = float(acfg.get("calibration_fraction", 0.25))
    far_target = float(acfg.get("far_target", 0.01))
    cap = acfg.get("cap")

    subjects = split.subject_ids()
    rng = np.random.default_rng(int(cfg.seed))
    n_cal = max(2, int(round(frac * len(subjects))))
    if n_cal >= len(subjects):
        raise ValidationError("calibration fraction leaves no evaluation subjects")
    perm = list(rng.permutation(subjects))
    cal_ids, eval_ids = set(perm[:n_cal]), set(perm[n_cal:])
    cal_split = EvalSplit(subjects={s: sp for s, sp in split.subjects.items() if s in cal_ids})
    eval_split = EvalSplit(subjects={s: sp for s, sp in split.subjects.items() if s in eval_ids})

    sim = simulate_enrollment_update(features, eval_split, cal_split, pcfg,
                                     far_target=far_target,
                                     cap=int(cap) if cap else None,
                                     metric=scorer.metric)
    rows = [{"bin": r.label, "n_genuine": r.n_genuine, "n_impostor": r.n_impostor,
             "frr_baseline": r.frr_baseline, "far_baseline": r.far_baseline,
             "frr_updating": r.frr_updating, "far_updating": r.far_updating}
            for r in sim.rows]
    rows.append({"bin": "(summary)", "threshold": sim.threshold,
                 "genuine_accepts": sim.n_genuine_accepts,
                 "impostor_accepts": sim.n_impostor_accepts,
                 "augmentations": sim.n_augmentations})
    return "enroll-update", rows


ANALYSES = {
    "time-intervals": _analyze_time_intervals,
    "subject-count": _analyze_subject_count,
    "cross-device": _analyze_cross_device,
    "channels": _analyze_channels,
    "scaling": _analyze_scaling,
    "enroll-update": _analyze_enroll_update,
}


def cmd_analyze(cfg: RunConfig, args) -> int:
    if args.analysis not in ANALYSES:
        raise ValidationError(
            f"unknown analysis {args.analysis!r}; options: {sorted(ANALYSES)}"
        )
    name, rows = ANALYSES[args.analysis](cfg, args)
    run = _run_dir(cfg, "analyze", name)
    _write_json(os.path.join(run, f"{name}.json"), {"header": _header(cfg), "rows": rows})
    with open(os.path.join(run, f"{name}.tsv"), "w") as f:
        if rows:
            keys = sorted({k for r in rows for k in r})
            f.write("\t".join(keys) + "\n")
            for r in rows:
                f.write("\t".join(_cell(r.get(k)) for k in keys) + "\n")
    print(f"analysis '{name}' written to {run}")
    return 0


def _cell(v) -> str:
    if v is None:
        return "no_data"
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegauth",
        description="Multi-session EEG biometric verification evaluation",
    )
    parser.add_argument("--config", help=f"config file path (default: ${ENV_CONFIG})")
    parser.add_argument("--seed", type=int, help="override config seed")
    parser.add_argument("--out-dir", help="override output directory")
    parser.add_argument("--threads", type=int, help="cap BLAS worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--subjects", type=int)
    p.add_argument("--sessions", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--drift", type=float)
    p.add_argument("--noise", type=float)
    p.add_argument("--out")

    p = sub.add_parser("preprocess", help="run the preprocessing chain over a corpus")
    p.add_argument("--corpus")
    p.add_argument("--out")

    p = sub.add_parser("extract", help="extract features into the interchange store")
    p.add_argument("--corpus")
    p.add_argument("--out")

    p = sub.add_parser("evaluate", help="enumerate trials, score, and report")
    p.add_argument("--corpus")
    p.add_argument("--features")
    p.add_argument("--verification-samples", type=int, dest="verification_samples")
    p.add_argument("--enroll-k", type=int, dest="enroll_k")

    p = sub.add_parser("analyze", help="run one analysis")
    p.add_argument("analysis", help=f"one of {sorted(ANALYSES)}")
    p.add_argument("--corpus")
    p.add_argument("--features")
    p.add_argument("--preset")
    p.add_argument("--points")
    p.add_argument("--predict")
    p.add_argument("--min", type=int)
    p.add_argument("--max", type=int)
    p.add_argument("--step", type=int)
    p.add_argument("--repeats", type=int)

    p = sub.add_parser("report", help="regenerate a report from a trial table")
    p.add_argument("--trials", required=True)
    return parser


COMMANDS = {
    "synth": cmd_synth,
    "preprocess": cmd_preprocess,
    "extract": cmd_extract,
    "evaluate": cmd_evaluate,
    "analyze": cmd_analyze,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out_dir:
            cfg.paths["out_dir"] = args.out_dir
        if args.command == "synth":
            for key, attr in (("n_subjects", "subjects"), ("sessions_per_subject", "sessions"),
                              ("epochs_per_session", "epochs"), ("session_drift_scale", "drift"),
                              ("noise_scale", "noise")):
                value = getattr(args, attr, None)
                if value is not None:
                    cfg.synth[key] = value
        if args.command == "evaluate":
            for key in ("verification_samples", "enroll_k"):
                value = getattr(args, key, None)
                if value is not None:
                    cfg.protocol[key] = value
        return COMMANDS[args.command](cfg, args)
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return 2
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 3
    except EegAuthError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
