"""Command-line front end: train an encoder and export embeddings."""

from __future__ import annotations

import argparse
import sys

from .corpus_reader import load_corpus
from .export import export_embeddings
from .scaling import scaling_experiment
from .train import TrainConfig, train_encoder


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="eegauth-train")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the encoder and export embeddings")
    p.add_argument("--corpus", required=True, help="preprocessed corpus directory")
    p.add_argument("--train-subjects", required=True, help="comma-separated subject ids")
    p.add_argument("--eval-subjects", required=True, help="comma-separated subject ids")
    p.add_argument("--out", required=True, help="embedding interchange output path")
    p.add_argument("--log", default=None, help="training log path (epoch, loss)")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batches-per-epoch", type=int, default=4)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("scaling", help="EER vs training cohort size")
    p.add_argument("--corpus", required=True)
    p.add_argument("--train-subjects", required=True)
    p.add_argument("--eval-subjects", required=True)
    p.add_argument("--counts", required=True, help="comma-separated subject counts")
    p.add_argument("--workdir", required=True)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batches-per-epoch", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    corpus = load_corpus(args.corpus)
    train_subjects = tuple(s for s in args.train_subjects.split(",") if s)
    eval_subjects = tuple(s for s in args.eval_subjects.split(",") if s)
    cfg = TrainConfig(subjects=train_subjects, epochs=args.epochs,
                      batches_per_epoch=args.batches_per_epoch,
                      learning_rate=getattr(args, "lr", 1e-3), seed=args.seed)
    try:
        if args.command == "train":
            result = train_encoder(corpus, cfg, eval_subjects=eval_subjects)
            if args.log:
                result.write_log(args.log)
            n = export_embeddings(result.model, corpus, args.out, subjects=eval_subjects)
            first, last = result.loss_log[0][1], result.loss_log[-1][1]
            print(f"trained {cfg.epochs} epochs (loss {first:.4f} -> {last:.4f}); "
                  f"exported {n} embeddings to {args.out}")
        else:
            counts = [int(c) for c in args.counts.split(",")]
            points = scaling_experiment(corpus, args.corpus, counts, cfg,
                                        eval_subjects, args.workdir)
            print(f"scaling points: {points} -> {args.workdir}/scaling_points.tsv")
        return 0
    except (ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
