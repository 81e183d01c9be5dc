"""Command line: train a detector, or serve one over stdio/http."""

from __future__ import annotations

import argparse
import sys

from .config import ScorerConfig
from .data import load_instances
from .model import NeuralScorer, fine_tune
from .serve import serve_http, serve_stdio


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="scorer-neural")
    sub = parser.add_subparsers(dest="command", required=True)

    train_p = sub.add_parser("train", help="fine-tune on normalized instances")
    train_p.add_argument("--instances", required=True)
    train_p.add_argument("--out", required=True)
    train_p.add_argument("--pretrained-model", default=ScorerConfig.pretrained_model)
    train_p.add_argument("--learning-rate", type=float, default=ScorerConfig.learning_rate)
    train_p.add_argument("--epochs", type=int, default=ScorerConfig.epochs)
    train_p.add_argument("--batch-size", type=int, default=ScorerConfig.batch_size)
    train_p.add_argument("--seed", type=int, default=ScorerConfig.seed)
    train_p.add_argument("--max-seq-length", type=int, default=ScorerConfig.max_seq_length)

    serve_p = sub.add_parser("serve", help="speak the scorer wire protocol")
    serve_p.add_argument("--model", required=True)
    serve_p.add_argument("--transport", choices=["stdio", "http"], default="stdio")
    serve_p.add_argument("--bind", default="127.0.0.1:8600")

    args = parser.parse_args(argv)

    if args.command == "train":
        config = ScorerConfig(
            pretrained_model=args.pretrained_model,
            learning_rate=args.learning_rate,
            epochs=args.epochs,
            batch_size=args.batch_size,
            seed=args.seed,
            max_seq_length=args.max_seq_length,
        )
        train = load_instances(args.instances, split="train")
        dev = load_instances(args.instances, split="dev")
        out_dir = fine_tune(train, dev, config, args.out)
        print(f"saved model to {out_dir}", file=sys.stderr)
        return 0

    scorer = NeuralScorer.load(args.model)
    if args.transport == "stdio":
        serve_stdio(scorer.score_texts)
    else:
        host, _, port = args.bind.partition(":")
        serve_http(scorer.score_texts, host or "127.0.0.1", int(port or 8600))
    return 0


if __name__ == "__main__":
    sys.exit(main())
