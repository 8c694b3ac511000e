"""Command-line interface.

Subcommands cover the full pipeline (ingest, features, train, eval, window,
importance), draft scoring, and the HTTP service. `score` works against a
local model file or, with --server, as a thin client of a running service.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .pipeline import (
    Config,
    ConfigError,
    ModelMismatch,
    cmd_eval,
    cmd_features,
    cmd_importance,
    cmd_ingest,
    cmd_train,
    cmd_window,
    load_resources,
    score_draft,
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="random seed (default 42)")
    parser.add_argument("--out", help="output directory (default ./out)")
    parser.add_argument("--phonetic-dict", help="pronunciation dictionary path")
    parser.add_argument("--emotion-lexicon", help="emotion lexicon path")
    parser.add_argument("--category-lexicon", help="category lexicon path")
    parser.add_argument("--names-file", help="given-names file path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ovation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse transcripts into labeled windows")
    _add_common(p)
    p.add_argument("--corpus-dir", help="directory of .txt transcripts")
    p.add_argument("--window-size", type=int, help="sentences per window (default 1)")

    p = sub.add_parser("features", help="extract the feature matrix")
    _add_common(p)
    p.add_argument("--dataset", help="dataset.jsonl path (default <out>/dataset.jsonl)")

    p = sub.add_parser("train", help="fit the penalized model")
    _add_common(p)
    p.add_argument("--features", help="features.csv path (default <out>/features.csv)")
    p.add_argument("--lambda", dest="lambda_override", type=float,
                   help="fixed penalty instead of cross-validated selection")
    p.add_argument("--k", type=int, help="cross-validation folds (default 10)")

    p = sub.add_parser("eval", help="per-family ablation metrics")
    _add_common(p)
    p.add_argument("--features", help="features.csv path (default <out>/features.csv)")
    p.add_argument("--lambda", dest="lambda_override", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--nested", action="store_true",
                   help="reselect the penalty inside each fold")

    p = sub.add_parser("window", help="accuracy versus window size")
    _add_common(p)
    p.add_argument("--corpus-dir", help="directory of .txt transcripts")
    p.add_argument("--max-window", type=int, help="largest window (default 6)")
    p.add_argument("--k", type=int)
    p.add_argument("--nested", action="store_true")

    p = sub.add_parser("importance", help="relative-importance ranking")
    _add_common(p)
    p.add_argument("--model", help="model.json path (default <out>/model.json)")

    p = sub.add_parser("score", help="score a draft per sentence")
    _add_common(p)
    p.add_argument("--model", help="model.json path (default <out>/model.json)")
    p.add_argument("--server", help="score via a running service instead of locally")
    p.add_argument("draft", help="draft text file, or - for stdin")

    p = sub.add_parser("serve", help="run the HTTP scoring service")
    _add_common(p)
    p.add_argument("--model", help="model.json path (default <out>/model.json)")
    p.add_argument("--addr", help="listen address host:port (default 127.0.0.1:8000)")
    p.add_argument("--cors-origin", help="allowed browser origin (default *)")

    return parser


def make_config(args: argparse.Namespace) -> Config:
    config = Config.from_file(args.config) if args.config else Config()
    overrides = {
        "seed": args.seed,
        "out_dir": args.out,
        "phonetic_dict": args.phonetic_dict,
        "emotion_lexicon": args.emotion_lexicon,
        "category_lexicon": args.category_lexicon,
        "names_file": args.names_file,
        "corpus_dir": getattr(args, "corpus_dir", None),
        "window_size": getattr(args, "window_size", None),
        "k_folds": getattr(args, "k", None),
        "lambda_override": getattr(args, "lambda_override", None),
        "addr": getattr(args, "addr", None),
        "cors_origin": getattr(args, "cors_origin", None),
        "max_window": getattr(args, "max_window", None),
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if getattr(args, "nested", False):
        config.nested = True
    return config


def _print_result(result: dict) -> None:
    for key, value in result.items():
        print(f"{key}: {value}")


def _read_draft(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _run_score(args: argparse.Namespace, config: Config) -> None:
    draft = _read_draft(args.draft)
    if args.server:
        import httpx

        resp = httpx.post(args.server.rstrip("/") + "/score", json={"text": draft})
        resp.raise_for_status()
        print(json.dumps(resp.json(), indent=2))
        return
    from .lasso import LassoModel

    model_path = args.model or str(Path(config.out_dir) / "model.json")
    model = LassoModel.load(model_path)
    bundle, registry = load_resources(config)
    results = score_draft(model, bundle, registry, draft)
    payload = {"sentences": [
        {
            "text": r.text,
            "probability": r.probability,
            "fired_devices": [
                {"feature_name": name, "value": value}
                for name, value in r.fired_devices
            ],
        }
        for r in results
    ]}
    print(json.dumps(payload, indent=2))


def _run_serve(args: argparse.Namespace, config: Config) -> None:
    import uvicorn

    from .service import build_store, create_app

    model_path = args.model or str(Path(config.out_dir) / "model.json")
    store = build_store(model_path, config)
    app = create_app(store, cors_origin=config.cors_origin)
    host, _, port = config.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = make_config(args)
    try:
        if args.command == "ingest":
            _print_result(cmd_ingest(config))
        elif args.command == "features":
            _print_result(cmd_features(config, args.dataset))
        elif args.command == "train":
            _print_result(cmd_train(config, args.features))
        elif args.command == "eval":
            _print_result(cmd_eval(config, args.features))
        elif args.command == "window":
            _print_result(cmd_window(config))
        elif args.command == "importance":
            _print_result(cmd_importance(config, args.model))
        elif args.command == "score":
            _run_score(args, config)
        elif args.command == "serve":
            _run_serve(args, config)
        else:  # pragma: no cover - argparse enforces the choices
            return 2
    except (ConfigError, ModelMismatch, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # surface a diagnostic, not a traceback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
