"""End-to-end pipeline commands and draft scoring.

Each command reads and writes files under a working directory so the whole
flow (ingest -> features -> train -> eval/window/importance) can be rerun
reproducibly; identical seeds give byte-identical outputs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import evaluate, lasso
from .corpus import (
    LabeledExample,
    Sentence,
    build_examples,
    eligible_chunk_count,
    load_corpus_dir,
    read_examples_jsonl,
    segment_into_chunks,
    split_sentences,
    write_examples_jsonl,
)
from .features import (
    FeatureRegistry,
    extract,
    export_features_csv,
    registry_for_bundle,
)
from .lexicons import LexiconBundle, load_bundle

# Reference values from the TED 2006-2016 snapshot this pipeline is meant
# to be compared against (talks with in-speech applause, applause chunks,
# training examples, overall 10-fold accuracy, gratitude-family precision).
REFERENCE_TALKS = 904
REFERENCE_APPLAUSE_CHUNKS = 3178
REFERENCE_EXAMPLES = 6356
REFERENCE_OVERALL_ACCURACY = 0.719
REFERENCE_GRATITUDE_PRECISION = 0.717


class ModelMismatch(ValueError):
    """The loaded model was trained against a different feature registry."""


class ConfigError(ValueError):
    """Invalid or incomplete configuration."""


def _packaged(name: str) -> str:
    return str(resources.files("ovation").joinpath("data", name))


@dataclass
class Config:
    phonetic_dict: str = field(default_factory=lambda: _packaged("phonetic_mini.dict"))
    emotion_lexicon: str = field(default_factory=lambda: _packaged("emotions_starter.tsv"))
    category_lexicon: str = field(default_factory=lambda: _packaged("category_lexicon.tsv"))
    names_file: str = field(default_factory=lambda: _packaged("names.txt"))
    name_min_count: int = 0
    corpus_dir: str = ""
    seed: int = 42
    window_size: int = 1
    k_folds: int = 10
    lambda_override: float | None = None
    out_dir: str = "out"
    addr: str = "127.0.0.1:8000"
    cors_origin: str = "*"
    nested: bool = False
    max_window: int = 6

    @classmethod
    def from_file(cls, path: str | Path) -> "Config":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def validate_resources(self, need_corpus: bool = False) -> None:
        """Check every configured input path; report all missing at once."""
        checks = [
            ("phonetic_dict", self.phonetic_dict),
            ("emotion_lexicon", self.emotion_lexicon),
            ("category_lexicon", self.category_lexicon),
            ("names_file", self.names_file),
        ]
        if need_corpus:
            checks.append(("corpus_dir", self.corpus_dir))
        missing = [
            f"{name}: {path!r}" for name, path in checks
            if not path or not Path(path).exists()
        ]
        if missing:
            raise ConfigError("missing resources:\n  " + "\n  ".join(missing))


def load_resources(config: Config) -> tuple[LexiconBundle, FeatureRegistry]:
    config.validate_resources()
    bundle = load_bundle(
        config.phonetic_dict,
        config.emotion_lexicon,
        config.category_lexicon,
        config.names_file,
        name_min_count=config.name_min_count,
    )
    return bundle, registry_for_bundle(bundle)


def _out(config: Config) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ingest(config: Config) -> dict:
    """Parse the corpus directory into labeled windows (dataset.jsonl) and
    report corpus bookkeeping next to the reference snapshot counts."""
    config.validate_resources(need_corpus=True)
    out = _out(config)
    transcripts = load_corpus_dir(config.corpus_dir)
    chunks = [c for t in transcripts for c in segment_into_chunks(t)]
    applause_chunks = [c for c in chunks if c.terminated_by_applause]
    talks_with_applause = len({c.talk_id for c in applause_chunks})
    examples = build_examples(chunks, config.window_size, config.seed)
    path = out / "dataset.jsonl"
    write_examples_jsonl(examples, path)
    counts = {
        "talks_parsed": len(transcripts),
        "talks_with_applause": talks_with_applause,
        "applause_chunks": len(applause_chunks),
        "eligible_chunks": eligible_chunk_count(chunks, config.window_size),
        "examples": len(examples),
        "reference_talks": REFERENCE_TALKS,
        "reference_applause_chunks": REFERENCE_APPLAUSE_CHUNKS,
        "reference_examples": REFERENCE_EXAMPLES,
        "dataset": str(path),
    }
    return counts


def cmd_features(config: Config, dataset_path: str | Path | None = None) -> dict:
    """Extract the feature matrix for a dataset into features.csv."""
    bundle, registry = load_resources(config)
    out = _out(config)
    dataset = Path(dataset_path) if dataset_path else out / "dataset.jsonl"
    examples = read_examples_jsonl(dataset)
    path = out / "features.csv"
    rows = export_features_csv(examples, bundle, registry, path)
    return {"rows": rows, "columns": len(registry), "features": str(path)}


def load_feature_matrix(path: str | Path) -> tuple[lasso.DesignMatrix, list[str]]:
    """Read a features.csv back into a design matrix (plus talk ids)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        names = tuple(header[:-2])
        rows, labels, talk_ids = [], [], []
        for record in reader:
            rows.append([float(v) for v in record[:-2]])
            talk_ids.append(record[-2])
            labels.append(1 if record[-1] == "pos" else 0)
    matrix = lasso.DesignMatrix(np.array(rows), np.array(labels), names)
    return matrix, talk_ids


def cmd_train(config: Config, features_path: str | Path | None = None) -> dict:
    """Fit the model (cross-validated penalty unless overridden), write
    model.json and the coefficient report, and return fit diagnostics."""
    bundle, registry = load_resources(config)
    out = _out(config)
    path = Path(features_path) if features_path else out / "features.csv"
    matrix, _ = load_feature_matrix(path)
    if tuple(matrix.feature_names) != tuple(registry.names):
        raise ModelMismatch("features.csv columns do not match the lexicon registry")
    if config.lambda_override is not None:
        lam = float(config.lambda_override)
    else:
        lam = lasso.cv_select_lambda(matrix, k=config.k_folds, seed=config.seed)
    model = lasso.fit(
        matrix, lam, seed=config.seed, registry_fingerprint=registry.fingerprint()
    )
    diag = lasso.diagnostics(matrix, model)
    model_path = out / "model.json"
    model.save(model_path)
    evaluate.write_coefficients_csv(out / "coefficients.csv", model, diag)
    return {
        "lambda": lam,
        "nonzero_coefficients": int(np.sum(model.std_coefficients != 0)),
        "r_squared": diag.r_squared,
        "pred_true_correlation": diag.pred_true_correlation,
        "model": str(model_path),
        "coefficients": str(out / "coefficients.csv"),
    }


def cmd_eval(config: Config, features_path: str | Path | None = None) -> dict:
    """Per-family ablation plus overall metrics, written to ablation.csv."""
    bundle, registry = load_resources(config)
    out = _out(config)
    path = Path(features_path) if features_path else out / "features.csv"
    matrix, _ = load_feature_matrix(path)
    if tuple(matrix.feature_names) != tuple(registry.names):
        raise ModelMismatch("features.csv columns do not match the lexicon registry")
    results = evaluate.family_ablation(
        matrix, registry, k=config.k_folds, seed=config.seed,
        lam=config.lambda_override, nested=config.nested,
    )
    results["baseline_majority"] = evaluate.majority_metrics(matrix.y)
    evaluate.write_ablation_csv(out / "ablation.csv", results)
    overall = results["overall"]
    return {
        "overall_accuracy": overall.accuracy,
        "reference_overall_accuracy": REFERENCE_OVERALL_ACCURACY,
        "accuracy_delta": overall.accuracy - REFERENCE_OVERALL_ACCURACY,
        "gratitude_precision": results["gratitude"].precision,
        "reference_gratitude_precision": REFERENCE_GRATITUDE_PRECISION,
        "majority_baseline_accuracy": results["baseline_majority"].accuracy,
        "ablation": str(out / "ablation.csv"),
    }


def cmd_window(config: Config) -> dict:
    """Rebuild examples for window sizes 1..max_window and record accuracy."""
    config.validate_resources(need_corpus=True)
    bundle, registry = load_resources(config)
    out = _out(config)
    transcripts = load_corpus_dir(config.corpus_dir)
    chunks = [c for t in transcripts for c in segment_into_chunks(t)]
    curve = evaluate.window_experiment(
        chunks, bundle, registry,
        max_window=config.max_window, k=config.k_folds, seed=config.seed,
        nested=config.nested,
    )
    evaluate.write_window_csv(out / "window_curve.csv", curve)
    return {"window_curve": curve, "file": str(out / "window_curve.csv")}


def cmd_importance(config: Config, model_path: str | Path | None = None) -> dict:
    """Write the relative-importance ranking of the trained model."""
    out = _out(config)
    path = Path(model_path) if model_path else out / "model.json"
    model = lasso.LassoModel.load(path)
    importance = lasso.relative_importance(model)
    evaluate.write_importance_csv(out / "importance.csv", importance)
    return {"features": len(importance), "file": str(out / "importance.csv")}


@dataclass(frozen=True)
class ScoreResult:
    text: str
    probability: float
    fired_devices: tuple[tuple[str, float], ...]


def _fired_devices(
    model: lasso.LassoModel, registry: FeatureRegistry, values: np.ndarray
) -> tuple[tuple[str, float], ...]:
    """Binary features that fired, plus the top three ratio features by
    absolute standardized contribution |beta_j * z_j|."""
    z = lasso.apply_standardization(values, model.feature_means, model.feature_sds)
    contributions = np.abs(model.std_coefficients * z)
    fired: list[tuple[str, float]] = []
    ratio_candidates: list[tuple[float, int]] = []
    for j, entry in enumerate(registry.entries):
        if entry.kind == "binary":
            if values[j] != 0.0:
                fired.append((entry.name, float(values[j])))
        elif contributions[j] > 0.0:
            ratio_candidates.append((float(contributions[j]), j))
    ratio_candidates.sort(key=lambda t: (-t[0], t[1]))
    for _, j in ratio_candidates[:3]:
        fired.append((registry.entries[j].name, float(values[j])))
    return tuple(fired)


def score_draft(
    model: lasso.LassoModel,
    bundle: LexiconBundle,
    registry: FeatureRegistry,
    draft_text: str,
) -> list[ScoreResult]:
    """Per-sentence applause probability and fired devices for a draft."""
    if model.registry_fingerprint and model.registry_fingerprint != registry.fingerprint():
        raise ModelMismatch(
            "model was trained against a different feature registry; "
            "retrain or supply the matching lexicons"
        )
    results: list[ScoreResult] = []
    for sentence in split_sentences(draft_text):
        vec = extract([sentence], bundle, registry)
        values = np.array(vec.values)
        results.append(ScoreResult(
            text=sentence.text,
            probability=model.predict_proba(values),
            fired_devices=_fired_devices(model, registry, values),
        ))
    return results
