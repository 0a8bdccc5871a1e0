"""Experiment matrix execution: config parsing, cell scheduling, report emission.

A run enumerates language x representation x pca x classifier cells, executes
each pipeline, and persists per-cell predictions, a fitted model file, and a
completion record. Report files that must reproduce byte-for-byte under a
fixed seed (the master report, the f1/confusion/ablation views, predictions)
never contain wall-clock values; timings go to a separate out/timing/
directory that is only written for single-worker runs, since concurrent
cells distort wall-clock measurements.

Every cell gets its own seed derived by hashing the master seed together
with the cell coordinates, so editing one axis of the config cannot shift
the randomness of unrelated cells.

Scored F1 values are computed from the persisted prediction files, not from
the in-memory matrices, so the emitted numbers are guaranteed to agree with
what an external re-scoring of those files would produce.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .corpus import EMOTIONS, load_split
from .dense_features import (
    FallbackPolicy,
    LlmBackendConfig,
    embed_documents,
    load_precomputed_embeddings,
    load_word_vectors,
)
from .errors import ConfigError, DataError, FormatError
from .evaluate import (
    EvalReport,
    TimingRecord,
    confusion_rates,
    f1_macro,
    format_confusion_table,
    format_seconds,
    format_text_table,
    time_run,
)
from .learn import ClassifierSpec, default_voting_spec, fit, grid_search_mlp
from .pipeline import PipelineModel, read_predictions, write_predictions
from .reduce import ReductionConfig, fit_pca, normalize_rows, transform_pca
from .sparse_features import fit_bow, fit_tfidf, save_vocabulary, transform_bow, transform_tfidf
from .serialize import load_model, save_model
from .tokenize import Tokenizer, TokenizerSpec, tokenize_split

REPRESENTATION_KINDS = ("bow", "tfidf", "word-vectors", "precomputed")

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["data_dir", "languages", "representations", "classifiers"],
    "additionalProperties": False,
    "properties": {
        "data_dir": {"type": "string"},
        "languages": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "string", "minLength": 1},
        },
        "representations": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "kind": {"enum": list(REPRESENTATION_KINDS)},
                    "vectors": {
                        "type": "object",
                        "additionalProperties": {"type": "string"},
                    },
                    "embeddings": {
                        "type": "object",
                        "additionalProperties": {
                            "type": "object",
                            "required": ["train", "dev", "test"],
                            "additionalProperties": False,
                            "properties": {
                                "train": {"type": "string"},
                                "dev": {"type": "string"},
                                "test": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
        "classifiers": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "kind": {"enum": ["dt", "knn", "rf", "svm", "mlp", "voting"]},
                    "hyperparameters": {"type": "object"},
                    "members": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["kind"],
                            "additionalProperties": False,
                            "properties": {
                                "kind": {"enum": ["dt", "knn", "rf", "svm", "mlp"]},
                                "hyperparameters": {"type": "object"},
                            },
                        },
                    },
                    "grid": {
                        "type": "object",
                        "minProperties": 1,
                        "additionalProperties": {"type": "array", "minItems": 1},
                    },
                },
            },
        },
        "reduction": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "normalize": {"type": "boolean"},
                "components": {
                    "anyOf": [
                        {"const": "all"},
                        {"type": "integer", "minimum": 1},
                        {
                            "type": "number",
                            "exclusiveMinimum": 0,
                            "exclusiveMaximum": 1,
                        },
                    ]
                },
                "pca": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "boolean"},
                },
            },
        },
        "tokenizer": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["unicode-words", "whitespace", "external-vocab"]},
                "lowercase": {"type": "boolean"},
                "vocab_path": {"type": "string"},
            },
        },
        "fallback": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "static_map": {
                    "type": "object",
                    "additionalProperties": {"type": "string"},
                },
                "display_names": {
                    "type": "object",
                    "additionalProperties": {"type": "string"},
                },
                "cache_path": {"type": "string"},
                "llm": {
                    "type": "object",
                    "required": ["endpoint", "model"],
                    "additionalProperties": False,
                    "properties": {
                        "endpoint": {"type": "string"},
                        "model": {"type": "string"},
                        "timeout_seconds": {"type": "number", "exclusiveMinimum": 0},
                        "prompt_template": {"type": "string"},
                    },
                },
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "out_dir": {"type": "string"},
        "workers": {"type": "integer", "minimum": 1},
    },
}


@dataclass(frozen=True)
class RepresentationConfig:
    name: str
    kind: str
    vector_paths: dict = field(default_factory=dict)  # lang -> vector file
    split_paths: dict = field(default_factory=dict)  # lang -> {role: file}


@dataclass(frozen=True)
class ClassifierConfig:
    name: str
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    members: tuple = ()  # (kind, hyperparameters) pairs for voting
    grid: dict | None = None

    def spec(self, seed: int) -> ClassifierSpec:
        if self.kind == "voting":
            if self.members:
                members = tuple(
                    ClassifierSpec(kind=k, hyperparameters=hp, seed=seed)
                    for k, hp in self.members
                )
                return ClassifierSpec(kind="voting", seed=seed, members=members)
            return default_voting_spec(seed)
        return ClassifierSpec(kind=self.kind, hyperparameters=self.hyperparameters, seed=seed)


@dataclass
class ExperimentConfig:
    data_dir: Path
    languages: tuple[str, ...]
    representations: tuple[RepresentationConfig, ...]
    classifiers: tuple[ClassifierConfig, ...]
    pca_axis: tuple[bool, ...] = (True,)
    normalize: bool = True
    components: object = "all"
    tokenizer: TokenizerSpec = TokenizerSpec()
    static_map: dict = field(default_factory=dict)
    display_names: dict = field(default_factory=dict)
    cache_path: str | None = None
    llm_backend: LlmBackendConfig | None = None
    seed: int = 0
    out_dir: Path = Path("out")
    workers: int = 1


@dataclass
class ReportTable:
    rows: list[EvalReport]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def all_ok(self) -> bool:
        return all(r.status == "ok" for r in self.rows)


def _schema_errors(raw, source: str) -> None:
    import jsonschema

    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if not errors:
        return
    first = errors[0]
    loc = "config"
    for p in first.absolute_path:
        loc += f"[{p}]" if isinstance(p, int) else f".{p}"
    more = "" if len(errors) == 1 else f" ({len(errors) - 1} further schema errors)"
    raise ConfigError(f"{source}: {loc}: {first.message}{more}")


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _unique_names(names, what, source):
    seen = set()
    for n in names:
        if n in seen:
            raise ConfigError(f"{source}: duplicate {what} name {n!r}")
        seen.add(n)


def parse_config(raw: dict, source: str = "config", base_dir: Path | None = None) -> ExperimentConfig:
    """Validate a raw JSON config and build an ExperimentConfig.

    Relative paths are resolved against ``base_dir`` (the config file's
    directory) when given. Referenced data and vector files must exist.
    """
    _schema_errors(raw, source)
    base = base_dir or Path(".")

    def resolve(p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else base / path

    languages = tuple(raw["languages"])
    _unique_names(languages, "language", source)

    representations = []
    for i, r in enumerate(raw["representations"]):
        kind = r["kind"]
        name = r.get("name", kind)
        if kind == "word-vectors":
            if "vectors" not in r or not r["vectors"]:
                raise ConfigError(
                    f"{source}: config.representations[{i}]: word-vectors requires "
                    "a non-empty 'vectors' language-to-file map"
                )
            paths = {lang: str(resolve(p)) for lang, p in r["vectors"].items()}
            representations.append(
                RepresentationConfig(name=name, kind=kind, vector_paths=paths)
            )
        elif kind == "precomputed":
            if "embeddings" not in r or not r["embeddings"]:
                raise ConfigError(
                    f"{source}: config.representations[{i}]: precomputed requires "
                    "a non-empty 'embeddings' map of per-split files"
                )
            split_paths = {
                lang: {role: str(resolve(p)) for role, p in roles.items()}
                for lang, roles in r["embeddings"].items()
            }
            representations.append(
                RepresentationConfig(name=name, kind=kind, split_paths=split_paths)
            )
        else:
            for key in ("vectors", "embeddings"):
                if key in r:
                    raise ConfigError(
                        f"{source}: config.representations[{i}]: {kind} does not "
                        f"accept {key!r}"
                    )
            representations.append(RepresentationConfig(name=name, kind=kind))
    _unique_names([r.name for r in representations], "representation", source)

    classifiers = []
    for i, c in enumerate(raw["classifiers"]):
        kind = c["kind"]
        name = c.get("name", kind)
        if "grid" in c and kind != "mlp":
            raise ConfigError(
                f"{source}: config.classifiers[{i}]: only mlp accepts a 'grid'"
            )
        if "members" in c and kind != "voting":
            raise ConfigError(
                f"{source}: config.classifiers[{i}]: only voting accepts 'members'"
            )
        hp = {k: _tuplify(v) for k, v in c.get("hyperparameters", {}).items()}
        members = tuple(
            (m["kind"], {k: _tuplify(v) for k, v in m.get("hyperparameters", {}).items()})
            for m in c.get("members", [])
        )
        grid = None
        if "grid" in c:
            grid = {k: [_tuplify(v) for v in vals] for k, vals in c["grid"].items()}
        classifiers.append(
            ClassifierConfig(name=name, kind=kind, hyperparameters=hp, members=members, grid=grid)
        )
    _unique_names([c.name for c in classifiers], "classifier", source)

    reduction = raw.get("reduction", {})
    components = reduction.get("components", "all")
    if isinstance(components, float) and components.is_integer() and components >= 1:
        components = int(components)

    tok_raw = raw.get("tokenizer", {})
    if "vocab_path" in tok_raw:
        tok_raw = dict(tok_raw, vocab_path=str(resolve(tok_raw["vocab_path"])))
    tokenizer = TokenizerSpec(**tok_raw)

    fb = raw.get("fallback", {})
    llm_backend = None
    if "llm" in fb:
        llm_backend = LlmBackendConfig(**fb["llm"])

    cfg = ExperimentConfig(
        data_dir=resolve(raw["data_dir"]),
        languages=languages,
        representations=tuple(representations),
        classifiers=tuple(classifiers),
        pca_axis=tuple(reduction.get("pca", [True])),
        normalize=reduction.get("normalize", True),
        components=components,
        tokenizer=tokenizer,
        static_map=dict(fb.get("static_map", {})),
        display_names=dict(fb.get("display_names", {})),
        cache_path=str(resolve(fb["cache_path"])) if "cache_path" in fb else None,
        llm_backend=llm_backend,
        seed=raw.get("seed", 0),
        out_dir=resolve(raw.get("out_dir", "out")),
        workers=raw.get("workers", 1),
    )
    _check_paths(cfg, source)
    return cfg


def _check_paths(cfg: ExperimentConfig, source: str) -> None:
    missing = []
    for lang in cfg.languages:
        for role in ("train", "dev", "test"):
            p = cfg.data_dir / lang / f"{role}.csv"
            if not p.is_file():
                missing.append(str(p))
    for rep in cfg.representations:
        for p in rep.vector_paths.values():
            if not Path(p).is_file():
                missing.append(p)
        for roles in rep.split_paths.values():
            for p in roles.values():
                if not Path(p).is_file():
                    missing.append(p)
    if cfg.tokenizer.vocab_path and not Path(cfg.tokenizer.vocab_path).is_file():
        missing.append(cfg.tokenizer.vocab_path)
    if missing:
        shown = ", ".join(missing[:8])
        more = "" if len(missing) <= 8 else f" (and {len(missing) - 8} more)"
        raise ConfigError(f"{source}: referenced files do not exist: {shown}{more}")


def load_config(
    path: str | Path,
    seed: int | None = None,
    out_dir: str | None = None,
    workers: int | None = None,
) -> ExperimentConfig:
    """Read a JSON config file; CLI flags override seed/out_dir/workers."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config root must be a JSON object")
    cfg = parse_config(raw, source=str(path), base_dir=path.parent)
    if seed is not None:
        cfg.seed = seed
    if out_dir is not None:
        cfg.out_dir = Path(out_dir)
    if workers is not None:
        cfg.workers = workers
    return cfg


# ---------------------------------------------------------------------------
# cell enumeration and execution


@dataclass(frozen=True)
class Cell:
    language: str
    representation: RepresentationConfig
    pca: bool
    classifier: ClassifierConfig

    @property
    def name(self) -> str:
        tag = "pca-on" if self.pca else "pca-off"
        return "__".join(
            _sanitize(p)
            for p in (self.language, self.representation.name, tag, self.classifier.name)
        )


def _sanitize(part: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", part) or "x"


def enumerate_cells(cfg: ExperimentConfig) -> list[Cell]:
    """Fixed nesting order: language, representation, pca, classifier."""
    return [
        Cell(language=lang, representation=rep, pca=pca, classifier=clf)
        for lang in cfg.languages
        for rep in cfg.representations
        for pca in cfg.pca_axis
        for clf in cfg.classifiers
    ]


def cell_seed(master_seed: int, language: str, representation: str, pca: bool, classifier: str) -> int:
    """Per-cell seed from a hash of the coordinates.

    Hash-derived rather than sequential so that adding or removing one axis
    value leaves every other cell's randomness untouched.
    """
    key = f"{master_seed}|{language}|{representation}|{int(pca)}|{classifier}"
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass
class RepData:
    """A representation fitted on one language's train split, applied to all roles."""

    train: object = None
    dev: object = None
    test: object = None
    seconds: float = 0.0
    resolved_language: str = ""
    provenance: str = ""
    tokenizer_vocab: tuple = ()
    tfidf: object = None
    bow_vocab: object = None
    table: object = None
    error: str = ""


def build_representation(
    cfg: ExperimentConfig,
    rep: RepresentationConfig,
    lang: str,
    splits: dict,
    transport=None,
) -> RepData:
    """Fit a representation on train and transform all three splits, timed."""
    out = RepData()

    def work():
        if rep.kind == "precomputed":
            if lang not in rep.split_paths:
                raise DataError(
                    f"no precomputed embeddings configured for language {lang!r}"
                )
            for role in ("train", "dev", "test"):
                matrix = load_precomputed_embeddings(
                    rep.split_paths[lang][role], splits[role].ids()
                )
                setattr(out, role, matrix)
            out.resolved_language = lang
            return

        tokenizer = Tokenizer(cfg.tokenizer)
        out.tokenizer_vocab = tokenizer.vocab_tokens
        seqs = {role: tokenize_split(splits[role], tokenizer) for role in ("train", "dev", "test")}

        if rep.kind == "bow":
            out.bow_vocab = fit_bow(seqs["train"])
            for role in ("train", "dev", "test"):
                setattr(out, role, transform_bow(seqs[role], out.bow_vocab))
            out.resolved_language = lang
        elif rep.kind == "tfidf":
            out.tfidf = fit_tfidf(seqs["train"])
            for role in ("train", "dev", "test"):
                setattr(out, role, transform_tfidf(seqs[role], out.tfidf))
            out.resolved_language = lang
        else:  # word-vectors
            from .dense_features import resolve_language

            policy = FallbackPolicy(
                supported_languages=tuple(sorted(rep.vector_paths)),
                static_map=dict(cfg.static_map),
                display_names=dict(cfg.display_names),
                llm_backend=cfg.llm_backend,
                cache_path=cfg.cache_path,
            )
            code, provenance = resolve_language(lang, policy, transport=transport)
            out.resolved_language = code
            out.provenance = provenance
            out.table = load_word_vectors(rep.vector_paths[code], language=code)
            for role in ("train", "dev", "test"):
                matrix, _ = embed_documents(seqs[role], out.table)
                setattr(out, role, matrix)

    _, out.seconds = time_run(work)
    return out


def _reduce_features(cfg: ExperimentConfig, pca_on: bool, xs: list):
    """Apply row normalization and, when enabled, fit-on-train PCA."""
    if cfg.normalize:
        xs = [normalize_rows(x) for x in xs]
    pca_model = None
    if pca_on:
        pca_model = fit_pca(xs[0], ReductionConfig(normalize=False, components=cfg.components))
        xs = [transform_pca(x, pca_model) for x in xs]
    return xs, pca_model


def run_cell(cfg: ExperimentConfig, cell: Cell, splits: dict, rep_data: RepData) -> EvalReport:
    """Execute one cell end to end and persist its artifacts."""
    report = EvalReport(
        language=cell.language,
        representation=cell.representation.name,
        classifier=cell.classifier.name,
        pca=cell.pca,
        f1_macro=math.nan,
    )
    if rep_data.error:
        report.status = "error"
        report.error = f"representation: {rep_data.error}"
        _write_cell_record(cfg, cell, report)
        return report
    try:
        seed = cell_seed(
            cfg.seed, cell.language, cell.representation.name, cell.pca, cell.classifier.name
        )
        y_train = splits["train"].label_matrix()
        y_dev = splits["dev"].label_matrix()

        (xs, pca_model), reduce_seconds = time_run(
            lambda: _reduce_features(cfg, cell.pca, [rep_data.train, rep_data.dev, rep_data.test])
        )
        x_train, x_dev, x_test = xs

        def train():
            clf = cell.classifier
            if clf.kind == "mlp" and clf.grid:
                best_spec, _ = grid_search_mlp(
                    clf.grid, (x_train, y_train), (x_dev, y_dev), seed=seed
                )
                return fit(best_spec, x_train, y_train)
            return fit(clf.spec(seed), x_train, y_train)

        model, fit_seconds = time_run(train)
        pred, predict_seconds = time_run(lambda: model.predict(x_test))

        report.timing = TimingRecord(
            train_seconds=reduce_seconds + fit_seconds,
            predict_seconds=predict_seconds,
            representation_seconds=rep_data.seconds,
        )

        pred_path = cfg.out_dir / "predictions" / f"{cell.name}.csv"
        write_predictions(pred_path, splits["test"].ids(), pred)
        # score from the persisted file so emitted numbers always re-validate
        _, persisted = read_predictions(pred_path)
        if splits["test"].labeled:
            y_test = splits["test"].label_matrix()
            report.f1_macro = f1_macro(y_test, persisted)
            report.rates = confusion_rates(y_test, persisted)

        pipeline = PipelineModel(
            language=cell.language,
            representation=cell.representation.name,
            representation_kind=cell.representation.kind,
            tokenizer_spec=cfg.tokenizer,
            tokenizer_vocab=rep_data.tokenizer_vocab,
            tfidf=rep_data.tfidf,
            bow_vocabulary=rep_data.bow_vocab,
            embeddings=rep_data.table,
            normalize=cfg.normalize,
            pca=pca_model,
            classifier=model,
            emotions=EMOTIONS,
        )
        save_model(pipeline, cfg.out_dir / "models" / f"{cell.name}.npz")
    except Exception as exc:  # noqa: BLE001 - a cell failure must not kill the matrix
        report.status = "error"
        report.error = f"{type(exc).__name__}: {exc}"
    _write_cell_record(cfg, cell, report)
    return report


# ---------------------------------------------------------------------------
# per-cell completion records (resume support)


def _rates_to_json(rates):
    if rates is None:
        return None

    def clean(values):
        return [None if math.isnan(v) else float(v) for v in values]

    return {
        "labels": list(rates.labels),
        "tp_rate": clean(rates.tp_rate),
        "tn_rate": clean(rates.tn_rate),
        "fp_rate": clean(rates.fp_rate),
        "fn_rate": clean(rates.fn_rate),
    }


def _rates_from_json(obj):
    if obj is None:
        return None
    from .evaluate import ConfusionRates

    def arr(values):
        return np.array([math.nan if v is None else v for v in values])

    return ConfusionRates(
        labels=tuple(obj["labels"]),
        tp_rate=arr(obj["tp_rate"]),
        tn_rate=arr(obj["tn_rate"]),
        fp_rate=arr(obj["fp_rate"]),
        fn_rate=arr(obj["fn_rate"]),
    )


def _write_cell_record(cfg: ExperimentConfig, cell: Cell, report: EvalReport) -> None:
    record = {
        "name": cell.name,
        "language": report.language,
        "representation": report.representation,
        "pca": report.pca,
        "classifier": report.classifier,
        "status": report.status,
        "error": report.error,
        "f1_macro": None if math.isnan(report.f1_macro) else report.f1_macro,
        "timing": {
            "train_seconds": report.timing.train_seconds,
            "predict_seconds": report.timing.predict_seconds,
            "representation_seconds": report.timing.representation_seconds,
        },
        "rates": _rates_to_json(report.rates),
    }
    path = cfg.out_dir / "cells" / f"{cell.name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")


def _read_cell_record(cfg: ExperimentConfig, cell: Cell) -> EvalReport | None:
    path = cfg.out_dir / "cells" / f"{cell.name}.json"
    if not path.is_file():
        return None
    record = json.loads(path.read_text(encoding="utf-8"))
    t = record.get("timing", {})
    f1 = record.get("f1_macro")
    return EvalReport(
        language=record["language"],
        representation=record["representation"],
        classifier=record["classifier"],
        pca=record["pca"],
        f1_macro=math.nan if f1 is None else f1,
        rates=_rates_from_json(record.get("rates")),
        timing=TimingRecord(
            train_seconds=t.get("train_seconds", 0.0),
            predict_seconds=t.get("predict_seconds", 0.0),
            representation_seconds=t.get("representation_seconds", 0.0),
        ),
        status=record["status"],
        error=record.get("error", ""),
    )


# ---------------------------------------------------------------------------
# the matrix


def run_matrix(
    cfg: ExperimentConfig,
    resume: bool = False,
    transport=None,
    log=None,
) -> ReportTable:
    """Execute every cell of the experiment matrix and write all reports.

    With ``resume`` enabled, cells whose completion records already exist in
    the output directory are loaded instead of re-executed. ``transport``
    overrides the language-fallback HTTP client (used by tests). ``log`` is
    an optional line sink for progress output.
    """
    say = log or (lambda msg: None)
    cells = enumerate_cells(cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)

    rows: dict[int, EvalReport] = {}
    pending: list[tuple[int, Cell]] = []
    for i, cell in enumerate(cells):
        if resume:
            existing = _read_cell_record(cfg, cell)
            if existing is not None:
                rows[i] = existing
                say(f"[{i + 1}/{len(cells)}] {cell.name}: resumed")
                continue
        pending.append((i, cell))

    split_cache: dict[str, dict] = {}

    def splits_for(lang: str) -> dict:
        if lang not in split_cache:
            split_cache[lang] = {
                role: load_split(cfg.data_dir / lang / f"{role}.csv", role, lang)
                for role in ("train", "dev", "test")
            }
        return split_cache[lang]

    # representations are shared across cells, so fit each (language, rep)
    # pair once, sequentially, before any cell-level parallelism starts
    rep_cache: dict[tuple[str, str], RepData] = {}
    for _, cell in pending:
        key = (cell.language, cell.representation.name)
        if key in rep_cache:
            continue
        try:
            rep_cache[key] = build_representation(
                cfg, cell.representation, cell.language, splits_for(cell.language), transport
            )
        except Exception as exc:  # noqa: BLE001 - recorded per cell below
            rep_cache[key] = RepData(error=f"{type(exc).__name__}: {exc}")
        else:
            _save_vocab_artifact(cfg, cell.representation, cell.language, rep_cache[key])

    def execute(item):
        i, cell = item
        rep_data = rep_cache[(cell.language, cell.representation.name)]
        return i, run_cell(cfg, cell, splits_for(cell.language), rep_data)

    if cfg.workers > 1 and len(pending) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(execute, pending))
    else:
        results = [execute(item) for item in pending]
    for i, report in results:
        rows[i] = report
        marker = _f1_text(report) if report.status == "ok" else report.error
        say(f"[{i + 1}/{len(cells)}] {cells[i].name}: {marker}")

    table = ReportTable(rows=[rows[i] for i in range(len(cells))])
    write_reports(cfg, cells, table)
    return table


def _save_vocab_artifact(cfg, rep, lang, rep_data) -> None:
    vocab = rep_data.bow_vocab or (rep_data.tfidf.vocabulary if rep_data.tfidf else None)
    if vocab is not None:
        path = cfg.out_dir / "vocab" / f"{_sanitize(lang)}__{_sanitize(rep.name)}.tsv"
        save_vocabulary(vocab, path)


# ---------------------------------------------------------------------------
# report files


def _f1_text(report: EvalReport) -> str:
    if report.status != "ok":
        return "error"
    if math.isnan(report.f1_macro):
        return "n/a"
    return repr(report.f1_macro)


def write_reports(cfg: ExperimentConfig, cells: list[Cell], table: ReportTable) -> None:
    _write_master_report(cfg, table)
    _write_f1_views(cfg, cells, table)
    _write_confusion_views(cfg, cells, table)
    if cfg.workers == 1:
        _write_timing_views(cfg, cells, table)


def _write_master_report(cfg: ExperimentConfig, table: ReportTable) -> None:
    path = cfg.out_dir / "report.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["language", "representation", "pca", "classifier", "status", "f1_macro", "error"]
        )
        for r in table.rows:
            writer.writerow(
                [
                    r.language,
                    r.representation,
                    "on" if r.pca else "off",
                    r.classifier,
                    r.status,
                    "" if r.status != "ok" else _f1_text(r),
                    r.error,
                ]
            )


def _row_index(cells: list[Cell], table: ReportTable) -> dict:
    return {
        (c.language, c.representation.name, c.pca, c.classifier.name): r
        for c, r in zip(cells, table.rows)
    }


def _pca_tag(pca: bool) -> str:
    return "pca-on" if pca else "pca-off"


def _write_f1_views(cfg: ExperimentConfig, cells: list[Cell], table: ReportTable) -> None:
    """Language-by-representation and language-by-classifier F1 grids."""
    index = _row_index(cells, table)
    views = cfg.out_dir / "views"
    views.mkdir(parents=True, exist_ok=True)
    for pca in cfg.pca_axis:
        for clf in cfg.classifiers:
            path = views / f"f1_by_representation.{_pca_tag(pca)}.{_sanitize(clf.name)}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["language"] + [r.name for r in cfg.representations])
                for lang in cfg.languages:
                    cells_row = [
                        _f1_text(index[(lang, rep.name, pca, clf.name)])
                        for rep in cfg.representations
                    ]
                    writer.writerow([lang] + cells_row)
        for rep in cfg.representations:
            path = views / f"f1_by_classifier.{_pca_tag(pca)}.{_sanitize(rep.name)}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["language"] + [c.name for c in cfg.classifiers])
                for lang in cfg.languages:
                    cells_row = [
                        _f1_text(index[(lang, rep.name, pca, clf.name)])
                        for clf in cfg.classifiers
                    ]
                    writer.writerow([lang] + cells_row)


def _write_confusion_views(cfg: ExperimentConfig, cells: list[Cell], table: ReportTable) -> None:
    """One per-label rate table per scored cell, as CSV and aligned text."""
    out = cfg.out_dir / "views" / "confusion"
    for cell, report in zip(cells, table.rows):
        if report.rates is None:
            continue
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"{cell.name}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["rate"] + list(report.rates.labels))
            for name, values in report.rates.as_rows():
                writer.writerow(
                    [name] + ["n/a" if math.isnan(v) else repr(float(v)) for v in values]
                )
        (out / f"{cell.name}.txt").write_text(
            format_confusion_table(report.rates), encoding="utf-8"
        )


def _write_timing_views(cfg: ExperimentConfig, cells: list[Cell], table: ReportTable) -> None:
    """Wall-clock tables; non-deterministic by nature, kept out of views/."""
    index = _row_index(cells, table)
    timing_dir = cfg.out_dir / "timing"
    timing_dir.mkdir(parents=True, exist_ok=True)
    with open(timing_dir / "cells.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "language",
                "representation",
                "pca",
                "classifier",
                "representation_seconds",
                "train_seconds",
                "predict_seconds",
            ]
        )
        for r in table.rows:
            writer.writerow(
                [
                    r.language,
                    r.representation,
                    "on" if r.pca else "off",
                    r.classifier,
                    format_seconds(r.timing.representation_seconds),
                    format_seconds(r.timing.train_seconds),
                    format_seconds(r.timing.predict_seconds),
                ]
            )
    for pca in cfg.pca_axis:
        for rep in cfg.representations:
            path = timing_dir / f"train_test.{_pca_tag(pca)}.{_sanitize(rep.name)}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                header = ["language"]
                for clf in cfg.classifiers:
                    header += [f"{clf.name}_train", f"{clf.name}_test"]
                writer.writerow(header)
                for lang in cfg.languages:
                    row = [lang]
                    for clf in cfg.classifiers:
                        r = index[(lang, rep.name, pca, clf.name)]
                        if r.status != "ok":
                            row += ["error", "error"]
                        else:
                            row += [
                                format_seconds(r.timing.train_seconds),
                                format_seconds(r.timing.predict_seconds),
                            ]
                    writer.writerow(row)


# ---------------------------------------------------------------------------
# ablation


def run_ablation(
    cfg: ExperimentConfig, resume: bool = False, transport=None, log=None
) -> tuple[ReportTable, ReportTable]:
    """Run the matrix with the PCA axis forced to {on, off} and emit paired tables.

    Training-time comparisons are meaningless under concurrency, so the run
    is forced to a single worker. Returns (with-PCA table, without-PCA table)
    in matching row order.
    """
    cfg = replace(cfg, pca_axis=(True, False), workers=1)
    table = run_matrix(cfg, resume=resume, transport=transport, log=log)
    cells = enumerate_cells(cfg)
    index = _row_index(cells, table)
    for lang in cfg.languages:
        _write_ablation_views(cfg, lang, index)
    on_rows = [r for c, r in zip(cells, table.rows) if c.pca]
    off_rows = [r for c, r in zip(cells, table.rows) if not c.pca]
    return ReportTable(rows=on_rows), ReportTable(rows=off_rows)


def _ablation_value(report: EvalReport, metric: str) -> float:
    if report.status != "ok":
        return math.nan
    if metric == "f1":
        return report.f1_macro
    return report.timing.train_seconds


def _write_ablation_grid(path_csv, path_txt, cfg, lang, index, metric, fmt) -> None:
    clf_names = [c.name for c in cfg.classifiers]
    groups = [("w/o PCA", False), ("w/ PCA", True)]
    text_rows = [["", ""] + clf_names]
    with open(path_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "representation"] + clf_names)
        for label, pca in groups:
            for rep in cfg.representations:
                values = [
                    _ablation_value(index[(lang, rep.name, pca, c)], metric)
                    for c in clf_names
                ]
                writer.writerow(
                    [label, rep.name]
                    + ["n/a" if math.isnan(v) else repr(v) for v in values]
                )
                text_rows.append(
                    [label, rep.name]
                    + ["n/a" if math.isnan(v) else fmt(v) for v in values]
                )
        for rep in cfg.representations:
            deltas = []
            for c in clf_names:
                on = _ablation_value(index[(lang, rep.name, True, c)], metric)
                off = _ablation_value(index[(lang, rep.name, False, c)], metric)
                deltas.append(on - off)
            writer.writerow(
                ["delta", rep.name]
                + ["n/a" if math.isnan(v) else repr(v) for v in deltas]
            )
            text_rows.append(
                ["delta", rep.name]
                + ["n/a" if math.isnan(v) else fmt(v) for v in deltas]
            )
    path_txt.write_text(format_text_table(text_rows), encoding="utf-8")


def _write_ablation_views(cfg: ExperimentConfig, lang: str, index) -> None:
    views = cfg.out_dir / "views"
    views.mkdir(parents=True, exist_ok=True)
    timing_dir = cfg.out_dir / "timing"
    timing_dir.mkdir(parents=True, exist_ok=True)
    tag = _sanitize(lang)
    _write_ablation_grid(
        views / f"ablation_f1.{tag}.csv",
        views / f"ablation_f1.{tag}.txt",
        cfg,
        lang,
        index,
        "f1",
        lambda v: f"{v:.4f}",
    )
    _write_ablation_grid(
        timing_dir / f"ablation_train_seconds.{tag}.csv",
        timing_dir / f"ablation_train_seconds.{tag}.txt",
        cfg,
        lang,
        index,
        "train_seconds",
        format_seconds,
    )


# ---------------------------------------------------------------------------
# prediction on new files


def predict_file(model_path: str | Path, input_csv: str | Path, output_csv: str | Path) -> int:
    """Label an id,text CSV with a persisted pipeline model.

    Returns the number of rows written. The output carries the submission
    header: id plus the six emotion columns.
    """
    model = load_model(model_path)
    if not isinstance(model, PipelineModel):
        raise FormatError(f"{model_path}: not a pipeline model file")
    split = load_split(input_csv, role="test")
    pred = model.predict_texts(split.texts())
    write_predictions(output_csv, split.ids(), pred, model.emotions)
    return len(split)
