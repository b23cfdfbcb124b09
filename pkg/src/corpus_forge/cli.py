"""corpus-forge: one binary with subcommands for every pipeline stage.

Exit codes: 0 success, 2 usage (bad flags), 3 configuration, 4 transport,
5 insufficient data, 1 internal error. Stages communicate only through the
documented file formats, so each is independently rerunnable.
"""

import functools
import json
import logging
import sys
from pathlib import Path

import click

from . import bpe, em, metrics
from .config import load_config
from .corpus import (
    SplitSpec,
    make_splits,
    read_jsonl,
    write_jsonl,
    write_plain_pair,
)
from .errors import (
    ConfigError,
    CorpusForgeError,
    InsufficientData,
    TransportError,
)
from .gateway import Gateway, make_backend
from .hallucinate import run_pipeline

log = logging.getLogger(__name__)

EXIT_CONFIG = 3
EXIT_TRANSPORT = 4
EXIT_INSUFFICIENT_DATA = 5

# reference transformer setup from the original experiments, exported as
# metadata so external NMT toolkits can replicate the full-scale training
REFERENCE_TRANSFORMER = {
    "architecture": "transformer",
    "attention_heads": 4,
    "layers": 3,
    "batch_size": 2000,
    "max_epochs": 100,
    "early_stopping": "validation-loss",
    "toolkit": "fairseq",
}


def mapped_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except InsufficientData as exc:
            click.echo(f"insufficient data: {exc}", err=True)
            sys.exit(EXIT_INSUFFICIENT_DATA)
        except TransportError as exc:
            click.echo(f"transport error: {exc}", err=True)
            sys.exit(EXIT_TRANSPORT)
        except CorpusForgeError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def config_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="YAML run configuration.")(fn)
    fn = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                      help="Override a config key (dotted path).")(fn)
    return fn


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
def main(verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@config_options
@click.option("--backend", type=click.Choice(["http", "mock"]), default=None,
              help="Override the configured backend.")
@click.option("--run-id", default=None, help="Run directory name.")
@mapped_errors
def hallucinate(config_path, overrides, backend, run_id):
    """Generate a synthetic parallel corpus via the three-stage pipeline."""
    cfg = load_config(config_path, overrides)
    if backend:
        cfg.backend = backend
    backend_impl = make_backend(
        cfg.backend,
        config=cfg.backend_config,
        templates=cfg.templates,
        mock_seed=cfg.mock_seed,
    )
    gateway = Gateway(backend_impl, max_in_flight=cfg.backend_config.max_in_flight)
    if run_id is None:
        run_id = f"run-s{cfg.rng_seed}-m{cfg.mock_seed}"
    run_dir = Path(cfg.run_root) / run_id
    click.echo(f"run directory: {run_dir}")
    click.echo(f"seeds: rng_seed={cfg.rng_seed} mock_seed={cfg.mock_seed}")
    splits, report = run_pipeline(
        cfg.plan, cfg.templates, gateway, cfg.split_spec, run_dir,
        mock_seed=cfg.mock_seed if cfg.backend == "mock" else None,
    )
    for name, split in splits.items():
        click.echo(f"{name}: {len(split)} pairs")
    click.echo(f"wall time: {report.wall_time_seconds:.2f}s")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--src", "source_lang", required=True)
@click.option("--tgt", "target_lang", required=True)
@click.option("--train-tokens", type=int, required=True)
@click.option("--valid-tokens", type=int, required=True)
@click.option("--test-tokens", type=int, default=None)
@click.option("--rng-seed", type=int, default=0)
@click.option("--out-dir", required=True, type=click.Path())
@mapped_errors
def sample(input_path, source_lang, target_lang, train_tokens, valid_tokens,
           test_tokens, rng_seed, out_dir):
    """Sample train/valid(/test) splits from a JSON-lines corpus."""
    corpus = read_jsonl(input_path, source_lang, target_lang)
    spec = SplitSpec(
        train_token_threshold=train_tokens,
        valid_token_threshold=valid_tokens,
        test_token_threshold=test_tokens,
        rng_seed=rng_seed,
    )
    splits = make_splits(corpus, spec, with_test=test_tokens is not None)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, split in splits.items():
        write_jsonl(split, out / f"{name}.jsonl")
        click.echo(f"{name}: {len(split)} pairs, "
                   f"{split.source_token_count()} source tokens")


@main.command("bpe-train")
@click.option("--input", "input_paths", multiple=True, required=True,
              type=click.Path(exists=True), help="Training corpora (JSON lines).")
@click.option("--src", "source_lang", required=True)
@click.option("--tgt", "target_lang", required=True)
@click.option("--vocab-size", type=int, default=16_000)
@click.option("--out", "model_path", required=True, type=click.Path())
@mapped_errors
def bpe_train(input_paths, source_lang, target_lang, vocab_size, model_path):
    """Train a joint source-target BPE model on training corpora."""
    corpora = [read_jsonl(p, source_lang, target_lang) for p in input_paths]
    model = bpe.train_bpe(corpora, vocab_size)
    bpe.save_model(model, model_path)
    click.echo(
        f"trained {len(model.merges)} merges, "
        f"final symbol vocabulary {len(model.vocab)}"
    )


@main.command("bpe-apply")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@mapped_errors
def bpe_apply(model_path, input_path, output_path):
    """Encode a plain-text file line by line with a trained BPE model."""
    model = bpe.load_model(model_path)
    with open(input_path, encoding="utf-8") as src, \
            open(output_path, "w", encoding="utf-8", newline="\n") as dst:
        for line in src:
            dst.write(" ".join(bpe.encode(model, line.rstrip("\n"))) + "\n")
    click.echo(f"encoded {input_path} -> {output_path}")


def _assert_disjoint(train_corpora, eval_corpora):
    train_ids = {p.id for c in train_corpora for p in c.pairs}
    for corpus in eval_corpora:
        overlap = train_ids & {p.id for p in corpus.pairs}
        if overlap:
            raise ConfigError(
                f"training and evaluation corpora share pair ids: "
                f"{sorted(overlap)[:5]}..."
            )


def _write_analysis(corpora_by_label, out_dir):
    ttr_path = out_dir / "ttr.csv"
    zipf_path = out_dir / "zipf.csv"
    with open(ttr_path, "w", encoding="utf-8", newline="\n") as ttr_fh, \
            open(zipf_path, "w", encoding="utf-8", newline="\n") as zipf_fh:
        ttr_fh.write("corpus,side,type_count,token_count,ttr\n")
        zipf_fh.write("corpus,side,rank,word,frequency\n")
        for label, corpus in corpora_by_label.items():
            for side, lines in (
                ("source", corpus.source_lines()),
                ("target", corpus.target_lines()),
            ):
                profile = metrics.frequency_profile(lines)
                ttr_fh.write(
                    f"{label},{side},{profile.type_count},"
                    f"{profile.token_count},{profile.ttr:.6f}\n"
                )
                for rank, word, freq in profile.rank_frequency:
                    zipf_fh.write(f"{label},{side},{rank},{word},{freq}\n")
    click.echo(f"wrote {ttr_path} and {zipf_path}")


@main.command()
@config_options
@click.option("--nat-train", required=True, type=click.Path(exists=True))
@click.option("--syn-train", required=True, type=click.Path(exists=True))
@click.option("--nat-valid", required=True, type=click.Path(exists=True))
@click.option("--syn-valid", default=None, type=click.Path(exists=True))
@click.option("--test", "test_path", required=True, type=click.Path(exists=True))
@click.option("--src", "source_lang", required=True)
@click.option("--tgt", "target_lang", required=True)
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--analyze-only", is_flag=True,
              help="Only emit ttr.csv/zipf.csv, skip training.")
@mapped_errors
def experiment(config_path, overrides, nat_train, syn_train, nat_valid, syn_valid,
               test_path, source_lang, target_lang, out_dir, analyze_only):
    """Train Nat/Synth/Aug baselines, cross-evaluate, and profile diversity."""
    cfg = load_config(config_path, overrides)
    load = lambda p: read_jsonl(p, source_lang, target_lang)
    corpora = {
        "nat-train": load(nat_train),
        "syn-train": load(syn_train),
        "nat-valid": load(nat_valid),
        "test": load(test_path),
    }
    if syn_valid:
        corpora["syn-valid"] = load(syn_valid)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_analysis(corpora, out)
    if analyze_only:
        return

    _assert_disjoint(
        [corpora["nat-train"], corpora["syn-train"]],
        [c for k, c in corpora.items() if k in ("nat-valid", "syn-valid", "test")],
    )
    models, matrix = em.run_experiment(
        corpora["nat-train"],
        corpora["syn-train"],
        corpora["nat-valid"],
        corpora["test"],
        cfg.em_iterations,
        syn_valid=corpora.get("syn-valid"),
    )
    models_dir = out / "models"
    models_dir.mkdir(exist_ok=True)
    for label, model in models.items():
        em.save_model(model, models_dir / f"{label.lower()}.lexicon")

    test_scores = [matrix.get(m, "Test") for m in ("Synth", "Nat", "Aug")]
    results_md = (
        "# Experiment results\n\n"
        "## Test-set scores\n\n"
        + metrics.render_score_row_markdown(["Synth", "Nat", "Aug"], test_scores)
        + "\n## Cross-method validation\n\n"
        + metrics.render_matrix_markdown(matrix)
    )
    (out / "results.md").write_text(results_md, encoding="utf-8")
    with open(out / "results.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(
            {"em_iterations": cfg.em_iterations, "matrix": matrix.to_dict()},
            fh, indent=2,
        )
        fh.write("\n")
    click.echo(results_md)


@main.command()
@click.option("--input", "input_paths", multiple=True, required=True,
              type=click.Path(exists=True))
@click.option("--src", "source_lang", required=True)
@click.option("--tgt", "target_lang", required=True)
@click.option("--out-dir", required=True, type=click.Path())
@mapped_errors
def analyze(input_paths, source_lang, target_lang, out_dir):
    """Emit TTR and rank-frequency statistics for one or more corpora."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpora = {
        Path(p).stem: read_jsonl(p, source_lang, target_lang) for p in input_paths
    }
    _write_analysis(corpora, out)


@main.command()
@click.option("--input", "input_paths", multiple=True, required=True,
              type=click.Path(exists=True), help="JSON-lines corpora.")
@click.option("--src", "source_lang", required=True)
@click.option("--tgt", "target_lang", required=True)
@click.option("--out-dir", required=True, type=click.Path())
@mapped_errors
def export(input_paths, source_lang, target_lang, out_dir):
    """Write line-aligned text pairs plus reference training metadata."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for path in input_paths:
        corpus = read_jsonl(path, source_lang, target_lang)
        if len(corpus) == 0:
            raise ConfigError(f"refusing to export empty corpus: {path}")
        write_plain_pair(corpus, out / Path(path).stem)
        click.echo(f"exported {path} ({len(corpus)} pairs)")
    with open(out / "reference_transformer.json", "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(REFERENCE_TRANSFORMER, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
