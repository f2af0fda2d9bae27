"""Command line interface: thin wrappers over the pipeline flows.

Exit codes: 0 success, 1 usage error, 2 data error. Data errors print a
one-line message, never a stack trace (set AFENG_DEBUG=1 to re-raise).
"""

from __future__ import annotations

import json
import os
import sys
from typing import Optional

import click

from afeng import __version__
from afeng.corpus import (
    class_histogram,
    consolidate_and_balance,
    corpus_to_tsv,
    load_corpus,
    save_corpus,
    split as split_corpus,
    synthetic_corpus,
)
from afeng.errors import AfengError
from afeng.labels import EMOTION_ORDER
from afeng.neural import ModelConfig, TrainConfig
from afeng.pipeline import (
    EmotionBehaviorEngine,
    load_split_dir,
    run_evaluation,
    run_grid_comparison,
    run_training,
)


def _parse_widths(ctx, param, value: str) -> tuple:
    try:
        widths = tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError:
        raise click.BadParameter("widths must be comma-separated integers")
    if not widths or any(w < 1 for w in widths):
        raise click.BadParameter("widths must be positive integers")
    return widths


@click.group(name="afeng")
@click.version_option(version=__version__, prog_name="afeng")
def cli():
    """Emotion-oriented behavior engine."""


@cli.command()
@click.option("--input", "inputs", multiple=True, type=click.Path(), help="Corpus TSV (repeatable).")
@click.option("--synthetic", type=int, default=None, help="Also generate N sentences per class.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--per-class", type=int, default=None, help="Cap per-class count after balancing.")
@click.option("--test-fraction", type=float, default=0.2, show_default=True)
@click.option("--validation-fraction", type=float, default=0.02, show_default=True)
def ingest(inputs, synthetic, out_dir, seed, per_class, test_fraction, validation_fraction):
    """Validate, consolidate, balance, and split corpora."""
    sources = [load_corpus(path) for path in inputs]
    if synthetic is not None:
        sources.append(synthetic_corpus(per_class=synthetic, seed=seed))
    if not sources:
        raise click.UsageError("provide at least one --input file or --synthetic N")
    balanced = consolidate_and_balance(sources, per_class=per_class, seed=seed)
    result = split_corpus(
        balanced,
        seed=seed,
        test_fraction=test_fraction,
        validation_fraction=validation_fraction,
    )
    os.makedirs(out_dir, exist_ok=True)
    for name, rows in (
        ("train", result.train),
        ("validation", result.validation),
        ("test", result.test),
    ):
        save_corpus(os.path.join(out_dir, f"{name}.tsv"), rows)
    hist = class_histogram(balanced)
    click.echo(f"ingested {len(balanced)} sentences into {out_dir}")
    for label in EMOTION_ORDER:
        click.echo(f"  {label.canonical_name}: {hist[label]}")
    click.echo(
        f"split: train={len(result.train)} validation={len(result.validation)}"
        f" test={len(result.test)} (seed={seed})"
    )


@cli.command()
@click.option("--data", "data_dir", required=True, type=click.Path(), help="Split directory from ingest.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--epochs", type=int, default=None, help="Override the configured epoch count.")
@click.option("--batch-size", type=int, default=None)
@click.option("--embedding-dim", type=int, default=200, show_default=True)
@click.option("--widths", callback=_parse_widths, default="2,3,5,6,8", show_default=True)
@click.option("--filters", type=int, default=64, show_default=True)
@click.option("--hidden", type=int, default=128, show_default=True)
@click.option("--dense", type=int, default=128, show_default=True)
@click.option("--max-len", type=int, default=40, show_default=True)
@click.option("--dropout", type=float, default=0.5, show_default=True)
@click.option("--variant", type=click.Choice(["cnn-lstm", "lstm-cnn"]), default="cnn-lstm", show_default=True)
@click.option("--embedding-file", type=click.Path(), default=None, help="Pretrained text-format vectors.")
@click.option("--patience", type=int, default=None, help="Early stop after this many stale epochs.")
def train(data_dir, out_dir, seed, epochs, batch_size, embedding_dim, widths,
          filters, hidden, dense, max_len, dropout, variant, embedding_file, patience):
    """Train a classifier and write checkpoint, vocab, and history."""
    data = load_split_dir(data_dir)
    if not data.train:
        raise click.UsageError(f"no train.tsv found under {data_dir}")
    model_config = ModelConfig(
        vocab_size=2,  # placeholder; replaced once the vocabulary is built
        embedding_dim=embedding_dim,
        filter_widths=widths,
        filters_per_width=filters,
        hidden_size=hidden,
        dense_size=dense,
        max_len=max_len,
        dropout_rate=dropout,
        variant=variant,
    )
    train_config = TrainConfig(
        seed=seed, epochs=epochs, batch_size=batch_size, patience=patience
    )
    arts = run_training(
        data, model_config, train_config, out_dir, embedding_path=embedding_file
    )
    click.echo(f"checkpoint: {arts.checkpoint_path}")
    click.echo(f"vocab: {arts.vocab_path}")
    click.echo(f"history: {arts.history_path}")
    click.echo(f"final train accuracy: {arts.final_train_accuracy:.4f}")


def _resolve_eval_data(data_path: str):
    if os.path.isdir(data_path):
        candidate = os.path.join(data_path, "test.tsv")
        if not os.path.exists(candidate):
            raise click.UsageError(f"no test.tsv under {data_path}")
        return load_corpus(candidate)
    return load_corpus(data_path)


@cli.command()
@click.option("--checkpoint", required=True, type=click.Path())
@click.option("--vocab", required=True, type=click.Path())
@click.option("--data", "data_path", required=True, type=click.Path(),
              help="Labeled TSV file, or a split directory (its test.tsv is used).")
@click.option("--out", "out_dir", type=click.Path(), default=None)
def evaluate(checkpoint, vocab, data_path, out_dir):
    """Classification report and confusion matrix on labeled data."""
    sentences = _resolve_eval_data(data_path)
    arts = run_evaluation(checkpoint, vocab, sentences, out_dir=out_dir)
    click.echo(arts.report_text, nl=False)
    if out_dir:
        click.echo(f"artifacts written to {out_dir}")


@cli.command()
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("--checkpoint", type=click.Path(), default=None)
@click.option("--vocab", type=click.Path(), default=None)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None)
def compare(data_dir, checkpoint, vocab, seed, out_dir):
    """Baseline grid comparison, optionally with the CNN-LSTM row."""
    from afeng.baselines import comparison_to_text

    data = load_split_dir(data_dir)
    if not data.train or not data.test:
        raise click.UsageError(f"{data_dir} must hold train.tsv and test.tsv")
    rows = run_grid_comparison(
        data, checkpoint_path=checkpoint, vocab_path=vocab, seed=seed, out_dir=out_dir
    )
    click.echo(comparison_to_text(rows), nl=False)


def _load_engine(checkpoint: str, vocab: str, log: Optional[str] = None,
                 blend: float = 0.0) -> EmotionBehaviorEngine:
    return EmotionBehaviorEngine.load(
        checkpoint, vocab, log_path=log, blend_lambda=blend
    )


@cli.command()
@click.option("--checkpoint", required=True, type=click.Path())
@click.option("--vocab", required=True, type=click.Path())
@click.argument("text")
def predict(checkpoint, vocab, text):
    """Classify one sentence and print the full response as JSON."""
    engine = _load_engine(checkpoint, vocab)
    result = engine.interact(text)
    click.echo(json.dumps(result.to_payload(), indent=2, sort_keys=True))


@cli.command()
@click.option("--checkpoint", required=True, type=click.Path())
@click.option("--vocab", required=True, type=click.Path())
@click.option("--log", type=click.Path(), default=None, help="Append interactions to this log.")
@click.option("--blend", type=float, default=0.0, show_default=True,
              help="Recency blend weight for short-term memory.")
def interact(checkpoint, vocab, log, blend):
    """Terminal read-eval loop; blank line or EOF exits."""
    engine = _load_engine(checkpoint, vocab, log=log, blend=blend)
    click.echo("type a sentence (blank line to exit)")
    while True:
        try:
            line = input("> ")
        except (EOFError, KeyboardInterrupt):
            click.echo("")
            break
        if not line.strip():
            break
        result = engine.interact(line)
        a = result.appraisal
        b = result.behaviors
        click.echo(
            f"[{result.record_id}] {a.dominant.canonical_name}"
            f" (intensity {a.intensity:.3f}, {a.valence.value})"
        )
        click.echo(f"    agent: {a.agent_emotion} | event: {a.event_goal}")
        click.echo(f"    self: {b.self_behavior} | other: {b.other_behavior}")


@cli.command()
@click.option("--home", type=click.Path(), default=None,
              help="Data directory (model.ckpt, vocab.txt, interactions.log); AFENG_HOME otherwise.")
@click.option("--checkpoint", type=click.Path(), default=None)
@click.option("--vocab", type=click.Path(), default=None)
@click.option("--log", type=click.Path(), default=None)
@click.option("--static-dir", type=click.Path(), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--blend", type=float, default=0.0, show_default=True)
def serve(home, checkpoint, vocab, log, static_dir, host, port, blend):
    """Run the HTTP service (404-free API plus console assets at /)."""
    import uvicorn

    from afeng.service import build_engine, create_app

    engine = build_engine(
        home=home, checkpoint=checkpoint, vocab=vocab, log=log, blend_lambda=blend
    )
    if engine is None:
        click.echo("warning: no checkpoint found; serving in ModelNotLoaded state", err=True)
    app = create_app(engine, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command(name="export-bml")
@click.option("--checkpoint", required=True, type=click.Path())
@click.option("--vocab", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.argument("text")
def export_bml(checkpoint, vocab, out_path, text):
    """Classify one sentence and write its canonical BML document."""
    engine = _load_engine(checkpoint, vocab)
    result = engine.interact(text)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(result.bml_xml)
    click.echo(f"wrote {out_path} ({result.appraisal.dominant.canonical_name})")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except AfengError as exc:
        if os.environ.get("AFENG_DEBUG"):
            raise
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        if os.environ.get("AFENG_DEBUG"):
            raise
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
