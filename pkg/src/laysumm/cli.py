"""Command-line entry point: `laysumm <command> ...`.

Every command is deterministic at fixed flags and writes a
`<out>.config.json` sidecar with its resolved configuration.
Exit codes: 0 success, 2 validation error, 3 degenerate data.
"""

from __future__ import annotations

import functools
import json
import logging
import math
import sys
from collections import defaultdict
from functools import partial
from pathlib import Path

import click
import numpy as np

from . import __version__
from ._parallel import ordered_map
from .attributes import (
    AttributeComputationError,
    AttributeContext,
    AttributeVector,
    BgBackend,
    load_bg_labels,
    load_content_spans,
    reference_attributes,
    train_unigram,
)
from .classifier import predict_many, prf1, prf1_table, train_logreg
from .controls import ATTRIBUTES, BinningScheme, BinPolicy, DegenerateDataError, fit_bins, preset_tokens
from .corpus import (
    SUMMARY_TYPES,
    Article,
    CorpusError,
    DuplicateIdError,
    Split,
    SummaryType,
    emit_training_pairs,
    load_corpus,
    requested_types,
    train_pool,
    write_corpus,
)
from .evaluation import SystemOutput, evaluate_systems, report_to_json_text
from .summarizers import article_sentences, hiporank, lead3, leadk, lexrank, oracle, textrank
from .synthetic import generate_corpus
from .textproc import split_sentences, word_count

logger = logging.getLogger("laysumm")

METHODS = ("lead3", "leadk", "oracle", "textrank", "lexrank", "hiporank")
HIST_BUCKETS = 20
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3


# ---------------------------------------------------------------- plumbing

def _handled(fn):
    """Map library exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DegenerateDataError, AttributeComputationError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_DEGENERATE)
        except (CorpusError, KeyError, ValueError) as e:
            msg = e.args[0] if isinstance(e, KeyError) and e.args else e
            click.echo(f"error: {msg}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


def _jsonable(v):
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _write_sidecar(out: Path, command: str, params: dict, resolved: dict | None = None) -> None:
    ctx = click.get_current_context()
    config = {
        "command": command,
        "version": __version__,
        "global": _jsonable(ctx.obj or {}),
        "params": _jsonable(params),
    }
    if resolved:
        config["resolved"] = _jsonable(resolved)
    Path(f"{out}.config.json").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_text(path: Path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _write_jsonl(path: Path, rows) -> None:
    _write_text(path, "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows))


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if line.strip():
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise CorpusError(f"{path}: line {lineno}: malformed JSON: {e.msg}") from e
    return rows


def _load_articles(paths) -> list[Article]:
    articles, seen = [], set()
    for p in paths:
        for a in load_corpus(p):
            if a.id in seen:
                raise DuplicateIdError(a.id)
            seen.add(a.id)
            articles.append(a)
    return articles


def _parse_splits(value: str) -> set[Split]:
    try:
        return {Split(s.strip().upper()) for s in value.split(",") if s.strip()}
    except ValueError:
        raise click.BadParameter(f"unknown split in {value!r}") from None


def _jobs() -> int:
    return (click.get_current_context().obj or {}).get("jobs", 1)


def _fmt() -> str:
    return (click.get_current_context().obj or {}).get("format", "tsv")


def corpus_options(fn):
    fn = click.option("--content-spans", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                      help="JSONL content-word annotations (replaces the stopword filter).")(fn)
    fn = click.option("--bg-labels", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                      help="JSONL per-sentence background labels (PRECOMPUTED backend).")(fn)
    fn = click.option("--smoothing-k", type=float, default=1.0, show_default=True,
                      help="Add-k smoothing of the unigram entropy model.")(fn)
    fn = click.option("--no-val", is_flag=True, help="Keep VAL articles out of the train pool.")(fn)
    return fn


def _attribute_context(articles, smoothing_k, bg_labels, content_spans, no_val) -> AttributeContext:
    pool = train_pool(articles, include_val=not no_val)
    if not pool:
        raise DegenerateDataError(None, "corpus has no TRAIN/VAL articles to fit the entropy model on")
    return AttributeContext(
        unigram=train_unigram(pool, smoothing_k),
        bg_backend=BgBackend.PRECOMPUTED if bg_labels else BgBackend.HEURISTIC,
        bg_labels=load_bg_labels(bg_labels) if bg_labels else None,
        content_spans=load_content_spans(content_spans) if content_spans else None,
    )


def _vector_from_row(row: dict) -> AttributeVector:
    return AttributeVector(int(row["L"]), float(row["R"]), float(row["BG"]), float(row["CWE"]))


def _rows_by_type(rows) -> dict[SummaryType, list[AttributeVector]]:
    grouped: dict[SummaryType, list[AttributeVector]] = {}
    for t in SUMMARY_TYPES:
        vs = [_vector_from_row(r) for r in rows if SummaryType(r["summary_type"]) is t]
        if vs:
            grouped[t] = vs
    return grouped


def _filter_split(rows, splits: set[Split]):
    return [r for r in rows if Split(r["split"]) in splits]


# ---------------------------------------------------------------- group

@click.group()
@click.version_option(__version__, prog_name="laysumm")
@click.option("--seed", type=int, default=0, show_default=True, help="Reserved; every command is deterministic.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes over documents.")
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True,
              help="Report format for eval/classify.")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def cli(ctx, seed, jobs, fmt, verbose):
    """Attribute-controlled lay summarization toolkit."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed, "jobs": jobs, "format": fmt}


# ---------------------------------------------------------------- attrs

def _article_rows(article: Article, ctx: AttributeContext) -> list[dict]:
    rows = []
    for st in article.summary_types:
        text = article.reference(st)
        try:
            v = reference_attributes(text, ctx, (article.id, st))
        except (AttributeComputationError, KeyError) as e:
            raise AttributeComputationError(f"article {article.id} ({st.value}): {e}") from e
        rows.append({
            "article_id": article.id,
            "summary_type": st.value,
            "split": article.split.value,
            "venue": article.venue.value,
            "L": v.length_chars,
            "R": v.fkgl,
            "BG": v.bg_pct,
            "CWE": v.cwe,
            "words": word_count(text),
        })
    return rows


def histogram_rows(rows: list[dict], buckets: int = HIST_BUCKETS) -> list[tuple]:
    """Per-type bucket counts with edges shared across types."""
    out = []
    for a in ATTRIBUTES:
        values = [float(r[a]) for r in rows]
        if not values:
            continue
        lo, hi = min(values), max(values)
        width = (hi - lo) / buckets if hi > lo else 1.0
        for t in SUMMARY_TYPES:
            counts = [0] * buckets
            for r in rows:
                if r["summary_type"] == t.value:
                    b = min(int((float(r[a]) - lo) / width), buckets - 1)
                    counts[b] += 1
            for b, c in enumerate(counts):
                out.append((t.value, a, b, f"{lo + b * width:.6g}", f"{lo + (b + 1) * width:.6g}", c))
    return out


@cli.command("attrs")
@click.option("--corpus", "corpora", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--hist-out", type=click.Path(dir_okay=False, path_type=Path), help="Default: <out>.hist.tsv")
@click.option("--hist-splits", default="TRAIN,VAL", show_default=True)
@corpus_options
@_handled
def cmd_attrs(corpora, out, hist_out, hist_splits, smoothing_k, bg_labels, content_spans, no_val):
    """Attribute values of every reference summary, plus histogram data."""
    articles = _load_articles(corpora)
    ctx = _attribute_context(articles, smoothing_k, bg_labels, content_spans, no_val)
    rows = [r for rs in ordered_map(partial(_article_rows, ctx=ctx), articles, _jobs()) for r in rs]
    _write_jsonl(out, rows)
    hist_out = hist_out or Path(f"{out}.hist.tsv")
    hist = histogram_rows(_filter_split(rows, _parse_splits(hist_splits)))
    _write_text(hist_out, "summary_type\tattribute\tbucket\tlo\thi\tcount\n"
                + "".join("\t".join(map(str, h)) + "\n" for h in hist))
    _write_sidecar(out, "attrs", dict(corpus=corpora, out=out, hist_out=hist_out, hist_splits=hist_splits,
                                      smoothing_k=smoothing_k, bg_labels=bg_labels, content_spans=content_spans,
                                      no_val=no_val))
    click.echo(f"wrote {len(rows)} attribute rows to {out}")


# ---------------------------------------------------------------- bins / presets

@cli.command("bins")
@click.option("--attrs", "attrs_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--splits", default="TRAIN,VAL", show_default=True, help="Rows used to fit the ranges.")
@_handled
def cmd_bins(attrs_path, out, splits):
    """Fit the 10-bin scheme on train-pool attribute rows."""
    rows = _filter_split(_read_jsonl(attrs_path), _parse_splits(splits))
    scheme = fit_bins([_vector_from_row(r) for r in rows])
    _write_text(out, json.dumps(scheme.to_json(), indent=2) + "\n")
    _write_sidecar(out, "bins", dict(attrs=attrs_path, out=out, splits=splits), {"n_rows": len(rows)})
    click.echo(f"fitted bins on {len(rows)} rows -> {out}")


@cli.command("presets")
@click.option("--attrs", "attrs_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--scheme", "scheme_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--policy", type=click.Choice(["mode", "mean", "lay", "technical"]), default="mode", show_default=True)
@click.option("--min-count", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--splits", default="TRAIN,VAL", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_handled
def cmd_presets(attrs_path, scheme_path, policy, min_count, splits, out):
    """Per-type control tokens under a test-time bin policy."""
    rows = _filter_split(_read_jsonl(attrs_path), _parse_splits(splits))
    scheme = BinningScheme.load(scheme_path)
    policy_enum = {"mode": BinPolicy.MODE, "mean": BinPolicy.MEAN,
                   "lay": BinPolicy.LAY_EXTREME, "technical": BinPolicy.TECHNICAL_EXTREME}[policy]
    tokens = preset_tokens(_rows_by_type(rows), scheme, policy_enum, min_count)
    payload = {t.value: seq.to_json() for t, seq in tokens.items()}
    _write_text(out, json.dumps(payload, indent=2) + "\n")
    _write_sidecar(out, "presets", dict(attrs=attrs_path, scheme=scheme_path, policy=policy,
                                        min_count=min_count, splits=splits, out=out))
    for t, seq in tokens.items():
        click.echo(f"{t.value}\t{seq.rendered.rstrip()}")


# ---------------------------------------------------------------- prepare

@cli.command("prepare")
@click.option("--corpus", "corpora", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--scheme", "scheme_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--splits", default="TRAIN,VAL,TEST", show_default=True, help="Articles to emit pairs for.")
@corpus_options
@_handled
def cmd_prepare(corpora, scheme_path, out, splits, smoothing_k, bg_labels, content_spans, no_val):
    """Control-prefixed (source, target) pairs: two per article."""
    articles = _load_articles(corpora)
    ctx = _attribute_context(articles, smoothing_k, bg_labels, content_spans, no_val)
    scheme = BinningScheme.load(scheme_path)
    keep = _parse_splits(splits)
    selected = [a for a in articles if a.split in keep]
    chunks = ordered_map(partial(_pairs_for, scheme=scheme, ctx=ctx), selected, _jobs())
    pairs = [p for chunk in chunks for p in chunk]
    _write_jsonl(out, pairs)
    _write_sidecar(out, "prepare", dict(corpus=corpora, scheme=scheme_path, out=out, splits=splits,
                                        smoothing_k=smoothing_k, bg_labels=bg_labels,
                                        content_spans=content_spans, no_val=no_val))
    click.echo(f"wrote {len(pairs)} training pairs to {out}")


def _pairs_for(article: Article, scheme: BinningScheme, ctx: AttributeContext) -> list[dict]:
    return [p.to_json() for p in emit_training_pairs([article], scheme, ctx)]


# ---------------------------------------------------------------- summarize

def reference_length_defaults(articles: list[Article]) -> dict[SummaryType, dict[str, float]]:
    """Mean reference length (words and sentences) per type over the train pool."""
    stats: dict[SummaryType, list[tuple[int, int]]] = defaultdict(list)
    for a in train_pool(articles):
        for st in a.summary_types:
            ref = a.reference(st)
            stats[st].append((word_count(ref), len(split_sentences(ref))))
    return {
        st: {
            "target_words": math.fsum(w for w, _ in v) / len(v),
            "sentences": max(1, round(math.fsum(s for _, s in v) / len(v))),
        }
        for st, v in stats.items()
    }


def _summarize_one(job, method: str, options: dict) -> dict:
    article, st, defaults = job
    sentences = article_sentences(article, st)
    k = options["sentences"] or defaults["sentences"]
    if method == "lead3":
        summary = lead3(sentences)
    elif method == "leadk":
        summary = leadk(sentences, options["target_words"] or defaults["target_words"])
    elif method == "oracle":
        summary = oracle(sentences, article.reference(st), options["max_sentences"], stem=options["stem"])
    elif method == "textrank":
        summary = textrank(sentences, options["damping"], options["eps"], k)
    elif method == "lexrank":
        summary = lexrank(sentences, options["threshold"], options["damping"], options["eps"], k)
    elif method == "hiporank":
        summary = hiporank(article, options["lambda_section"], options["boundary_bias"], k, summary_type=st)
    else:
        raise ValueError(f"unknown method {method!r}")
    return {
        "article_id": article.id,
        "method": method,
        "summary_type": st.value,
        "sentence_indices": list(summary.sentence_indices),
        "text": summary.text,
    }


@cli.command("summarize")
@click.option("--corpus", "corpora", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--method", required=True, type=click.Choice(METHODS))
@click.option("--type", "type_spec", default="all", show_default=True,
              help="abstract, plos_lay, elife_lay, lay (venue's lay type) or all.")
@click.option("--splits", default="TEST", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--sentences", type=click.IntRange(min=1), help="Summary size for graph rankers. Default: train-pool mean reference sentence count per type.")
@click.option("--target-words", type=click.FloatRange(min=0, min_open=True), help="Lead-K budget. Default: train-pool mean reference length per type.")
@click.option("--max-sentences", type=click.IntRange(min=1), help="Oracle selection cap (default: no cap).")
@click.option("--damping", type=float, default=0.85, show_default=True)
@click.option("--eps", type=float, default=1e-6, show_default=True)
@click.option("--threshold", type=float, default=0.1, show_default=True, help="LexRank edge threshold.")
@click.option("--lambda-section", type=float, default=1.0, show_default=True, help="HipoRank cross-section weight.")
@click.option("--boundary-bias", type=float, default=1.0, show_default=True, help="HipoRank boundary weight.")
@click.option("--stem/--no-stem", default=True, show_default=True, help="Porter stemming in the oracle objective.")
@_handled
def cmd_summarize(corpora, method, type_spec, splits, out, sentences, target_words, max_sentences, damping, eps,
                  threshold, lambda_section, boundary_bias, stem):
    """Run an extractive baseline over the selected articles."""
    if type_spec.strip().lower() not in ("abstract", "plos_lay", "elife_lay", "lay", "all"):
        raise click.BadParameter(f"unknown summary type {type_spec!r}", param_hint="--type")
    articles = _load_articles(corpora)
    keep = _parse_splits(splits)
    defaults = reference_length_defaults(articles)
    needs_defaults = (method == "leadk" and target_words is None) or (
        method in ("textrank", "lexrank", "hiporank") and sentences is None)
    jobs = []
    for a in articles:
        if a.split not in keep:
            continue
        for st in requested_types(a, type_spec):
            if needs_defaults and st not in defaults:
                raise DegenerateDataError(None, f"no train-pool references of type {st.value} to size {method} summaries")
            jobs.append((a, st, defaults.get(st, {"sentences": 3, "target_words": 1.0})))
    options = dict(sentences=sentences, target_words=target_words, max_sentences=max_sentences, damping=damping,
                   eps=eps, threshold=threshold, lambda_section=lambda_section, boundary_bias=boundary_bias,
                   stem=stem)
    outputs = ordered_map(partial(_summarize_one, method=method, options=options), jobs, _jobs())
    _write_jsonl(out, outputs)
    _write_sidecar(out, "summarize", dict(corpus=corpora, method=method, type=type_spec, splits=splits, out=out,
                                          **options),
                   {"per_type_defaults": {st.value: d for st, d in defaults.items()}})
    click.echo(f"wrote {len(outputs)} {method} outputs to {out}")


# ---------------------------------------------------------------- eval / classify

@cli.command("eval")
@click.option("--system-outputs", "outputs", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--corpus", "corpora", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--stem/--no-stem", default=True, show_default=True)
@_handled
def cmd_eval(outputs, corpora, out, stem):
    """ROUGE-1/2/L and readability per (system, summary type)."""
    articles = _load_articles(corpora)
    records = [SystemOutput.from_json(r) for p in outputs for r in _read_jsonl(p)]
    report = evaluate_systems(records, articles, stem=stem, jobs=_jobs())
    _write_text(out, report.to_tsv() if _fmt() == "tsv" else report_to_json_text(report))
    _write_sidecar(out, "eval", dict(system_outputs=outputs, corpus=corpora, out=out, stem=stem))
    click.echo(report.to_tsv(), nl=False)


@cli.command("classify")
@click.option("--train-attrs", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--test-attrs", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--train-splits", default="TRAIN,VAL", show_default=True)
@click.option("--test-splits", default="TEST", show_default=True)
@click.option("--lr", type=float, default=0.1, show_default=True)
@click.option("--l2", type=float, default=1e-4, show_default=True)
@click.option("--epochs", type=click.IntRange(min=0), default=1000, show_default=True)
@click.option("--model-out", type=click.Path(dir_okay=False, path_type=Path))
@_handled
def cmd_classify(train_attrs, test_attrs, out, train_splits, test_splits, lr, l2, epochs, model_out):
    """Three-way summary-type classification from attribute values."""
    train = _filter_split(_read_jsonl(train_attrs), _parse_splits(train_splits))
    test = _filter_split(_read_jsonl(test_attrs), _parse_splits(test_splits))
    if not train or not test:
        raise DegenerateDataError(None, "classification needs non-empty train and test rows")
    features = lambda rows: np.array([[r[a] for a in ATTRIBUTES] for r in rows], dtype=float)  # noqa: E731
    try:
        model = train_logreg(features(train), [r["summary_type"] for r in train], lr=lr, l2=l2, epochs=epochs)
    except ValueError as e:
        raise DegenerateDataError(None, str(e)) from e
    preds = predict_many(model, features(test))
    scores = prf1(preds, [SummaryType(r["summary_type"]) for r in test])
    if _fmt() == "tsv":
        text = prf1_table(scores)
    else:
        text = json.dumps({c.value: vars(s) for c, s in scores.items()}, indent=2) + "\n"
    _write_text(out, text)
    if model_out:
        model.save(model_out)
    _write_sidecar(out, "classify", dict(train_attrs=train_attrs, test_attrs=test_attrs, out=out,
                                         train_splits=train_splits, test_splits=test_splits, lr=lr, l2=l2,
                                         epochs=epochs, model_out=model_out),
                   {"n_train": len(train), "n_test": len(test)})
    click.echo(prf1_table(scores), nl=False)


# ---------------------------------------------------------------- data helpers

@cli.command("synth")
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--n-articles", type=click.IntRange(min=2), default=100, show_default=True)
@click.option("--corpus-seed", type=int, default=13, show_default=True)
@_handled
def cmd_synth(out, n_articles, corpus_seed):
    """Write a seeded synthetic PLOS/eLife-style corpus."""
    articles = generate_corpus(n_articles, corpus_seed)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    write_corpus(articles, out)
    _write_sidecar(out, "synth", dict(out=out, n_articles=n_articles, corpus_seed=corpus_seed))
    click.echo(f"wrote {len(articles)} articles to {out}")


@cli.command("convert")
@click.option("--input", "src", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON list or JSONL of released PLOS/eLife records.")
@click.option("--venue", required=True, type=click.Choice(["plos", "elife"]))
@click.option("--split", "split_name", required=True, type=click.Choice(["train", "val", "test"]))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_handled
def cmd_convert(src, venue, split_name, out):
    """Convert released lay-summarization records to the corpus schema."""
    from .convert import convert_records, read_records

    articles = convert_records(read_records(src), venue, split_name)
    write_corpus(articles, out)
    _write_sidecar(out, "convert", dict(input=src, venue=venue, split=split_name, out=out))
    click.echo(f"wrote {len(articles)} articles to {out}")


def main() -> None:
    cli(prog_name="laysumm")


if __name__ == "__main__":
    main()
