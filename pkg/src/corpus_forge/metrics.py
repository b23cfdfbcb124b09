"""Corpus BLEU, cross-evaluation matrices, and lexical diversity profiles."""

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .corpus import count_tokens, normalize
from .errors import EmptyInput, LengthMismatch

MAX_ORDER = 4

SMOOTH_NONE = "none"
SMOOTH_ADD_K_EXP = "add_k_exp"


@dataclass
class BleuReport:
    bleu: float
    precisions: list
    brevity_penalty: float
    hyp_len: int
    ref_len: int
    smoothing: str
    tokenizer: str = "whitespace"

    def to_dict(self):
        return {
            "bleu": self.bleu,
            "precisions": self.precisions,
            "brevity_penalty": self.brevity_penalty,
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
            "smoothing": self.smoothing,
            "tokenizer": self.tokenizer,
        }


@dataclass
class FrequencyProfile:
    type_count: int
    token_count: int
    ttr: float
    rank_frequency: list  # (rank, word, frequency), frequency non-increasing


@dataclass
class EvalMatrix:
    rows: list  # model labels
    columns: list  # evaluation-set labels
    cells: dict  # (row, col) -> float, present iff evaluated
    failures: dict = None  # (row, col) -> reason for absent cells

    def get(self, row, col):
        return self.cells.get((row, col))

    def to_dict(self):
        return {
            "rows": self.rows,
            "columns": self.columns,
            "cells": [
                {"model": r, "eval_set": c, "bleu": self.cells[(r, c)]}
                for r in self.rows
                for c in self.columns
                if (r, c) in self.cells
            ],
            "failures": [
                {"model": r, "eval_set": c, "reason": reason}
                for (r, c), reason in sorted((self.failures or {}).items())
            ],
        }


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hypotheses, references, smoothing=SMOOTH_NONE) -> BleuReport:
    """Corpus-level BLEU with clipped n-gram precisions (n=1..4) and brevity penalty.

    Inputs are pre-tokenized: each segment is a sequence of tokens. One
    reference per hypothesis. With smoothing="add_k_exp", an additive floor
    starting at 1 is halved for each n-gram order with zero clipped matches
    and used as that order's numerator (floor / total).
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not hypotheses:
        raise EmptyInput("empty hypothesis corpus")
    if smoothing not in (SMOOTH_NONE, SMOOTH_ADD_K_EXP):
        raise ValueError(f"bad smoothing: {smoothing!r}")

    hyp_len = sum(len(h) for h in hypotheses)
    ref_len = sum(len(r) for r in references)
    if hyp_len == 0:
        raise EmptyInput("hypotheses contain no tokens")

    clipped = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    for hyp, ref in zip(hypotheses, references):
        for n in range(1, MAX_ORDER + 1):
            hyp_counts = _ngrams(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _ngrams(ref, n)
            totals[n - 1] += sum(hyp_counts.values())
            clipped[n - 1] += sum(
                min(c, ref_counts[g]) for g, c in hyp_counts.items()
            )

    precisions = []
    floor = 1.0
    for n in range(MAX_ORDER):
        if totals[n] == 0:
            # no n-grams of this order exist: vacuously perfect, not a miss
            precisions.append(1.0)
        elif clipped[n] == 0 and smoothing == SMOOTH_ADD_K_EXP:
            floor /= 2.0
            precisions.append(floor / totals[n])
        else:
            precisions.append(clipped[n] / totals[n])

    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    if any(p == 0.0 for p in precisions):
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(sum(math.log(p) for p in precisions) / MAX_ORDER)
    return BleuReport(
        bleu=score,
        precisions=precisions,
        brevity_penalty=bp,
        hyp_len=hyp_len,
        ref_len=ref_len,
        smoothing=smoothing,
    )


def tokenize_lines(lines):
    return [normalize(line).split() for line in lines]


def frequency_profile(corpus_side) -> FrequencyProfile:
    """Case-folded type/token statistics and rank-frequency list for one corpus side."""
    counts = Counter()
    for line in corpus_side:
        for token in normalize(line).split():
            counts[token.casefold()] += 1
    token_count = sum(counts.values())
    if token_count == 0:
        raise EmptyInput("no tokens in input")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    rank_frequency = [(rank, word, freq) for rank, (word, freq) in enumerate(ranked, 1)]
    return FrequencyProfile(
        type_count=len(counts),
        token_count=token_count,
        ttr=len(counts) / token_count,
        rank_frequency=rank_frequency,
    )


def cross_evaluate(models, eval_sets, smoothing=SMOOTH_NONE) -> EvalMatrix:
    """Score every (model, eval set) pairing with corpus BLEU.

    models: mapping label -> translate(source_lines) -> target_lines.
    eval_sets: mapping label -> (source_lines, reference_lines).
    Failed cells are recorded as absent, with a reason.
    """
    rows = list(models)
    columns = list(eval_sets)
    cells = {}
    failures = {}
    for row in rows:
        for col in columns:
            src_lines, ref_lines = eval_sets[col]
            try:
                out_lines = models[row](src_lines)
                report = corpus_bleu(
                    tokenize_lines(out_lines), tokenize_lines(ref_lines), smoothing
                )
                cells[(row, col)] = report.bleu
            except Exception as exc:  # per-cell isolation by contract
                failures[(row, col)] = f"{type(exc).__name__}: {exc}"
    return EvalMatrix(rows=rows, columns=columns, cells=cells, failures=failures)


# ---------------------------------------------------------------------------
# Rendering

def format_score(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.1f}"


def render_score_row_markdown(labels, scores) -> str:
    """One-row table: model labels as the header, one score per column."""
    header = "| " + " | ".join(labels) + " |"
    rule = "|" + "|".join(["---"] * len(labels)) + "|"
    row = "| " + " | ".join(format_score(s) for s in scores) + " |"
    return "\n".join([header, rule, row]) + "\n"


def render_matrix_markdown(matrix: EvalMatrix) -> str:
    header = "| Model | " + " | ".join(matrix.columns) + " |"
    rule = "|" + "|".join(["---"] * (len(matrix.columns) + 1)) + "|"
    lines = [header, rule]
    for row in matrix.rows:
        scores = [format_score(matrix.get(row, col)) for col in matrix.columns]
        lines.append("| " + row + " | " + " | ".join(scores) + " |")
    return "\n".join(lines) + "\n"


def write_profile_csv(profile: FrequencyProfile, csv_path, sidecar_path=None) -> None:
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("rank,word,frequency\n")
        for rank, word, freq in profile.rank_frequency:
            fh.write(f"{rank},{word},{freq}\n")
    if sidecar_path is not None:
        with open(sidecar_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(
                {
                    "type_count": profile.type_count,
                    "token_count": profile.token_count,
                    "ttr": profile.ttr,
                },
                fh,
                indent=2,
            )
            fh.write("\n")


def zipf_points(profile: FrequencyProfile):
    """(log rank, log frequency) pairs for external plotting."""
    return [
        (math.log(rank), math.log(freq)) for rank, _, freq in profile.rank_frequency
    ]
