"""Word-lexicon baseline translator trained by expectation-maximization.

The model holds t(e|f): for each source word f, a probability distribution
over target words e (plus a reserved null target meaning "emit nothing").
Training is classic lexical EM: expected-count collection with per-sentence
normalization, then renormalization of t. Decoding is positional argmax.
"""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .errors import CorpusFormatError, EmptyCorpus

NULL_TOKEN = "<null>"


@dataclass
class LexiconModel:
    t: dict  # source word -> {target word: probability}
    source_vocab: set
    target_vocab: set
    null_token: str = NULL_TOKEN
    iterations_run: int = 0
    final_log_likelihood: float = float("-inf")
    log_likelihoods: list = field(default_factory=list)  # one per iteration

    def translate(self, source_lines):
        return translate(self, source_lines)


def _tokenized(corpus):
    return [(p.source.split(), p.target.split()) for p in corpus.pairs]


def train_em(corpus, iterations: int) -> LexiconModel:
    """Train t(e|f) on a parallel corpus for a fixed number of EM iterations."""
    if len(corpus) == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")

    bitext = _tokenized(corpus)
    source_vocab = {f for src, _ in bitext for f in src}
    target_vocab = {e for _, tgt in bitext for e in tgt}

    uniform = 1.0 / (len(target_vocab) + 1)  # +1 for the null target
    t = {f: defaultdict(lambda u=uniform: u) for f in source_vocab}

    log_likelihoods = []
    for _ in range(iterations):
        counts = {f: Counter() for f in source_vocab}
        log_likelihood = 0.0
        for src, tgt in bitext:
            candidates = tgt + [NULL_TOKEN]
            for f in src:
                tf = t[f]
                z = sum(tf[e] for e in candidates)
                log_likelihood += math.log(z / len(candidates))
                for e in candidates:
                    counts[f][e] += tf[e] / z
        for f, c in counts.items():
            total = sum(c.values())
            t[f] = defaultdict(float, {e: n / total for e, n in c.items()})
        log_likelihoods.append(log_likelihood)

    return LexiconModel(
        t={f: dict(d) for f, d in t.items()},
        source_vocab=source_vocab,
        target_vocab=target_vocab,
        iterations_run=iterations,
        final_log_likelihood=log_likelihoods[-1],
        log_likelihoods=log_likelihoods,
    )


def best_target(model: LexiconModel, f: str):
    """Argmax of t(.|f); ties break lexicographically among real words.

    The null target is a candidate in every sentence, so it frequently ends
    up exactly tied with a word's true translation; it only wins the argmax
    when strictly more probable. Returns None when f is unseen.
    """
    dist = model.t.get(f)
    if not dist:
        return None
    return min(dist, key=lambda e: (-dist[e], e == model.null_token, e))


def translate(model: LexiconModel, source_lines):
    """Map each token to its argmax target; drop null emissions, copy OOV through."""
    out = []
    for line in source_lines:
        words = []
        for f in line.split():
            e = best_target(model, f)
            if e is None:
                words.append(f)  # out-of-vocabulary: copy through
            elif e != model.null_token:
                words.append(e)
        out.append(" ".join(words))
    return out


def run_experiment(
    nat_train,
    syn_train,
    nat_valid,
    test,
    iterations: int,
    syn_valid=None,
):
    """Train Nat / Synth / Aug lexicon models and cross-evaluate them.

    Aug trains on the concatenation of both training corpora. Every model is
    scored on every provided eval set; returns (models, EvalMatrix).
    """
    from .corpus import ParallelCorpus
    from .metrics import cross_evaluate

    train_ids = {p.id for p in nat_train.pairs} | {p.id for p in syn_train.pairs}
    for eval_corpus in (nat_valid, test, syn_valid):
        if eval_corpus is not None and train_ids & {p.id for p in eval_corpus.pairs}:
            raise ValueError("eval sets must be disjoint from training data")

    aug_pairs = list(nat_train.pairs) + list(syn_train.pairs)
    aug = ParallelCorpus(aug_pairs, nat_train.source_lang, nat_train.target_lang)
    models = {
        "Nat": train_em(nat_train, iterations),
        "Synth": train_em(syn_train, iterations),
        "Aug": train_em(aug, iterations),
    }
    eval_sets = {}
    if syn_valid is not None:
        eval_sets["Synth-val"] = (syn_valid.source_lines(), syn_valid.target_lines())
    eval_sets["Nat-val"] = (nat_valid.source_lines(), nat_valid.target_lines())
    eval_sets["Test"] = (test.source_lines(), test.target_lines())
    translators = {label: model.translate for label, model in models.items()}
    return models, cross_evaluate(translators, eval_sets)


def save_model(model: LexiconModel, path) -> None:
    """Sorted f<TAB>e<TAB>prob lines with a one-line header."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"lexicon-v1 iterations={model.iterations_run}\n")
        for f in sorted(model.t):
            for e in sorted(model.t[f]):
                fh.write(f"{f}\t{e}\t{model.t[f][e]:.12g}\n")


def load_model(path) -> LexiconModel:
    t = defaultdict(dict)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith("lexicon-v1"):
            raise CorpusFormatError(f"{path}: unknown lexicon header")
        iterations = 0
        for part in header.split():
            if part.startswith("iterations="):
                iterations = int(part.split("=", 1)[1])
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusFormatError(f"{path}:{lineno}: bad lexicon line")
            f, e, prob = parts
            t[f][e] = float(prob)
    target_vocab = {e for d in t.values() for e in d} - {NULL_TOKEN}
    return LexiconModel(
        t=dict(t),
        source_vocab=set(t),
        target_vocab=target_vocab,
        iterations_run=iterations,
    )
