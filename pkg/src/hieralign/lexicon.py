"""IBM Model 1 lexical translation tables, plain EM or variational Bayes.

Two directions are trained independently:

  FORWARD  p(source word | target word), the conditioned side is the source
  REVERSE  p(target word | source word), the conditioned side is the target

Tables are sparse over co-occurring word pairs; lookups of unseen pairs
return a fixed fallback probability. The NULL word (id 0) may take part as
an extra conditioning word on the other side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import NULL_ID, NULL_TOKEN
from .symmetrize import grow_diag_final_and
from . import workers

FORWARD = "fwd"
REVERSE = "rev"

# Floor used when looking up word pairs the table has never seen.
DEFAULT_FALLBACK = 1e-10

# Keeps stored probabilities strictly positive even when exp(psi(...))
# underflows for extreme alpha settings.
TINY_PROB = 1e-300


@dataclass(frozen=True)
class EmConfig:
    iterations: int = 5
    vb: bool = True
    alpha: float = 0.01
    use_null: bool = True
    fallback: float = DEFAULT_FALLBACK

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")


class TTable:
    """Sparse conditional lexicon for one direction.

    probs maps (conditioned id, conditioning id) to a probability in (0, 1].
    cond_vocab_size is the number of surface types on the conditioned side,
    used as the dimension of the symmetric Dirichlet prior in VB mode.
    """

    def __init__(self, direction, probs, cond_vocab_size, fallback=DEFAULT_FALLBACK):
        if direction not in (FORWARD, REVERSE):
            raise ValueError(f"unknown direction {direction!r}")
        self.direction = direction
        self.probs = probs
        self.cond_vocab_size = cond_vocab_size
        self.fallback = fallback

    def prob(self, conditioned, conditioning):
        return self.probs.get((conditioned, conditioning), self.fallback)

    def save(self, path, conditioned_vocab, conditioning_vocab):
        """Write `#ttable <direction> <V>` then token TSV rows.

        Column 1 is the conditioned word, column 2 the conditioning word;
        probabilities carry 17 significant digits so reloading is exact.
        NULL conditioning entries appear under the reserved NULL token.
        """
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"#ttable {self.direction} {self.cond_vocab_size}\n")
            for (f, e) in sorted(self.probs):
                p = self.probs[(f, e)]
                fh.write(f"{conditioned_vocab.token(f)}\t{conditioning_vocab.token(e)}\t{p:.17g}\n")

    @classmethod
    def load(cls, path, conditioned_vocab, conditioning_vocab, fallback=DEFAULT_FALLBACK):
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 3 or header[0] != "#ttable":
                raise ValueError(f"{path}: not a ttable file")
            direction, size = header[1], int(header[2])
            probs = {}
            for line in fh:
                f_tok, e_tok, p = line.rstrip("\n").split("\t")
                e_id = NULL_ID if e_tok == NULL_TOKEN else conditioning_vocab.lookup(e_tok)
                probs[(conditioned_vocab.lookup(f_tok), e_id)] = float(p)
        return cls(direction, probs, size, fallback)


def digamma(x):
    """Digamma psi(x) for x > 0, accurate to better than 1e-10.

    Uses psi(x) = psi(x+1) - 1/x to lift the argument to >= 6, then the
    asymptotic series in 1/x^2.
    """
    if x <= 0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    result = 0.0
    while x < 6.0:
        result -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    result += math.log(x) - 0.5 * inv
    result -= inv2 * (
        1.0 / 12
        - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760)))))
    )
    return result


def oriented(pair, direction):
    """(conditioned sequence, conditioning sequence) for one pair."""
    if direction == FORWARD:
        return pair.source, pair.target
    return pair.target, pair.source


def _estep_chunk(chunk):
    """Expected counts for one corpus chunk against the shared table snapshot."""
    probs, use_null = workers.payload()
    counts = {}
    for cond_seq, cing_seq in chunk:
        for f in cond_seq:
            denom = 0.0
            for e in cing_seq:
                denom += probs[(f, e)]
            if use_null:
                denom += probs[(f, NULL_ID)]
            for e in cing_seq:
                key = (f, e)
                counts[key] = counts.get(key, 0.0) + probs[key] / denom
            if use_null:
                key = (f, NULL_ID)
                counts[key] = counts.get(key, 0.0) + probs[key] / denom
    return counts


def expected_counts(pairs, table, config, threads=1):
    """E-step over the corpus; deterministic for any worker count.

    The corpus is cut into fixed-size chunks and per-chunk counts are
    reduced in chunk order, so the floating-point summation order never
    depends on how many workers ran.
    """
    items = [oriented(p, table.direction) for p in pairs]
    chunks = workers.chunked(items)
    counts = {}
    for part in workers.map_chunks(_estep_chunk, (table.probs, config.use_null), chunks, threads):
        for key, val in part.items():
            counts[key] = counts.get(key, 0.0) + val
    return counts


def normalize_plain(counts):
    """Plain M-step: per conditioning word, counts normalized to sum 1."""
    totals = {}
    for (f, e), c in counts.items():
        totals[e] = totals.get(e, 0.0) + c
    return {(f, e): max(c / totals[e], TINY_PROB) for (f, e), c in counts.items()}


def normalize_vb(counts, alpha, vocab_size):
    """Variational-Bayes M-step under a symmetric Dirichlet prior.

    theta(f|e) = exp(psi(c(f,e) + alpha)) / exp(psi(sum_f c(f,e) + alpha * V))
    with V the conditioned-side vocabulary size. Per conditioning word the
    resulting probabilities sum to at most 1.
    """
    totals = {}
    for (f, e), c in counts.items():
        totals[e] = totals.get(e, 0.0) + c
    denom = {e: math.exp(digamma(t + alpha * vocab_size)) for e, t in totals.items()}
    return {
        (f, e): max(math.exp(digamma(c + alpha)) / denom[e], TINY_PROB)
        for (f, e), c in counts.items()
    }


def em_step(pairs, table, config, threads=1):
    """One E+M round; returns a new table, the input is left untouched."""
    counts = expected_counts(pairs, table, config, threads)
    if config.vb:
        probs = normalize_vb(counts, config.alpha, table.cond_vocab_size)
    else:
        probs = normalize_plain(counts)
    return TTable(table.direction, probs, table.cond_vocab_size, table.fallback)


def uniform_init(pairs, direction, config, cond_vocab_size=None):
    """Uniform table over co-occurring pairs (plus NULL when enabled)."""
    cooc = {}
    cond_types = set()
    for pair in pairs:
        cond_seq, cing_seq = oriented(pair, direction)
        cond_types.update(cond_seq)
        for f in set(cond_seq):
            for e in set(cing_seq):
                cooc.setdefault(e, set()).add(f)
            if config.use_null:
                cooc.setdefault(NULL_ID, set()).add(f)
    if cond_vocab_size is None:
        cond_vocab_size = len(cond_types)
    probs = {}
    for e, fs in cooc.items():
        # Uniform over words co-occurring with e; ids sorted for determinism.
        u = 1.0 / len(fs)
        for f in sorted(fs):
            probs[(f, e)] = u
    return TTable(direction, probs, cond_vocab_size, config.fallback)


def train_ibm1(pairs, direction, config, threads=1, progress=None):
    """Exactly config.iterations E+M rounds from the uniform initialization."""
    if not pairs:
        raise ValueError("cannot train on an empty corpus")
    table = uniform_init(pairs, direction, config)
    for it in range(config.iterations):
        table = em_step(pairs, table, config, threads)
        if progress is not None:
            progress(it + 1, config.iterations)
    return table


def corpus_log_likelihood(pairs, table, config):
    """Model 1 log-likelihood of the conditioned side given the other side."""
    total = 0.0
    for pair in pairs:
        cond_seq, cing_seq = oriented(pair, table.direction)
        slots = len(cing_seq) + (1 if config.use_null else 0)
        for f in cond_seq:
            row = sum(table.prob(f, e) for e in cing_seq)
            if config.use_null:
                row += table.prob(f, NULL_ID)
            total += math.log(row / slots)
    return total


def symmetric_lexical_score(t_fwd, t_rev, f, e):
    """log sqrt(p(f|e) * p(e|f)); finite and <= 0 through the fallback."""
    return 0.5 * (math.log(t_fwd.prob(f, e)) + math.log(t_rev.prob(e, f)))


def viterbi_alignment(pair, table, use_null=True):
    """Per-word argmax links under one directional table.

    Each conditioned word links to its best conditioning word; ties go to
    the lowest index. NULL wins only when strictly better, and produces no
    link. Links are always (source index, target index).
    """
    links = set()
    if table.direction == FORWARD:
        cond_seq, cing_seq = pair.source, pair.target
    else:
        cond_seq, cing_seq = pair.target, pair.source
    for a, f in enumerate(cond_seq):
        best_b = 0
        best_p = -1.0
        for b, e in enumerate(cing_seq):
            p = table.prob(f, e)
            if p > best_p:
                best_p = p
                best_b = b
        if use_null and table.prob(f, NULL_ID) > best_p:
            continue
        if table.direction == FORWARD:
            links.add((a, best_b))
        else:
            links.add((best_b, a))
    return links


def vbh_reestimate(pairs, t_fwd, t_rev, use_null=True):
    """Rebuild both tables from gdfa-symmetrized Viterbi links.

    Every symmetrized link contributes one count in each direction; counts
    are normalized per conditioning word. Fallbacks and vocabulary sizes
    are carried over unchanged.
    """
    counts_fwd = {}
    counts_rev = {}
    for pair in pairs:
        a_fwd = viterbi_alignment(pair, t_fwd, use_null)
        a_rev = viterbi_alignment(pair, t_rev, use_null)
        for (j, i) in grow_diag_final_and(a_fwd, a_rev, pair.n, pair.m):
            f = pair.source[j]
            e = pair.target[i]
            counts_fwd[(f, e)] = counts_fwd.get((f, e), 0.0) + 1.0
            counts_rev[(e, f)] = counts_rev.get((e, f), 0.0) + 1.0
    new_fwd = TTable(FORWARD, normalize_plain(counts_fwd), t_fwd.cond_vocab_size, t_fwd.fallback)
    new_rev = TTable(REVERSE, normalize_plain(counts_rev), t_rev.cond_vocab_size, t_rev.fallback)
    return new_fwd, new_rev
