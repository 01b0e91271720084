"""Parallel corpus reading, whitespace tokenization and vocabularies.

Tokens are kept verbatim (no normalization); an optional lowercase switch
is applied at read time. Word id 0 is reserved for the NULL word on every
side and never appears in surface text.
"""

from __future__ import annotations

from dataclasses import dataclass

NULL_ID = 0
NULL_TOKEN = "<NULL>"
UNKNOWN_ID = -1

DEFAULT_SEPARATOR = "|||"


class CorpusError(Exception):
    """Fatal problem with an input corpus file."""


@dataclass
class LoadStats:
    """Counters reported after reading a corpus."""

    kept: int = 0
    skipped_empty: int = 0
    skipped_long: int = 0


@dataclass(frozen=True)
class SentencePair:
    """One id-encoded sentence pair; index is the 0-based input line number."""

    source: tuple
    target: tuple
    index: int

    @property
    def n(self):
        return len(self.source)

    @property
    def m(self):
        return len(self.target)


class Vocabulary:
    """Bijective token <-> dense id map with id 0 reserved for NULL."""

    def __init__(self):
        self._token_to_id = {}
        self._id_to_token = [NULL_TOKEN]

    def __len__(self):
        return len(self._id_to_token)

    def __contains__(self, token):
        return token in self._token_to_id

    def add(self, token):
        """Return the id of token, assigning the next free id if unseen."""
        idx = self._token_to_id.get(token)
        if idx is None:
            idx = len(self._id_to_token)
            self._token_to_id[token] = idx
            self._id_to_token.append(token)
        return idx

    def lookup(self, token):
        """Id of token, or UNKNOWN_ID if the token was never added."""
        return self._token_to_id.get(token, UNKNOWN_ID)

    def token(self, idx):
        return self._id_to_token[idx]

    @property
    def real_size(self):
        """Number of surface tokens, excluding the reserved NULL."""
        return len(self._id_to_token) - 1

    def save(self, path):
        # One token per line, line number = id; NULL (id 0) stays implicit.
        with open(path, "w", encoding="utf-8") as fh:
            for token in self._id_to_token[1:]:
                fh.write(token + "\n")

    @classmethod
    def load(cls, path):
        vocab = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                vocab.add(line.rstrip("\n"))
        return vocab


def _decode_lines(path):
    """Read a text file as a list of decoded lines, reporting bad bytes by line."""
    lines = []
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            try:
                lines.append(raw.decode("utf-8"))
            except UnicodeDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: undecodable byte ({exc})") from None
    return lines


def _tokenize(line, lowercase):
    if lowercase:
        line = line.lower()
    return line.split()


def read_bitext(source_path, target_path, lowercase=False):
    """Read a two-file corpus into raw token pairs, one per input line.

    Empty-side lines are preserved here (as empty token lists); filtering
    happens in drop_empty so that line numbering survives for alignment
    output.
    """
    src_lines = _decode_lines(source_path)
    tgt_lines = _decode_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise CorpusError(
            f"line count mismatch: {source_path} has {len(src_lines)} lines, "
            f"{target_path} has {len(tgt_lines)} lines"
        )
    return [
        (_tokenize(s, lowercase), _tokenize(t, lowercase))
        for s, t in zip(src_lines, tgt_lines)
    ]


def read_bitext_joined(path, separator=DEFAULT_SEPARATOR, lowercase=False):
    """Read a single-file corpus with a separator token between the sides."""
    out = []
    for lineno, line in enumerate(_decode_lines(path), start=1):
        tokens = _tokenize(line, lowercase)
        hits = [k for k, tok in enumerate(tokens) if tok == separator]
        if not hits:
            raise CorpusError(f"{path}: line {lineno}: missing separator {separator!r}")
        if len(hits) > 1:
            raise CorpusError(f"{path}: line {lineno}: duplicated separator {separator!r}")
        cut = hits[0]
        out.append((tokens[:cut], tokens[cut + 1:]))
    return out


def drop_empty(bitext, stats=None):
    """Keep pairs with both sides nonempty; returns (index, src, tgt) triples."""
    kept = []
    for index, (src, tgt) in enumerate(bitext):
        if not src or not tgt:
            if stats is not None:
                stats.skipped_empty += 1
            continue
        kept.append((index, src, tgt))
    return kept


def build_vocabulary(raw_pairs):
    """Assign ids in first-occurrence order over the streamed pairs.

    Returns one vocabulary per side; both reserve id 0 for NULL.
    """
    vsrc = Vocabulary()
    vtgt = Vocabulary()
    for _, src, tgt in raw_pairs:
        for tok in src:
            vsrc.add(tok)
        for tok in tgt:
            vtgt.add(tok)
    return vsrc, vtgt


def encode_pairs(raw_pairs, vocab_src, vocab_tgt, max_len=None, stats=None):
    """Encode token pairs to id pairs, dropping pairs over the length guard."""
    pairs = []
    for index, src, tgt in raw_pairs:
        if max_len is not None and (len(src) > max_len or len(tgt) > max_len):
            if stats is not None:
                stats.skipped_long += 1
            continue
        pairs.append(
            SentencePair(
                tuple(vocab_src.lookup(t) for t in src),
                tuple(vocab_tgt.lookup(t) for t in tgt),
                index,
            )
        )
        if stats is not None:
            stats.kept += 1
    return pairs


def load_parallel_corpus(source_path, target_path, lowercase=False, max_len=None):
    """Read, filter and encode a two-file corpus.

    Returns (pairs, source vocabulary, target vocabulary, stats). Ids are
    assigned in first-occurrence order, so loading the same files twice
    yields identical results.
    """
    stats = LoadStats()
    raw = drop_empty(read_bitext(source_path, target_path, lowercase), stats)
    vsrc, vtgt = build_vocabulary(raw)
    pairs = encode_pairs(raw, vsrc, vtgt, max_len=max_len, stats=stats)
    return pairs, vsrc, vtgt, stats


def load_joined_corpus(path, separator=DEFAULT_SEPARATOR, lowercase=False, max_len=None):
    """Same contract as load_parallel_corpus for a single joined file."""
    stats = LoadStats()
    raw = drop_empty(read_bitext_joined(path, separator, lowercase), stats)
    vsrc, vtgt = build_vocabulary(raw)
    pairs = encode_pairs(raw, vsrc, vtgt, max_len=max_len, stats=stats)
    return pairs, vsrc, vtgt, stats
