import pytest

from hieralign.corpus import (
    NULL_ID,
    NULL_TOKEN,
    CorpusError,
    LoadStats,
    Vocabulary,
    build_vocabulary,
    drop_empty,
    encode_pairs,
    load_joined_corpus,
    load_parallel_corpus,
    read_bitext,
    read_bitext_joined,
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_parallel_basic(tmp_path):
    src = write(tmp_path / "s", "a b\n")
    tgt = write(tmp_path / "t", "x y z\n")
    pairs, vsrc, vtgt, stats = load_parallel_corpus(src, tgt)
    assert len(pairs) == 1
    assert pairs[0].n == 2 and pairs[0].m == 3
    assert stats.kept == 1


def test_empty_side_skipped(tmp_path):
    src = write(tmp_path / "s", "a\n\n")
    tgt = write(tmp_path / "t", "x\nu\n")
    pairs, _, _, stats = load_parallel_corpus(src, tgt)
    assert len(pairs) == 1
    assert pairs[0].index == 0
    assert stats.skipped_empty == 1


def test_line_count_mismatch(tmp_path):
    src = write(tmp_path / "s", "a\nb\nc\n")
    tgt = write(tmp_path / "t", "x\ny\n")
    with pytest.raises(CorpusError, match=r"3.*2"):
        read_bitext(src, tgt)


def test_undecodable_bytes(tmp_path):
    src = tmp_path / "s"
    src.write_bytes(b"ok\n\xff\xfe broken\n")
    tgt = write(tmp_path / "t", "x\ny\n")
    with pytest.raises(CorpusError, match="line 2"):
        read_bitext(str(src), tgt)


def test_joined_basic(tmp_path):
    path = write(tmp_path / "j", "a b ||| x y\n")
    pairs, _, _, _ = load_joined_corpus(path)
    assert pairs[0].n == 2 and pairs[0].m == 2


def test_joined_duplicate_separator(tmp_path):
    path = write(tmp_path / "j", "a ||| x ||| y\n")
    with pytest.raises(CorpusError, match="line 1"):
        read_bitext_joined(path)


def test_joined_missing_separator(tmp_path):
    path = write(tmp_path / "j", "a b ||| x\na b c\n")
    with pytest.raises(CorpusError, match="line 2"):
        read_bitext_joined(path)


def test_vocabulary_first_occurrence_order():
    vocab = Vocabulary()
    for tok in ["b", "a", "b"]:
        vocab.add(tok)
    assert vocab.lookup("b") == 1
    assert vocab.lookup("a") == 2
    assert vocab.token(NULL_ID) == NULL_TOKEN
    assert len(vocab) == 3


def test_vocabulary_empty_corpus():
    vsrc, vtgt = build_vocabulary([])
    assert len(vsrc) == 1 and len(vtgt) == 1


def test_vocabulary_deterministic(tmp_path):
    src = write(tmp_path / "s", "c a\nb a\n")
    tgt = write(tmp_path / "t", "z\ny z\n")
    _, v1, w1, _ = load_parallel_corpus(src, tgt)
    _, v2, w2, _ = load_parallel_corpus(src, tgt)
    assert [v1.token(k) for k in range(len(v1))] == [v2.token(k) for k in range(len(v2))]
    assert [w1.token(k) for k in range(len(w1))] == [w2.token(k) for k in range(len(w2))]


def test_vocabulary_roundtrip(tmp_path):
    vocab = Vocabulary()
    for tok in ["uno", "dos", "tres"]:
        vocab.add(tok)
    path = tmp_path / "vocab"
    vocab.save(path)
    reloaded = Vocabulary.load(path)
    assert len(reloaded) == len(vocab)
    for k in range(len(vocab)):
        assert reloaded.token(k) == vocab.token(k)
    assert reloaded.lookup("dos") == vocab.lookup("dos")


def test_streaming_twice_identical(tmp_path):
    src = write(tmp_path / "s", "a b\nc\n")
    tgt = write(tmp_path / "t", "x\ny z\n")
    first, _, _, _ = load_parallel_corpus(src, tgt)
    second, _, _, _ = load_parallel_corpus(src, tgt)
    assert first == second


def test_max_len_guard():
    raw = drop_empty([(["a"] * 5, ["x"]), (["b"], ["y"])])
    vsrc, vtgt = build_vocabulary(raw)
    stats = LoadStats()
    pairs = encode_pairs(raw, vsrc, vtgt, max_len=4, stats=stats)
    assert stats.skipped_long == 1
    assert len(pairs) == 1 and pairs[0].index == 1


def test_lowercase_flag(tmp_path):
    src = write(tmp_path / "s", "Foo BAR\n")
    tgt = write(tmp_path / "t", "Baz\n")
    bitext = read_bitext(src, tgt, lowercase=True)
    assert bitext[0] == (["foo", "bar"], ["baz"])


def test_unknown_tokens_encode_to_unknown_id():
    raw = drop_empty([(["a"], ["x"])])
    vsrc, vtgt = build_vocabulary(raw)
    pairs = encode_pairs(drop_empty([(["a", "zzz"], ["x"])]), vsrc, vtgt)
    assert pairs[0].source == (1, -1)
