import os

import pytest

from hieralign.cli import main, resolve_threads


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def toy(tmp_path):
    src = write(tmp_path / "c.src", "das haus\ndas\nhaus ist gut\n")
    tgt = write(tmp_path / "c.tgt", "the house\nthe\nhouse is good\n")
    return {"src": src, "tgt": tgt, "dir": tmp_path}


MODEL_FILES = ["ttable.fwd", "ttable.rev", "vocab.src", "vocab.tgt", "config.txt"]


def read_model_bytes(model_dir):
    return {name: (model_dir / name).read_bytes() for name in MODEL_FILES}


def test_train_writes_model_files(toy):
    out = toy["dir"] / "model"
    assert main(["train", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out)]) == 0
    for name in MODEL_FILES:
        assert (out / name).exists(), name


def test_train_rerun_bit_identical(toy):
    out1 = toy["dir"] / "m1"
    out2 = toy["dir"] / "m2"
    assert main(["train", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out1)]) == 0
    assert main(["train", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out2)]) == 0
    assert read_model_bytes(out1) == read_model_bytes(out2)


def test_missing_input_fails_with_stderr(toy, capsys):
    rc = main(["train", "-s", str(toy["dir"] / "absent"), "-t", toy["tgt"], "-o", str(toy["dir"] / "m")])
    assert rc != 0
    assert "error" in capsys.readouterr().err


def test_align_single_token_pair(tmp_path, capsys):
    src = write(tmp_path / "s", "a\n")
    tgt = write(tmp_path / "t", "x\n")
    model = tmp_path / "model"
    assert main(["train", "-s", src, "-t", tgt, "-o", str(model)]) == 0
    capsys.readouterr()
    assert main(["align", "-s", src, "-t", tgt, "-m", str(model)]) == 0
    assert capsys.readouterr().out == "0-0\n"


def test_align_no_distortion_variant(toy, capsys):
    model = toy["dir"] / "model"
    assert main(["train", "-s", toy["src"], "-t", toy["tgt"], "-o", str(model)]) == 0
    capsys.readouterr()
    rc = main(
        ["align", "-s", toy["src"], "-t", toy["tgt"], "-m", str(model),
         "--sigma-theta", "1", "--no-distortion", "--stats"]
    )
    assert rc == 0
    captured = capsys.readouterr()
    assert len(captured.out.splitlines()) == 3
    assert "pairs/s" in captured.err


def test_align_oversized_pair_gets_empty_line(tmp_path, capsys):
    src = write(tmp_path / "s", "a b\n" + " ".join(["w"] * 9) + "\n")
    tgt = write(tmp_path / "t", "x y\nz\n")
    model = tmp_path / "model"
    assert main(["train", "-s", src, "-t", tgt, "-o", str(model)]) == 0
    capsys.readouterr()
    rc = main(["align", "-s", src, "-t", tgt, "-m", str(model), "--max-sentence-len", "8"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[1] == ""


def test_align_dump_matrix(toy, tmp_path, capsys):
    model = toy["dir"] / "model"
    dump = tmp_path / "m.tsv"
    assert main(["train", "-s", toy["src"], "-t", toy["tgt"], "-o", str(model)]) == 0
    assert main(["align", "-s", toy["src"], "-t", toy["tgt"], "-m", str(model),
                 "--dump-matrix", str(dump)]) == 0
    capsys.readouterr()
    blocks = dump.read_text().rstrip("\n").split("\n\n")
    assert len(blocks) == 3
    first = blocks[0].splitlines()
    assert len(first) == 4  # 2x2 pair
    j, i, w = first[0].split("\t")
    assert (j, i) == ("0", "0") and float(w) > 0


def test_pipeline_end_to_end(toy):
    out = toy["dir"] / "out.align"
    rc = main(["pipeline", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out)])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 3


def test_pipeline_vbh_flag(toy):
    out = toy["dir"] / "out.align"
    rc = main(["pipeline", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out), "--vbh"])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 3


def test_pipeline_threads_identical_output(toy):
    out1 = toy["dir"] / "o1.align"
    out2 = toy["dir"] / "o2.align"
    assert main(["pipeline", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out1), "--threads", "1"]) == 0
    assert main(["pipeline", "-s", toy["src"], "-t", toy["tgt"], "-o", str(out2), "--threads", "2"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_joined_bitext_input(tmp_path):
    joined = write(tmp_path / "joined", "a b ||| x y\nc ||| z\n")
    out = tmp_path / "out.align"
    assert main(["pipeline", "--bitext", joined, "-o", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 2


def test_symmetrize_cli(tmp_path, capsys):
    fwd = write(tmp_path / "f", "0-0 1-1\n0-0\n")
    rev = write(tmp_path / "r", "0-0\n0-0\n")  # target-source order
    assert main(["symmetrize", "--fwd", fwd, "--rev", rev, "--heuristic", "gdfa"]) == 0
    assert capsys.readouterr().out == "0-0 1-1\n0-0\n"
    assert main(["symmetrize", "--fwd", fwd, "--rev", rev, "--heuristic", "intersection"]) == 0
    assert capsys.readouterr().out == "0-0\n0-0\n"


def test_eval_cli(tmp_path, capsys):
    gold = write(tmp_path / "g", "0-0 1?1\n0-0\n")
    hyp = write(tmp_path / "h", "0-0 1-1\n0-0\n")
    assert main(["eval", "--gold", gold, "--hyp", hyp]) == 0
    assert capsys.readouterr().out == "precision=1.0000 recall=1.0000 aer=0.0000\n"


def test_eval_cli_per_sentence_and_undefined(tmp_path, capsys):
    gold = write(tmp_path / "g", "\n")
    hyp = write(tmp_path / "h", "\n")
    assert main(["eval", "--gold", gold, "--hyp", hyp, "--per-sentence"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("0\t")
    assert out[-1] == "precision=0.0000 recall=0.0000 aer=undefined"


def test_extract_cli(tmp_path, capsys):
    src = write(tmp_path / "s", "a b\n")
    tgt = write(tmp_path / "t", "x y\n")
    align = write(tmp_path / "a", "0-0 1-1\n")
    dump = tmp_path / "phr.tsv"
    assert main(["extract", "-s", src, "-t", tgt, "--align", align,
                 "--max-len", "2", "--dump", str(dump)]) == 0
    assert capsys.readouterr().out == "entries=3\n"
    assert sorted(dump.read_text().splitlines()) == ["a\tx", "a b\tx y", "b\ty"]


def test_sweep_cli(toy, tmp_path, capsys):
    gold = write(tmp_path / "g", "0-0 1-1\n0-0\n0-0 1-1 2-2\n")
    rc = main(["sweep", "-s", toy["src"], "-t", toy["tgt"], "--gold", gold,
               "--theta-grid", "1,3", "--delta-grid", "5"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    for line in lines:
        theta, delta, recall = line.split("\t")
        assert float(recall) >= 0.0


def test_bitext_and_split_files_conflict(toy, tmp_path, capsys):
    joined = write(tmp_path / "joined", "a ||| x\n")
    rc = main(["pipeline", "-s", toy["src"], "-t", toy["tgt"], "--bitext", joined,
               "-o", str(tmp_path / "o")])
    assert rc == 1
    assert "not both" in capsys.readouterr().err


def test_threads_env_override(monkeypatch):
    monkeypatch.setenv("HIERALIGN_THREADS", "3")
    assert resolve_threads("8") == 3
    monkeypatch.delenv("HIERALIGN_THREADS")
    assert resolve_threads("8") == 8
    assert resolve_threads("auto") == (os.cpu_count() or 1)


def test_align_missing_model_fails(toy, capsys):
    rc = main(["align", "-s", toy["src"], "-t", toy["tgt"], "-m", str(toy["dir"] / "nomodel")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_line_count_mismatch_fails(tmp_path, capsys):
    src = write(tmp_path / "s", "a\nb\n")
    tgt = write(tmp_path / "t", "x\n")
    rc = main(["pipeline", "-s", src, "-t", tgt, "-o", str(tmp_path / "o")])
    assert rc == 1
    assert "mismatch" in capsys.readouterr().err
