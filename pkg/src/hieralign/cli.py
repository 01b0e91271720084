"""Command-line interface: train, align, pipeline, symmetrize, eval, extract, sweep.

Standard output carries data only; progress, warnings and timings go to
standard error. The HIERALIGN_THREADS environment variable overrides the
--threads flag.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import evaluate, phrase, symmetrize
from .alignio import (
    AlignmentFormatError,
    format_alignment,
    parse_alignment_line,
    read_alignment_file,
)
from .corpus import (
    CorpusError,
    LoadStats,
    build_vocabulary,
    drop_empty,
    encode_pairs,
    read_bitext,
    read_bitext_joined,
)
from .evaluate import GoldFormatError
from .pipeline import AlignerConfig, align_lines, load_model, save_model, stderr_log, train_model


def _add_input_options(p, joined=True):
    p.add_argument("-s", "--source", help="source text, one sentence per line")
    p.add_argument("-t", "--target", help="target text, one sentence per line")
    if joined:
        p.add_argument("--bitext", help="joined corpus with a ' ||| ' separator")
        p.add_argument("--separator", default="|||", help="separator token for --bitext")


def _add_config_options(p):
    g = p.add_argument_group("training")
    g.add_argument("--em-iters", type=int, default=5, help="EM iterations per direction")
    g.add_argument("--no-vb", dest="vb", action="store_false", help="plain EM instead of variational Bayes")
    g.add_argument("--alpha", type=float, default=0.01, help="Dirichlet concentration for VB")
    g.add_argument("--no-null", dest="use_null", action="store_false", help="drop the NULL conditioning word")
    g.add_argument("--vbh", action="store_true", help="re-estimate tables from symmetrized Viterbi links")
    g.add_argument("--fallback-prob", type=float, default=1e-10, help="probability for unseen word pairs")
    g = p.add_argument_group("matrix and parsing")
    g.add_argument("--sigma-theta", type=float, default=3.0, help="lexical score temperature")
    g.add_argument("--sigma-delta", type=float, default=5.0, help="distortion temperature")
    g.add_argument("--no-distortion", dest="distortion", action="store_false", help="disable the distortion factor")
    g.add_argument("--distortion-threshold", type=float, default=0.5, dest="r",
                   help="relative-position threshold for the distortion bonus")
    g.add_argument("--p0", type=float, default=1e-4, help="flat distortion penalty and floor base")
    g.add_argument("--beam", type=int, default=10, help="beam width of the parser")
    g = p.add_argument_group("misc")
    g.add_argument("--max-phrase-len", type=int, default=7, help="phrase length cap for extraction")
    g.add_argument("--threads", default="auto", help="worker processes ('auto' = all cores)")
    g.add_argument("--max-sentence-len", type=int, default=200, help="skip pairs with a longer side")
    g.add_argument("--lowercase", action="store_true", help="lowercase input text")


def resolve_threads(value):
    env = os.environ.get("HIERALIGN_THREADS")
    if env is not None:
        return max(1, int(env))
    if value == "auto":
        return os.cpu_count() or 1
    return max(1, int(value))


def config_from_args(args):
    return AlignerConfig(
        em_iters=args.em_iters,
        vb=args.vb,
        alpha=args.alpha,
        use_null=args.use_null,
        vbh=args.vbh,
        fallback=args.fallback_prob,
        sigma_theta=args.sigma_theta,
        sigma_delta=args.sigma_delta,
        distortion=args.distortion,
        r=args.r,
        p0=args.p0,
        beam=args.beam,
        max_phrase_len=args.max_phrase_len,
        threads=resolve_threads(args.threads),
        max_sentence_len=args.max_sentence_len,
        lowercase=args.lowercase,
    )


def read_input(args):
    """Raw bitext from -s/-t or --bitext, per the flags given."""
    if getattr(args, "bitext", None):
        if args.source or args.target:
            raise CorpusError("give either --bitext or -s/-t, not both")
        return read_bitext_joined(args.bitext, args.separator, args.lowercase)
    if not args.source or not args.target:
        raise CorpusError("need both -s/--source and -t/--target (or --bitext)")
    return read_bitext(args.source, args.target, args.lowercase)


def _report_skips(stats):
    if stats.skipped_empty:
        stderr_log(f"skipped {stats.skipped_empty} pair(s) with an empty side")
    if stats.skipped_long:
        stderr_log(f"skipped {stats.skipped_long} pair(s) over the length limit")


def _train(args, config):
    stats = LoadStats()
    raw = drop_empty(read_input(args), stats)
    vsrc, vtgt = build_vocabulary(raw)
    pairs = encode_pairs(raw, vsrc, vtgt, max_len=config.max_sentence_len, stats=stats)
    _report_skips(stats)
    if not pairs:
        raise CorpusError("no usable sentence pairs after filtering")
    return train_model(pairs, vsrc, vtgt, config, log=stderr_log)


def cmd_train(args):
    config = config_from_args(args)
    model = _train(args, config)
    save_model(model, args.out_dir)
    stderr_log(f"model written to {args.out_dir}")
    return 0


def cmd_align(args):
    config = config_from_args(args)
    model = load_model(args.model)
    # Alignment-time knobs come from the command line, not from the snapshot.
    model.config.beam = config.beam
    model.config.threads = config.threads
    model.config.max_sentence_len = config.max_sentence_len
    bitext = read_input(args)
    started = time.perf_counter()
    dump_fh = open(args.dump_matrix, "w", encoding="utf-8") if args.dump_matrix else None
    try:
        lines = align_lines(bitext, model, config.matrix_params(), dump_fh)
    finally:
        if dump_fh:
            dump_fh.close()
    for line in lines:
        sys.stdout.write(line + "\n")
    if args.stats:
        elapsed = time.perf_counter() - started
        rate = len(bitext) / elapsed if elapsed > 0 else float("inf")
        stderr_log(f"aligned {len(bitext)} pairs in {elapsed:.2f}s ({rate:.1f} pairs/s)")
    return 0


def cmd_pipeline(args):
    config = config_from_args(args)
    model = _train(args, config)
    bitext = read_input(args)
    started = time.perf_counter()
    lines = align_lines(bitext, model)
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    if args.model_dir:
        save_model(model, args.model_dir)
    stderr_log(f"aligned {len(bitext)} pairs in {time.perf_counter() - started:.2f}s")
    return 0


def cmd_symmetrize(args):
    fwd = read_alignment_file(args.fwd)
    rev = read_alignment_file(args.rev)
    if len(fwd) != len(rev):
        raise CorpusError(f"--fwd has {len(fwd)} lines, --rev has {len(rev)} lines")
    for a_fwd, a_rev in zip(fwd, rev):
        a_rev = {(j, i) for i, j in a_rev}  # reverse files carry i-j links
        n = max((j for j, _ in a_fwd | a_rev), default=0) + 1
        m = max((i for _, i in a_fwd | a_rev), default=0) + 1
        merged = symmetrize.symmetrize(a_fwd, a_rev, n, m, args.heuristic)
        sys.stdout.write(format_alignment(merged) + "\n")
    return 0


def _fmt_metric(value):
    return "undefined" if value is None else f"{value:.4f}"


def cmd_eval(args):
    golds = evaluate.load_gold(args.gold)
    hyps = read_alignment_file(args.hyp)
    if len(golds) != len(hyps):
        raise CorpusError(f"gold has {len(golds)} lines, hypothesis has {len(hyps)} lines")
    if args.per_sentence:
        for k, m in enumerate(evaluate.per_sentence(hyps, golds)):
            sys.stdout.write(
                f"{k}\t{_fmt_metric(m['precision'])}\t{_fmt_metric(m['recall'])}\t{_fmt_metric(m['aer'])}\n"
            )
    m = evaluate.aer(hyps, golds)
    sys.stdout.write(
        f"precision={_fmt_metric(m['precision'])} recall={_fmt_metric(m['recall'])} aer={_fmt_metric(m['aer'])}\n"
    )
    return 0


def cmd_extract(args):
    bitext = read_bitext(args.source, args.target, args.lowercase)
    alignments = read_alignment_file(args.align)
    if len(bitext) != len(alignments):
        raise CorpusError(f"corpus has {len(bitext)} lines, alignment has {len(alignments)} lines")
    table = set()
    for (src, tgt), links in zip(bitext, alignments):
        table |= phrase.phrase_strings(src, tgt, links, args.max_len, not args.no_unaligned_extension)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            for src_phrase, tgt_phrase in sorted(table):
                fh.write(f"{src_phrase}\t{tgt_phrase}\n")
    sys.stdout.write(f"entries={len(table)}\n")
    return 0


def cmd_sweep(args):
    config = config_from_args(args)
    model = _train(args, config)
    bitext = read_input(args)
    golds = evaluate.load_gold(args.gold)
    theta_grid = [float(x) for x in args.theta_grid.split(",")]
    delta_grid = [float(x) for x in args.delta_grid.split(",")]
    for sigma_theta in theta_grid:
        for sigma_delta in delta_grid:
            model.config.sigma_theta = sigma_theta
            model.config.sigma_delta = sigma_delta
            lines = align_lines(bitext, model)
            hyps = [parse_alignment_line(line) for line in lines]
            metrics = evaluate.aer(hyps, golds)
            sys.stdout.write(f"{sigma_theta:g}\t{sigma_delta:g}\t{_fmt_metric(metrics['recall'])}\n")
    return 0


def build_arg_parser():
    top = argparse.ArgumentParser(prog="hieralign", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train translation tables and save a model")
    _add_input_options(p)
    p.add_argument("-o", "--out-dir", required=True, help="model output directory")
    _add_config_options(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("align", help="align a corpus with a trained model")
    _add_input_options(p)
    p.add_argument("-m", "--model", required=True, help="model directory from train")
    p.add_argument("--stats", action="store_true", help="report timing to stderr")
    p.add_argument("--dump-matrix", help="write per-pair weight matrices to this TSV file")
    _add_config_options(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("pipeline", help="train and align in one run")
    _add_input_options(p)
    p.add_argument("-o", "--out", required=True, help="alignment output file")
    p.add_argument("--model-dir", help="also save the trained model to this directory")
    _add_config_options(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("symmetrize", help="combine two directional alignments")
    p.add_argument("--fwd", required=True, help="source-to-target Pharaoh file (j-i)")
    p.add_argument("--rev", required=True, help="target-to-source Pharaoh file (i-j)")
    p.add_argument("--heuristic", default="gdfa", choices=symmetrize.HEURISTICS)
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("eval", help="score a hypothesis against gold links")
    p.add_argument("--gold", required=True, help="gold file: j-i sure, j?i possible")
    p.add_argument("--hyp", required=True, help="hypothesis Pharaoh file")
    p.add_argument("--per-sentence", action="store_true", help="also print per-line TSV metrics")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("extract", help="extract consistent phrase pairs")
    p.add_argument("-s", "--source", required=True)
    p.add_argument("-t", "--target", required=True)
    p.add_argument("--align", required=True, help="Pharaoh alignment file")
    p.add_argument("--max-len", type=int, default=7)
    p.add_argument("--no-unaligned-extension", action="store_true",
                   help="keep only spans whose boundary words are aligned")
    p.add_argument("--dump", help="write the distinct phrase pairs to this TSV file")
    p.add_argument("--lowercase", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sweep", help="grid sigma_theta x sigma_delta against a gold file")
    _add_input_options(p)
    p.add_argument("--gold", required=True)
    p.add_argument("--theta-grid", default="1,2,3,4")
    p.add_argument("--delta-grid", default="1,2,5,10")
    _add_config_options(p)
    p.set_defaults(func=cmd_sweep)
    return top


def main(argv=None):
    args = build_arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, GoldFormatError, AlignmentFormatError, ValueError) as exc:
        stderr_log(f"error: {exc}")
        return 1
    except FileNotFoundError as exc:
        stderr_log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
