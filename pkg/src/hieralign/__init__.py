"""Unsupervised many-to-many word alignment by top-down BTG parsing.

Pipeline: train IBM Model 1 lexicons in both directions (variational Bayes
by default), build a per-pair soft association matrix from the symmetric
lexical scores and a positional distortion model, then beam-search the
best recursive bipartitioning of the matrix and project its terminal
blocks to alignment links.
"""

from .corpus import (
    NULL_ID,
    NULL_TOKEN,
    CorpusError,
    SentencePair,
    Vocabulary,
    build_vocabulary,
    load_joined_corpus,
    load_parallel_corpus,
)
from .evaluate import GoldAlignment, aer, load_gold
from .lexicon import (
    FORWARD,
    REVERSE,
    EmConfig,
    TTable,
    digamma,
    em_step,
    symmetric_lexical_score,
    train_ibm1,
    vbh_reestimate,
    viterbi_alignment,
)
from .parser import (
    INVERTED,
    STRAIGHT,
    Block,
    Derivation,
    SplitStep,
    asso,
    cut,
    f_avg,
    ncut,
    next_states,
    project,
    top_down_parse,
)
from .phrase import extract_phrases, phrase_table_size
from .pipeline import AlignerConfig, Model, align_lines, load_model, save_model, train_model
from .softmatrix import MatrixParams, SoftMatrix, build_soft_matrix, distortion
from .symmetrize import grow_diag_final_and, intersect, union_links

__version__ = "0.1.0"

__all__ = [
    "AlignerConfig",
    "Block",
    "CorpusError",
    "Derivation",
    "EmConfig",
    "FORWARD",
    "GoldAlignment",
    "INVERTED",
    "MatrixParams",
    "Model",
    "NULL_ID",
    "NULL_TOKEN",
    "REVERSE",
    "STRAIGHT",
    "SentencePair",
    "SoftMatrix",
    "SplitStep",
    "TTable",
    "Vocabulary",
    "aer",
    "align_lines",
    "asso",
    "build_soft_matrix",
    "build_vocabulary",
    "cut",
    "digamma",
    "distortion",
    "em_step",
    "extract_phrases",
    "f_avg",
    "grow_diag_final_and",
    "intersect",
    "load_gold",
    "load_joined_corpus",
    "load_model",
    "load_parallel_corpus",
    "ncut",
    "next_states",
    "phrase_table_size",
    "project",
    "save_model",
    "symmetric_lexical_score",
    "top_down_parse",
    "train_ibm1",
    "train_model",
    "union_links",
    "vbh_reestimate",
    "viterbi_alignment",
]
