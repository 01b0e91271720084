"""Top-down beam-search BTG parsing of a soft matrix.

A parse recursively bipartitions the matrix block ([j0,j1),[i0,i1)) at a
split point (j, i) with orientation straight (diagonal sub-blocks aligned)
or inverted (anti-diagonal sub-blocks aligned). Each split is scored by
the mean F1 of its two aligned sub-blocks, which equals 1 - Ncut/2; a
derivation's score is the sum of log scores over its splits. Blocks with
one source or one target word are terminal and project to cross-product
links, which makes the final alignment many-to-many with every word
covered.

The search is level-synchronous: every state at level l holds exactly l
splits, one block is expanded per level (the top of the stack), and the
best beam_k successors survive. All terminal states ever generated compete
for the final argmax. Ties break on (score, then lexicographically
smallest step sequence by (j, i, straight < inverted)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STRAIGHT = 0
INVERTED = 1

# Scores are accumulated as sums of logs; F_avg is floored before the log.
F_AVG_FLOOR = 1e-300


@dataclass(frozen=True)
class Block:
    """Half-open source span [j0, j1) times target span [i0, i1)."""

    j0: int
    j1: int
    i0: int
    i1: int

    def __post_init__(self):
        if not (0 <= self.j0 < self.j1 and 0 <= self.i0 < self.i1):
            raise ValueError(f"degenerate block {self}")

    @property
    def is_terminal(self):
        return self.j1 - self.j0 == 1 or self.i1 - self.i0 == 1


@dataclass(frozen=True)
class SplitStep:
    """Interior split at source j, target i (absolute), with orientation gamma."""

    j: int
    i: int
    gamma: int


@dataclass(frozen=True)
class Derivation:
    """Ordered split steps plus the terminal blocks they produced."""

    steps: tuple
    leaves: tuple
    n: int
    m: int
    score: float


class ParserState:
    """Search state: unparsed-block stack, split history, score, tie key."""

    __slots__ = ("stack", "splits", "leaves", "v", "seq")

    def __init__(self, stack, splits, leaves, v, seq):
        self.stack = stack
        self.splits = splits
        self.leaves = leaves
        self.v = v
        self.seq = seq

    @property
    def is_terminal(self):
        return not self.stack


def sub_blocks(block, j, i, gamma):
    """(left, right) sub-blocks of a split; left holds source span [j0, j)."""
    if gamma == STRAIGHT:
        return Block(block.j0, j, block.i0, i), Block(j, block.j1, i, block.i1)
    return Block(block.j0, j, i, block.i1), Block(j, block.j1, block.i0, i)


def asso(matrix, rows, cols):
    """Total weight of the sub-block rows x cols, O(1) via the prefix sums."""
    j0, j1 = rows
    i0, i1 = cols
    p = matrix.prefix
    return float(p[j1, i1] - p[j0, i1] - p[j1, i0] + p[j0, i0])


def _check_interior(block, step):
    if not (block.j0 < step.j < block.j1 and block.i0 < step.i < block.i1):
        raise ValueError(f"split {step} not interior to {block}")


def cut(matrix, block, step):
    """Weight severed by the split: the two sub-blocks left unaligned."""
    _check_interior(block, step)
    x = (block.j0, step.j)
    xbar = (step.j, block.j1)
    y = (block.i0, step.i)
    ybar = (step.i, block.i1)
    if step.gamma == STRAIGHT:
        return asso(matrix, x, ybar) + asso(matrix, xbar, y)
    return asso(matrix, x, y) + asso(matrix, xbar, ybar)


def ncut(matrix, block, step):
    """Normalized cut of the split; in (0, 2) for positive matrices."""
    _check_interior(block, step)
    x = (block.j0, step.j)
    xbar = (step.j, block.j1)
    y = (block.i0, step.i)
    ybar = (step.i, block.i1)
    c = cut(matrix, block, step)
    if step.gamma == STRAIGHT:
        a = asso(matrix, x, y)
        b = asso(matrix, xbar, ybar)
    else:
        a = asso(matrix, x, ybar)
        b = asso(matrix, xbar, y)
    return c / (c + 2.0 * a) + c / (c + 2.0 * b)


def f_avg(matrix, block, step):
    """Mean F1 of the two aligned sub-blocks; equals 1 - ncut/2."""
    return 1.0 - ncut(matrix, block, step) / 2.0


def next_states(state, matrix):
    """All successors of a non-terminal state.

    The top stack block is popped and split at every interior (j, i) in
    both orientations; non-terminal sub-blocks go back on the stack (right
    first, then left), terminal sub-blocks become leaves.
    """
    if state.is_terminal:
        raise ValueError("cannot expand a terminal state")
    block = state.stack[-1]
    rest = state.stack[:-1]
    out = []
    for j in range(block.j0 + 1, block.j1):
        for i in range(block.i0 + 1, block.i1):
            for gamma in (STRAIGHT, INVERTED):
                step = SplitStep(j, i, gamma)
                v = state.v + math.log(max(f_avg(matrix, block, step), F_AVG_FLOOR))
                left, right = sub_blocks(block, j, i, gamma)
                stack = rest
                if not right.is_terminal:
                    stack = stack + (right,)
                if not left.is_terminal:
                    stack = stack + (left,)
                leaves = state.leaves + tuple(b for b in (left, right) if b.is_terminal)
                out.append(
                    ParserState(
                        stack,
                        state.splits + ((block, step),),
                        leaves,
                        v,
                        state.seq + ((j, i, gamma),),
                    )
                )
    return out


def _expand_block(matrix, block):
    """Vectorized scores for every interior split of one block.

    Returns (js, is_, logf, term): the split coordinates and, indexed as
    [jj, ii, gamma], the log F_avg of each split and whether both of its
    sub-blocks are terminal.
    """
    p = matrix.prefix
    j0, j1, i0, i1 = block.j0, block.j1, block.i0, block.i1
    js = np.arange(j0 + 1, j1)
    is_ = np.arange(i0 + 1, i1)
    pji = p[np.ix_(js, is_)]
    pj_i0 = p[js, i0][:, None]
    pj_i1 = p[js, i1][:, None]
    pj0_i = p[j0, is_][None, :]
    pj1_i = p[j1, is_][None, :]
    a_xy = pji - pj0_i - pj_i0 + p[j0, i0]
    a_xbyb = p[j1, i1] - pj_i1 - pj1_i + pji
    a_xyb = pj_i1 - p[j0, i1] - pji + pj0_i
    a_xby = pj1_i - pji - p[j1, i0] + pj_i0
    c_s = a_xyb + a_xby
    c_i = a_xy + a_xbyb
    ncut_s = c_s / (c_s + 2.0 * a_xy) + c_s / (c_s + 2.0 * a_xbyb)
    ncut_i = c_i / (c_i + 2.0 * a_xyb) + c_i / (c_i + 2.0 * a_xby)
    favg = np.stack([1.0 - ncut_s / 2.0, 1.0 - ncut_i / 2.0], axis=-1)
    logf = np.log(np.maximum(favg, F_AVG_FLOOR))

    left_narrow = (js - j0 == 1)[:, None]
    right_narrow = (j1 - js == 1)[:, None]
    low_narrow = (is_ - i0 == 1)[None, :]
    high_narrow = (i1 - is_ == 1)[None, :]
    term_s = (left_narrow | low_narrow) & (right_narrow | high_narrow)
    term_i = (left_narrow | high_narrow) & (right_narrow | low_narrow)
    term = np.stack([term_s, term_i], axis=-1)
    return js, is_, logf, term


def _materialize(parent, j, i, gamma, v):
    block = parent.stack[-1]
    step = SplitStep(int(j), int(i), int(gamma))
    left, right = sub_blocks(block, step.j, step.i, step.gamma)
    stack = parent.stack[:-1]
    if not right.is_terminal:
        stack = stack + (right,)
    if not left.is_terminal:
        stack = stack + (left,)
    leaves = parent.leaves + tuple(b for b in (left, right) if b.is_terminal)
    return ParserState(
        stack,
        parent.splits + ((block, step),),
        leaves,
        float(v),
        parent.seq + ((step.j, step.i, step.gamma),),
    )


def top_down_parse(matrix, beam_k=10):
    """Best derivation found by beam search; see the module docstring.

    A 1 x m or n x 1 matrix is already terminal and yields the empty
    derivation whose single leaf is the root block.
    """
    if beam_k < 1:
        raise ValueError("beam_k must be >= 1")
    n, m = matrix.n, matrix.m
    root = Block(0, n, 0, m)
    if root.is_terminal:
        return Derivation((), (root,), n, m, 0.0)

    beam = [ParserState((root,), (), (), 0.0, ())]
    best_v = -math.inf
    best_seq = None
    best_state = None

    for _ in range(min(n, m)):
        parents = [s for s in beam if s.stack]
        if not parents:
            break
        vs_parts = []
        term_parts = []
        meta = []  # (parent, JS, IS, length) per part, aligned with offsets
        for s in parents:
            js, is_, logf, term = _expand_block(matrix, s.stack[-1])
            vs_parts.append((s.v + logf).ravel())
            term_parts.append((term & (len(s.stack) == 1)).ravel())
            meta.append((s, js, is_, logf.size))
        pool_v = np.concatenate(vs_parts)
        pool_term = np.concatenate(term_parts)
        offsets = np.cumsum([0] + [mt[3] for mt in meta])

        def candidate(g):
            """(parent, j, i, gamma) of global pool index g."""
            part = int(np.searchsorted(offsets, g, side="right")) - 1
            s, js, is_, _ = meta[part]
            local = g - offsets[part]
            jj, ii, gg = np.unravel_index(local, (len(js), len(is_), 2))
            return s, int(js[jj]), int(is_[ii]), int(gg)

        def seq_key(g):
            s, j, i, gamma = candidate(g)
            return s.seq + ((j, i, gamma),)

        # Every terminal successor competes for the final argmax, pruned or not.
        term_idx = np.flatnonzero(pool_term)
        if term_idx.size:
            tv = pool_v[term_idx]
            group_max = tv.max()
            if group_max >= best_v:
                contenders = term_idx[tv == group_max]
                g = min(contenders, key=seq_key) if contenders.size > 1 else int(contenders[0])
                key = seq_key(g)
                if group_max > best_v or key < best_seq:
                    s, j, i, gamma = candidate(g)
                    best_v = float(group_max)
                    best_seq = key
                    best_state = _materialize(s, j, i, gamma, group_max)

        # Keep the top beam_k candidates by score, ties by step sequence.
        size = pool_v.size
        if size <= beam_k:
            kept = list(range(size))
        else:
            thr = np.partition(pool_v, size - beam_k)[size - beam_k]
            strict = np.flatnonzero(pool_v > thr)
            tied = np.flatnonzero(pool_v == thr)
            need = beam_k - strict.size
            if tied.size > need:
                tied = sorted(tied.tolist(), key=seq_key)[:need]
            kept = strict.tolist() + list(tied)

        new_beam = []
        for g in kept:
            s, j, i, gamma = candidate(g)
            new_beam.append(_materialize(s, j, i, gamma, pool_v[g]))
        new_beam.sort(key=lambda s: (-s.v, s.seq))
        beam = new_beam

    if best_state is None:
        raise RuntimeError("beam search ended without a terminal state")
    return Derivation(best_state.splits, best_state.leaves, n, m, best_state.v)


def project(derivation):
    """Alignment links of a derivation: cross products of its leaf blocks."""
    links = set()
    for leaf in derivation.leaves:
        for j in range(leaf.j0, leaf.j1):
            for i in range(leaf.i0, leaf.i1):
                links.add((j, i))
    return links
