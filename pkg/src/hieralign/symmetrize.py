"""Combine two directional alignments into one symmetric alignment.

All scan orders are pinned so the output is a pure function of the input
link sets: grow-diag scans current links in (j, i) order with a fixed
neighbor order, iterating to a fixpoint; the final step scans forward then
reverse input links in (j, i) order.
"""

from __future__ import annotations

HEURISTICS = ("intersection", "union", "gdfa")

# 8-neighborhood, adjacent before diagonal.
_NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def intersect(a_fwd, a_rev):
    return set(a_fwd) & set(a_rev)


def union_links(a_fwd, a_rev):
    return set(a_fwd) | set(a_rev)


def _check_bounds(links, n, m, label):
    for (j, i) in links:
        if not (0 <= j < n and 0 <= i < m):
            raise ValueError(f"{label} link {(j, i)} outside {n}x{m} pair")


def grow_diag_final_and(a_fwd, a_rev, n, m):
    """Grow the intersection toward the union, then the final-and pass.

    GROW-DIAG: repeatedly add union links 8-adjacent to a current link
    whose source or target word is still unaligned, scanning current links
    in (j, i) order until a whole pass adds nothing.

    FINAL-AND: add remaining links that appear in both directional inputs
    and whose source and target words are both still unaligned, scanning
    the forward then the reverse input in (j, i) order.
    """
    a_fwd = set(a_fwd)
    a_rev = set(a_rev)
    _check_bounds(a_fwd, n, m, "forward")
    _check_bounds(a_rev, n, m, "reverse")
    union = a_fwd | a_rev
    links = a_fwd & a_rev
    src_aligned = {j for j, _ in links}
    tgt_aligned = {i for _, i in links}

    changed = True
    while changed:
        changed = False
        for (j, i) in sorted(links):
            for dj, di in _NEIGHBORS:
                cand = (j + dj, i + di)
                if cand in links or cand not in union:
                    continue
                if cand[0] not in src_aligned or cand[1] not in tgt_aligned:
                    links.add(cand)
                    src_aligned.add(cand[0])
                    tgt_aligned.add(cand[1])
                    changed = True

    for side in (sorted(a_fwd), sorted(a_rev)):
        for (j, i) in side:
            if (j, i) in links or (j, i) not in a_fwd or (j, i) not in a_rev:
                continue
            if j not in src_aligned and i not in tgt_aligned:
                links.add((j, i))
                src_aligned.add(j)
                tgt_aligned.add(i)
    return links


def symmetrize(a_fwd, a_rev, n, m, heuristic="gdfa"):
    if heuristic == "intersection":
        return intersect(a_fwd, a_rev)
    if heuristic == "union":
        return union_links(a_fwd, a_rev)
    if heuristic == "gdfa":
        return grow_diag_final_and(a_fwd, a_rev, n, m)
    raise ValueError(f"unknown heuristic {heuristic!r} (choose from {HEURISTICS})")
