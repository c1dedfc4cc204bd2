"""Axis-aligned bounding-volume hierarchy for self-overlap queries.

The tree is built by median splits along the longest box axis and stored as
flat numpy arrays. Self-queries traverse node pairs level by level, with the
whole frontier processed as one vectorized batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BVH:
    lo: np.ndarray          # (nodes, d) box minima
    hi: np.ndarray          # (nodes, d) box maxima
    left: np.ndarray        # child indices, -1 for leaves
    right: np.ndarray
    start: np.ndarray       # leaf range into ``order``
    count: np.ndarray
    order: np.ndarray       # primitive permutation
    prim_lo: np.ndarray
    prim_hi: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.left)


def build_bvh(lo, hi, leaf_size: int = 8) -> BVH:
    """Build a BVH over primitive boxes ``[lo[i], hi[i]]``."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n, d = lo.shape
    centre = 0.5 * (lo + hi)
    order = np.arange(n)
    nodes_lo, nodes_hi, left, right, start, count = [], [], [], [], [], []

    def new_node(s, e):
        idx = order[s:e]
        nodes_lo.append(lo[idx].min(axis=0) if e > s else np.zeros(d))
        nodes_hi.append(hi[idx].max(axis=0) if e > s else np.zeros(d))
        left.append(-1)
        right.append(-1)
        start.append(s)
        count.append(e - s)
        return len(left) - 1

    root = new_node(0, n)
    stack = [root]
    while stack:
        node = stack.pop()
        s, c = start[node], count[node]
        if c <= leaf_size:
            continue
        idx = order[s:s + c]
        ext = nodes_hi[node] - nodes_lo[node]
        ax = int(np.argmax(ext))
        mid = c // 2
        part = np.argpartition(centre[idx, ax], mid)
        order[s:s + c] = idx[part]
        lc = new_node(s, s + mid)
        rc = new_node(s + mid, s + c)
        left[node], right[node] = lc, rc
        count[node] = 0
        stack.extend((lc, rc))
    return BVH(np.array(nodes_lo), np.array(nodes_hi), np.array(left), np.array(right),
               np.array(start), np.array(count), order, lo, hi)


def _boxes_overlap(lo, hi, a, b):
    return np.all((lo[a] <= hi[b]) & (lo[b] <= hi[a]), axis=1)


def _leaf_cross_pairs(tree, a, b):
    """All primitive pairs between leaf a[k] and leaf b[k]."""
    ca, cb = tree.count[a], tree.count[b]
    tot = ca * cb
    if tot.sum() == 0:
        return np.empty((0, 2), dtype=np.int64)
    rep = np.repeat(np.arange(len(a)), tot)
    offs = np.arange(tot.sum()) - np.repeat(np.cumsum(tot) - tot, tot)
    i = tree.start[a][rep] + offs // cb[rep]
    j = tree.start[b][rep] + offs % cb[rep]
    return np.stack([tree.order[i], tree.order[j]], axis=1)


def _leaf_self_pairs(tree, a):
    c = tree.count[a]
    out = []
    for size in np.unique(c):
        if size < 2:
            continue
        iu, ju = np.triu_indices(size, 1)
        leaves = a[c == size]
        s = tree.start[leaves][:, None]
        out.append(np.stack([tree.order[(s + iu).ravel()], tree.order[(s + ju).ravel()]], axis=1))
    return np.concatenate(out) if out else np.empty((0, 2), dtype=np.int64)


def self_overlap_pairs(tree: BVH) -> np.ndarray:
    """Pairs (i, j), i < j, of primitives whose closed boxes overlap."""
    if len(tree.order) < 2:
        return np.empty((0, 2), dtype=np.int64)
    is_leaf = tree.left < 0
    found = []
    same = np.array([0])
    a = np.empty(0, dtype=np.int64)
    b = np.empty(0, dtype=np.int64)
    while len(same) or len(a):
        # diagonal pairs (node with itself)
        leaf = is_leaf[same]
        if leaf.any():
            found.append(_leaf_self_pairs(tree, same[leaf]))
        inner = same[~leaf]
        a = np.concatenate([a, tree.left[inner]])
        b = np.concatenate([b, tree.right[inner]])
        same = np.concatenate([tree.left[inner], tree.right[inner]])
        # off-diagonal pairs
        if len(a):
            keep = _boxes_overlap(tree.lo, tree.hi, a, b)
            a, b = a[keep], b[keep]
            la, lb = is_leaf[a], is_leaf[b]
            both = la & lb
            if both.any():
                found.append(_leaf_cross_pairs(tree, a[both], b[both]))
            a, b, la, lb = a[~both], b[~both], la[~both], lb[~both]
            # split the non-leaf side with the larger box (or the only non-leaf side)
            va = np.prod(tree.hi[a] - tree.lo[a], axis=1)
            vb = np.prod(tree.hi[b] - tree.lo[b], axis=1)
            split_a = ~la & (lb | (va >= vb))
            sa, sb = a[split_a], b[split_a]
            ta, tb = a[~split_a], b[~split_a]
            a = np.concatenate([tree.left[sa], tree.right[sa], ta, ta])
            b = np.concatenate([sb, sb, tree.left[tb], tree.right[tb]])
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.concatenate(found)
    keep = _boxes_overlap(tree.prim_lo, tree.prim_hi, pairs[:, 0], pairs[:, 1])
    pairs = pairs[keep]
    pairs = np.sort(pairs, axis=1)
    return np.unique(pairs, axis=0)


def brute_force_overlap_pairs(lo, hi) -> np.ndarray:
    """All-pairs reference for :func:`self_overlap_pairs`."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    i, j = np.triu_indices(len(lo), 1)
    keep = _boxes_overlap(lo, hi, i, j)
    return np.stack([i[keep], j[keep]], axis=1)
