"""Hot loops: bracket state sums and finite-target labeling counts.

Each kernel exists twice: a numba ``@njit`` loop version and a vectorized
pure-numpy version.  ``WELDTUBE_BACKEND=numpy`` (or a missing numba) selects
the numpy path; the default is numba.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

__all__ = [
    "backend",
    "set_backend",
    "bracket_histogram",
    "count_quandle_labelings",
    "count_group_labelings",
]

_backend = os.environ.get("WELDTUBE_BACKEND", "numba").strip().lower()
if _backend not in ("numba", "numpy"):
    raise ValueError(f"WELDTUBE_BACKEND must be 'numba' or 'numpy', got {_backend!r}")
if numba is None:
    _backend = "numpy"


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    _backend = name


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# -- bracket ----------------------------------------------------------------
#
# Nodes are the ends of semi-arcs: node 2g is the end arriving at global
# passage g, node 2g+1 the end leaving it.  `arc` pairs each leaving end with
# the next arriving end.  `ends[c] = (over_in, over_out, under_in, under_out)`.
# At a crossing the oriented smoothing joins over_in-under_out and
# under_in-over_out; the other joins the two incoming and the two outgoing
# ends.  State bit 1 selects the A smoothing, which is the oriented one at a
# positive crossing.


@_njit
def _bracket_histogram_numba(arc, ends, signs):
    n = ends.shape[0]
    m = arc.shape[0]
    # each circle holds at least one arc, so loops <= m // 2 (split diagrams exceed n + 1)
    hist = np.zeros((n + 1, m // 2 + 1), dtype=np.int64)
    smooth = np.empty(m, dtype=np.int64)
    seen = np.zeros(m, dtype=np.uint8)
    for state in range(1 << n):
        a_count = 0
        for c in range(n):
            a_side = (state >> c) & 1
            a_count += a_side
            oi, oo, ui, uo = ends[c, 0], ends[c, 1], ends[c, 2], ends[c, 3]
            if (a_side == 1) == (signs[c] > 0):
                smooth[oi] = uo
                smooth[uo] = oi
                smooth[ui] = oo
                smooth[oo] = ui
            else:
                smooth[oi] = ui
                smooth[ui] = oi
                smooth[oo] = uo
                smooth[uo] = oo
        seen[:] = 0
        loops = 0
        for start in range(m):
            if seen[start]:
                continue
            loops += 1
            v = start
            while True:
                seen[v] = 1
                w = arc[v]
                seen[w] = 1
                v = smooth[w]
                if v == start:
                    break
        hist[a_count, loops] += 1
    return hist


def _bracket_histogram_numpy(arc, ends, signs):
    n = ends.shape[0]
    m = arc.shape[0]
    states = ((np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)
    oriented = states == (signs[None, :] > 0)
    smooth = np.empty((1 << n, m), dtype=np.int64)
    oi, oo, ui, uo = (ends[:, k][None, :] for k in range(4))
    smooth[:, ends[:, 0]] = np.where(oriented, uo, ui)
    smooth[:, ends[:, 3]] = np.where(oriented, oi, oo)
    smooth[:, ends[:, 2]] = np.where(oriented, oo, oi)
    smooth[:, ends[:, 1]] = np.where(oriented, ui, uo)
    # min-label propagation over the 2-regular graph (arc + smoothing edges)
    labels = np.broadcast_to(np.arange(m), smooth.shape).copy()
    while True:
        nxt = np.minimum(labels, labels[:, arc])
        nxt = np.minimum(nxt, np.take_along_axis(nxt, smooth, axis=1))
        if np.array_equal(nxt, labels):
            break
        labels = nxt
    loops = (labels == np.arange(m)[None, :]).sum(axis=1)
    a_count = states.sum(axis=1)
    # each circle holds at least one arc, so loops <= m // 2 (split diagrams exceed n + 1)
    hist = np.zeros((n + 1, m // 2 + 1), dtype=np.int64)
    np.add.at(hist, (a_count, loops), 1)
    return hist


def bracket_histogram(arc: np.ndarray, ends: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """hist[a, loops] = number of states with `a` A-smoothings and `loops` circles."""
    arc = np.ascontiguousarray(arc, dtype=np.int64)
    ends = np.ascontiguousarray(ends, dtype=np.int64).reshape(-1, 4)
    signs = np.ascontiguousarray(signs, dtype=np.int64)
    if ends.shape[0] == 0:
        hist = np.zeros((1, 2), dtype=np.int64)
        hist[0, 0] = 1
        return hist
    if _backend == "numba":
        return _bracket_histogram_numba(arc, ends, signs)
    return _bracket_histogram_numpy(arc, ends, signs)


# -- labelings ---------------------------------------------------------------
#
# Variables 0..g-1 take values in a finite table.  A constraint is checked as
# soon as its largest variable is assigned ("level").  Constraints are sorted
# by level; `starts[k]:starts[k+1]` are those of level k.


@_njit
def _quandle_count_numba(table, g, rel, starts):
    q = table.shape[0]
    if g == 0:
        return 1
    vals = np.full(g, -1, dtype=np.int64)
    count = 0
    k = 0
    while k >= 0:
        vals[k] += 1
        if vals[k] >= q:
            vals[k] = -1
            k -= 1
            continue
        ok = True
        for r in range(starts[k], starts[k + 1]):
            if table[vals[rel[r, 0]], vals[rel[r, 1]]] != vals[rel[r, 2]]:
                ok = False
                break
        if not ok:
            continue
        if k == g - 1:
            count += 1
        else:
            k += 1
    return count


def _quandle_count_numpy(table, g, rel, starts):
    q = table.shape[0]
    frontier = np.zeros((1, 0), dtype=np.int64)
    for k in range(g):
        n = frontier.shape[0]
        frontier = np.concatenate(
            [np.repeat(frontier, q, axis=0), np.tile(np.arange(q), n)[:, None]], axis=1)
        for r in range(starts[k], starts[k + 1]):
            a, b, c = rel[r]
            keep = table[frontier[:, a], frontier[:, b]] == frontier[:, c]
            frontier = frontier[keep]
        if frontier.shape[0] == 0:
            return 0
    return int(frontier.shape[0])


def count_quandle_labelings(table: np.ndarray, g: int, relations) -> int:
    """Labelings x: [0,g) -> Q with table[x[a], x[b]] == x[c] for each (a, b, c)."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    rel = np.asarray(relations, dtype=np.int64).reshape(-1, 3)
    levels = rel.max(axis=1) if len(rel) else np.zeros(0, dtype=np.int64)
    order = np.argsort(levels, kind="stable")
    rel = np.ascontiguousarray(rel[order])
    starts = np.searchsorted(levels[order], np.arange(g + 1)).astype(np.int64)
    if _backend == "numba":
        return int(_quandle_count_numba(table, g, rel, starts))
    return _quandle_count_numpy(table, g, rel, starts)


@_njit
def _group_count_numba(table, inverse, identity, g, letters, offsets, starts):
    n = table.shape[0]
    if g == 0:
        return 1
    vals = np.full(g, -1, dtype=np.int64)
    count = 0
    k = 0
    while k >= 0:
        vals[k] += 1
        if vals[k] >= n:
            vals[k] = -1
            k -= 1
            continue
        ok = True
        for r in range(starts[k + 1], starts[k + 2]):
            acc = identity
            for i in range(offsets[r], offsets[r + 1]):
                x = letters[i]
                if x > 0:
                    acc = table[acc, vals[x - 1]]
                else:
                    acc = table[acc, inverse[vals[-x - 1]]]
            if acc != identity:
                ok = False
                break
        if not ok:
            continue
        if k == g - 1:
            count += 1
        else:
            k += 1
    return count


def _group_count_numpy(table, inverse, identity, g, letters, offsets, starts):
    n = table.shape[0]
    frontier = np.zeros((1, 0), dtype=np.int64)
    for k in range(g):
        size = frontier.shape[0]
        frontier = np.concatenate(
            [np.repeat(frontier, n, axis=0), np.tile(np.arange(n), size)[:, None]], axis=1)
        for r in range(starts[k + 1], starts[k + 2]):
            acc = np.full(frontier.shape[0], identity, dtype=np.int64)
            for x in letters[offsets[r]:offsets[r + 1]]:
                val = frontier[:, x - 1] if x > 0 else inverse[frontier[:, -x - 1]]
                acc = table[acc, val]
            frontier = frontier[acc == identity]
        if frontier.shape[0] == 0:
            return 0
    return int(frontier.shape[0])


def count_group_labelings(table: np.ndarray, inverse: np.ndarray, identity: int,
                          g: int, relators) -> int:
    """Assignments of g generators satisfying every relator (signed 1-based letters)."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    inverse = np.ascontiguousarray(inverse, dtype=np.int64)
    relators = [tuple(r) for r in relators]
    # level 0 holds letter-free relators; level k+1 those whose top generator is k
    levels = np.array([max((abs(x) for x in r), default=0) for r in relators], dtype=np.int64)
    order = np.argsort(levels, kind="stable")
    relators = [relators[i] for i in order]
    letters = np.array([x for r in relators for x in r], dtype=np.int64)
    offsets = np.zeros(len(relators) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(r) for r in relators])
    starts = np.searchsorted(levels[order], np.arange(g + 2)).astype(np.int64)
    if _backend == "numba":
        return int(_group_count_numba(table, inverse, int(identity), g, letters, offsets, starts))
    return _group_count_numpy(table, inverse, int(identity), g, letters, offsets, starts)
