"""Presentation-level and polynomial invariants of Gauss codes.

The group is the "upper" Wirtinger group: one generator per arc (a maximal run
of passages between consecutive under passages), and at a crossing of sign e
with over arc o, incoming under arc u and outgoing under arc v the relation
``v = o^e u o^-e``.  Open ends cut arcs but add no relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .diagram import OVER, UNDER, GaussCode, writhe
from .finite import FiniteGroup, FiniteQuandle
from .polynomial import LaurentPolynomial

__all__ = [
    "GroupPresentation",
    "QuandlePresentation",
    "AbelianInvariants",
    "ArcStructure",
    "arc_structure",
    "wirtinger_group",
    "knot_quandle",
    "count_quandle_colorings",
    "count_group_homs",
    "abelianization",
    "smith_normal_form",
    "fox_matrix",
    "alexander_polynomial",
    "kauffman_bracket",
    "f_polynomial",
    "tietze_simplify",
    "free_reduce",
]


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.generator_count < 0:
            raise ValueError("generator_count must be nonnegative")
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.generator_count:
                    raise ValueError(f"generator {x} out of range in relator {r}")

    def relabeled(self) -> "GroupPresentation":
        """Rename generators by first appearance in the relator list."""
        mapping: dict[int, int] = {}
        for r in self.relators:
            for x in r:
                if abs(x) not in mapping:
                    mapping[abs(x)] = len(mapping) + 1
        rels = tuple(tuple(mapping[abs(x)] * (1 if x > 0 else -1) for x in r)
                     for r in self.relators)
        return GroupPresentation(self.generator_count, rels)

    def __str__(self) -> str:
        def word(r):
            return "*".join(f"x{abs(x)}" + ("" if x > 0 else "^-1") for x in r) or "1"
        gens = ", ".join(f"x{i}" for i in range(1, self.generator_count + 1))
        return f"< {gens} | {', '.join(word(r) for r in self.relators)} >"


@dataclass(frozen=True)
class QuandlePresentation:
    """Relations (a, b, c) mean a ▷ b = c; generators are 1-based."""

    generator_count: int
    relations: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        for rel in self.relations:
            if len(rel) != 3 or any(not 1 <= x <= self.generator_count for x in rel):
                raise ValueError(f"relation {rel} out of range")


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if any(d <= 1 for d in self.torsion):
            raise ValueError("torsion factors must exceed 1")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion factors must form a divisibility chain")

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


# -- arcs ---------------------------------------------------------------------

@dataclass(frozen=True)
class ArcStructure:
    arc_count: int
    over_arc: dict[int, int]    # crossing -> arc holding its over passage
    under_in: dict[int, int]    # crossing -> arc ending at its under passage
    under_out: dict[int, int]   # crossing -> arc starting after it


def arc_structure(code: GaussCode) -> ArcStructure:
    """Arcs are numbered from 1, component by component."""
    over_arc: dict[int, int] = {}
    under_in: dict[int, int] = {}
    under_out: dict[int, int] = {}
    base = 0
    for comp in code.components:
        unders = sum(1 for p in comp.passages if p.role == UNDER)
        if comp.closed:
            n_arcs = max(unders, 1)
        else:
            n_arcs = unders + 1
        seen_unders = 0
        for p in comp.passages:
            if p.role == OVER:
                over_arc[p.crossing] = base + seen_unders % n_arcs + 1
            else:
                under_in[p.crossing] = base + seen_unders % n_arcs + 1
                seen_unders += 1
                under_out[p.crossing] = base + seen_unders % n_arcs + 1
        base += n_arcs
    return ArcStructure(base, over_arc, under_in, under_out)


def wirtinger_group(code: GaussCode) -> GroupPresentation:
    arcs = arc_structure(code)
    signs = code.signs()
    rels = []
    for c in sorted(signs):
        e, o = signs[c], arcs.over_arc[c]
        rels.append((-arcs.under_out[c], e * o, arcs.under_in[c], -e * o))
    return GroupPresentation(arcs.arc_count, tuple(rels))


def knot_quandle(code: GaussCode) -> QuandlePresentation:
    arcs = arc_structure(code)
    signs = code.signs()
    rels = []
    for c in sorted(signs):
        o, u, v = arcs.over_arc[c], arcs.under_in[c], arcs.under_out[c]
        rels.append((u, o, v) if signs[c] > 0 else (v, o, u))
    return QuandlePresentation(arcs.arc_count, tuple(rels))


# -- finite probes ------------------------------------------------------------

def count_quandle_colorings(code: GaussCode | QuandlePresentation, Q: FiniteQuandle) -> int:
    p = knot_quandle(code) if isinstance(code, GaussCode) else code
    rel = [(a - 1, b - 1, c - 1) for a, b, c in p.relations]
    return _kernels.count_quandle_labelings(Q.table, p.generator_count, rel)


def count_group_homs(p: GroupPresentation | GaussCode, G: FiniteGroup) -> int:
    if isinstance(p, GaussCode):
        p = wirtinger_group(p)
    return _kernels.count_group_labelings(G.table, G.inverse, G.identity,
                                          p.generator_count, p.relators)


# -- abelianization -------------------------------------------------------------

def smith_normal_form(matrix) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def abelianization(p: GroupPresentation | GaussCode) -> AbelianInvariants:
    if isinstance(p, GaussCode):
        p = wirtinger_group(p)
    mat = [[0] * p.generator_count for _ in p.relators]
    for row, r in zip(mat, p.relators):
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
    diag = smith_normal_form(mat) if mat else []
    return AbelianInvariants(p.generator_count - len(diag), tuple(d for d in diag if d > 1))


# -- Fox calculus / Alexander -------------------------------------------------

def fox_matrix(p: GroupPresentation) -> list[list[LaurentPolynomial]]:
    """Fox Jacobian with every generator sent to t."""
    mat = []
    for r in p.relators:
        row: list[dict[int, int]] = [dict() for _ in range(p.generator_count)]
        prefix = 0  # exponent of t for the prefix read so far
        for x in r:
            col = row[abs(x) - 1]
            if x > 0:
                col[prefix] = col.get(prefix, 0) + 1
                prefix += 1
            else:
                prefix -= 1
                col[prefix] = col.get(prefix, 0) - 1
        mat.append([LaurentPolynomial(c, "t") for c in row])
    return mat


def _normalize_unit(coeffs: dict[int, int]) -> LaurentPolynomial:
    if not coeffs:
        return LaurentPolynomial({}, "t")
    low = min(coeffs)
    top = max(coeffs)
    s = 1 if coeffs[top] > 0 else -1
    return LaurentPolynomial({e - low: s * c for e, c in coeffs.items()}, "t")


def _det_gcd(rows: list[list[LaurentPolynomial]], keep_cols: list[int]) -> dict[int, int]:
    """gcd over Z[t] of all maximal minors using the given columns."""
    from sympy import ZZ, symbols
    from sympy.polys.matrices import DomainMatrix

    k = len(keep_cols)
    if k == 0:
        return {0: 1}
    if len(rows) < k:
        return {}
    ring = ZZ[symbols("t")]

    def to_poly(lp: LaurentPolynomial, shift: int):
        return ring.ring.from_dict({(e + shift,): c for e, c in lp.terms.items()})

    polyrows = []
    for row in rows:
        entries = [row[j] for j in keep_cols]
        lows = [lp.min_degree() for lp in entries if not lp.is_zero()]
        shift = -min(lows) if lows else 0
        polyrows.append([to_poly(lp, shift) for lp in entries])
    g = ring.zero
    for subset in itertools.combinations(range(len(polyrows)), k):
        m = DomainMatrix([polyrows[i] for i in subset], (k, k), ring)
        g = ring.gcd(g, m.det())
        if g == ring.one:
            break
    return {e[0]: int(c) for e, c in dict(g).items()}


def alexander_polynomial(code: GaussCode | GroupPresentation, deleted_column: int | None = None,
                         simplify: bool = True) -> LaurentPolynomial:
    """gcd of the codimension-one minors of the Fox matrix, normalized.

    The result is fixed up to units ±t^k by making the lowest exponent 0 and
    the leading coefficient positive.
    """
    if isinstance(code, GaussCode):
        if not code.all_closed:
            raise ValueError("alexander_polynomial needs closed components only")
        p = wirtinger_group(code)
    else:
        p = code
    if simplify:
        p = tietze_simplify(p)
    return _alexander_cached(p, deleted_column)


@lru_cache(maxsize=4096)
def _alexander_cached(p: GroupPresentation, deleted_column: int | None) -> LaurentPolynomial:
    g = p.generator_count
    if g == 0:
        return LaurentPolynomial({0: 1}, "t")
    j0 = g - 1 if deleted_column is None else deleted_column
    if not 0 <= j0 < g:
        raise ValueError(f"deleted_column must lie in [0, {g})")
    mat = fox_matrix(p)
    cols = [j for j in range(g) if j != j0]
    return _normalize_unit(_det_gcd(mat, cols))


# -- Kauffman bracket -----------------------------------------------------------

def _bracket_data(code: GaussCode):
    offsets = []
    total = 0
    for comp in code.components:
        offsets.append(total)
        total += len(comp.passages)
    arc = np.empty(2 * total, dtype=np.int64)
    ends: dict[int, list[int]] = {}
    for ci, comp in enumerate(code.components):
        n = len(comp.passages)
        for pi, p in enumerate(comp.passages):
            g = offsets[ci] + pi
            nxt = offsets[ci] + (pi + 1) % n
            arc[2 * g + 1] = 2 * nxt
            arc[2 * nxt] = 2 * g + 1
            slot = ends.setdefault(p.crossing, [0, 0, 0, 0])
            k = 0 if p.role == OVER else 2
            slot[k], slot[k + 1] = 2 * g, 2 * g + 1
    labels = sorted(ends)
    signs = code.signs()
    return (arc, np.array([ends[c] for c in labels], dtype=np.int64).reshape(-1, 4),
            np.array([signs[c] for c in labels], dtype=np.int64))


def kauffman_bracket(code: GaussCode) -> LaurentPolynomial:
    """State sum with A^(a-b) d^(loops-1), d = -A^2 - A^-2; unknot -> 1."""
    if not code.all_closed:
        raise ValueError("the bracket is only defined for closed components")
    return _bracket_cached(code)


@lru_cache(maxsize=4096)
def _bracket_cached(code: GaussCode) -> LaurentPolynomial:
    arc, ends, signs = _bracket_data(code)
    hist = _kernels.bracket_histogram(arc, ends, signs)
    n = ends.shape[0]
    free_loops = sum(1 for c in code.components if not c.passages)
    delta = LaurentPolynomial({2: -1, -2: -1})
    powers = [LaurentPolynomial.constant(1)]
    out = LaurentPolynomial()
    for a in range(hist.shape[0]):
        for loops in range(hist.shape[1]):
            count = int(hist[a, loops])
            if not count:
                continue
            k = loops + free_loops - 1
            while len(powers) <= k:
                powers.append(powers[-1] * delta)
            out = out + powers[k].shift(a - (n - a)) * count
    return out


def f_polynomial(code: GaussCode) -> LaurentPolynomial:
    """Writhe-normalized bracket (-A^3)^(-w) <K>."""
    w = writhe(code)
    return kauffman_bracket(code) * LaurentPolynomial.monomial(-3 * w, (-1) ** (w % 2))


# -- Tietze -------------------------------------------------------------------

def free_reduce(word) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _cyclic_reduce(word) -> tuple[int, ...]:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def _relator_key(word: tuple[int, ...]) -> tuple[int, ...]:
    """Least cyclic rotation of the word or of its inverse."""
    if not word:
        return word
    inv = tuple(-x for x in reversed(word))
    return min(w[i:] + w[:i] for w in (word, inv) for i in range(len(w)))


def tietze_simplify(p: GroupPresentation, effort: int = 1000) -> GroupPresentation:
    """Eliminate generators occurring exactly once in some relator.

    Each step removes one generator and one relator; relators are kept cyclically
    and freely reduced and deduplicated up to rotation and inversion.
    """
    gens = list(range(1, p.generator_count + 1))
    rels = [_cyclic_reduce(r) for r in p.relators]
    for _ in range(effort):
        rels = _dedupe(rels)
        choice = None
        for r in sorted(rels, key=len):
            for x in r:
                if sum(1 for y in r if abs(y) == abs(x)) == 1:
                    choice = (r, x)
                    break
            if choice:
                break
        if choice is None:
            break
        r, x = choice
        i = r.index(x)
        rest = r[i + 1:] + r[:i]          # x * rest = 1
        value = tuple(-y for y in reversed(rest)) if x > 0 else rest
        gen = abs(x)
        rels.remove(r)
        new = []
        for s in rels:
            w = []
            for y in s:
                if y == gen:
                    w.extend(value)
                elif y == -gen:
                    w.extend(-z for z in reversed(value))
                else:
                    w.append(y)
            new.append(_cyclic_reduce(w))
        rels = new
        gens.remove(gen)
    rels = _dedupe(rels)
    index = {g: i + 1 for i, g in enumerate(gens)}
    out = tuple(sorted(tuple(index[abs(y)] * (1 if y > 0 else -1) for y in r) for r in rels))
    return GroupPresentation(len(gens), out)


def _dedupe(rels):
    seen = set()
    out = []
    for r in rels:
        if not r:
            continue
        k = _relator_key(r)
        if k not in seen:
            seen.add(k)
            out.append(r)
    return out
