"""Local rewrites of Gauss codes.

Reidemeister moves act on the passage words as adjacency patterns.  The welded
move (``OC``) transposes two adjacent over passages; the under-passage
transposition stays forbidden.  End moves let the end of an open component
slide under a strand, never over it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .diagram import (
    OVER,
    UNDER,
    Component,
    GaussCode,
    Passage,
    canonical_form,
)

__all__ = [
    "R1", "R2", "R3", "OC", "END",
    "VIRTUAL", "WELDED", "MoveSet",
    "MoveInstance", "MoveError",
    "enumerate_moves", "apply", "inverse",
    "R3_CONFIGURATIONS",
]

R1, R2, R3, OC, END = "R1", "R2", "R3", "OC", "EndUnder"
MoveSet = frozenset
VIRTUAL = frozenset({R1, R2, R3, END})
WELDED = VIRTUAL | {OC}

ADDITIVE = {"R1_add", "R2_add", "End_add"}
FLAG_OF = {
    "R1_add": R1, "R1_remove": R1,
    "R2_add": R2, "R2_remove": R2,
    "R3": R3, "OC_swap": OC,
    "End_add": END, "End_remove": END,
}
INVERSE_KIND = {
    "R1_add": "R1_remove", "R1_remove": "R1_add",
    "R2_add": "R2_remove", "R2_remove": "R2_add",
    "R3": "R3", "OC_swap": "OC_swap",
    "End_add": "End_remove", "End_remove": "End_add",
}

# Oriented R3 triangles realizable by three straight strands at heights
# top > middle > bottom.  Entries: (TM before TB on top, TM before MB on middle,
# TB before MB on bottom, sign TM, sign TB, sign MB).  The move reverses the
# three orders and keeps the signs.
R3_CONFIGURATIONS = frozenset({
    (False, False, False, -1, -1, -1), (False, False, False, 1, 1, 1),
    (False, False, True, -1, 1, 1), (False, False, True, 1, -1, -1),
    (False, True, False, -1, 1, -1), (False, True, False, 1, -1, 1),
    (False, True, True, -1, -1, 1), (False, True, True, 1, 1, -1),
    (True, False, False, -1, -1, 1), (True, False, False, 1, 1, -1),
    (True, False, True, -1, 1, -1), (True, False, True, 1, -1, 1),
    (True, True, False, -1, 1, 1), (True, True, False, 1, -1, -1),
    (True, True, True, -1, -1, -1), (True, True, True, 1, 1, 1),
})


class MoveError(ValueError):
    """Raised when a move's locus does not match the code."""


@dataclass(frozen=True, order=True)
class MoveInstance:
    kind: str
    locus: tuple[tuple[int, int], ...]
    params: tuple = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "locus": [list(x) for x in self.locus],
                "params": list(self.params)}

    @classmethod
    def from_json(cls, data: dict) -> "MoveInstance":
        return cls(data["kind"], tuple(tuple(x) for x in data["locus"]),
                   tuple(data["params"]))

    def __str__(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


# -- adjacency helpers -------------------------------------------------------

def _next(comp: Component, p: int) -> int | None:
    n = len(comp.passages)
    if p + 1 < n:
        return p + 1
    if comp.closed and n >= 2:
        return 0
    return None


def _prev(comp: Component, p: int) -> int | None:
    n = len(comp.passages)
    if p > 0:
        return p - 1
    if comp.closed and n >= 2:
        return n - 1
    return None


def _adjacent_pairs(comp: Component) -> Iterable[tuple[int, int]]:
    n = len(comp.passages)
    last = n if (comp.closed and n >= 2) else n - 1
    for p in range(max(last, 0)):
        yield p, (p + 1) % n


def _slots(comp: Component) -> range:
    n = len(comp.passages)
    return range(n + 1) if not comp.closed else range(max(n, 1))


# -- enumeration ------------------------------------------------------------

def enumerate_moves(code: GaussCode, moves: Iterable[str], additive: bool = True
                    ) -> list[MoveInstance]:
    """Every applicable move from `moves`; additive ones only if `additive`."""
    moves = frozenset(moves)
    out: list[MoveInstance] = []
    where = code.locate()
    comps = code.components
    signs = code.signs()

    if R1 in moves:
        seen = set()
        for ci, comp in enumerate(comps):
            for p, q in _adjacent_pairs(comp):
                a, b = comp.passages[p], comp.passages[q]
                if a.crossing == b.crossing and a.crossing not in seen:
                    seen.add(a.crossing)
                    out.append(MoveInstance("R1_remove", ((ci, p),), (a.crossing,)))
        if additive:
            for ci, comp in enumerate(comps):
                for s in _slots(comp):
                    for order in ("OU", "UO"):
                        for sign in (1, -1):
                            out.append(MoveInstance("R1_add", ((ci, s),), (order, sign)))

    if R2 in moves:
        seen = set()
        for ci, comp in enumerate(comps):
            for p, q in _adjacent_pairs(comp):
                a, b = comp.passages[p], comp.passages[q]
                if a.role != OVER or b.role != OVER or signs[a.crossing] != -signs[b.crossing]:
                    continue
                ui, uj = where[a.crossing][UNDER], where[b.crossing][UNDER]
                if ui[0] != uj[0]:
                    continue
                ucomp = comps[ui[0]]
                if _next(ucomp, ui[1]) == uj[1]:
                    start = ui[1]
                elif _next(ucomp, uj[1]) == ui[1]:
                    start = uj[1]
                else:
                    continue
                key = frozenset((a.crossing, b.crossing))
                if key not in seen:
                    seen.add(key)
                    out.append(MoveInstance("R2_remove", ((ci, p), (ui[0], start)),
                                            (a.crossing, b.crossing)))
        if additive:
            for c1, comp1 in enumerate(comps):
                for s1 in _slots(comp1):
                    for c2, comp2 in enumerate(comps):
                        for s2 in _slots(comp2):
                            same_slot = (c1, s1) == (c2, s2)
                            for sign in (1, -1):
                                for under_order in ("same", "reversed"):
                                    for first in (("over", "under") if same_slot else ("over",)):
                                        out.append(MoveInstance(
                                            "R2_add", ((c1, s1), (c2, s2)),
                                            (sign, under_order, first)))

    if R3 in moves:
        seen = set()
        for ci, comp in enumerate(comps):
            for p, q in _adjacent_pairs(comp):
                x, y = comp.passages[p], comp.passages[q]
                if x.role != OVER or y.role != OVER:
                    continue
                for tm, tb, on_top in ((x.crossing, y.crossing, True),
                                       (y.crossing, x.crossing, False)):
                    mc, mp = where[tm][UNDER]
                    mcomp = comps[mc]
                    for nb, on_mid in ((_next(mcomp, mp), True), (_prev(mcomp, mp), False)):
                        if nb is None:
                            continue
                        z = mcomp.passages[nb]
                        if z.role != OVER or z.crossing in (tm, tb):
                            continue
                        mb = z.crossing
                        bc, bp = where[tb][UNDER]
                        bcomp = comps[bc]
                        u_mb = Passage(mb, UNDER, signs[mb])
                        for nb2, on_bot in ((_next(bcomp, bp), True), (_prev(bcomp, bp), False)):
                            if nb2 is None or bcomp.passages[nb2] != u_mb:
                                continue
                            pattern = (on_top, on_mid, on_bot, signs[tm], signs[tb], signs[mb])
                            if pattern not in R3_CONFIGURATIONS or (tm, tb, mb) in seen:
                                continue
                            seen.add((tm, tb, mb))
                            mstart = mp if on_mid else nb
                            bstart = bp if on_bot else nb2
                            out.append(MoveInstance(
                                "R3", ((ci, p), (mc, mstart), (bc, bstart)), (tm, tb, mb)))

    if OC in moves:
        for ci, comp in enumerate(comps):
            for p, q in _adjacent_pairs(comp):
                x, y = comp.passages[p], comp.passages[q]
                if x.role == OVER and y.role == OVER:
                    out.append(MoveInstance("OC_swap", ((ci, p),), (x.crossing, y.crossing)))

    if END in moves:
        for ci, comp in enumerate(comps):
            if comp.closed or not comp.passages:
                continue
            ends = [0] if len(comp.passages) == 1 else [0, len(comp.passages) - 1]
            for e in ends:
                p = comp.passages[e]
                if p.role == UNDER:
                    out.append(MoveInstance("End_remove", ((ci, e),), (p.crossing,)))
        if additive:
            for ci, comp in enumerate(comps):
                if comp.closed:
                    continue
                for end in ("start", "end"):
                    for c2, comp2 in enumerate(comps):
                        for s in _slots(comp2):
                            for sign in (1, -1):
                                out.append(MoveInstance("End_add", ((ci, 0), (c2, s)),
                                                        (end, sign)))
    return out


# -- application ------------------------------------------------------------

def _delete(code: GaussCode, crossings: set[int]) -> GaussCode:
    return GaussCode(tuple(
        Component(c.kind, tuple(p for p in c.passages if p.crossing not in crossings))
        for c in code.components))


def _swap_pairs(code: GaussCode, loci: Iterable[tuple[int, int]]) -> GaussCode:
    seqs = [list(c.passages) for c in code.components]
    for ci, p in loci:
        q = _next(code.components[ci], p)
        seqs[ci][p], seqs[ci][q] = seqs[ci][q], seqs[ci][p]
    return GaussCode(tuple(Component(c.kind, tuple(s))
                           for c, s in zip(code.components, seqs)))


def _insert(code: GaussCode, inserts: list[tuple[int, int, list[Passage]]]) -> GaussCode:
    """Insert passage runs at (component, slot); slots refer to the input code."""
    seqs = [list(c.passages) for c in code.components]
    for ci, s, run in sorted(inserts, key=lambda t: (t[0], t[1]), reverse=True):
        seqs[ci][s:s] = run
    return GaussCode(tuple(Component(c.kind, tuple(s))
                           for c, s in zip(code.components, seqs)))


def _passage_at(code: GaussCode, ci: int, p: int | None) -> Passage:
    if p is None or not (0 <= ci < len(code.components)) \
            or not (0 <= p < len(code.components[ci].passages)):
        raise MoveError(f"locus ({ci}, {p}) is outside the code")
    return code.components[ci].passages[p]


def _check_slot(code: GaussCode, ci: int, s: int) -> None:
    if not (0 <= ci < len(code.components)) or s not in _slots(code.components[ci]):
        raise MoveError(f"slot ({ci}, {s}) is outside the code")


def apply(code: GaussCode, mv: MoveInstance) -> GaussCode:
    """Rewrite `code` by `mv`.  The result is validated but not canonicalized."""
    kind = mv.kind
    comps = code.components
    fresh = code.max_label() + 1

    if kind == "R1_remove":
        (ci, p), = mv.locus
        a = _passage_at(code, ci, p)
        b = _passage_at(code, ci, _next(comps[ci], p))
        if a.crossing != b.crossing or a.crossing != mv.params[0]:
            raise MoveError("R1_remove: no kink at locus")
        return _delete(code, {a.crossing})

    if kind == "R1_add":
        (ci, s), = mv.locus
        _check_slot(code, ci, s)
        order, sign = mv.params
        o, u = Passage(fresh, OVER, sign), Passage(fresh, UNDER, sign)
        return _insert(code, [(ci, s, [o, u] if order == "OU" else [u, o])])

    if kind == "R2_remove":
        (c1, p1), (c2, p2) = mv.locus
        i, j = mv.params
        a, b = _passage_at(code, c1, p1), _passage_at(code, c1, _next(comps[c1], p1))
        x, y = _passage_at(code, c2, p2), _passage_at(code, c2, _next(comps[c2], p2))
        if (a.crossing, b.crossing) != (i, j) or a.role != OVER or b.role != OVER \
                or {x.crossing, y.crossing} != {i, j} or x.role != UNDER or y.role != UNDER \
                or a.sign != -b.sign:
            raise MoveError("R2_remove: bigon not found at locus")
        return _delete(code, {i, j})

    if kind == "R2_add":
        (c1, s1), (c2, s2) = mv.locus
        _check_slot(code, c1, s1)
        _check_slot(code, c2, s2)
        sign, under_order, first = mv.params
        i, j = fresh, fresh + 1
        over = [Passage(i, OVER, sign), Passage(j, OVER, -sign)]
        under = [Passage(i, UNDER, sign), Passage(j, UNDER, -sign)]
        if under_order == "reversed":
            under.reverse()
        if (c1, s1) == (c2, s2):
            run = over + under if first == "over" else under + over
            return _insert(code, [(c1, s1, run)])
        return _insert(code, [(c1, s1, over), (c2, s2, under)])

    if kind == "R3":
        tm, tb, mb = mv.params
        (ct, pt), (cm, pm), (cb, pb) = mv.locus
        t0, t1 = _passage_at(code, ct, pt), _passage_at(code, ct, _next(comps[ct], pt))
        m0, m1 = _passage_at(code, cm, pm), _passage_at(code, cm, _next(comps[cm], pm))
        b0, b1 = _passage_at(code, cb, pb), _passage_at(code, cb, _next(comps[cb], pb))
        signs = code.signs()
        top = {(t0.crossing, t0.role), (t1.crossing, t1.role)}
        mid = {(m0.crossing, m0.role), (m1.crossing, m1.role)}
        bot = {(b0.crossing, b0.role), (b1.crossing, b1.role)}
        if top != {(tm, OVER), (tb, OVER)} or mid != {(tm, UNDER), (mb, OVER)} \
                or bot != {(tb, UNDER), (mb, UNDER)}:
            raise MoveError("R3: triangle not found at locus")
        pattern = (t0.crossing == tm, m0.crossing == tm, b0.crossing == tb,
                   signs[tm], signs[tb], signs[mb])
        if pattern not in R3_CONFIGURATIONS:
            raise MoveError("R3: triangle is not realizable")
        return _swap_pairs(code, mv.locus)

    if kind == "OC_swap":
        (ci, p), = mv.locus
        a = _passage_at(code, ci, p)
        b = _passage_at(code, ci, _next(comps[ci], p))
        if a.role != OVER or b.role != OVER or (a.crossing, b.crossing) != tuple(mv.params):
            raise MoveError("OC_swap: two adjacent over passages expected")
        return _swap_pairs(code, mv.locus)

    if kind == "End_remove":
        (ci, e), = mv.locus
        comp = comps[ci] if 0 <= ci < len(comps) else None
        if comp is None or comp.closed:
            raise MoveError("End_remove: open component expected")
        p = _passage_at(code, ci, e)
        if e not in (0, len(comp.passages) - 1) or p.role != UNDER or p.crossing != mv.params[0]:
            raise MoveError("End_remove: no under passage at the end")
        return _delete(code, {p.crossing})

    if kind == "End_add":
        (ci, _), (c2, s) = mv.locus
        end, sign = mv.params
        if not (0 <= ci < len(comps)) or comps[ci].closed:
            raise MoveError("End_add: open component expected")
        _check_slot(code, c2, s)
        seqs = [list(c.passages) for c in comps]
        seqs[c2][s:s] = [Passage(fresh, OVER, sign)]
        u = Passage(fresh, UNDER, sign)
        if end == "start":
            seqs[ci].insert(0, u)
        else:
            seqs[ci].append(u)
        return GaussCode(tuple(Component(c.kind, tuple(q))
                               for c, q in zip(comps, seqs)))

    raise MoveError(f"unknown move kind {kind!r}")


def inverse(code: GaussCode, mv: MoveInstance) -> MoveInstance:
    """A move on ``apply(code, mv)`` leading back to ``code`` up to canonical form."""
    result = apply(code, mv)
    target = canonical_form(code)
    want = INVERSE_KIND[mv.kind]
    for cand in enumerate_moves(result, {FLAG_OF[want]}, additive=want in ADDITIVE):
        if cand.kind == want and canonical_form(apply(result, cand)) == target:
            return cand
    raise MoveError(f"no inverse found for {mv}")
