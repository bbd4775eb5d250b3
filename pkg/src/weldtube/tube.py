"""Combinatorial tube complexes, fiber containment and vertical doubles.

A tube complex records one tube (arc x disk) per arc of a Gauss code, caps at
open ends, and one identification per crossing: the disk fiber of the under
point is glued inside the fiber of the over point.  Nothing is embedded; the
complex embeds uniquely once n >= 2m, so the combinatorics carry everything.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    OVER,
    UNDER,
    Component,
    DimensionMeta,
    GaussCode,
    Passage,
)
from .invariants import GroupPresentation

__all__ = [
    "Tube",
    "Identification",
    "TubeComplex",
    "Fiber",
    "ContainmentDiagram",
    "StackPairing",
    "tube",
    "tube_presentation",
    "euler_characteristic",
    "containment_diagram",
    "is_virtual_tube_form",
    "vertical_double",
    "is_stack_form",
    "spin",
]


@dataclass(frozen=True)
class Tube:
    index: int                    # 1-based
    component: int
    closed_component: bool
    over_positions: tuple[int, ...]   # component positions of the over passages it carries
    successor: int | None         # tube continuing past the under passage ending this one
    ends_at: int | None = None    # crossing whose under passage ends the tube


@dataclass(frozen=True)
class Identification:
    crossing: int
    under_tube: int               # incoming tube at the under passage
    over_tube: int
    position: int                 # index of the over passage along the over tube
    sign: int
    under_locus: tuple[int, int]  # (component, position) in the source code
    over_locus: tuple[int, int]


@dataclass(frozen=True)
class TubeComplex:
    meta: DimensionMeta
    tubes: tuple[Tube, ...]
    caps: tuple[tuple[int, str], ...]
    identifications: tuple[Identification, ...]
    component_kinds: tuple[bool, ...] = ()   # True for closed components

    def __post_init__(self):
        count = len(self.tubes)
        seen: dict[int, set] = {}
        for ident in self.identifications:
            if not (1 <= ident.under_tube <= count and 1 <= ident.over_tube <= count):
                raise ValueError(f"identification {ident} references a missing tube")
            spots = seen.setdefault(ident.over_tube, set())
            if ident.position in spots:
                raise ValueError(f"two identifications at one position of tube {ident.over_tube}")
            spots.add(ident.position)

    def to_json(self) -> dict:
        return {
            "m": self.meta.m,
            "n": self.meta.n,
            "tubes": [{"index": t.index, "component": t.component,
                       "closed_component": t.closed_component,
                       "over_positions": list(t.over_positions),
                       "successor": t.successor} for t in self.tubes],
            "caps": [list(c) for c in self.caps],
            "identifications": [{"crossing": i.crossing, "under_tube": i.under_tube,
                                 "over_tube": i.over_tube, "position": i.position,
                                 "sign": i.sign} for i in self.identifications],
        }


def tube(code: GaussCode, n: int = 2) -> TubeComplex:
    """The tube complex of `code` with ambient parameter `n` (needs n >= 2)."""
    meta = DimensionMeta(1, n)
    tubes: list[dict] = []
    caps: list[tuple[int, str]] = []
    pending: dict[int, tuple[int, int, int]] = {}   # crossing -> (under tube, component, pos)
    over_at: dict[int, tuple[int, int, int, int]] = {}

    for ci, comp in enumerate(code.components):
        ps = comp.passages
        L = len(ps)
        under_pos = [i for i, p in enumerate(ps) if p.role == UNDER]
        if comp.closed and under_pos:
            start = (under_pos[0] + 1) % L
            order = [(start + k) % L for k in range(L)]
        else:
            order = list(range(L))
        first = len(tubes) + 1
        current = {"component": ci, "overs": [], "successor": None, "ends_at": None}
        tubes.append(current)
        for pos in order:
            p = ps[pos]
            idx = len(tubes)
            if p.role == OVER:
                over_at[p.crossing] = (idx, len(current["overs"]), ci, pos)
                current["overs"].append(pos)
            else:
                pending[p.crossing] = (idx, ci, pos)
                current["ends_at"] = p.crossing
                is_last = pos == order[-1]
                if comp.closed and is_last:
                    current["successor"] = first
                else:
                    current = {"component": ci, "overs": [], "successor": None, "ends_at": None}
                    tubes.append(current)
                    tubes[idx - 1]["successor"] = idx + 1
        if comp.closed and not under_pos:
            current["successor"] = first
        if not comp.closed:
            caps.append((first, "start"))
            caps.append((len(tubes), "end"))

    tube_objs = tuple(
        Tube(i + 1, t["component"], code.components[t["component"]].closed,
             tuple(t["overs"]), t["successor"], t["ends_at"])
        for i, t in enumerate(tubes))
    signs = code.signs()
    idents = []
    for c in sorted(signs):
        ut, uc, upos = pending[c]
        ot, opos_on_tube, oc, opos = over_at[c]
        idents.append(Identification(c, ut, ot, opos_on_tube, signs[c], (uc, upos), (oc, opos)))
    return TubeComplex(meta, tube_objs, tuple(caps), tuple(idents),
                       tuple(comp.closed for comp in code.components))


def tube_presentation(t: TubeComplex) -> GroupPresentation:
    """Generators are tubes; each identification gives a conjugation relator."""
    rels = []
    for ident in t.identifications:
        incoming = ident.under_tube
        outgoing = t.tubes[incoming - 1].successor
        e, o = ident.sign, ident.over_tube
        rels.append((-outgoing, e * o, incoming, -e * o))
    return GroupPresentation(len(t.tubes), tuple(rels))


def euler_characteristic(t: TubeComplex) -> int:
    # each closed component is S^1 x D (chi 0), each open one I x D (chi 1);
    # every identification glues a disk onto a disk
    open_components = sum(1 for closed in t.component_kinds if not closed)
    return open_components - len(t.identifications)


# -- containment ----------------------------------------------------------------

@dataclass(frozen=True)
class Fiber:
    id: int
    tube: int
    crossing: int
    role: str                     # OVER: the containing fiber; UNDER: the contained one
    locus: tuple[int, int]        # (component, position) in the source code
    orientation: int = 1


@dataclass(frozen=True)
class StackPairing:
    """Pairing data of a vertical double.

    `components` pairs each K component with its mirror copy, `crossings` pairs
    each self-crossing c of K with c* on the mirror, and `witnesses` lists, for
    each c, the two K-over-K* crossings (x1, x2) created next to it.
    """

    components: tuple[tuple[int, int], ...]
    crossings: tuple[tuple[int, int], ...]
    witnesses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len({a for a, _ in self.crossings}) != len(self.crossings) or \
                len({b for _, b in self.crossings}) != len(self.crossings):
            raise ValueError("crossing pairing is not a bijection")
        if {c for c, _, _ in self.witnesses} != {a for a, _ in self.crossings}:
            raise ValueError("every paired crossing needs witnesses")

    def to_json(self) -> dict:
        return {"components": [list(p) for p in self.components],
                "crossings": [list(p) for p in self.crossings],
                "witnesses": [list(w) for w in self.witnesses]}


@dataclass(frozen=True)
class ContainmentDiagram:
    fibers: tuple[Fiber, ...]
    containments: tuple[tuple[int, int], ...]   # (inner fiber id, outer fiber id)
    pairing: StackPairing | None = None
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id = {f.id: f for f in self.fibers}
        for inner, outer in self.containments:
            if inner == outer:
                raise ValueError("containment must be irreflexive")
            if inner not in by_id or outer not in by_id:
                raise ValueError(f"containment ({inner}, {outer}) references a missing fiber")
            if by_id[inner].orientation != by_id[outer].orientation:
                raise ValueError("orientations of nested fibers must agree")
        object.__setattr__(self, "_by_id", by_id)

    def fiber(self, fid: int) -> Fiber:
        return self._by_id[fid]

    def to_json(self) -> dict:
        out = {
            "fibers": [{"id": f.id, "tube": f.tube, "crossing": f.crossing,
                        "role": f.role, "locus": list(f.locus),
                        "orientation": f.orientation} for f in self.fibers],
            "containments": [list(c) for c in self.containments],
        }
        if self.pairing is not None:
            out["pairing"] = self.pairing.to_json()
        return out


def containment_diagram(t: TubeComplex, pairing: StackPairing | None = None
                        ) -> ContainmentDiagram:
    fibers = []
    containments = []
    for ident in t.identifications:
        inner = Fiber(len(fibers) + 1, ident.under_tube, ident.crossing, UNDER, ident.under_locus)
        outer = Fiber(len(fibers) + 2, ident.over_tube, ident.crossing, OVER, ident.over_locus)
        fibers += [inner, outer]
        containments.append((inner.id, outer.id))
    return ContainmentDiagram(tuple(fibers), tuple(containments), pairing)


def _closure(d: ContainmentDiagram) -> dict[int, set[int]]:
    """fiber -> every fiber nested (transitively) inside it."""
    direct: dict[int, set[int]] = {}
    for inner, outer in d.containments:
        direct.setdefault(outer, set()).add(inner)
    out: dict[int, set[int]] = {}

    def visit(f, stack=()):
        if f in out:
            return out[f]
        if f in stack:
            raise ValueError("containment has a cycle")
        acc: set[int] = set()
        for g in direct.get(f, ()):
            acc.add(g)
            acc |= visit(g, stack + (f,))
        out[f] = acc
        return acc

    for f in d.fibers:
        visit(f.id)
    return out


def is_virtual_tube_form(d: ContainmentDiagram) -> bool:
    """Fibers nested in a common fiber must be nested in one another."""
    inside = _closure(d)
    for f in d.fibers:
        members = sorted(inside[f.id])
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if a not in inside[b] and b not in inside[a]:
                    return False
    return True


# -- vertical double ------------------------------------------------------------

def vertical_double(code: GaussCode) -> tuple[GaussCode, StackPairing]:
    """K on top of its vertical mirror K*, with K* pushed off to the right.

    Each crossing c of sign e (strands s1 over s2) becomes c on K, c* on K*
    (roles swapped, sign -e), x1 = s1 over s2* (sign e) and x2 = s2 over s1*
    (sign -e).  Labels: c, c+N, c+2N, c+3N with N the largest label of K.
    """
    if not code.all_closed:
        raise ValueError("vertical_double needs closed components only")
    N = code.max_label()
    k_comps, m_comps = [], []
    for comp in code.components:
        top: list[Passage] = []
        bottom: list[Passage] = []
        for p in comp.passages:
            c, e = p.crossing, p.sign
            cs, x1, x2 = c + N, c + 2 * N, c + 3 * N
            if p.role == OVER:
                a = [Passage(c, OVER, e), Passage(x1, OVER, e)]
                b = [Passage(x2, UNDER, -e), Passage(cs, UNDER, -e)]
            else:
                a = [Passage(x2, OVER, -e), Passage(c, UNDER, e)]
                b = [Passage(cs, OVER, -e), Passage(x1, UNDER, e)]
            if e < 0:
                a.reverse()
                b.reverse()
            top += a
            bottom += b
        k_comps.append(Component(comp.kind, tuple(top)))
        m_comps.append(Component(comp.kind, tuple(bottom)))
    C = len(code.components)
    labels = code.crossings
    pairing = StackPairing(
        tuple((i, i + C) for i in range(C)),
        tuple((c, c + N) for c in labels),
        tuple((c, c + 2 * N, c + 3 * N) for c in labels),
    )
    return GaussCode(tuple(k_comps + m_comps)), pairing


def is_stack_form(d: ContainmentDiagram) -> bool:
    """Stack-form check of a doubled diagram against its pairing.

    (i) every containment between the layers has its outer fiber on K, and the
    witnesses of each crossing nest the mirror strands under K at that crossing;
    (ii) if c nests s2 inside s1 on K, then c* nests s1* inside s2* on K*.
    """
    sp = d.pairing
    if sp is None:
        raise ValueError("stack form needs a pairing")
    comp_pair = dict(sp.components)
    upper = set(comp_pair)
    lower = set(comp_pair.values())
    by_crossing: dict[int, tuple[Fiber, Fiber]] = {}
    for inner_id, outer_id in d.containments:
        inner, outer = d.fiber(inner_id), d.fiber(outer_id)
        by_crossing[inner.crossing] = (inner, outer)
        if inner.locus[0] in upper and outer.locus[0] in lower:
            return False

    def layer_ok(pair, inner_layer, outer_layer):
        inner, outer = pair
        return inner.locus[0] in inner_layer and outer.locus[0] in outer_layer

    for c, cs in sp.crossings:
        wit = {w[0]: w[1:] for w in sp.witnesses}[c]
        if c not in by_crossing or cs not in by_crossing \
                or any(x not in by_crossing for x in wit):
            return False
        k_in, k_out = by_crossing[c]          # s2 inside s1
        m_in, m_out = by_crossing[cs]
        x1_in, x1_out = by_crossing[wit[0]]   # s2* inside s1
        x2_in, x2_out = by_crossing[wit[1]]   # s1* inside s2
        if not (layer_ok(by_crossing[c], upper, upper) and layer_ok(by_crossing[cs], lower, lower)):
            return False
        if not (layer_ok(by_crossing[wit[0]], lower, upper)
                and layer_ok(by_crossing[wit[1]], lower, upper)):
            return False
        # (i): witnesses sit on the strands of c and on their mirror partners
        if x1_out.locus[0] != k_out.locus[0] or x2_out.locus[0] != k_in.locus[0]:
            return False
        if x1_in.locus[0] != comp_pair[k_in.locus[0]] or x2_in.locus[0] != comp_pair[k_out.locus[0]]:
            return False
        # (ii): reversal - the mirror of s1 now lies inside the mirror of s2
        if m_in.locus[0] != comp_pair[k_out.locus[0]] or m_out.locus[0] != comp_pair[k_in.locus[0]]:
            return False
        if not (_adjacent(m_in.locus, x2_in.locus, d) and _adjacent(m_out.locus, x1_in.locus, d)):
            return False
    return True


def _adjacent(a: tuple[int, int], b: tuple[int, int], d: ContainmentDiagram) -> bool:
    """Both loci on one component and consecutive along it (cyclically)."""
    if a[0] != b[0]:
        return False
    size = 1 + max(f.locus[1] for f in d.fibers if f.locus[0] == a[0])
    return (a[1] - b[1]) % size in (1, size - 1)


# -- spinning ---------------------------------------------------------------------

def spin(p: GroupPresentation, meta: DimensionMeta, n: int | None = None
         ) -> tuple[GroupPresentation, DimensionMeta]:
    """Raise the dimension by one; the group is carried over unchanged.

    `n` defaults to the smallest value keeping n >= 2m, but never decreases.
    """
    m = meta.m + 1
    target = max(meta.n, 2 * m) if n is None else n
    return p, DimensionMeta(m, target)
