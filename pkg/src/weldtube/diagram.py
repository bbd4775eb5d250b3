"""Gauss codes for virtual links and linkoids.

A Gauss code lists, for every component, the signed over/under passages met
while walking along it.  Virtual crossings are not recorded: any two diagrams
with the same code differ by detour moves only.

Text syntax, one link per line::

    (O1+ O2+ U1+ U2+)        closed component (read cyclically)
    [U1+] (O1+)              open component followed by a closed one
    ()                       unknot

"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "OVER",
    "UNDER",
    "CLOSED",
    "OPEN",
    "Passage",
    "Component",
    "GaussCode",
    "DimensionMeta",
    "GaussCodeError",
    "GaussCodeSyntaxError",
    "GaussCodeValidationError",
    "parse",
    "serialize",
    "canonical_form",
    "mirror_vertical",
    "writhe",
    "subcode",
    "read_corpus",
    "load_corpus",
    "NAMED_CODES",
]

OVER = "O"
UNDER = "U"
CLOSED = "closed"
OPEN = "open"

_ROLE_RANK = {OVER: 0, UNDER: 1}
_KIND_RANK = {CLOSED: 0, OPEN: 1}


class GaussCodeError(ValueError):
    pass


class GaussCodeSyntaxError(GaussCodeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class GaussCodeValidationError(GaussCodeError):
    def __init__(self, message: str, crossing: int | None = None):
        super().__init__(message)
        self.crossing = crossing


class Passage(NamedTuple):
    crossing: int
    role: str  # OVER or UNDER
    sign: int  # +1 right-handed, -1 left-handed

    def __str__(self) -> str:
        return f"{self.role}{self.crossing}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class Component:
    kind: str
    passages: tuple[Passage, ...] = ()

    @property
    def closed(self) -> bool:
        return self.kind == CLOSED

    def __len__(self) -> int:
        return len(self.passages)

    def __str__(self) -> str:
        body = " ".join(str(p) for p in self.passages)
        return f"({body})" if self.closed else f"[{body}]"


@dataclass(frozen=True)
class GaussCode:
    components: tuple[Component, ...]

    def __post_init__(self):
        _validate(self)

    def __str__(self) -> str:
        return serialize(self)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def crossings(self) -> list[int]:
        """Sorted crossing labels."""
        return sorted({p.crossing for c in self.components for p in c.passages})

    @property
    def crossing_count(self) -> int:
        return sum(len(c) for c in self.components) // 2

    @property
    def all_closed(self) -> bool:
        return all(c.closed for c in self.components)

    def signs(self) -> dict[int, int]:
        return {p.crossing: p.sign for c in self.components for p in c.passages}

    def locate(self) -> dict[int, dict[str, tuple[int, int]]]:
        """Map crossing -> {role: (component index, position)}."""
        where: dict[int, dict[str, tuple[int, int]]] = {}
        for ci, comp in enumerate(self.components):
            for pi, p in enumerate(comp.passages):
                where.setdefault(p.crossing, {})[p.role] = (ci, pi)
        return where

    def max_label(self) -> int:
        return max((p.crossing for c in self.components for p in c.passages), default=0)

    def passages(self) -> Iterator[tuple[int, int, Passage]]:
        for ci, comp in enumerate(self.components):
            for pi, p in enumerate(comp.passages):
                yield ci, pi, p


@dataclass(frozen=True)
class DimensionMeta:
    """Intrinsic dimension ``m`` and ambient parameter ``n`` (sphere S^(n+2))."""

    m: int = 1
    n: int = 2

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.n < 2 * self.m:
            raise ValueError(f"n must be ≥ 2m (got m={self.m}, n={self.n})")


def _validate(code: GaussCode) -> None:
    if not code.components:
        raise GaussCodeValidationError("a Gauss code needs at least one component")
    seen: dict[int, dict[str, int]] = {}
    for comp in code.components:
        if comp.kind not in _KIND_RANK:
            raise GaussCodeValidationError(f"unknown component kind {comp.kind!r}")
        for p in comp.passages:
            if p.crossing <= 0:
                raise GaussCodeValidationError(
                    f"crossing labels must be positive, got {p.crossing}", p.crossing)
            if p.role not in _ROLE_RANK or p.sign not in (1, -1):
                raise GaussCodeValidationError(f"malformed passage {p!r}", p.crossing)
            roles = seen.setdefault(p.crossing, {})
            if p.role in roles:
                raise GaussCodeValidationError(
                    f"crossing {p.crossing} appears twice as "
                    f"{'over' if p.role == OVER else 'under'}", p.crossing)
            roles[p.role] = p.sign
    for crossing, roles in seen.items():
        if len(roles) == 1:
            raise GaussCodeValidationError(f"crossing {crossing} appears once", crossing)
        if roles[OVER] != roles[UNDER]:
            raise GaussCodeValidationError(
                f"crossing {crossing} has mismatched signs", crossing)


_TOKEN = re.compile(r"\s*(?:([(\[])|([)\]])|([OU])([1-9][0-9]*)([+-]))")


def parse(text: str) -> GaussCode:
    """Parse a Gauss code string; whitespace is insignificant."""
    components: list[Component] = []
    pos = 0
    opener: str | None = None
    opened_at = 0
    current: list[Passage] = []
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None:
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise GaussCodeSyntaxError(f"unexpected character {text[at]!r}", at)
        if m.group(1):
            if opener is not None:
                raise GaussCodeSyntaxError("nested component", m.start(1))
            opener, opened_at, current = m.group(1), m.start(1), []
        elif m.group(2):
            closer = m.group(2)
            if opener is None:
                raise GaussCodeSyntaxError(f"unmatched {closer!r}", m.start(2))
            if (opener, closer) not in (("(", ")"), ("[", "]")):
                raise GaussCodeSyntaxError(f"{opener!r} closed by {closer!r}", m.start(2))
            components.append(Component(CLOSED if opener == "(" else OPEN, tuple(current)))
            opener = None
        else:
            if opener is None:
                raise GaussCodeSyntaxError("passage outside a component", m.start(3))
            sign = 1 if m.group(5) == "+" else -1
            current.append(Passage(int(m.group(4)), m.group(3), sign))
        pos = m.end()
    if opener is not None:
        raise GaussCodeSyntaxError(f"unclosed {opener!r}", opened_at)
    if not components:
        raise GaussCodeSyntaxError("empty input", 0)
    return GaussCode(tuple(components))


def serialize(code: GaussCode) -> str:
    return " ".join(str(c) for c in code.components)


# -- canonical form ---------------------------------------------------------

def _rotations(comp: Component) -> Iterable[tuple[Passage, ...]]:
    ps = comp.passages
    if not comp.closed or len(ps) <= 1:
        return (ps,)
    return (ps[i:] + ps[:i] for i in range(len(ps)))


def _relabel_key(seq: tuple[Passage, ...], labels: dict[int, int]):
    """Key of `seq` under first-appearance relabeling extending `labels`."""
    labels = dict(labels)
    key = []
    for p in seq:
        lab = labels.get(p.crossing)
        if lab is None:
            lab = labels[p.crossing] = len(labels) + 1
        key.append((_ROLE_RANK[p.role], lab, -p.sign))
    return tuple(key), labels


def canonical_form(code: GaussCode) -> GaussCode:
    """Least representative over component order, rotations and relabeling.

    Components are chosen greedily while keeping every tie, which finds the
    same minimum as exhaustive enumeration because the order is
    lexicographic component by component.
    """
    comps = code.components
    # beam states: (used component indices, label map, chosen sequences)
    beam: list[tuple[frozenset, dict[int, int], tuple]] = [(frozenset(), {}, ())]
    for _ in range(len(comps)):
        best = None
        nxt: dict = {}
        for used, labels, chosen in beam:
            for ci, comp in enumerate(comps):
                if ci in used:
                    continue
                for seq in _rotations(comp):
                    key, new_labels = _relabel_key(seq, labels)
                    full = (_KIND_RANK[comp.kind], key)
                    if best is None or full < best:
                        best, nxt = full, {}
                    if full == best:
                        state_id = (used | {ci}, tuple(sorted(new_labels.items())))
                        if state_id not in nxt:
                            nxt[state_id] = (used | {ci}, new_labels,
                                             chosen + ((comp.kind, seq),))
        beam = list(nxt.values())
    _, labels, chosen = beam[0]
    return GaussCode(tuple(
        Component(kind, tuple(Passage(labels[p.crossing], p.role, p.sign) for p in seq))
        for kind, seq in chosen))


def canonical_key(code: GaussCode) -> tuple:
    """Sort key of an already canonical code (compatible with canonical_form)."""
    out = []
    labels: dict[int, int] = {}
    for comp in code.components:
        key, labels = _relabel_key(comp.passages, labels)
        out.append((_KIND_RANK[comp.kind], key))
    return tuple(out)


# -- simple transforms ------------------------------------------------------

def mirror_vertical(code: GaussCode) -> GaussCode:
    """Swap over/under everywhere; crossing handedness flips with it."""
    swap = {OVER: UNDER, UNDER: OVER}
    return GaussCode(tuple(
        Component(c.kind, tuple(Passage(p.crossing, swap[p.role], -p.sign) for p in c.passages))
        for c in code.components))


def writhe(code: GaussCode) -> int:
    return sum(code.signs().values())


def subcode(code: GaussCode, components: Iterable[int]) -> GaussCode:
    """Sub-diagram on the given components, keeping only crossings internal to it."""
    idx = list(components)
    keep = [code.components[i] for i in idx]
    count: dict[int, int] = {}
    for comp in keep:
        for p in comp.passages:
            count[p.crossing] = count.get(p.crossing, 0) + 1
    return GaussCode(tuple(
        Component(c.kind, tuple(p for p in c.passages if count[p.crossing] == 2))
        for c in keep))


def read_corpus(text: str) -> list[tuple[int, str]]:
    """(line number, code text) for every non-blank, non-comment line."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((lineno, stripped))
    return out


NAMED_CODES = {
    "unknot": "()",
    "VT": "(O1+ O2+ U1+ U2+)",
    "virtual-trefoil": "(O1+ O2+ U1+ U2+)",
    "trefoil": "(O1+ U2+ O3+ U1+ O2+ U3+)",
    "figure-eight": "(O1- U2- O3+ U4+ O2- U1- O4+ U3+)",
}


def load_corpus() -> list[GaussCode]:
    """The bundled corpus of small knots, links and linkoids."""
    from importlib.resources import files

    text = files("weldtube").joinpath("data/corpus.gauss").read_text(encoding="utf-8")
    return [parse(line) for _, line in read_corpus(text)]
