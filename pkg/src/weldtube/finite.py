"""Finite quandles and groups given by explicit operation tables (0-based)."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

__all__ = [
    "FiniteQuandle",
    "FiniteGroup",
    "dihedral_quandle",
    "cyclic_group",
    "symmetric_group",
    "QUANDLE_PROBES",
    "GROUP_PROBES",
]


@dataclass(frozen=True, eq=False)
class FiniteQuandle:
    """Table ``table[x, y] = x ▷ y``; quandle axioms are checked on construction."""

    table: np.ndarray
    name: str = ""
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        q = t.shape[0]
        if t.shape != (q, q) or q == 0 or t.min() < 0 or t.max() >= q:
            raise ValueError("quandle table must be a non-empty q x q array with entries in [0, q)")
        idx = np.arange(q)
        if not np.array_equal(t[idx, idx], idx):
            raise ValueError("quandle table is not idempotent")
        inv = np.empty_like(t)
        for y in range(q):
            col = t[:, y]
            if len(set(col.tolist())) != q:
                raise ValueError(f"right translation by {y} is not a bijection")
            inv[col, y] = idx
        # (x ▷ y) ▷ z == (x ▷ z) ▷ (y ▷ z)
        lhs = t[t[:, :, None], idx[None, None, :]]
        rhs = t[t[:, None, :], t[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise ValueError("quandle table is not right self-distributive")
        t.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "inverse", inv)

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Multiplication table ``table[x, y] = x*y``; group axioms are checked."""

    table: np.ndarray
    name: str = ""
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or n == 0 or t.min() < 0 or t.max() >= n:
            raise ValueError("group table must be a non-empty n x n array with entries in [0, n)")
        idx = np.arange(n)
        ids = [e for e in range(n) if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
        if not ids:
            raise ValueError("group table has no identity")
        e = ids[0]
        inv = np.empty(n, dtype=np.int64)
        for x in range(n):
            hits = np.flatnonzero(t[x] == e)
            if len(hits) != 1 or t[hits[0], x] != e:
                raise ValueError(f"element {x} has no two-sided inverse")
            inv[x] = hits[0]
        if not np.array_equal(t[t[:, :, None], idx[None, None, :]],
                              t[idx[:, None, None], t[None, :, :]]):
            raise ValueError("group table is not associative")
        t.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order


def dihedral_quandle(n: int) -> FiniteQuandle:
    """R_n: x ▷ y = 2y - x (mod n)."""
    x = np.arange(n)
    return FiniteQuandle((2 * x[None, :] - x[:, None]) % n, name=f"R{n}")


def cyclic_group(n: int) -> FiniteGroup:
    x = np.arange(n)
    return FiniteGroup((x[:, None] + x[None, :]) % n, name=f"C{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n with composition (p*q)(i) = p(q(i)); identity listed first."""
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(np.array(table), name=f"S{n}")


QUANDLE_PROBES = {f"R{n}": (lambda n=n: dihedral_quandle(n)) for n in (3, 5, 7)}
GROUP_PROBES = {
    "C2": lambda: cyclic_group(2),
    "C3": lambda: cyclic_group(3),
    "C5": lambda: cyclic_group(5),
    "S3": lambda: symmetric_group(3),
    "S4": lambda: symmetric_group(4),
}
