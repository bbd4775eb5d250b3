from __future__ import annotations

import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from weldtube.diagram import CLOSED, OPEN, OVER, UNDER, Component, GaussCode, Passage, load_corpus

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


CORPUS = load_corpus()


@pytest.fixture(scope="session")
def corpus() -> list[GaussCode]:
    return CORPUS


def assemble(passages: list[Passage], cuts: list[int], kinds: list[str]) -> GaussCode:
    pieces, last = [], 0
    for c in sorted(cuts) + [len(passages)]:
        pieces.append(passages[last:c])
        last = c
    return GaussCode(tuple(Component(k, tuple(p)) for k, p in zip(kinds, pieces)))


@st.composite
def gauss_codes(draw, max_crossings: int = 4, max_components: int = 3,
                allow_open: bool = True) -> GaussCode:
    n = draw(st.integers(0, max_crossings))
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
    passages = [Passage(c + 1, role, signs[c]) for c in range(n) for role in (OVER, UNDER)]
    passages = draw(st.permutations(passages))
    k = draw(st.integers(1, max_components))
    cuts = draw(st.lists(st.integers(0, len(passages)), min_size=k - 1, max_size=k - 1))
    kinds = draw(st.lists(st.sampled_from([CLOSED, OPEN] if allow_open else [CLOSED]),
                          min_size=k, max_size=k))
    return assemble(list(passages), cuts, kinds)


def random_code(rng: random.Random, max_crossings: int = 5, max_components: int = 2,
                allow_open: bool = True) -> GaussCode:
    n = rng.randint(0, max_crossings)
    passages = []
    for c in range(1, n + 1):
        s = rng.choice([1, -1])
        passages += [Passage(c, OVER, s), Passage(c, UNDER, s)]
    rng.shuffle(passages)
    k = rng.randint(1, max_components)
    cuts = [rng.randint(0, len(passages)) for _ in range(k - 1)]
    kinds = [rng.choice([CLOSED, OPEN]) if allow_open else CLOSED for _ in range(k)]
    return assemble(passages, cuts, kinds)
