from __future__ import annotations

import json
import random

import numpy as np
import pytest
from hypothesis import given

from weldtube.diagram import NAMED_CODES, OVER, UNDER, canonical_form, parse, serialize
from weldtube.moves import (
    END,
    OC,
    R1,
    R2,
    R3,
    R3_CONFIGURATIONS,
    WELDED,
    MoveError,
    MoveInstance,
    apply,
    enumerate_moves,
    inverse,
)

from conftest import CORPUS, gauss_codes, random_code

ALL = WELDED
DELTA = {"R1_add": 1, "R1_remove": -1, "R2_add": 2, "R2_remove": -2, "R3": 0,
         "OC_swap": 0, "End_add": 1, "End_remove": -1}


def kinds(code, moves, additive=False):
    return [m.kind for m in enumerate_moves(code, moves, additive=additive)]


def test_kink_has_one_r1_removal():
    moves = enumerate_moves(parse("(O1+ U1+)"), {R1}, additive=False)
    assert [m.kind for m in moves] == ["R1_remove"]
    assert serialize(apply(parse("(O1+ U1+)"), moves[0])) == "()"


def test_virtual_trefoil_patterns():
    vt = parse(NAMED_CODES["VT"])
    oc = enumerate_moves(vt, {OC})
    assert any(m.kind == "OC_swap" and set(m.params) == {1, 2} for m in oc)
    found = kinds(vt, {R1, R2, R3})
    assert "R2_remove" not in found and "R3" not in found


def test_oc_example_result():
    vt = parse(NAMED_CODES["VT"])
    mv = next(m for m in enumerate_moves(vt, {OC}) if m.locus == ((0, 0),))
    out = apply(vt, mv)
    assert serialize(out) == "(O2+ O1+ U1+ U2+)"
    assert serialize(canonical_form(out)) == "(O1+ O2+ U2+ U1+)"


def test_end_moves_under_only():
    assert kinds(parse("[U1+] (O1+)"), {END}) == ["End_remove"]
    assert kinds(parse("[O1+] (U1+)"), {END}) == []


@pytest.mark.parametrize("text", [
    "(O1+ O2- U1+ U2-)",       # unders in the same order
    "(O1+ O2- U2- U1+)",       # unders reversed
    "(O1+ O2-) (U1+ U2-)",     # two strands
    "(O1+ O2-) (U2- U1+)",
])
def test_r2_removal_patterns(text):
    code = parse(text)
    removals = [m for m in enumerate_moves(code, {R2}, additive=False)]
    assert removals and all(m.kind == "R2_remove" for m in removals)
    assert serialize(canonical_form(apply(code, removals[0]))).count("O") == 0


def test_r2_needs_opposite_signs():
    assert kinds(parse("(O1+ O2+ U1+ U2+)"), {R2}) == []
    assert kinds(parse("(O1- O2- U2- U1-)"), {R2}) == []


@given(gauss_codes(max_crossings=4))
def test_enumerated_moves_apply_with_expected_size_change(code):
    for mv in enumerate_moves(code, ALL):
        out = apply(code, mv)
        assert out.crossing_count == code.crossing_count + DELTA[mv.kind]


@given(gauss_codes(max_crossings=4))
def test_oc_preserves_signs_and_under_order(code):
    def unders(c):
        return [(p.crossing, p.sign) for comp in c.components for p in comp.passages
                if p.role == UNDER]

    for mv in enumerate_moves(code, {OC}):
        out = apply(code, mv)
        assert out.signs() == code.signs()
        assert unders(out) == unders(code)


@given(gauss_codes(max_crossings=4))
def test_end_moves_touch_only_terminal_unders(code):
    for mv in enumerate_moves(code, {END}):
        if mv.kind == "End_remove":
            (ci, pos), = mv.locus
            comp = code.components[ci]
            assert not comp.closed and pos in (0, len(comp.passages) - 1)
            assert comp.passages[pos].role == UNDER
        else:
            out = apply(code, mv)
            new = (set(out.crossings) - set(code.crossings)).pop()
            (ci, _), _ = mv.locus
            comp = out.components[ci]
            ends = [comp.passages[0], comp.passages[-1]]
            assert any(p.crossing == new and p.role == UNDER for p in ends)


def test_inverse_pairs_on_random_additive_moves():
    rng = random.Random(2024)
    checked = 0
    while checked < 500:
        code = random_code(rng, max_crossings=4, max_components=2)
        moves = [m for m in enumerate_moves(code, ALL) if m.kind.endswith("_add")]
        if not moves:
            continue
        mv = rng.choice(moves)
        back = inverse(code, mv)
        assert canonical_form(apply(apply(code, mv), back)) == canonical_form(code)
        checked += 1


def test_inverse_pairs_on_reductive_and_neutral_moves():
    rng = random.Random(5)
    checked = 0
    pool = CORPUS + [random_code(rng, 5, 2) for _ in range(200)]
    for code in pool:
        for mv in enumerate_moves(code, ALL, additive=False):
            back = inverse(code, mv)
            assert canonical_form(apply(apply(code, mv), back)) == canonical_form(code)
            checked += 1
    assert checked > 200


def test_stale_locus_is_rejected():
    code = parse("(O1+ U1+)")
    mv = enumerate_moves(code, {R1}, additive=False)[0]
    with pytest.raises(MoveError):
        apply(parse("(O1+ O2+ U1+ U2+)"), mv)
    with pytest.raises(MoveError):
        apply(code, MoveInstance("Teleport", ((0, 0),)))


def test_move_json_roundtrip():
    code = parse("(O1+ U2- O3- U1+ O2- U3-) [U4+ O4+]")
    for mv in enumerate_moves(code, ALL):
        data = json.loads(str(mv))
        assert MoveInstance.from_json(data) == mv


def test_r3_available_on_braid_triangle():
    # closures of s1 s2 s1 and s1 s2 s1^-1 each carry one triangle
    for text in ("(O1+ O2+ U2+ U3+) (U1+ O3+)", "(O1+ O2+ U2+ O3-) (U1+ U3-)"):
        code = parse(text)
        r3 = enumerate_moves(code, {R3})
        assert len(r3) == 1
        out = apply(code, r3[0])
        assert out.signs() == code.signs()
        assert canonical_form(apply(out, enumerate_moves(out, {R3})[0])) == canonical_form(code)


def _r3_patterns_from_lines(samples: int, seed: int) -> set:
    """Orders and signs of three straight strands at three heights."""
    rng = np.random.default_rng(seed)
    found = set()
    for _ in range(samples):
        th = rng.uniform(0, 2 * np.pi, 3)
        d = np.stack([np.cos(th), np.sin(th)], 1)
        p = rng.normal(size=(3, 2))
        top, mid, bot = rng.permutation(3)

        def meet(i, j):
            return np.linalg.solve(np.array([d[i], -d[j]]).T, p[j] - p[i])

        try:
            tm, tb, mb = meet(top, mid), meet(top, bot), meet(mid, bot)
        except np.linalg.LinAlgError:
            continue

        def sign(o, u):
            return int(np.sign(d[o][0] * d[u][1] - d[o][1] * d[u][0]))

        found.add((bool(tm[0] < tb[0]), bool(tm[1] < mb[0]), bool(tb[1] < mb[1]),
                   sign(top, mid), sign(top, bot), sign(mid, bot)))
    return found


def test_r3_table_matches_straight_line_geometry():
    assert _r3_patterns_from_lines(20000, seed=0) == set(R3_CONFIGURATIONS)


def test_r3_table_closed_under_the_move_and_mirror():
    for on_t, on_m, on_b, s1, s2, s3 in R3_CONFIGURATIONS:
        # sliding the bottom strand across reverses every order
        assert (not on_t, not on_m, not on_b, s1, s2, s3) in R3_CONFIGURATIONS
        assert (on_t, on_m, on_b, -s1, -s2, -s3) in R3_CONFIGURATIONS


def test_over_under_roles_unchanged_by_r3():
    rng = random.Random(3)
    seen = 0
    for code in CORPUS + [random_code(rng, 6, 2, allow_open=False) for _ in range(300)]:
        for mv in enumerate_moves(code, {R3}):
            out = apply(code, mv)
            roles = lambda c: sorted((p.crossing, p.role) for _, _, p in c.passages())  # noqa: E731
            assert roles(out) == roles(code)
            seen += 1
    assert seen > 0


def test_over_passages_of_oc():
    code = parse("(O1+ O2- U1+ O3+ U2- U3+)")
    for mv in enumerate_moves(code, {OC}):
        (ci, pos), = mv.locus
        comp = code.components[ci]
        assert comp.passages[pos].role == OVER
