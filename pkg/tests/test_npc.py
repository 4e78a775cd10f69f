import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqhnn.cancel import max_piece
from sqhnn.catalog import r_l_group, torus
from sqhnn.npc import (
    LinkGraph,
    NotSquareError,
    build_link,
    check_condition_1,
    check_condition_2,
    girth,
    npc_check,
    pair_index,
)
from sqhnn.presentation import Presentation, parse, t_rewrite
from sqhnn.squarify import prop31_squarify

from .strategies import random_square_presentation, square_presentations

ABAB = parse("< a, b | a b a b >")
TRIANGLE = parse(
    "< x, y, z, p, q, s, t, u, v | x y p q, y^-1 z s t, x z u v >"
)


@pytest.fixture(scope="module")
def l8_square():
    return prop31_squarify(t_rewrite(r_l_group(8))).presentation


class TestConditions:
    def test_torus(self):
        assert check_condition_1(torus())
        assert check_condition_2(torus())
        assert len(pair_index(torus()).occurrences) == 8

    def test_abab_repeats_a_pair(self):
        rep = check_condition_1(ABAB)
        assert not rep
        assert "a b" in [v["pair"] for v in rep.violations]

    def test_constructed_triangle(self):
        assert check_condition_1(TRIANGLE)
        rep = check_condition_2(TRIANGLE)
        assert not rep
        assert ["x y", "y^-1 z", "x z"] in [v["triple"] for v in rep.violations]

    def test_l8_output(self, l8_square):
        assert check_condition_1(l8_square)
        assert check_condition_2(l8_square)

    def test_not_square(self):
        with pytest.raises(NotSquareError):
            npc_check(parse("< a, t | t a t^-1 a^-2 >"))


class TestLink:
    def test_torus_is_a_four_cycle(self):
        link = build_link(torus())
        assert link.n_nodes == 4 and len(link.edges) == 4
        assert girth(link) == 4

    def test_abab(self):
        assert girth(build_link(ABAB)) == 2

    def test_loop_and_parallel_conventions(self):
        labels = ["a", "a^-1", "b", "b^-1"]
        assert girth(LinkGraph(4, [(0, 0), (1, 2)], labels, [(0, 0), (0, 1)])) == 1
        assert girth(LinkGraph(4, [(0, 2), (2, 0)], labels, [(0, 0), (0, 1)])) == 2

    def test_forest(self):
        link = LinkGraph(4, [(0, 2)], ["a", "a^-1", "b", "b^-1"], [(0, 0)])
        assert girth(link) == math.inf

    def test_edge_count(self, l8_square):
        assert len(build_link(l8_square).edges) == 4 * len(l8_square.relators)
        assert girth(build_link(l8_square)) >= 4

    def test_dot(self):
        dot = build_link(torus()).to_dot()
        assert dot.startswith("graph link {") and dot.count("--") == 4


class TestNpcCheck:
    def test_torus(self):
        rep = npc_check(torus())
        assert rep and rep.girth == 4 and rep.consistent

    def test_abab(self):
        rep = npc_check(ABAB)
        assert not rep and rep.girth == 2 and rep.consistent
        assert any(v["kind"] == "short_cycle" for v in rep.violations)

    def test_triangle_has_girth_three(self):
        rep = npc_check(TRIANGLE)
        assert not rep and rep.girth == 3 and rep.consistent

    def test_l8(self, l8_square):
        rep = npc_check(l8_square)
        assert rep and rep.condition_1 and rep.condition_2 and rep.consistent

    def test_report_dict(self):
        d = npc_check(torus()).to_dict()
        assert d["pass"] is True and d["girth"] == 4 and d["violations"] == []

    @settings(max_examples=300)
    @given(square_presentations())
    def test_conditions_agree_with_girth(self, p):
        rep = npc_check(p)
        assert rep.consistent
        assert (rep.condition_1 and rep.condition_2) == (rep.girth >= 4)
        assert rep.passed == (not rep.violations)

    @settings(max_examples=300)
    @given(square_presentations())
    def test_condition_1_is_pieces_of_length_one(self, p):
        assert check_condition_1(p).passed == (max_piece(p).max_piece <= 1)

    @given(square_presentations(), st.data())
    def test_invariant_under_relator_moves(self, p, data):
        base = npc_check(p).passed
        rels = list(p.relators)
        rels = data.draw(st.permutations(rels))
        moved = []
        for r in rels:
            r = r.rotate(data.draw(st.integers(0, 3)))
            moved.append(r.inverse() if data.draw(st.booleans()) else r)
        assert npc_check(Presentation(p.alphabet, moved)).passed == base

    def test_numpy_driven_sample(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            p = random_square_presentation(rng)
            rep = npc_check(p)
            assert rep.consistent
