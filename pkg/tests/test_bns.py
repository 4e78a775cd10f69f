import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqhnn.bns import (
    BnsError,
    Character,
    Verdict,
    brown_classify,
    hull,
    in_sigma,
    primitive_rays,
    sweep,
    walk,
)
from sqhnn.catalog import baumslag_solitar_12, phi_torus, r_l_group, torus
from sqhnn.presentation import AT, Presentation, abelianization
from sqhnn.word import Word

from .strategies import cyclically_reduced

STRICT = {(1, 1), (1, -1)}
EXCEPTIONAL = {(1, 0), (0, 1)}


@pytest.fixture(scope="module")
def l8():
    return r_l_group(8)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def in_triangle(p, a, b, c):
    d = [cross(a, b, p), cross(b, c, p), cross(c, a, p)]
    return all(x >= 0 for x in d) or all(x <= 0 for x in d)


def extreme_points(pts):
    """Hull vertices by brute force: points not in the hull of the others."""
    pts = sorted(set(pts))
    out = set()
    for p in pts:
        rest = [q for q in pts if q != p]
        covered = any(
            in_triangle(p, a, b, c) and cross(a, b, c) != 0
            for a, b, c in itertools.combinations(rest, 3)
        ) or any(
            cross(a, b, p) == 0 and min(a, b) <= p <= max(a, b)
            for a, b in itertools.combinations(rest, 2)
        )
        if not covered:
            out.add(p)
    return out


class TestWalk:
    def test_torus(self):
        w = walk(torus().relators[0])
        assert w.points.tolist() == [[0, 0], [0, 1], [1, 1], [1, 0], [0, 0]]
        assert w.closed

    def test_baumslag_solitar_endpoint(self):
        w = walk(AT.word("t a t^-1 a^-2"))
        assert w.points[-1].tolist() == [-1, 0] and not w.closed

    def test_l8(self, l8):
        w = walk(l8.relators[0])
        assert w.closed and len(w.points) == 117

    def test_three_generators(self):
        with pytest.raises(BnsError):
            walk(Word([1, 2, 3]))

    @given(cyclically_reduced(2, 1, 16))
    def test_unit_steps_and_closure(self, r):
        w = walk(r)
        steps = np.abs(np.diff(w.points, axis=0)).sum(axis=1)
        assert (steps == 1).all()
        assert w.closed == (tuple(r.exponent_vector(2)) == (0, 0))
        p = Presentation(AT, [r])
        assert w.closed == (abelianization(p).betti == 2)


class TestHull:
    def test_torus_square(self):
        h = hull(walk(torus().relators[0]))
        assert sorted(h.vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert h.multiplicity == [1, 1, 1, 1]

    def test_l8_vertices_visited_once(self, l8):
        h = hull(walk(l8.relators[0]))
        assert len(h.vertices) >= 3
        assert all(m == 1 for m in h.multiplicity)

    def test_degenerate(self):
        h = hull(walk(Word([1, 1])))
        assert h.vertices == [(0, 0), (2, 0)]
        assert h.edge_paths == [[(0, 2)]]

    def test_to_dict(self):
        d = hull(walk(torus().relators[0])).to_dict()
        assert set(d) == {"vertices", "multiplicity", "edge_paths"}

    @given(cyclically_reduced(2, 1, 12))
    def test_matches_brute_force(self, r):
        w = walk(r)
        pts = [tuple(int(c) for c in p) for p in w.points]
        h = hull(w)
        assert set(h.vertices) == extreme_points(pts)
        if len(h.vertices) >= 3:
            n = len(h.vertices)
            for k in range(n):
                a, b = h.vertices[k], h.vertices[(k + 1) % n]
                assert all(cross(a, b, q) >= 0 for q in pts)


class TestCharacter:
    def test_primitive(self):
        assert Character.of(4, -6).values == (2, -3)
        assert Character.of(0, -3).values == (0, -1)
        with pytest.raises(BnsError):
            Character.of(0, 0)

    def test_ray_key(self):
        assert Character.of(-1, 2).ray_key() == (1, -2)
        assert Character.of(0, -1).ray_key() == (0, 1)

    def test_sweep_rays(self):
        rays = primitive_rays(1)
        assert {c.values for c in rays} == {(0, 1), (1, -1), (1, 0), (1, 1)}


class TestClassify:
    def test_l8_strict(self, l8):
        assert brown_classify(l8, (-1, -1)).pair_verdict is Verdict.STRICTLY_ASCENDING
        assert brown_classify(l8, (1, -1)).pair_verdict is Verdict.STRICTLY_ASCENDING

    def test_l8_fibered(self, l8):
        assert brown_classify(l8, (2, 1)).pair_verdict is Verdict.FIBERED

    def test_l8_sweep(self, l8):
        for c in sweep(l8, 5):
            key = c.character.ray_key()
            if key in STRICT:
                assert c.pair_verdict is Verdict.STRICTLY_ASCENDING
            elif key in EXCEPTIONAL:
                assert c.pair_verdict is not Verdict.FIBERED
            else:
                assert c.pair_verdict is Verdict.FIBERED, key

    def test_baumslag_solitar(self):
        p = baumslag_solitar_12()
        rays = sweep(p, 3)
        assert [c.character.values for c in rays] == [(0, 1)]
        c = brown_classify(p, (0, 1))
        assert c.pair_verdict is Verdict.STRICTLY_ASCENDING
        # orientation: the character that is negative on t lies in Sigma
        assert brown_classify(p, (0, -1)).signed == (True, False)
        assert c.signed == (False, True)

    def test_torus(self):
        for c in sweep(torus(), 4):
            assert c.pair_verdict is Verdict.FIBERED

    def test_single_letter_relator(self):
        p = Presentation(AT, [Word([1])])
        assert brown_classify(p, (0, 1)).pair_verdict is Verdict.FIBERED

    def test_errors(self, l8):
        with pytest.raises(BnsError):
            brown_classify(baumslag_solitar_12(), (1, 0))
        with pytest.raises(BnsError):
            brown_classify(phi_torus(), (1, 0))

    @given(cyclically_reduced(2, 2, 14), st.integers(1, 5))
    def test_scaling_and_symmetry(self, r, k):
        ev = r.exponent_vector(2)
        if tuple(ev) == (0, 0):
            chi = Character.of(1, 2)
        else:
            chi = Character.of(-ev[1], ev[0])
        p = Presentation(AT, [r])
        c = brown_classify(p, chi)
        neg = brown_classify(p, -chi)
        assert c.pair_verdict is neg.pair_verdict
        assert neg.signed == c.signed[::-1]
        scaled = Character((chi.values[0] * k, chi.values[1] * k))
        assert in_sigma(r, scaled) == c.signed[0]
        if c.pair_verdict is Verdict.FIBERED:
            assert c.signed == (True, True)
        elif c.pair_verdict is Verdict.STRICTLY_ASCENDING:
            assert c.signed[0] != c.signed[1]
