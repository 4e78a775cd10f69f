"""Brown's criterion for characters of two-generator one-relator groups.

The relator is drawn as a lattice walk in exponent coordinates (first
generator, second generator).  For a character ``chi`` vanishing on the
relator's exponent vector, ``chi`` lies in Sigma exactly when ``chi`` takes
its minimum over the cyclic walk either at a single vertex or along a single
edge.  The edge case only arises when ``chi`` kills one generator.

Orientation: with this rule the base ``<a>`` of ``< a, t | t a t^-1 a^-2 >``
sits in the kernel of ``chi = (0, -1)``, and that ray is the one in Sigma.
The pair verdict (fibered / strictly ascending / neither) does not depend on
the orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .presentation import Presentation
from .word import Word

__all__ = [
    "Character",
    "RelatorWalk",
    "HullData",
    "Verdict",
    "BnsClassification",
    "BnsError",
    "walk",
    "hull",
    "brown_classify",
    "in_sigma",
    "primitive_rays",
    "sweep",
]


class BnsError(ValueError):
    pass


class Verdict(str, Enum):
    FIBERED = "fibered"
    STRICTLY_ASCENDING = "strictly_ascending"
    NEITHER = "neither"


@dataclass(frozen=True)
class Character:
    """Primitive integer pair ``(chi(x), chi(y))``; built via :meth:`of`."""

    values: tuple[int, int]

    @classmethod
    def of(cls, x: int, y: int) -> "Character":
        x, y = int(x), int(y)
        if x == 0 and y == 0:
            raise BnsError("the zero character has no ray")
        g = math.gcd(x, y)
        return cls((x // g, y // g))

    def __neg__(self) -> "Character":
        return Character((-self.values[0], -self.values[1]))

    def __call__(self, point) -> int:
        return self.values[0] * int(point[0]) + self.values[1] * int(point[1])

    def ray_key(self) -> tuple[int, int]:
        """Representative of ``{chi, -chi}``: first nonzero coordinate positive."""
        x, y = self.values
        return (x, y) if (x > 0 or (x == 0 and y > 0)) else (-x, -y)

    def is_valid_for(self, r: Word) -> bool:
        return self(r.exponent_vector(2)) == 0


@dataclass(frozen=True)
class RelatorWalk:
    points: np.ndarray  # (m + 1, 2) int64
    letters: tuple[int, ...]

    @property
    def closed(self) -> bool:
        return bool((self.points[0] == self.points[-1]).all())

    @property
    def vertices(self) -> np.ndarray:
        """The ``m`` vertices of the cyclic walk (``p_0 .. p_{m-1}``)."""
        return self.points[:-1]


def walk(r: Word) -> RelatorWalk:
    if r.max_gen() > 1:
        raise BnsError("walk needs a word in two generators")
    steps = np.zeros((len(r), 2), dtype=np.int64)
    for k, x in enumerate(r.letters):
        steps[k, abs(x) - 1] = 1 if x > 0 else -1
    pts = np.zeros((len(r) + 1, 2), dtype=np.int64)
    np.cumsum(steps, axis=0, out=pts[1:])
    return RelatorWalk(pts, tuple(r.letters))


@dataclass(frozen=True)
class HullData:
    vertices: list[tuple[int, int]]
    multiplicity: list[int]
    edge_paths: list[list[tuple[int, int]]]

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "multiplicity": self.multiplicity,
            "edge_paths": [[list(s) for s in e] for e in self.edge_paths],
        }


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull(w: RelatorWalk) -> HullData:
    """Counter-clockwise hull of the walk points.

    Multiplicities count visits by the cyclic walk, so the closing point of a
    closed walk is not counted twice.  ``edge_paths[e]`` lists the maximal
    runs ``(start, end)`` of walk indices lying on the line through edge
    ``e`` (from vertex ``e`` to vertex ``e + 1``).
    """
    pts = [tuple(int(c) for c in p) for p in w.points]
    visit = pts[:-1] if w.closed else pts
    verts = _monotone_chain(pts)
    mult = [sum(1 for q in visit if q == v) for v in verts]
    paths: list[list[tuple[int, int]]] = []
    nv = len(verts)
    n_edges = nv if nv > 2 else nv - 1
    for e in range(max(n_edges, 0)):
        a, b = verts[e], verts[(e + 1) % nv]
        on = [_cross(a, b, q) == 0 for q in pts]
        runs, start = [], None
        for k, flag in enumerate(on + [False]):
            if flag and start is None:
                start = k
            elif not flag and start is not None:
                if k - 1 > start:
                    runs.append((start, k - 1))
                start = None
        paths.append(runs)
    return HullData(verts, mult, paths)


def in_sigma(r: Word, chi: Character) -> bool:
    """Whether ``chi`` attains its minimum on the cyclic walk at a single
    vertex or along a single edge."""
    vals = walk(r).vertices @ np.array(chi.values, dtype=np.int64)
    m = len(vals)
    if m == 1:
        return True
    at_min = vals == vals.min()
    v = int(at_min.sum())
    e = int((at_min & np.roll(at_min, -1)).sum())
    return (v == 1 and e == 0) or (v == 2 and e == 1)


@dataclass(frozen=True)
class BnsClassification:
    character: Character
    pair_verdict: Verdict
    signed: tuple[bool, bool]

    def to_dict(self) -> dict:
        return {
            "character": list(self.character.values),
            "verdict": self.pair_verdict.value,
            "chi_in_sigma": self.signed[0],
            "minus_chi_in_sigma": self.signed[1],
        }


def _relator(p: Presentation) -> Word:
    if p.rank != 2 or len(p.relators) != 1:
        raise BnsError("Brown's criterion needs a 2-generator 1-relator presentation")
    return p.relators[0]


def brown_classify(p: Presentation, chi: Character | tuple[int, int]) -> BnsClassification:
    r = _relator(p)
    if not isinstance(chi, Character):
        chi = Character.of(*chi)
    if not chi.is_valid_for(r):
        raise BnsError(f"character {chi.values} does not vanish on the relator")
    plus, minus = in_sigma(r, chi), in_sigma(r, -chi)
    if plus and minus:
        verdict = Verdict.FIBERED
    elif plus or minus:
        verdict = Verdict.STRICTLY_ASCENDING
    else:
        verdict = Verdict.NEITHER
    return BnsClassification(chi, verdict, (plus, minus))


def primitive_rays(n: int) -> list[Character]:
    """One representative per ray pair among primitive pairs in ``[-n, n]^2``."""
    out = []
    for x in range(0, n + 1):
        for y in range(-n, n + 1):
            if (x == 0 and y <= 0) or math.gcd(x, y) != 1:
                continue
            out.append(Character((x, y)))
    return out


def sweep(p: Presentation, n: int) -> list[BnsClassification]:
    """Classify every valid ray pair with coordinates in ``[-n, n]``."""
    r = _relator(p)
    return [brown_classify(p, c) for c in primitive_rays(n) if c.is_valid_for(r)]
