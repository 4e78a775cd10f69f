"""Non-positive curvature of one-vertex square complexes.

A presentation whose relators are all cyclically reduced of length 4 gives a
square complex with a single vertex.  It is non-positively curved iff the
vertex link has girth at least 4.  The same fact is checked combinatorially
on the length-2 subwords of the symmetrized relators: no subword repeats
(no bigons in the link) and no ``xy, y^-1 z, xz`` triple (no triangles).
Both routes are computed and compared.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .cancel import Occurrence, symmetrize
from .presentation import Presentation
from .word import Word

__all__ = [
    "NotSquareError",
    "PairIndex",
    "LinkGraph",
    "NpcReport",
    "pair_index",
    "check_condition_1",
    "check_condition_2",
    "build_link",
    "girth",
    "npc_check",
]


class NotSquareError(ValueError):
    pass


def _require_square(p: Presentation) -> None:
    for i, r in enumerate(p.relators):
        if len(r) != 4:
            raise NotSquareError(f"relator {i} has length {len(r)}, expected 4")


@dataclass
class PairIndex:
    """Length-2 words ``xy`` mapped to where they start an element of L.

    Every length-2 subword of an element of L is the prefix of some rotation,
    so indexing prefixes of the occurrences sees every subword exactly once
    per corner.
    """

    occurrences: dict[tuple[int, int], list[Occurrence]]
    words: dict[Occurrence, Word]

    def count(self, pair: tuple[int, int]) -> int:
        return len(self.occurrences.get(pair, ()))

    def __contains__(self, pair) -> bool:
        return pair in self.occurrences


def pair_index(p: Presentation) -> PairIndex:
    sym = symmetrize(p)
    occ: dict[tuple[int, int], list[Occurrence]] = defaultdict(list)
    words = {}
    for o, w in zip(sym.occurrences, sym.words):
        occ[(w[0], w[1])].append(o)
        words[o] = w
    return PairIndex(dict(occ), words)


@dataclass
class NpcReport:
    passed: bool
    violations: list[dict] = field(default_factory=list)
    girth: float | None = None
    condition_1: bool | None = None
    condition_2: bool | None = None
    consistent: bool | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        g = self.girth
        return {
            "pass": self.passed,
            "condition_1": self.condition_1,
            "condition_2": self.condition_2,
            "girth": None if g is None else ("inf" if g == math.inf else int(g)),
            "consistent": self.consistent,
            "violations": self.violations,
        }


def _fmt_pair(p: Presentation, pair) -> str:
    return p.alphabet.format(Word(pair))


def check_condition_1(p: Presentation) -> NpcReport:
    _require_square(p)
    idx = pair_index(p)
    viol = []
    for pair in sorted(idx.occurrences):
        occs = idx.occurrences[pair]
        if len(occs) > 1:
            viol.append(
                {
                    "kind": "repeated_pair",
                    "pair": _fmt_pair(p, pair),
                    "count": len(occs),
                    "occurrences": [list(o) for o in occs],
                }
            )
    return NpcReport(not viol, viol, condition_1=not viol)


def _self_inverse(w: Word) -> bool:
    return w == w.inverse()


def check_condition_2(p: Presentation) -> NpcReport:
    """No ``xy``, ``y^-1 z`` in L with ``xz`` also in L.

    The escape clause for ``z = x^-1`` is applied as written: it needs both
    words of L carrying ``xy`` and ``y^-1 z`` to equal their own inverses.
    For reduced words ``xz`` with ``z = x^-1`` never occurs anyway.
    """
    _require_square(p)
    idx = pair_index(p)
    by_first: dict[int, list[int]] = defaultdict(list)
    for x, y in idx.occurrences:
        by_first[x].append(y)
    viol = []
    for x, y in sorted(idx.occurrences):
        for z in sorted(by_first.get(-y, ())):
            if (x, z) not in idx:
                continue
            if z == -x:
                w1 = idx.words[idx.occurrences[(x, y)][0]]
                w2 = idx.words[idx.occurrences[(-y, z)][0]]
                if _self_inverse(w1) and _self_inverse(w2):
                    continue
            viol.append(
                {
                    "kind": "triangle",
                    "triple": [
                        _fmt_pair(p, (x, y)),
                        _fmt_pair(p, (-y, z)),
                        _fmt_pair(p, (x, z)),
                    ],
                }
            )
    return NpcReport(not viol, viol, condition_2=not viol)


@dataclass
class LinkGraph:
    """Link of the single vertex.

    Node ``2g`` is the outgoing end of generator ``g`` and ``2g + 1`` the
    incoming end.  The corner of a square between letters ``x`` then ``y``
    joins ``end(x^-1)`` to ``end(y)``.
    """

    n_nodes: int
    edges: list[tuple[int, int]]
    labels: list[str]
    corners: list[tuple[int, int]]

    @staticmethod
    def node(x: int) -> int:
        return 2 * (abs(x) - 1) + (0 if x > 0 else 1)

    def to_dot(self) -> str:
        lines = ["graph link {"]
        for i, lab in enumerate(self.labels):
            lines.append(f'  n{i} [label="{lab}"];')
        for (u, v), (r, k) in zip(self.edges, self.corners):
            lines.append(f'  n{u} -- n{v} [label="r{r}.{k}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_link(p: Presentation) -> LinkGraph:
    _require_square(p)
    labels = []
    for name in p.alphabet.names:
        labels += [name, f"{name}^-1"]
    edges, corners = [], []
    for ri, r in enumerate(p.relators):
        for k in range(4):
            x, y = r[k], r[(k + 1) % 4]
            edges.append((LinkGraph.node(-x), LinkGraph.node(y)))
            corners.append((ri, k))
    return LinkGraph(2 * len(p.alphabet), edges, labels, corners)


def _shortest_cycle(link: LinkGraph) -> tuple[float, list[int]]:
    for u, v in link.edges:
        if u == v:
            return 1, [u]
    seen = set()
    for u, v in link.edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            return 2, [key[0], key[1]]
        seen.add(key)
    n = link.n_nodes
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in seen:
        adj[u].append(v)
        adj[v].append(u)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(a) for a in adj])
    indices = np.array([w for a in adj for w in sorted(a)], dtype=np.int64)
    g, root, u, v = _kernels.simple_girth(indptr, indices)
    if g == -1:
        return math.inf, []
    return int(g), _cycle_through(adj, int(root), int(u), int(v))


def _cycle_through(adj, root: int, u: int, v: int) -> list[int]:
    parent = {root: None}
    queue = [root]
    for x in queue:
        for w in sorted(adj[x]):
            if w not in parent:
                parent[w] = x
                queue.append(w)

    def path(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out

    # both paths end at the root
    pu, pv = path(u), path(v)
    return pu[::-1] + pv[:-1]


def girth(link: LinkGraph) -> float:
    """Shortest cycle length; loops count 1, parallel edges 2, forests inf."""
    return _shortest_cycle(link)[0]


def npc_check(p: Presentation) -> NpcReport:
    _require_square(p)
    c1 = check_condition_1(p)
    c2 = check_condition_2(p)
    link = build_link(p)
    g, cycle = _shortest_cycle(link)
    combinatorial = c1.passed and c2.passed
    by_girth = g >= 4
    viol = c1.violations + c2.violations
    if not by_girth:
        viol.append(
            {"kind": "short_cycle", "length": g, "cycle": [link.labels[i] for i in cycle]}
        )
    consistent = combinatorial == by_girth
    if not consistent:
        viol.append(
            {
                "kind": "internal_inconsistency",
                "conditions": combinatorial,
                "girth": g,
            }
        )
    return NpcReport(
        passed=combinatorial and by_girth and consistent,
        violations=viol,
        girth=g,
        condition_1=c1.passed,
        condition_2=c2.passed,
        consistent=consistent,
    )
