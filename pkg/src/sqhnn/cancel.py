"""Symmetrized relator sets, pieces and small cancellation conditions.

Every element of the symmetrized set is an *occurrence*: relator index,
whether it was inverted, and the rotation it starts at.  Two distinct
occurrences may spell the same word (proper powers, repeated relators); they
still count as different elements.  When two distinct occurrences spell the
same word their full-length overlap would be the trivial product ``l l^-1``,
so that overlap is capped one letter short of the whole word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .presentation import Presentation
from .word import Word

__all__ = [
    "Occurrence",
    "SymmetrizedSet",
    "PieceReport",
    "symmetrize",
    "max_piece",
    "piece_oracle",
    "c_prime",
    "ORACLE_CAP",
]

ORACLE_CAP = 10_000


class Occurrence(NamedTuple):
    relator: int
    inverted: bool
    rotation: int


@dataclass(frozen=True)
class SymmetrizedSet:
    occurrences: tuple[Occurrence, ...]
    words: tuple[Word, ...]

    def distinct(self) -> set[Word]:
        return set(self.words)

    def __len__(self) -> int:
        return len(self.occurrences)

    def inverse_of(self, idx: int) -> int:
        """Index of the occurrence spelling the inverse word of ``idx``."""
        return self._inverse_index[idx]

    @property
    def _inverse_index(self) -> list[int]:
        cached = self.__dict__.get("_inv_cache")
        if cached is None:
            pos = {o: i for i, o in enumerate(self.occurrences)}
            cached = []
            for i, o in enumerate(self.occurrences):
                n = len(self.words[i])
                cached.append(pos[Occurrence(o.relator, not o.inverted, (n - o.rotation) % n)])
            object.__setattr__(self, "_inv_cache", cached)
        return cached


def symmetrize(p: Presentation) -> SymmetrizedSet:
    occ, words = [], []
    for i, r in enumerate(p.relators):
        for inv, base in ((False, r), (True, r.inverse())):
            for k in range(len(base)):
                occ.append(Occurrence(i, inv, k))
                words.append(base.rotate(k))
    return SymmetrizedSet(tuple(occ), tuple(words))


@dataclass
class PieceReport:
    max_piece: int
    witness: tuple[Occurrence, Occurrence] | None
    piece: Word | None
    per_relator: list[int]
    relator_lengths: list[int]
    c_p: int | None

    @property
    def ratios(self) -> list[Fraction]:
        return [Fraction(m, n) for m, n in zip(self.per_relator, self.relator_lengths)]

    def to_dict(self, alphabet=None) -> dict:
        d = {
            "max_piece": self.max_piece,
            "per_relator": self.per_relator,
            "relator_lengths": self.relator_lengths,
            "ratios": [str(r) for r in self.ratios],
            "c_p": self.c_p,
            "witness": [list(o) for o in self.witness] if self.witness else None,
        }
        if alphabet is not None and self.piece is not None:
            d["piece"] = alphabet.format(self.piece)
        return d


def _piece_value(lcp: int, len_a: int, len_b: int) -> int:
    if lcp == len_a == len_b:
        return lcp - 1
    return lcp


def _min_piece_cover(starts: list[int]) -> int | None:
    """Fewest pieces whose product is the cyclic word; ``starts[s]`` is the
    longest piece beginning at position ``s``."""
    n = len(starts)
    best = None
    for s in range(n):
        covered, count, pos = 0, 0, s
        while covered < n:
            step = min(starts[pos % n], n - covered)
            if step == 0:
                count = None
                break
            covered += step
            pos += step
            count += 1
        if count is not None and (best is None or count < best):
            best = count
    return best


def _matrix(sym: SymmetrizedSet):
    lengths = np.array([len(w) for w in sym.words], dtype=np.int64)
    width = int(lengths.max()) if len(lengths) else 0
    rows = np.zeros((len(sym.words), width), dtype=np.int64)
    for i, w in enumerate(sym.words):
        rows[i, : len(w)] = w.letters
    return rows, lengths


def _report(p: Presentation, sym: SymmetrizedSet, best: list[int], partner) -> PieceReport:
    nrel = len(p.relators)
    per_rel = [0] * nrel
    for i, o in enumerate(sym.occurrences):
        per_rel[o.relator] = max(per_rel[o.relator], best[i])
    top = max(best, default=0)
    witness = piece = None
    if sym.occurrences and top > 0:
        first = min(
            (i for i in range(len(best)) if best[i] == top), key=lambda i: sym.occurrences[i]
        )
        second = partner(first, top)
        witness = (sym.occurrences[first], sym.occurrences[second])
        piece = Word(sym.words[first].letters[:top])
    c_p = None
    offset = 0
    for i, r in enumerate(p.relators):
        # occurrences of r (not inverted) start at offset, one per rotation
        starts = best[offset : offset + len(r)]
        offset += 2 * len(r)
        cnt = _min_piece_cover(starts)
        if cnt is not None and (c_p is None or cnt < c_p):
            c_p = cnt
    return PieceReport(top, witness, piece, per_rel, p.relator_lengths(), c_p)


def max_piece(p: Presentation) -> PieceReport:
    """Longest piece via sorted common-prefix scanning of the symmetrized set."""
    sym = symmetrize(p)
    n = len(sym)
    if n == 0:
        return PieceReport(0, None, None, [], [], None)
    rows, lengths = _matrix(sym)
    order = np.lexsort(rows.T[::-1]) if rows.shape[1] else np.arange(n)
    lcp = _kernels.adjacent_lcp(rows, lengths, order.astype(np.int64))
    ln = lengths[order]
    same = (lcp == ln[:-1]) & (lcp == ln[1:])
    # Identical rows only overlap in |r| - 1 letters, so the adjacent scan
    # alone is not enough: each run of identical rows shares the overlaps
    # with the nearest different rows on either side.
    best = [0] * n
    k = 0
    while k < n:
        e = k
        while e < n - 1 and same[e]:
            e += 1
        v = int(ln[k]) - 1 if e > k else 0
        if k > 0:
            v = max(v, int(lcp[k - 1]))
        if e < n - 1:
            v = max(v, int(lcp[e]))
        for j in range(k, e + 1):
            best[int(order[j])] = v
        k = e + 1

    def partner(first: int, top: int) -> int:
        row = rows[first]
        diff = rows != row
        firstdiff = np.where(diff.any(axis=1), diff.argmax(axis=1), rows.shape[1])
        lcps = np.minimum(firstdiff, np.minimum(lengths, lengths[first]))
        cands = [
            j
            for j in range(n)
            if j != first
            and _piece_value(int(lcps[j]), int(lengths[first]), int(lengths[j])) == top
        ]
        return min(cands, key=lambda j: sym.occurrences[j])

    return _report(p, sym, best, partner)


def _cancellation(u: tuple[int, ...], v: tuple[int, ...]) -> int:
    k = 0
    m = min(len(u), len(v))
    while k < m and u[-1 - k] == -v[k]:
        k += 1
    return k


def piece_oracle(p: Presentation) -> PieceReport:
    """Brute force over products ``l1 l2`` with ``l2`` not the inverse of ``l1``.

    The piece length of a pair is the amount cancelled in the product; the
    piece itself sits at the end of ``l1``.  Quadratic, capped at
    ``ORACLE_CAP`` symmetrized entries.
    """
    sym = symmetrize(p)
    n = len(sym)
    if n > ORACLE_CAP:
        raise ValueError(f"symmetrized set has {n} entries; oracle cap is {ORACLE_CAP}")
    words = [w.letters for w in sym.words]
    inv = [sym.inverse_of(i) for i in range(n)]
    # best[j] is indexed by the occurrence whose *prefix* is the piece, that
    # is the inverse occurrence of l1, so the report lines up with max_piece
    best = [0] * n
    pair_of: dict[int, dict[int, int]] = {}
    for i in range(n):
        u = words[i]
        for j in range(n):
            if j == inv[i]:
                continue
            v = words[j]
            c = _cancellation(u, v)
            if c == len(u) == len(v) and words[inv[i]] == v:
                c -= 1
            if c:
                m1 = inv[i]
                if c > best[m1]:
                    best[m1] = c
                if c > best[j]:
                    best[j] = c
                pair_of.setdefault(m1, {})[j] = c
                pair_of.setdefault(j, {})[m1] = c

    def partner(first: int, top: int) -> int:
        cands = [j for j, c in pair_of.get(first, {}).items() if c == top]
        return min(cands, key=lambda j: sym.occurrences[j])

    return _report(p, sym, best, partner)


def c_prime(
    p: Presentation,
    lam: Fraction | float | str = Fraction(1, 6),
    report: PieceReport | None = None,
) -> bool:
    """C'(lam): every piece of every relator ``r`` is shorter than ``lam * |r|``.

    Pass ``report`` to reuse an earlier :func:`max_piece` result for ``p``.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if not p.relators:
        return True
    rep = report if report is not None else max_piece(p)
    return all(m < lam * n for m, n in zip(rep.per_relator, rep.relator_lengths))
