"""Finite presentations, abelianization, mapping tori and the a_i rewriting."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .word import (
    Alphabet,
    Endomorphism,
    Word,
    WordSyntaxError,
    cyclic_reduce,
)

__all__ = [
    "Presentation",
    "AbelianizationReport",
    "RewriteResult",
    "PresentationError",
    "parse",
    "format_presentation",
    "smith_normal_form",
    "abelianization",
    "mapping_torus",
    "t_rewrite",
    "build_r_l",
    "expand_to_at",
    "indexed_alphabet",
    "AT",
]

AT = Alphabet.of("a", "t")


class PresentationError(ValueError):
    pass


class Presentation:
    """Generators plus relators.

    Relators are stored cyclically reduced; the words as given and the
    conjugators that link the two are kept in ``originals``/``conjugators``.
    """

    __slots__ = ("alphabet", "relators", "originals", "conjugators")

    def __init__(self, alphabet: Alphabet, relators: Sequence[Word] = ()):
        self.alphabet = alphabet
        rels, origs, conjs = [], [], []
        for w in relators:
            if w.max_gen() >= len(alphabet):
                raise PresentationError("relator uses letters outside the alphabet")
            core, c = cyclic_reduce(w)
            if core.core.is_identity():
                raise PresentationError("relators must be nontrivial")
            rels.append(core.core)
            origs.append(w)
            conjs.append(c)
        self.relators: tuple[Word, ...] = tuple(rels)
        self.originals: tuple[Word, ...] = tuple(origs)
        self.conjugators: tuple[Word, ...] = tuple(conjs)

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        return parse(text)

    def format(self) -> str:
        return format_presentation(self)

    def __repr__(self) -> str:
        return f"Presentation({self.format()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.alphabet == other.alphabet and self.relators == other.relators

    def __hash__(self):
        return hash((self.alphabet, self.relators))

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    def exponent_matrix(self) -> list[list[int]]:
        return [r.exponent_vector(self.rank) for r in self.relators]

    def relator_lengths(self) -> list[int]:
        return [len(r) for r in self.relators]


def parse(text: str) -> Presentation:
    """Parse ``< a, t | t a t^-1 a^-2, u = v >``.

    Relations ``u = v`` become the relator ``u v^-1``.
    """
    s = text.strip()
    base = len(text) - len(text.lstrip())
    if s.startswith("<"):
        if not s.endswith(">"):
            raise WordSyntaxError("missing closing '>'", base + len(s))
        body, body_off = s[1:-1], base + 1
    else:
        body, body_off = s, base
    if "|" not in body:
        raise WordSyntaxError("expected '|' between generators and relators", body_off)
    bar = body.index("|")
    gens_txt, rels_txt = body[:bar], body[bar + 1 :]
    names = [g.strip() for g in gens_txt.split(",")]
    if any(not n for n in names):
        raise WordSyntaxError("empty generator name", body_off)
    try:
        alphabet = Alphabet(tuple(names))
    except ValueError as exc:
        raise WordSyntaxError(str(exc), body_off) from None
    rels: list[Word] = []
    off = body_off + bar + 1
    for m in re.finditer(r"[^,]+", rels_txt):
        chunk = m.group(0)
        if not chunk.strip():
            continue
        start = off + m.start()
        if chunk.count("=") > 1:
            raise WordSyntaxError("more than one '=' in a relation", start)
        if "=" in chunk:
            lhs, rhs = chunk.split("=")
            u = alphabet.word(lhs, start)
            v = alphabet.word(rhs, start + len(lhs) + 1)
            w = u * v.inverse()
        else:
            w = alphabet.word(chunk, start)
        if w.is_identity():
            raise WordSyntaxError("relator reduces to the identity", start)
        rels.append(w)
    return Presentation(alphabet, rels)


def format_presentation(p: Presentation) -> str:
    gens = ", ".join(p.alphabet.names)
    rels = ", ".join(p.alphabet.format(r) for r in p.relators)
    return f"< {gens} | {rels} >" if rels else f"< {gens} | >"


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, in divisibility order.

    Python ints throughout, so entries never overflow.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility: fold any offending entry into row t and retry
                bad = next(
                    (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best = (t, t)
            for i in range(t, rows):
                if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, cols):
                if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                    best = (t, j)
            bi, bj = best
            a[t], a[bi] = a[bi], a[t]
            for row in a:
                row[t], row[bj] = row[bj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class AbelianizationReport:
    betti: int
    torsion: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion)}


def abelianization(p: Presentation) -> AbelianizationReport:
    diag = smith_normal_form(p.exponent_matrix()) if p.relators else []
    return AbelianizationReport(
        betti=p.rank - len(diag), torsion=tuple(d for d in diag if d > 1)
    )


# ---------------------------------------------------------------------------
# mapping tori


def mapping_torus(f: Endomorphism, stable_name: str = "t") -> Presentation:
    """``< t, x_1..x_k | t x_i t^-1 f(x_i)^-1 >`` (stable letter listed first)."""
    if stable_name in f.domain:
        raise PresentationError(f"stable letter {stable_name!r} collides with the domain")
    alphabet = Alphabet((stable_name,) + f.domain.names)

    def shift(w: Word) -> Word:
        return Word(x + 1 if x > 0 else x - 1 for x in w.letters)

    t = Word([1])
    rels = []
    for i, img in enumerate(f.images):
        x = Word([i + 2])
        rels.append(t * x * t.inverse() * shift(img).inverse())
    return Presentation(alphabet, rels)


# ---------------------------------------------------------------------------
# a_i = t^i a t^-i rewriting


def indexed_alphabet(l: int, prefix: str = "a") -> Alphabet:
    return Alphabet(tuple(f"{prefix}_{i}" for i in range(l + 1)))


@dataclass(frozen=True)
class RewriteResult:
    """Relator rewritten over ``a_0..a_l`` with ``a_i = t^i a t^-i``.

    ``shift`` is the index offset removed so that the least index is 0, and
    ``stable``/``base`` name the eliminated and the kept generator.
    """

    l: int
    w: Word
    stable: str = "t"
    base: str = "a"
    shift: int = 0
    alphabet: Alphabet = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", indexed_alphabet(self.l))

    def format(self) -> str:
        return self.alphabet.format(self.w)

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "w": self.format(),
            "length": len(self.w),
            "stable": self.stable,
            "base": self.base,
            "shift": self.shift,
        }


def t_rewrite(p: Presentation, stable: str | None = None) -> RewriteResult:
    """Rewrite the relator of a 2-generator 1-relator presentation over ``a_i``.

    The stable letter is ``stable`` if given, else ``t`` when it has zero
    exponent sum, else the first listed generator that does.
    """
    if p.rank != 2 or len(p.relators) != 1:
        raise PresentationError("t_rewrite needs a 2-generator 1-relator presentation")
    r = p.relators[0]
    zero = [i for i in range(2) if r.exponent_sum(i) == 0]
    if stable is not None:
        s = p.alphabet.index(stable)
        if s not in zero:
            raise PresentationError(f"{stable} has nonzero exponent sum in the relator")
    elif not zero:
        raise PresentationError("no generator has zero exponent sum in the relator")
    elif "t" in p.alphabet and p.alphabet.index("t") in zero:
        s = p.alphabet.index("t")
    else:
        s = zero[0]
    b = 1 - s
    level = 0
    pairs: list[tuple[int, int]] = []
    for x in r.letters:
        if abs(x) - 1 == s:
            level += 1 if x > 0 else -1
        else:
            pairs.append((level, 1 if x > 0 else -1))
    lo = min((lv for lv, _ in pairs), default=0)
    hi = max((lv for lv, _ in pairs), default=0)
    w = Word((lv - lo + 1) * sgn for lv, sgn in pairs)
    core, _ = cyclic_reduce(w)
    return RewriteResult(
        l=hi - lo,
        w=core.core,
        stable=p.alphabet.names[s],
        base=p.alphabet.names[b],
        shift=lo,
    )


def build_r_l(l: int) -> Word:
    """The even-``l`` relator family over ``a_0..a_l`` of length ``2(l + 2)``."""
    if l < 2 or l % 2:
        raise ValueError("l must be even and at least 2")
    order: list[int] = []
    lo, hi = 1, l - 1
    while lo <= hi:
        order.append(hi)
        if lo != hi:
            order.append(lo)
        lo, hi = lo + 1, hi - 1
    # order is l-1, 1, l-2, 2, ..., l/2 ; letters are index+1
    first = [-(l + 1), -1] + [i + 1 for i in order] + [-1]
    second = [l + 1, 1] + [-(i + 1) for i in order] + [1]
    w = Word(first + second)
    assert len(w) == 2 * (l + 2)
    return w


def expand_to_at(w: Word) -> Word:
    """Substitute ``a_i -> t^i a t^-i``; letter ``i + 1`` of ``w`` is ``a_i``.

    The result is over ``AT = <a, t>`` (``a`` is generator 0, ``t`` is 1).
    """
    a, t = 1, 2
    raw: list[int] = []
    for x in w.letters:
        i = abs(x) - 1
        raw.extend([t] * i)
        raw.append(a if x > 0 else -a)
        raw.extend([-t] * i)
    return Word(raw)
