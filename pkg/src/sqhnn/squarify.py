"""Turning even-length relators into length-4 relators.

A *cut* at position ``p`` of a working relator of length ``L`` replaces the
cyclic window ``w[p], w[p+1], w[p+2]`` (indices mod ``L``) by a fresh
generator ``u`` and records the defining relator ``w[p] w[p+1] w[p+2] u^-1``.
The working relator shrinks by two each time and the process stops at
length 4.  A schedule is the list of cut positions for each relator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .npc import npc_check
from .presentation import AT, Presentation, RewriteResult, expand_to_at
from .word import Alphabet, Word, cyclic_reduce

__all__ = [
    "Substitution",
    "SquarifiedPresentation",
    "TemplateError",
    "ParityError",
    "prop31_squarify",
    "prop31_template_violation",
    "nested_cuts",
    "apply_schedule",
    "general_squarify_search",
    "verify_substitutions",
    "substitution_residue",
    "DEFAULT_LEAF_BUDGET",
]

DEFAULT_LEAF_BUDGET = 10**6


class TemplateError(ValueError):
    def __init__(self, msg: str, position: int | None = None):
        self.position = position
        super().__init__(msg if position is None else f"{msg} (position {position})")


class ParityError(ValueError):
    pass


@dataclass(frozen=True)
class Substitution:
    """``new_gen = left * mid * right``; letters are codes in the output alphabet."""

    new_gen: int
    left: int
    mid: int
    right: int

    @property
    def window(self) -> tuple[int, int, int]:
        return (self.left, self.mid, self.right)

    def relator(self) -> Word:
        return Word(self.window + (-(self.new_gen + 1),))


@dataclass
class SquarifiedPresentation:
    presentation: Presentation
    schedule: list[Substitution]
    source: Presentation
    cuts: list[list[int]]
    # output generator index -> word over the source alphabet, for generators
    # that are neither source generators nor introduced by the schedule
    expansions: dict[int, Word] = field(default_factory=dict)
    # output generator index -> source generator index
    shared: dict[int, int] = field(default_factory=dict)

    @property
    def n_generators(self) -> int:
        return len(self.presentation.alphabet)

    @property
    def n_relators(self) -> int:
        return len(self.presentation.relators)

    def to_dict(self) -> dict:
        al = self.presentation.alphabet
        return {
            "presentation": self.presentation.format(),
            "source": self.source.format(),
            "generators": self.n_generators,
            "relators": self.n_relators,
            "cuts": self.cuts,
            "schedule": [
                {
                    "new_gen": al.names[s.new_gen],
                    "window": al.format(Word(s.window)),
                }
                for s in self.schedule
            ],
        }


def _cut(work: tuple[int, ...], p: int, u: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(work)
    if not 0 <= p < n:
        raise ValueError(f"cut position {p} outside a relator of length {n}")
    if p + 3 <= n:
        return work[p : p + 3], work[:p] + (u,) + work[p + 3 :]
    k = p + 3 - n
    return work[p:] + work[:k], (u,) + work[k:p]


def _squarify_one(
    work: tuple[int, ...], cuts: Sequence[int], first_gen: int
) -> tuple[list[Substitution], tuple[int, ...]]:
    subs = []
    for step, p in enumerate(cuts):
        if len(work) <= 4:
            raise ValueError("too many cuts for this relator")
        g = first_gen + step
        window, work = _cut(work, p, g + 1)
        subs.append(Substitution(g, *window))
    if len(work) != 4:
        raise ValueError(f"schedule leaves a relator of length {len(work)}")
    return subs, work


def nested_cuts(length: int) -> list[int]:
    """Cuts that grow one window outward from the middle: ``x_n x_{n+1} x_{n+2}``,
    then ``x_{n-1} u_1 x_{n+3}`` and so on, ending at ``x_1 x_2 u x_{2n}``."""
    if length % 2 or length < 4:
        raise ParityError("need an even length of at least 4")
    n = length // 2
    return list(range(n - 1, 1, -1))


def _new_names(alphabet: Alphabet, counts: Sequence[int]) -> list[list[str]]:
    multi = sum(1 for c in counts if c) > 1
    for prefix in ("u", "v", "w", "z"):
        names = [
            [f"{prefix}_{k + 1}_{j + 1}" if multi else f"{prefix}_{k + 1}" for k in range(c)]
            for j, c in enumerate(counts)
        ]
        if not any(n in alphabet for ns in names for n in ns):
            return names
    raise ValueError("could not find fresh generator names")


def apply_schedule(p: Presentation, cuts: Sequence[Sequence[int]]) -> SquarifiedPresentation:
    """Squarify every relator of ``p`` with the given cut positions.

    Output relators: for each source relator its defining relators in order,
    then what is left of it.
    """
    if len(cuts) != len(p.relators):
        raise ValueError("need one cut list per relator")
    for r in p.relators:
        if len(r) % 2:
            raise ParityError(f"relator of odd length {len(r)}")
        if len(r) < 4:
            raise ParityError(f"relator of length {len(r)} is too short")
    counts = [(len(r) - 4) // 2 for r in p.relators]
    names = _new_names(p.alphabet, counts)
    alphabet = Alphabet(p.alphabet.names + tuple(n for ns in names for n in ns))
    gen = len(p.alphabet)
    rels: list[Word] = []
    schedule: list[Substitution] = []
    for r, c in zip(p.relators, cuts):
        subs, final = _squarify_one(r.letters, c, gen)
        gen += len(subs)
        schedule += subs
        rels += [s.relator() for s in subs]
        rels.append(Word(final))
    out = Presentation(alphabet, rels)
    shared = {i: i for i in range(len(p.alphabet))}
    return SquarifiedPresentation(out, schedule, p, [list(c) for c in cuts], shared=shared)


# ---------------------------------------------------------------------------
# the a_i construction


def prop31_template_violation(rw: RewriteResult) -> tuple[int, str] | None:
    """First position (1-based) where ``rw.w`` breaks the template, or None."""
    w, l = rw.w.letters, rw.l
    if l < 2:
        return (0, f"need l >= 2, got {l}")
    if len(w) % 2:
        return (0, f"odd length {len(w)}")
    n = len(w) // 2
    if n < 3:
        return (0, f"length {len(w)} too short")
    a0, al = 1, l + 1
    fixed = {1: -al, 2: -a0, n: -a0, n + 1: al, n + 2: a0, 2 * n: a0}
    for pos in range(1, 2 * n + 1):
        x = w[pos - 1]
        if pos in fixed:
            if x != fixed[pos]:
                return (pos, "fixed letter mismatch")
        elif not 2 <= abs(x) <= l:
            return (pos, "letter must be one of a_1..a_{l-1} or inverses")
    if not rw.w.is_cyclically_reduced():
        return (2 * n, "not cyclically reduced")
    return None


def prop31_squarify(rw: RewriteResult) -> SquarifiedPresentation:
    """Squarify ``<t, a_0..a_l | w, a_i = t a_{i-1} t^-1>`` when ``w`` fits the
    template ``a_l^-1 a_0^-1 x_3 .. x_{n-1} a_0^-1 a_l a_0 x_{n+3} .. x_{2n-1} a_0``.

    Generators: ``t, a_0..a_l, u_1..u_{n-2}``; relators: ``t a_{i-1} t^-1 a_i^-1``
    for ``i = 1..l``, then ``a_0^-1 a_l a_0 u_1^-1``, ``x_{n-1} u_1 x_{n+3} u_2^-1``,
    ..., and finally ``a_l^-1 a_0^-1 u_{n-2} a_0``.
    """
    bad = prop31_template_violation(rw)
    if bad is not None:
        raise TemplateError(bad[1], bad[0])
    l = rw.l
    n = len(rw.w) // 2
    a_names = tuple(f"{rw.base}_{i}" for i in range(l + 1))
    u_names = tuple(f"u_{k}" for k in range(1, n - 1))
    alphabet = Alphabet((rw.stable,) + a_names + u_names)
    t = 1

    def a(i: int) -> int:
        return i + 2

    rels = [Word((t, a(i - 1), -t, -a(i))) for i in range(1, l + 1)]
    work = tuple(x + 1 if x > 0 else x - 1 for x in rw.w.letters)
    subs, final = _squarify_one(work, nested_cuts(2 * n), l + 2)
    rels += [s.relator() for s in subs]
    rels.append(Word(final))
    out = Presentation(alphabet, rels)
    src_alphabet = AT if (rw.base, rw.stable) == ("a", "t") else Alphabet.of(rw.base, rw.stable)
    source = Presentation(src_alphabet, [expand_to_at(rw.w)])
    # keys are output generator indices: t is 0, a_i is i + 1
    expansions = {i + 1: expand_to_at(Word([i + 1])) for i in range(1, l + 1)}
    shared = {0: 1, 1: 0}
    return SquarifiedPresentation(
        out, subs, source, [nested_cuts(2 * n)], expansions=expansions, shared=shared
    )


# ---------------------------------------------------------------------------
# verification


def _images(sq: SquarifiedPresentation) -> dict[int, Word]:
    img: dict[int, Word] = {}
    for out_g, src_g in sq.shared.items():
        img[out_g] = Word([src_g + 1])
    img.update(sq.expansions)
    for s in sq.schedule:
        w = Word()
        for x in s.window:
            part = img[abs(x) - 1]
            w = w * (part if x > 0 else part.inverse())
        img[s.new_gen] = w
    return img


def _map(img: dict[int, Word], w: Word) -> Word:
    out = Word()
    for x in w.letters:
        part = img[abs(x) - 1]
        out = out * (part if x > 0 else part.inverse())
    return out


def substitution_residue(sq: SquarifiedPresentation) -> tuple[str, Word] | None:
    """Why ``sq`` fails to present the source group, or None if it checks out.

    Returns ``(reason, word)`` with the offending word in the output alphabet
    (or the source alphabet for an unrecovered source relator).
    """
    rels = sq.presentation.relators
    cyc = [cyclic_reduce(r)[0] for r in rels]
    for s in sq.schedule:
        want = cyclic_reduce(s.relator())[0]
        if want not in cyc:
            return ("missing defining relator", s.relator())
    try:
        img = _images(sq)
    except KeyError as exc:
        return ("generator without an expansion", Word([int(exc.args[0]) + 1]))
    targets = [cyclic_reduce(r)[0] for r in sq.source.relators]
    targets_inv = [cyclic_reduce(r.inverse())[0] for r in sq.source.relators]
    hit = [False] * len(targets)
    for r in rels:
        m = _map(img, r)
        if m.is_identity():
            continue
        c = cyclic_reduce(m)[0]
        found = False
        for i, (tc, ti) in enumerate(zip(targets, targets_inv)):
            if c == tc or c == ti:
                hit[i] = found = True
        if not found:
            return ("relator maps to a word that is not a source relator", r)
    for i, h in enumerate(hit):
        if not h:
            return ("source relator not recovered", sq.source.relators[i])
    return None


def verify_substitutions(sq: SquarifiedPresentation) -> bool:
    return substitution_residue(sq) is None


# ---------------------------------------------------------------------------
# schedule search


def _pairs(w: tuple[int, ...]) -> list[tuple[int, int]]:
    inv = tuple(-x for x in reversed(w))
    out = []
    for base in (w, inv):
        for k in range(4):
            out.append((base[k], base[(k + 1) % 4]))
    return out


def general_squarify_search(
    p: Presentation, bound: int = DEFAULT_LEAF_BUDGET, stats: dict | None = None
) -> SquarifiedPresentation | None:
    """Depth-first search for a schedule whose output is non-positively curved.

    Relators are handled in order, cut positions ascending.  A branch is
    dropped as soon as the length-4 relators fixed so far repeat a length-2
    subword.  ``bound`` caps the number of complete schedules examined.
    The first success in this order is returned, so the result is the
    lexicographically least successful schedule.
    """
    for r in p.relators:
        if len(r) % 2:
            raise ParityError(f"relator of odd length {len(r)}")
        if len(r) < 4:
            raise ParityError(f"relator of length {len(r)} is too short")
    counts = [(len(r) - 4) // 2 for r in p.relators]
    firsts = []
    g = len(p.alphabet)
    for c in counts:
        firsts.append(g)
        g += c
    st = {"leaves": 0, "pruned": 0, "exhausted": False}
    seen: set[tuple[int, int]] = set()
    cuts: list[list[int]] = [[] for _ in p.relators]

    def add(rel: tuple[int, ...]) -> list[tuple[int, int]] | None:
        prs = _pairs(rel)
        if len(set(prs)) != len(prs) or any(q in seen for q in prs):
            return None
        seen.update(prs)
        return prs

    def dfs(j: int, work: tuple[int, ...], step: int) -> list[list[int]] | None:
        if j == len(p.relators):
            st["leaves"] += 1
            sq = apply_schedule(p, cuts)
            if npc_check(sq.presentation).passed:
                return [list(c) for c in cuts]
            return None
        if len(work) == 4:
            prs = add(work)
            if prs is None:
                st["pruned"] += 1
                return None
            nxt = p.relators[j + 1].letters if j + 1 < len(p.relators) else ()
            res = dfs(j + 1, nxt, 0)
            seen.difference_update(prs)
            return res
        u = firsts[j] + step + 1
        for pos in range(len(work)):
            if st["leaves"] >= bound:
                st["exhausted"] = True
                return None
            window, rest = _cut(work, pos, u)
            prs = add(window + (-u,))
            if prs is None:
                st["pruned"] += 1
                continue
            cuts[j].append(pos)
            res = dfs(j, rest, step + 1)
            cuts[j].pop()
            seen.difference_update(prs)
            if res is not None:
                return res
        return None

    found = dfs(0, p.relators[0].letters, 0) if p.relators else []
    if stats is not None:
        stats.update(st)
    if found is None:
        return None
    return apply_schedule(p, found)
