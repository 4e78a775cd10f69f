"""Endomorphisms of free groups and their ascending HNN extensions.

Covers the immersion test, a bounded search for periodic conjugacy classes
(``theta^i(w)`` conjugate to ``w^j``), the fixed word of an endomorphism with
``theta(a)`` starting with ``a``, and random endomorphisms for genericity
statistics.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .cancel import c_prime, max_piece
from .presentation import Presentation, mapping_torus
from .word import (
    Alphabet,
    CyclicWord,
    Endomorphism,
    Word,
    power_iterate,
)

__all__ = [
    "ImmersionReport",
    "PeriodicWitness",
    "ExponentFilter",
    "FixedWordStream",
    "ScanReport",
    "GenericityResult",
    "HnnError",
    "is_immersion",
    "periodic_exponent_filter",
    "periodic_conjugacy_search",
    "canonical_cyclic_words",
    "fixed_word_prefix",
    "prefix_exponent_scan",
    "random_endomorphism",
    "random_reduced_words",
    "genericity_experiment",
    "trial_seed",
    "GENERIC_CSV_COLUMNS",
]


class HnnError(ValueError):
    pass


def _letters_in_order(rank: int) -> list[int]:
    return list(range(1, rank + 1)) + [-g for g in range(1, rank + 1)]


# ---------------------------------------------------------------------------
# immersions


@dataclass(frozen=True)
class ImmersionReport:
    is_immersion: bool
    failure: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.is_immersion

    def to_dict(self, alphabet: Alphabet | None = None) -> dict:
        fail = None
        if self.failure is not None:
            fail = (
                [alphabet.format_letter(x) for x in self.failure]
                if alphabet
                else list(self.failure)
            )
        return {"immersion": self.is_immersion, "failure": fail}


def is_immersion(f: Endomorphism) -> ImmersionReport:
    """No cancellation in ``f(x) f(y)`` for letters with ``x y != e``.

    Pairs are tried in the order ``a, b, ..., a^-1, b^-1, ...`` for ``x`` and
    then ``y``; the first failing pair is reported.  A trivial image counts as
    a failure since it kills a letter outright.
    """
    order = _letters_in_order(f.rank())
    for x in order:
        fx = f.image(x)
        for y in order:
            if y == -x:
                continue
            fy = f.image(y)
            if not fx.letters or not fy.letters or fx.letters[-1] == -fy.letters[0]:
                return ImmersionReport(False, (x, y))
    return ImmersionReport(True)


def _uniform_immersion(f: Endomorphism) -> int:
    m = f.uniform_length()
    if m is None:
        raise HnnError("generator images must all have the same length")
    if m < 2:
        raise HnnError("uniform image length must be at least 2")
    rep = is_immersion(f)
    if not rep:
        raise HnnError(f"not an immersion: cancellation at letter pair {rep.failure}")
    return m


# ---------------------------------------------------------------------------
# abelianization filter


def _nullspace(rows: list[list[int]]) -> list[list[int]]:
    """Primitive integer vectors spanning the rational kernel of ``rows``."""
    if not rows:
        return []
    ncols = len(rows[0])
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                q = a[i][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][free]
        den = 1
        for x in v:
            den = den * x.denominator // np.gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = int(np.gcd(g, x))
        basis.append([x // g for x in ints])
    return basis


def _matpow(a: list[list[int]], i: int) -> list[list[int]]:
    k = len(a)
    out = [[int(r == c) for c in range(k)] for r in range(k)]
    for _ in range(i):
        out = [[sum(out[r][t] * a[t][c] for t in range(k)) for c in range(k)] for r in range(k)]
    return out


@dataclass(frozen=True)
class ExponentFilter:
    """Exponent vectors ``v`` with ``A^i v = m^i v``.

    ``A`` has the exponent vectors of the generator images as columns, so
    ``A v`` is the exponent vector of ``f(w)`` when ``v`` is that of ``w``.
    """

    i: int
    m: int
    matrix: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]

    def admits(self, v: Iterable[int]) -> bool:
        v = list(v)
        return all(sum(x * y for x, y in zip(row, v)) == 0 for row in self.matrix)

    def to_dict(self) -> dict:
        return {"i": self.i, "m": self.m, "basis": [list(b) for b in self.basis]}


def periodic_exponent_filter(f: Endomorphism, i: int) -> ExponentFilter:
    m = _uniform_immersion(f)
    if i < 1:
        raise HnnError("iteration count must be positive")
    ai = _matpow(f.abelianization_matrix(), i)
    mi = m**i
    k = f.rank()
    mat = tuple(tuple(ai[r][c] - (mi if r == c else 0) for c in range(k)) for r in range(k))
    basis = tuple(tuple(b) for b in _nullspace([list(r) for r in mat]))
    return ExponentFilter(i, m, mat, basis)


# ---------------------------------------------------------------------------
# periodic conjugacy search


@dataclass(frozen=True)
class PeriodicWitness:
    w: CyclicWord
    i: int
    j: int

    def to_dict(self, alphabet: Alphabet | None = None) -> dict:
        word = alphabet.format(self.w.core) if alphabet else list(self.w.core.letters)
        return {"w": word, "i": self.i, "j": self.j}


def _reduced_words(rank: int, length: int) -> np.ndarray:
    """All reduced words of the given length, rows in letter order."""
    letters = np.array(_letters_in_order(rank), dtype=np.int64)
    words = letters[:, None]
    for _ in range(length - 1):
        nxt = np.repeat(words, len(letters), axis=0)
        tail = np.tile(letters, len(words))
        keep = nxt[:, -1] != -tail
        words = np.concatenate([nxt[keep], tail[keep, None]], axis=1)
    return words


def _lex_less(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a != b
    first = diff.argmax(axis=1)
    rows = np.arange(len(a))
    return diff.any(axis=1) & (a[rows, first] < b[rows, first])


def canonical_cyclic_words(rank: int, length: int) -> np.ndarray:
    """One representative per cyclic word up to inversion.

    Rows are cyclically reduced words that are lexicographically least (in
    the letter order ``a < b < ... < a^-1 < b^-1``) among all rotations of
    themselves and their inverses.  Rows come out sorted.
    """
    if length < 1:
        return np.zeros((0, 0), dtype=np.int64)
    words = _reduced_words(rank, length)
    words = words[words[:, 0] != -words[:, -1]] if length > 1 else words
    ranks = np.where(words > 0, words - 1, rank - words - 1)
    inv = words[:, ::-1] * -1
    inv_ranks = np.where(inv > 0, inv - 1, rank - inv - 1)
    keep = np.ones(len(words), dtype=bool)
    for s in range(length):
        for cand in (np.roll(ranks, -s, axis=1), np.roll(inv_ranks, -s, axis=1)):
            keep &= ~_lex_less(cand, ranks)
    out, out_ranks = words[keep], ranks[keep]
    order = np.lexsort(out_ranks.T[::-1])
    return out[order]


def _exponents(words: np.ndarray, rank: int) -> np.ndarray:
    return np.stack(
        [(words == g + 1).sum(axis=1) - (words == -(g + 1)).sum(axis=1) for g in range(rank)],
        axis=1,
    )


def _image_table(f: Endomorphism, i: int) -> np.ndarray:
    k = f.rank()
    imgs = {x: power_iterate(f, i, Word([x])).letters for x in _letters_in_order(k)}
    width = len(imgs[1])
    table = np.zeros((2 * k + 1, width), dtype=np.int64)
    for x, img in imgs.items():
        if len(img) != width:
            raise HnnError("images of iterates are not of uniform length")
        table[x + k] = img
    return table


def periodic_conjugacy_search(
    f: Endomorphism, max_len: int, max_iter: int, stats: dict | None = None
) -> PeriodicWitness | None:
    """Least ``(w, i, m^i)`` with ``f^i(w)`` conjugate to ``w^(m^i)``.

    ``f`` must be an immersion whose generator images all have length ``m``.
    Then ``f^i(w)`` is cyclically reduced of length ``m^i |w|`` whenever ``w``
    is, so conjugacy to some ``w^j`` forces ``j = m^i`` and becomes a rotation
    test.  Words run over cyclically reduced representatives up to rotation
    and inversion, ordered by length, then ``i``, then lexicographically.
    ``None`` only means no witness within the bounds.
    """
    m = _uniform_immersion(f)
    k = f.rank()
    st = {"words": 0, "filtered": 0, "expanded": 0}
    tables = {i: _image_table(f, i) for i in range(1, max_iter + 1)}
    filters = {i: periodic_exponent_filter(f, i) for i in range(1, max_iter + 1)}
    found = None
    for length in range(1, max_len + 1):
        words = canonical_cyclic_words(k, length)
        st["words"] += len(words)
        exps = _exponents(words, k)
        for i in range(1, max_iter + 1):
            mat = np.array(filters[i].matrix, dtype=object)
            ok = np.array([not any(mat.dot(v)) for v in exps.astype(object)], dtype=bool)
            cand = words[ok]
            st["filtered"] += int(len(words) - ok.sum())
            if not len(cand):
                continue
            st["expanded"] += len(cand)
            img = _kernels.expand_uniform(tables[i], cand, k)
            mi = m**i
            if img.shape[1] != mi * length:
                raise AssertionError("image length is not m^i |w|")
            bad = (img[:, 1:] == -img[:, :-1]).any(axis=1) | (img[:, 0] == -img[:, -1])
            if bad.any():
                raise AssertionError("image of a cyclically reduced word is not cyclically reduced")
            hits = _kernels.rotation_match(img, np.tile(cand, (1, mi)))
            if hits.any():
                w = Word(cand[int(np.argmax(hits))].tolist())
                found = PeriodicWitness(CyclicWord(w), i, mi)
                break
        if found is not None:
            break
    if stats is not None:
        stats.update(st)
    return found


# ---------------------------------------------------------------------------
# fixed words


class FixedWordStream:
    """Prefixes of ``s = lim f^i(seed)`` where ``f(seed)`` starts with ``seed``.

    The word held internally is always ``f^i(seed)`` for the current ``i``,
    so a prefix is read off once that word is long enough.
    """

    def __init__(self, f: Endomorphism, seed: int | str = 1):
        if isinstance(seed, str):
            seed = f.domain.gen(seed)
        img = f.image(seed)
        if len(img) < 2 or img.letters[0] != seed:
            raise HnnError("the image of the seed must start with the seed and be longer")
        rep = is_immersion(f)
        if not rep:
            raise HnnError(f"not an immersion: cancellation at letter pair {rep.failure}")
        self.f = f
        self.seed = seed
        self._k = f.rank()
        self._images = {x: np.array(f.image(x).letters, dtype=np.int64) for x in _letters_in_order(self._k)}
        self._uniform = f.uniform_length()
        self._current = np.array([seed], dtype=np.int64)
        self.depth = 0

    def _step(self) -> None:
        cur = self._current
        if self._uniform is not None:
            table = np.zeros((2 * self._k + 1, self._uniform), dtype=np.int64)
            for x, img in self._images.items():
                table[x + self._k] = img
            self._current = _kernels.expand_uniform(table, cur[None, :], self._k)[0]
        else:
            self._current = np.concatenate([self._images[int(x)] for x in cur])
        self.depth += 1

    def letters(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("prefix length must be non-negative")
        while len(self._current) < n:
            self._step()
        return self._current[:n]

    def prefix(self, n: int) -> Word:
        return Word._trusted(tuple(int(x) for x in self.letters(n)))


def fixed_word_prefix(stream: FixedWordStream, n: int) -> Word:
    return stream.prefix(n)


@dataclass(frozen=True)
class ScanReport:
    n: int
    gen: int
    exponents: np.ndarray = field(repr=False)
    zeros: list[int]

    @property
    def min(self) -> int:
        return int(self.exponents.min()) if self.n else 0

    @property
    def max(self) -> int:
        return int(self.exponents.max()) if self.n else 0

    def to_dict(self, alphabet: Alphabet | None = None) -> dict:
        return {
            "n": self.n,
            "gen": alphabet.names[self.gen] if alphabet else self.gen,
            "min": self.min,
            "max": self.max,
            "zero_prefixes": self.zeros,
        }


def prefix_exponent_scan(stream: FixedWordStream, n: int, gen: int | str = 0) -> ScanReport:
    """Exponent sum in ``gen`` of every nonempty prefix up to length ``n``.

    ``zeros`` lists the prefix lengths whose exponent sum vanishes.
    """
    if isinstance(gen, str):
        gen = stream.f.domain.index(gen)
    s = stream.letters(n)
    step = (s == gen + 1).astype(np.int64) - (s == -(gen + 1)).astype(np.int64)
    exps = np.cumsum(step)
    zeros = (np.flatnonzero(exps == 0) + 1).tolist()
    return ScanReport(n, gen, exps, zeros)


# ---------------------------------------------------------------------------
# random endomorphisms


def _default_names(k: int) -> tuple[str, ...]:
    # 'e' is the empty word and 't' the usual stable letter
    pool = [c for c in "abcdfghijklmnopqrsuvwxyz"]
    if k <= len(pool):
        return tuple(pool[:k])
    return tuple(f"x{i + 1}" for i in range(k))


def random_reduced_words(k: int, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniform reduced words of length ``n`` over ``k`` generators.

    The first letter is uniform over the ``2k`` letters and each later letter
    uniform over the ``2k - 1`` letters that do not cancel its predecessor.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    order = np.array(_letters_in_order(k), dtype=np.int64)
    first = rng.integers(0, 2 * k, size=count)
    rest = rng.integers(0, 2 * k - 1, size=(count, n - 1))
    out = np.empty((count, n), dtype=np.int64)
    out[:, 0] = order[first]
    for j in range(1, n):
        prev = out[:, j - 1]
        blocked = np.where(prev > 0, prev - 1 + k, -prev - 1)  # rank of prev^-1
        c = rest[:, j - 1]
        out[:, j] = order[c + (c >= blocked)]
    return out


def random_endomorphism(k: int, n: int, rng_seed: int) -> Endomorphism:
    """``k`` independent uniform reduced images of length ``n``; PCG64 seeded."""
    rng = np.random.default_rng(rng_seed)
    rows = random_reduced_words(k, n, k, rng)
    alphabet = Alphabet(_default_names(k))
    return Endomorphism(alphabet, [Word._trusted(tuple(int(x) for x in r)) for r in rows])


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed; any single trial can be rerun on its own from it."""
    ss = np.random.SeedSequence([int(seed), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


GENERIC_CSV_COLUMNS = ("trial", "seed", "max_piece_base", "max_piece_torus", "cprime16", "cprime17")


@dataclass
class GenericityResult:
    k: int
    n: int
    trials: int
    seed: int
    count_cprime16: int = 0
    count_cprime17: int = 0
    count_piece_bound: int = 0
    rows: list[dict] = field(default_factory=list)

    @property
    def fraction_cprime16(self) -> float:
        return self.count_cprime16 / self.trials

    @property
    def fraction_cprime17(self) -> float:
        return self.count_cprime17 / self.trials

    @property
    def piece_bound_violations(self) -> int:
        """Trials where the torus has a piece more than 2 longer than the base."""
        return self.trials - self.count_piece_bound

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "count_cprime16": self.count_cprime16,
            "count_cprime17": self.count_cprime17,
            "fraction_cprime16": self.fraction_cprime16,
            "fraction_cprime17": self.fraction_cprime17,
            "piece_bound_violations": self.piece_bound_violations,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=GENERIC_CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({c: row[c] for c in GENERIC_CSV_COLUMNS})
        return buf.getvalue()


def genericity_experiment(k: int, n: int, trials: int, rng_seed: int) -> GenericityResult:
    """C'(1/6) and C'(1/7) rates of mapping tori of random endomorphisms.

    Also records, per trial, whether the longest piece of the mapping torus
    exceeds that of ``< x | f(x) >`` by more than 2.  That comparison is
    reported, not enforced.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    res = GenericityResult(k, n, trials, int(rng_seed))
    for trial in range(trials):
        s = trial_seed(rng_seed, trial)
        f = random_endomorphism(k, n, s)
        torus = mapping_torus(f)
        base = Presentation(f.domain, f.images)
        mp_base = max_piece(base).max_piece
        rep = max_piece(torus)
        mp_torus = rep.max_piece
        c16 = c_prime(torus, Fraction(1, 6), rep)
        c17 = c_prime(torus, Fraction(1, 7), rep)
        res.count_cprime16 += c16
        res.count_cprime17 += c17
        res.count_piece_bound += mp_torus <= mp_base + 2
        res.rows.append(
            {
                "trial": trial,
                "seed": s,
                "max_piece_base": mp_base,
                "max_piece_torus": mp_torus,
                "cprime16": int(c16),
                "cprime17": int(c17),
            }
        )
    return res
