"""Free group words over a ranked alphabet.

Letters are signed ints: generator ``g`` (0-based) is ``g + 1`` and its inverse
is ``-(g + 1)``.  Names only matter at the text boundary, which goes through
:class:`Alphabet`.

>>> A = Alphabet.of("a", "b")
>>> w = A.word("a b b^-1 a^-1")
>>> w.is_identity()
True
>>> A.format(A.word("a a b^-3"))
'a^2 b^-3'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "Alphabet",
    "Word",
    "CyclicWord",
    "Endomorphism",
    "WordSyntaxError",
    "letter",
    "gen_of",
    "sign_of",
    "letter_rank",
    "reduce",
    "cyclic_reduce",
    "exponent_sum",
    "is_conjugate",
    "apply",
    "compose",
    "power_iterate",
]

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?\Z")


class WordSyntaxError(ValueError):
    """Malformed word or presentation text; ``pos`` is a character offset."""

    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} (at position {pos})"
        super().__init__(msg)


def letter(gen: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * (gen + 1)


def gen_of(x: int) -> int:
    return abs(x) - 1


def sign_of(x: int) -> int:
    return 1 if x > 0 else -1


def letter_rank(x: int, rank: int) -> int:
    """Total order on letters: a, b, ..., then a^-1, b^-1, ..."""
    return x - 1 if x > 0 else rank - x - 1


_KERNEL_MIN = 4096


def _reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    if isinstance(letters, (list, tuple, np.ndarray)) and len(letters) >= _KERNEL_MIN:
        arr = np.asarray(letters, dtype=np.int64)
        if not arr.all():
            raise ValueError("0 is not a letter")
        return tuple(_kernels.free_reduce(arr).tolist())
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word.  Construction always reduces."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        self.letters: tuple[int, ...] = _reduce_letters(letters)
        self._hash = None

    @classmethod
    def _trusted(cls, letters: tuple[int, ...]) -> "Word":
        w = cls.__new__(cls)
        w.letters = letters
        w._hash = None
        return w

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return self.letters < other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Word", self.letters))
        return self._hash

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"

    def __mul__(self, other: "Word") -> "Word":
        a, b = self.letters, other.letters
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
            k += 1
        return Word._trusted(a[: len(a) - k] + b[k:])

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** -n
        out = Word()
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Word":
        return Word._trusted(tuple(-x for x in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def rotate(self, k: int) -> "Word":
        """Cyclic rotation starting at position ``k``; requires cyclic reducedness."""
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word._trusted(self.letters[k:] + self.letters[:k])

    def exponent_sum(self, gen: int) -> int:
        g = gen + 1
        return sum(1 if x == g else -1 if x == -g else 0 for x in self.letters)

    def exponent_vector(self, rank: int) -> list[int]:
        v = [0] * rank
        for x in self.letters:
            g = abs(x) - 1
            if g >= rank:
                raise ValueError(f"letter {x} outside an alphabet of rank {rank}")
            v[g] += 1 if x > 0 else -1
        return v

    def max_gen(self) -> int:
        return max((abs(x) for x in self.letters), default=0) - 1


def reduce(raw: Iterable[int]) -> Word:
    return Word(raw)


def _as_str(letters: Sequence[int]) -> str:
    # private-use plane; codes stay small so this never collides
    return "".join(chr(0x10000 + x + 0x8000) for x in letters)


class CyclicWord:
    """Conjugacy class representative; equality is equality up to rotation."""

    __slots__ = ("core", "_canon")

    def __init__(self, core: Word):
        if not core.is_cyclically_reduced():
            raise ValueError("core must be cyclically reduced")
        self.core = core
        self._canon = None

    def __len__(self) -> int:
        return len(self.core)

    def canonical(self) -> tuple[int, ...]:
        """Least rotation, letters compared as signed ints."""
        if self._canon is None:
            t = self.core.letters
            self._canon = min((t[i:] + t[:i] for i in range(len(t))), default=())
        return self._canon

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicWord):
            return NotImplemented
        a, b = self.core.letters, other.core.letters
        if len(a) != len(b):
            return False
        return _as_str(b) in _as_str(a + a)

    def __hash__(self) -> int:
        return hash(("CyclicWord", self.canonical()))

    def __repr__(self) -> str:
        return f"CyclicWord({list(self.core.letters)})"

    def contains(self, sub: Word) -> bool:
        """Whether ``sub`` reads off the cyclic word (may wrap around)."""
        a = self.core.letters
        if not a:
            return not sub.letters
        reps = len(sub) // len(a) + 2
        return _as_str(sub.letters) in _as_str(a * reps)


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Return ``(core, c)`` with ``w == c * core * c^-1``."""
    t = w.letters
    i, j = 0, len(t) - 1
    while i < j and t[i] == -t[j]:
        i += 1
        j -= 1
    core = Word._trusted(t[i : j + 1])
    return CyclicWord(core), Word._trusted(t[:i])


def exponent_sum(w: Word, gen: int | str, alphabet: "Alphabet | None" = None) -> int:
    """Exponent sum of ``gen`` (an index, or a name looked up in ``alphabet``)."""
    if isinstance(gen, str):
        if alphabet is None:
            raise ValueError("a generator name needs an alphabet")
        gen = alphabet.index(gen)
    elif gen < 0 or (alphabet is not None and gen >= len(alphabet)):
        raise KeyError(f"unknown generator index {gen}")
    return w.exponent_sum(gen)


def is_conjugate(u: Word, v: Word) -> bool:
    return cyclic_reduce(u)[0] == cyclic_reduce(v)[0]


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("an alphabet needs at least one generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")
        for n in self.names:
            if not _NAME.match(n):
                raise ValueError(f"bad generator name {n!r}")
            if n == "e":
                raise ValueError("'e' is reserved for the identity")

    @classmethod
    def of(cls, *names: str) -> "Alphabet":
        return cls(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def gen(self, name: str, sign: int = 1) -> int:
        return letter(self.index(name), sign)

    def letters(self) -> list[int]:
        """All letters in the fixed order: positives first, then inverses."""
        k = len(self.names)
        return list(range(1, k + 1)) + [-g for g in range(1, k + 1)]

    def word(self, text: str, offset: int = 0) -> Word:
        """Parse whitespace separated ``name`` / ``name^k`` tokens; ``e`` is empty."""
        raw: list[int] = []
        for m in re.finditer(r"\S+", text):
            tok = m.group(0)
            if tok in ("e", "1"):
                continue
            tm = _TOKEN.match(tok)
            if not tm:
                raise WordSyntaxError(f"bad token {tok!r}", offset + m.start())
            name, power = tm.group(1), tm.group(2)
            k = int(power) if power is not None else 1
            if k == 0:
                raise WordSyntaxError(f"zero exponent in {tok!r}", offset + m.start())
            if name not in self.names:
                raise WordSyntaxError(f"unknown generator {name!r}", offset + m.start())
            g = self.index(name) + 1
            raw.extend([g if k > 0 else -g] * abs(k))
        return Word(raw)

    def format(self, w: Word) -> str:
        if w.is_identity():
            return "e"
        out = []
        t = w.letters
        i = 0
        while i < len(t):
            j = i
            while j < len(t) and t[j] == t[i]:
                j += 1
            k = (j - i) * (1 if t[i] > 0 else -1)
            name = self.names[abs(t[i]) - 1]
            out.append(name if k == 1 else f"{name}^{k}")
            i = j
        return " ".join(out)

    def format_letter(self, x: int) -> str:
        name = self.names[abs(x) - 1]
        return name if x > 0 else f"{name}^-1"


class Endomorphism:
    """Free group endomorphism given by generator images."""

    __slots__ = ("domain", "images")

    def __init__(self, domain: Alphabet, images: Sequence[Word]):
        if len(images) != len(domain):
            raise ValueError("need exactly one image per generator")
        for w in images:
            if w.max_gen() >= len(domain):
                raise ValueError("image uses letters outside the domain alphabet")
        self.domain = domain
        self.images = tuple(images)

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> "Endomorphism":
        """``"a -> a b, b -> b a"``; separators ``,`` or ``;``."""
        parts = [p for p in re.split(r"[;,\n]", text) if p.strip()]
        pairs = []
        for p in parts:
            if "->" not in p:
                raise WordSyntaxError(f"expected 'x -> word' in {p.strip()!r}")
            lhs, rhs = p.split("->", 1)
            pairs.append((lhs.strip(), rhs))
        if alphabet is None:
            alphabet = Alphabet(tuple(lhs for lhs, _ in pairs))
        images: list[Word | None] = [None] * len(alphabet)
        for lhs, rhs in pairs:
            images[alphabet.index(lhs)] = alphabet.word(rhs)
        missing = [alphabet.names[i] for i, w in enumerate(images) if w is None]
        if missing:
            raise WordSyntaxError(f"no image given for {', '.join(missing)}")
        return cls(alphabet, images)  # type: ignore[arg-type]

    def format(self) -> str:
        return ", ".join(
            f"{n} -> {self.domain.format(w)}" for n, w in zip(self.domain.names, self.images)
        )

    def __repr__(self) -> str:
        return f"Endomorphism({self.format()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.domain == other.domain and self.images == other.images

    def __hash__(self):
        return hash((self.domain, self.images))

    def image(self, x: int) -> Word:
        w = self.images[abs(x) - 1]
        return w if x > 0 else w.inverse()

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def rank(self) -> int:
        return len(self.domain)

    def uniform_length(self) -> int | None:
        lengths = {len(w) for w in self.images}
        return lengths.pop() if len(lengths) == 1 else None

    def abelianization_matrix(self) -> list[list[int]]:
        """Column ``j`` is the exponent vector of the image of generator ``j``."""
        k = self.rank()
        cols = [w.exponent_vector(k) for w in self.images]
        return [[cols[j][i] for j in range(k)] for i in range(k)]


def apply(f: Endomorphism, w: Word) -> Word:
    if w.max_gen() >= f.rank():
        raise ValueError("word is not over the endomorphism's domain")
    raw: list[int] = []
    for x in w.letters:
        raw.extend(f.image(x).letters)
    return Word(raw)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """``f o g``: apply ``g`` first."""
    if f.domain != g.domain:
        raise ValueError("alphabet mismatch")
    return Endomorphism(f.domain, [apply(f, w) for w in g.images])


def power_iterate(f: Endomorphism, i: int, w: Word) -> Word:
    if i < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(i):
        w = apply(f, w)
    return w
