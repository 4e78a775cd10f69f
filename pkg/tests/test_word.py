import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqhnn.catalog import phi, sapir
from sqhnn.presentation import AT, build_r_l, expand_to_at
from sqhnn.word import (
    Alphabet,
    CyclicWord,
    Endomorphism,
    Word,
    WordSyntaxError,
    apply,
    compose,
    cyclic_reduce,
    exponent_sum,
    is_conjugate,
    power_iterate,
    reduce,
)

from .strategies import cyclically_reduced, raw_words, words

AB = Alphabet.of("a", "b")
TA = Alphabet.of("t", "a")


def W(text, alphabet=AB):
    return alphabet.word(text)


def naive_reduce(raw):
    # repeated pair deletion, the textbook definition
    cur = list(raw)
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if cur[i] == -cur[i + 1]:
                del cur[i : i + 2]
                changed = True
                break
    return tuple(cur)


class TestReduce:
    def test_inverse_pair(self):
        assert reduce([1, -1]).is_identity()

    def test_inner_cancellation(self):
        assert W("t a a^-1 t", TA) == W("t t", TA)

    def test_word_times_inverse(self):
        assert (W("a b") * W("b^-1 a^-1")).is_identity()

    @given(raw_words(3, 20))
    def test_matches_pair_deletion(self, raw):
        assert reduce(raw).letters == naive_reduce(raw)

    @given(raw_words(3, 20))
    def test_idempotent(self, raw):
        w = reduce(raw)
        assert reduce(w.letters) == w

    @given(words(3), words(3))
    def test_product_length_parity(self, u, v):
        uv = u * v
        assert len(uv) <= len(u) + len(v)
        assert (len(u) + len(v) - len(uv)) % 2 == 0
        assert uv == reduce(u.letters + v.letters)

    def test_long_words_use_the_kernel_path(self):
        raw = [1, 2, -2] * 3000 + [-1] * 3000
        assert reduce(raw).is_identity()

    def test_zero_is_rejected(self):
        with pytest.raises(ValueError):
            Word([1, 0])


class TestCyclic:
    def test_conjugated_letter(self):
        core, c = cyclic_reduce(W("a b a^-1"))
        assert core.core == W("b") and c == W("a")

    def test_already_cyclically_reduced(self):
        w = W("t a t^-1 a^-2", TA)
        core, c = cyclic_reduce(w)
        assert core.core == w and c.is_identity()

    def test_empty(self):
        core, c = cyclic_reduce(Word())
        assert core.core.is_identity() and c.is_identity()

    @given(words(3))
    def test_conjugator_recovers_word(self, w):
        core, c = cyclic_reduce(w)
        assert c * core.core * c.inverse() == w
        assert core.core.is_cyclically_reduced()

    @given(cyclically_reduced(3), st.integers(0, 30))
    def test_rotation_equality(self, w, k):
        assert CyclicWord(w) == CyclicWord(w.rotate(k))
        assert hash(CyclicWord(w)) == hash(CyclicWord(w.rotate(k)))

    @given(cyclically_reduced(2, max_size=6), cyclically_reduced(2, max_size=6))
    def test_equality_matches_rotation_enumeration(self, u, v):
        rots = {u.rotate(k) for k in range(len(u))}
        assert (CyclicWord(u) == CyclicWord(v)) == (v in rots)

    def test_contains_wraps(self):
        cw = CyclicWord(W("a b a^-1 b^-1"))
        assert cw.contains(W("b^-1 a"))
        assert not cw.contains(W("a a"))


class TestConjugacy:
    def test_examples(self):
        assert is_conjugate(W("a b a^-1"), W("b"))
        assert not is_conjugate(W("a"), W("b"))
        assert not is_conjugate(apply(sapir(), W("a b")), W("a b a b"))

    @given(words(2, 8), words(2, 6))
    def test_conjugates_are_conjugate(self, w, g):
        assert is_conjugate(w, g * w * g.inverse())

    @given(words(2, 8), words(2, 6), st.integers(0, 1))
    def test_conjugates_share_exponent_sums(self, w, g, gen):
        assert exponent_sum(g * w * g.inverse(), gen) == exponent_sum(w, gen)


class TestExponentSum:
    def test_relator_has_zero_t_exponent(self):
        assert exponent_sum(expand_to_at(build_r_l(8)), "t", AT) == 0

    def test_phi_images(self):
        fa = phi().images[0]
        assert exponent_sum(fa, "a", AB) == 3
        assert exponent_sum(fa, "b", AB) == 0

    def test_identity(self):
        assert exponent_sum(Word(), 0) == 0

    def test_unknown_generator(self):
        with pytest.raises(KeyError):
            exponent_sum(W("a"), "c", AB)
        with pytest.raises(KeyError):
            exponent_sum(W("a"), 5, AB)


class TestEndomorphism:
    def test_sapir_product(self):
        assert apply(sapir(), W("a b")) == W("a b b a")

    def test_phi_of_a(self):
        assert apply(phi(), W("a")) == W("a b^-1 a a b")

    def test_sapir_squared(self):
        assert power_iterate(sapir(), 2, W("a")) == W("a b b a")

    def test_phi_squared_prefix(self):
        img = power_iterate(phi(), 2, W("a"))
        assert img.letters[:10] == W("a b^-1 a a b a^-1 b^-1 b^-1 a b^-1").letters

    @given(words(2))
    def test_zeroth_power(self, w):
        assert power_iterate(phi(), 0, w) == w

    @given(words(2, 8), words(2, 8))
    def test_homomorphism(self, u, v):
        f = phi()
        assert apply(f, u * v) == apply(f, u) * apply(f, v)

    @given(words(2, 6), st.integers(0, 3), st.integers(0, 3))
    def test_power_law(self, w, i, j):
        f = sapir()
        assert power_iterate(f, i + j, w) == power_iterate(f, i, power_iterate(f, j, w))

    @given(words(2, 6))
    def test_compose(self, w):
        f, g = sapir(), phi()
        assert apply(compose(f, g), w) == apply(f, apply(g, w))

    @given(words(2, 10), st.integers(0, 3))
    def test_sapir_length_doubles(self, w, i):
        assert len(power_iterate(sapir(), i, w)) == 2**i * len(w)

    @given(cyclically_reduced(2, max_size=8))
    def test_uniform_immersion_preserves_cyclic_reduction(self, w):
        for f, m in ((sapir(), 2), (phi(), 5)):
            img = apply(f, w)
            assert len(img) == m * len(w)
            assert img.is_cyclically_reduced()

    def test_alphabet_mismatch(self):
        with pytest.raises(ValueError):
            apply(sapir(), Word([3]))
        other = Endomorphism.parse("x -> x y, y -> y x")
        with pytest.raises(ValueError):
            compose(sapir(), other)

    def test_parse_and_format(self):
        f = Endomorphism.parse("a -> a b^-1 a^2 b; b -> b a^-1 b^2 a")
        assert f == phi()
        assert Endomorphism.parse(f.format()) == f

    def test_parse_errors(self):
        with pytest.raises(WordSyntaxError):
            Endomorphism.parse("a = a b")
        with pytest.raises(WordSyntaxError):
            Endomorphism.parse("a -> b", Alphabet.of("a", "b"))


class TestText:
    def test_powers_and_identity(self):
        assert AB.word("a^3 b^-2") == Word([1, 1, 1, -2, -2])
        assert AB.word("e").is_identity()
        assert AB.format(Word()) == "e"

    @given(words(2))
    def test_roundtrip(self, w):
        assert AB.word(AB.format(w)) == w

    @pytest.mark.parametrize(
        "text, pos",
        [("a b^x", 2), ("a c", 2), ("a^0", 0), ("a  b^", 3)],
    )
    def test_error_positions(self, text, pos):
        with pytest.raises(WordSyntaxError) as exc:
            AB.word(text)
        assert exc.value.pos == pos

    def test_bad_alphabets(self):
        for names in [("a", "a"), ("e",), ("1x",), ()]:
            with pytest.raises(ValueError):
                Alphabet(names)
