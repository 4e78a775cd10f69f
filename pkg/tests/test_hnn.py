import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from sqhnn.catalog import PHI_FIXED_PREFIX, phi, sapir
from sqhnn.hnn import (
    GENERIC_CSV_COLUMNS,
    FixedWordStream,
    HnnError,
    canonical_cyclic_words,
    fixed_word_prefix,
    genericity_experiment,
    is_immersion,
    periodic_conjugacy_search,
    periodic_exponent_filter,
    prefix_exponent_scan,
    random_endomorphism,
    random_reduced_words,
    trial_seed,
)
from sqhnn.presentation import mapping_torus
from sqhnn.word import Alphabet, CyclicWord, Endomorphism, Word, apply, power_iterate

from .strategies import cyclically_reduced

AB = Alphabet.of("a", "b")
DOUBLING = Endomorphism.parse("a -> a a")


def reduced_words_upto(rank, radius):
    letters = [g for g in range(1, rank + 1)] + [-g for g in range(1, rank + 1)]
    out = [()]
    frontier = [()]
    for _ in range(radius):
        frontier = [w + (x,) for w in frontier for x in letters if not w or w[-1] != -x]
        out += frontier
    return [Word(w) for w in out]


class TestImmersion:
    def test_sapir_and_phi(self):
        assert is_immersion(sapir())
        assert is_immersion(phi())

    def test_failure(self):
        rep = is_immersion(Endomorphism.parse("a -> a b, b -> b a^-1"))
        assert not rep and rep.failure == (2, 1)
        assert rep.to_dict(AB) == {"immersion": False, "failure": ["b", "a"]}

    def test_trivial_image(self):
        assert not is_immersion(Endomorphism.parse("a -> e, b -> b a"))

    @pytest.mark.parametrize("f", [sapir(), phi()])
    def test_injective_on_ball(self, f):
        ball = reduced_words_upto(2, 6)
        assert len(ball) == 1457
        assert len({apply(f, w) for w in ball}) == len(ball)


class TestFilter:
    def test_phi(self):
        flt = periodic_exponent_filter(phi(), 1)
        assert flt.m == 5 and flt.basis == ()
        assert flt.admits([0, 0]) and not flt.admits([1, 0])

    def test_sapir(self):
        flt = periodic_exponent_filter(sapir(), 1)
        assert flt.basis == ((1, 1),)
        assert flt.admits([2, 2]) and not flt.admits([1, 0])

    def test_doubling(self):
        flt = periodic_exponent_filter(DOUBLING, 1)
        assert flt.basis == ((1,),)

    def test_higher_power(self):
        assert periodic_exponent_filter(sapir(), 3).basis == ((1, 1),)

    def test_rejects(self):
        with pytest.raises(HnnError):
            periodic_exponent_filter(Endomorphism.parse("a -> a b, b -> b"), 1)
        with pytest.raises(HnnError):
            periodic_exponent_filter(Endomorphism.parse("a -> a b, b -> b a^-1"), 1)
        with pytest.raises(HnnError):
            periodic_exponent_filter(sapir(), 0)


class TestCanonicalWords:
    @pytest.mark.parametrize("length", range(1, 7))
    def test_one_per_class(self, length):
        rows = canonical_cyclic_words(2, length)
        classes = set()
        for w in itertools.product([1, 2, -1, -2], repeat=length):
            w = Word(w) if all(w[k] != -w[k + 1] for k in range(length - 1)) else None
            if w is None or len(w) != length or not w.is_cyclically_reduced():
                continue
            c, ci = CyclicWord(w), CyclicWord(w.inverse())
            classes.add(frozenset([c, ci]))
        got = [frozenset([CyclicWord(Word(r.tolist())), CyclicWord(Word(r.tolist()).inverse())])
               for r in rows]
        assert len(got) == len(set(got)) == len(classes)
        assert set(got) == classes


class TestPeriodicSearch:
    def test_doubling_witness(self):
        wit = periodic_conjugacy_search(DOUBLING, 1, 1)
        assert wit is not None
        assert (wit.w, wit.i, wit.j) == (CyclicWord(Word([1])), 1, 2)

    def test_sapir_small(self):
        stats = {}
        assert periodic_conjugacy_search(sapir(), 6, 2, stats) is None
        assert stats["filtered"] > 0 and stats["expanded"] > 0

    def test_phi_small(self):
        assert periodic_conjugacy_search(phi(), 4, 2) is None

    def test_witness_is_genuine(self):
        f = Endomorphism.parse("a -> a^2, b -> b^2")
        assert is_immersion(f)
        wit = periodic_conjugacy_search(f, 3, 2)
        assert wit.w == CyclicWord(Word([1])) and wit.i == 1
        img = power_iterate(f, wit.i, wit.w.core)
        assert CyclicWord(img) == CyclicWord(wit.w.core ** wit.j)

    def test_rejects_non_uniform(self):
        with pytest.raises(HnnError):
            periodic_conjugacy_search(Endomorphism.parse("a -> a b, b -> b a b"), 3, 1)


class TestFixedWord:
    def test_prefixes(self):
        s = FixedWordStream(phi(), "a")
        assert fixed_word_prefix(s, 1) == AB.word("a")
        assert fixed_word_prefix(s, 5) == AB.word("a b^-1 a a b")
        assert fixed_word_prefix(s, 10) == AB.word(PHI_FIXED_PREFIX)

    def test_powers(self):
        s = FixedWordStream(phi())
        for i in range(5):
            assert s.prefix(5**i) == power_iterate(phi(), i, Word([1]))

    def test_extension_is_consistent(self):
        s = FixedWordStream(phi())
        short = s.prefix(30)
        assert s.prefix(700).letters[:30] == short.letters

    def test_bad_seed(self):
        with pytest.raises(HnnError):
            FixedWordStream(Endomorphism.parse("a -> b a, b -> b a"), "a")

    def test_scan(self):
        s = FixedWordStream(phi())
        rep = prefix_exponent_scan(s, 3125, "a")
        assert rep.zeros == [] and rep.min >= 1
        assert prefix_exponent_scan(s, 1, "a").exponents.tolist() == [1]
        assert rep.to_dict(AB)["zero_prefixes"] == []

    def test_times_three(self):
        s = FixedWordStream(phi())
        e = prefix_exponent_scan(s, 5 * 625, 0).exponents
        q = np.arange(1, 626)
        assert (e[5 * q - 1] == 3 * e[q - 1]).all()

    def test_b_exponents_reach_zero(self):
        # sanity check that the scan can report crossings at all
        rep = prefix_exponent_scan(FixedWordStream(phi()), 10, "b")
        assert rep.zeros


class TestRandom:
    def test_single_letter_images(self):
        rng = np.random.default_rng(1)
        rows = random_reduced_words(2, 1, 40_000, rng)
        counts = Counter(rows[:, 0].tolist())
        assert set(counts) == {1, 2, -1, -2}
        assert chisquare(list(counts.values())).pvalue > 1e-3

    def test_uniform_over_reduced_words(self):
        rng = np.random.default_rng(2)
        rows = random_reduced_words(2, 3, 100_000, rng)
        assert not (rows[:, 1:] == -rows[:, :-1]).any()
        counts = Counter(map(tuple, rows.tolist()))
        assert len(counts) == 4 * 3 * 3
        assert chisquare(list(counts.values())).pvalue > 1e-3

    def test_reproducible(self):
        assert random_endomorphism(3, 20, 5) == random_endomorphism(3, 20, 5)
        assert random_endomorphism(3, 20, 5) != random_endomorphism(3, 20, 6)

    @given(st.integers(1, 4), st.integers(1, 30), st.integers(0, 2**32))
    def test_torus_relator_length(self, k, n, seed):
        f = random_endomorphism(k, n, seed)
        assert all(len(w) == n for w in f.images)
        assert mapping_torus(f).relator_lengths() == [n + 3] * k

    def test_trial_seed(self):
        assert trial_seed(7, 0) == trial_seed(7, 0)
        assert len({trial_seed(7, t) for t in range(100)}) == 100

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            random_reduced_words(0, 3, 1, np.random.default_rng(0))


class TestGenericity:
    def test_small_run(self):
        res = genericity_experiment(2, 20, 10, 11)
        assert 0 <= res.count_cprime17 <= res.count_cprime16 <= res.trials
        assert len(res.rows) == 10
        csv_text = res.to_csv()
        assert csv_text.splitlines()[0] == ",".join(GENERIC_CSV_COLUMNS)
        assert len(csv_text.splitlines()) == 11

    def test_reproducible_and_trial_rerun(self):
        a = genericity_experiment(2, 12, 5, 3)
        b = genericity_experiment(2, 12, 5, 3)
        assert a.to_csv() == b.to_csv()
        row = a.rows[3]
        f = random_endomorphism(2, 12, row["seed"])
        assert mapping_torus(f).relator_lengths() == [15, 15]

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            genericity_experiment(2, 10, 0, 1)

    @settings(max_examples=30)
    @given(cyclically_reduced(2, 1, 6))
    def test_uniform_images_stay_cyclically_reduced(self, w):
        for f in (sapir(), phi()):
            for i in (1, 2):
                img = power_iterate(f, i, w)
                assert img.is_cyclically_reduced()
                assert len(img) == f.uniform_length() ** i * len(w)
