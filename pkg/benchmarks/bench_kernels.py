"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Inputs are shaped like the real workloads: symmetrized relator matrices from
random mapping tori, vertex links of square presentations, and iterated
images in the periodic search.  Each kernel is run once before timing so
compilation is excluded; the two outputs are also compared.
"""

import argparse
import time

import numpy as np

from sqhnn import _kernels as K
from sqhnn.cancel import _matrix, symmetrize
from sqhnn.catalog import r_l_group, sapir
from sqhnn.hnn import _image_table, canonical_cyclic_words, random_endomorphism
from sqhnn.npc import build_link
from sqhnn.presentation import mapping_torus, t_rewrite
from sqhnn.squarify import prop31_squarify


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def lcp_case():
    p = mapping_torus(random_endomorphism(3, 400, 7))
    rows, lengths = _matrix(symmetrize(p))
    order = np.lexsort(rows.T[::-1]).astype(np.int64)
    return rows, lengths, order


def girth_case():
    sq = prop31_squarify(t_rewrite(r_l_group(40)))
    link = build_link(sq.presentation)
    n = link.n_nodes
    adj = [set() for _ in range(n)]
    for u, v in link.edges:
        adj[u].add(v)
        adj[v].add(u)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(a) for a in adj])
    indices = np.array([w for a in adj for w in sorted(a)], dtype=np.int64)
    return indptr, indices


def expand_case():
    words = canonical_cyclic_words(2, 10)
    return _image_table(sapir(), 3), words, 2


def rotation_case():
    table, words, off = expand_case()
    img = K.np_expand_uniform(table, words, off)
    return img, np.tile(words, (1, 8))


def reduce_case():
    rng = np.random.default_rng(0)
    raw = rng.choice(np.array([1, 2, -1, -2]), size=200_000)
    return (raw.astype(np.int64),)


CASES = {
    "adjacent_lcp": (lcp_case, K.nb_adjacent_lcp, K.np_adjacent_lcp),
    "simple_girth": (girth_case, K.nb_simple_girth, K.np_simple_girth),
    "expand_uniform": (expand_case, K.nb_expand_uniform, K.np_expand_uniform),
    "rotation_match": (rotation_case, K.nb_rotation_match, K.np_rotation_match),
    "free_reduce": (reduce_case, K.nb_free_reduce, K.np_free_reduce),
}


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {K.HAVE_NUMBA}, default backend: {K.BACKEND}")
    print(f"{'kernel':<16}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}  agree")
    for name, (make, nb, npf) in CASES.items():
        data = make()
        t_nb = best_of(nb, data, args.repeat)
        t_np = best_of(npf, data, args.repeat)
        ok = same(nb(*data), npf(*data))
        print(f"{name:<16}{t_nb * 1e3:>10.3f}{t_np * 1e3:>10.3f}{t_np / t_nb:>8.1f}x  {ok}")


if __name__ == "__main__":
    main()
