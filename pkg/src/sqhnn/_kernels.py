"""Array kernels used by the hot loops.

Words are int64 arrays of signed generator codes: generator ``g`` is ``g + 1``
and its inverse is ``-(g + 1)``; ``0`` is reserved as padding.

Every kernel exists in two flavours: a numba ``@njit`` version and a plain
numpy/python version.  The numba path is used when numba imports cleanly and
``SQHNN_DISABLE_NUMBA`` is unset (or ``0``).  Both flavours are importable
directly (``nb_*`` / ``np_*``) so the benchmark and the tests can compare them.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    HAVE_NUMBA = False

_flag = os.environ.get("SQHNN_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = HAVE_NUMBA and _flag in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# free reduction


def np_free_reduce(word):
    out = np.empty_like(word)
    top = 0
    for x in word.tolist():
        if top and out[top - 1] == -x:
            top -= 1
        else:
            out[top] = x
            top += 1
    return out[:top].copy()


def _free_reduce(word):
    out = np.empty_like(word)
    top = 0
    for i in range(word.shape[0]):
        x = word[i]
        if top > 0 and out[top - 1] == -x:
            top -= 1
        else:
            out[top] = x
            top += 1
    return out[:top].copy()


# ---------------------------------------------------------------------------
# rotation matching: is rows[r] of ``b`` a cyclic rotation of rows[r] of ``a``?


def np_rotation_match(a, b):
    n, length = a.shape
    if length == 0:
        return np.ones(n, dtype=np.bool_)
    doubled = np.concatenate([a, a], axis=1)
    windows = np.lib.stride_tricks.sliding_window_view(doubled, length, axis=1)
    windows = windows[:, :length, :]
    return (windows == b[:, None, :]).all(axis=2).any(axis=1)


def _rotation_match(a, b):
    n, length = a.shape
    out = np.zeros(n, dtype=np.bool_)
    for r in range(n):
        if length == 0:
            out[r] = True
            continue
        for shift in range(length):
            ok = True
            for j in range(length):
                k = j + shift
                if k >= length:
                    k -= length
                if a[r, k] != b[r, j]:
                    ok = False
                    break
            if ok:
                out[r] = True
                break
    return out


# ---------------------------------------------------------------------------
# longest common prefix of consecutive rows in a sorted order


def np_adjacent_lcp(rows, lengths, order):
    if order.shape[0] < 2:
        return np.zeros(0, dtype=np.int64)
    left = rows[order[:-1]]
    right = rows[order[1:]]
    width = rows.shape[1]
    diff = left != right
    first = np.where(diff.any(axis=1), diff.argmax(axis=1), width)
    cap = np.minimum(lengths[order[:-1]], lengths[order[1:]])
    return np.minimum(first, cap).astype(np.int64)


def _adjacent_lcp(rows, lengths, order):
    m = order.shape[0]
    if m < 2:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(m - 1, dtype=np.int64)
    for i in range(m - 1):
        p = order[i]
        q = order[i + 1]
        cap = min(lengths[p], lengths[q])
        k = 0
        while k < cap and rows[p, k] == rows[q, k]:
            k += 1
        out[i] = k
    return out


# ---------------------------------------------------------------------------
# shortest cycle of a simple graph given as CSR adjacency


def np_simple_girth(indptr, indices):
    """Return ``(girth, root, u, v)``; girth ``-1`` means the graph is a forest."""
    n = indptr.shape[0] - 1
    best, best_root, best_u, best_v = -1, -1, -1, -1
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if best != -1 and 2 * dist[u] + 1 >= best:
                break
            for e in range(indptr[u], indptr[u + 1]):
                w = int(indices[e])
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cyc = dist[u] + dist[w] + 1
                    if best == -1 or cyc < best:
                        best, best_root, best_u, best_v = cyc, root, u, w
    return best, best_root, best_u, best_v


def _simple_girth(indptr, indices):
    n = indptr.shape[0] - 1
    best, best_root, best_u, best_v = -1, -1, -1, -1
    dist = np.empty(n, dtype=np.int64)
    parent = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for root in range(n):
        dist[:] = -1
        parent[:] = -1
        dist[root] = 0
        queue[0] = root
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            if best != -1 and 2 * dist[u] + 1 >= best:
                break
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue[tail] = w
                    tail += 1
                elif w != parent[u]:
                    cyc = dist[u] + dist[w] + 1
                    if best == -1 or cyc < best:
                        best, best_root, best_u, best_v = cyc, root, u, w
    return best, best_root, best_u, best_v


# ---------------------------------------------------------------------------
# uniform-image expansion: every generator maps to a word of the same length


def np_expand_uniform(table, words, offset):
    n, length = words.shape
    m = table.shape[1]
    return table[words + offset].reshape(n, length * m)


def _expand_uniform(table, words, offset):
    n, length = words.shape
    m = table.shape[1]
    out = np.empty((n, length * m), dtype=words.dtype)
    for r in range(n):
        for j in range(length):
            row = words[r, j] + offset
            for c in range(m):
                out[r, j * m + c] = table[row, c]
    return out


if HAVE_NUMBA:
    nb_free_reduce = njit(cache=True)(_free_reduce)
    nb_rotation_match = njit(cache=True)(_rotation_match)
    nb_adjacent_lcp = njit(cache=True)(_adjacent_lcp)
    nb_simple_girth = njit(cache=True)(_simple_girth)
    nb_expand_uniform = njit(cache=True)(_expand_uniform)
else:  # pragma: no cover
    nb_free_reduce = np_free_reduce
    nb_rotation_match = np_rotation_match
    nb_adjacent_lcp = np_adjacent_lcp
    nb_simple_girth = np_simple_girth
    nb_expand_uniform = np_expand_uniform

if USE_NUMBA:
    free_reduce = nb_free_reduce
    rotation_match = nb_rotation_match
    adjacent_lcp = nb_adjacent_lcp
    simple_girth = nb_simple_girth
    expand_uniform = nb_expand_uniform
else:
    free_reduce = np_free_reduce
    rotation_match = np_rotation_match
    adjacent_lcp = np_adjacent_lcp
    simple_girth = np_simple_girth
    expand_uniform = np_expand_uniform

BACKEND = "numba" if USE_NUMBA else "numpy"
