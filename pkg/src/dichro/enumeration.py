"""Isomorphism-free enumeration of small digraphs.

Test-instance plumbing: every labelled digraph on n vertices is encoded
as a bitmask over the n(n-1) ordered pairs; a digraph is canonical when
its mask is minimal over all vertex permutations.  The permutation sweep
is vectorized with numpy, which keeps the n = 5 sweep (2^20 masks x 120
permutations) around a few seconds.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .digraph import Digraph, from_arcs
from .errors import InputError

ENUMERATION_BOUND = 5  # 2^(n(n-1)) masks; n = 6 would need 2^30

# expected counts per order, used as a self-check by the test-suite
DIGRAPH_COUNTS = {1: 1, 2: 3, 3: 16, 4: 218, 5: 9608}


def _pair_index(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if i != j]


@lru_cache(maxsize=None)
def canonical_masks(n: int) -> tuple[int, ...]:
    """Masks of the canonical representative of every isomorphism class
    of digraphs on n vertices, ascending."""
    if not (1 <= n <= ENUMERATION_BOUND):
        raise InputError(f"canonical enumeration supports 1 <= n <= {ENUMERATION_BOUND}")
    pairs = _pair_index(n)
    pos = {p: b for b, p in enumerate(pairs)}
    nbits = len(pairs)
    total = 1 << nbits
    masks = np.arange(total, dtype=np.uint64)
    canon = masks.copy()
    one = np.uint64(1)
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        permuted = np.zeros(total, dtype=np.uint64)
        for b, (i, j) in enumerate(pairs):
            target = pos[(perm[i], perm[j])]
            permuted |= ((masks >> np.uint64(b)) & one) << np.uint64(target)
        np.minimum(canon, permuted, out=canon)
    reps = np.nonzero(canon == masks)[0]
    return tuple(int(m) for m in reps)


def digraph_from_mask(n: int, mask: int) -> Digraph:
    pairs = _pair_index(n)
    arcs = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
    return from_arcs(n, arcs)


def canonical_digraphs(n: int):
    """One representative per isomorphism class of digraphs on exactly
    n vertices, in ascending mask order."""
    for mask in canonical_masks(n):
        yield digraph_from_mask(n, mask)


def all_canonical_digraphs(max_n: int):
    """Representatives for every order 1..max_n."""
    for n in range(1, max_n + 1):
        yield from canonical_digraphs(n)
