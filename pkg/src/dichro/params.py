"""Measurable digraph quantities: degree parameters, biclique number,
sparsity classification, boundary sizes, matchings.

All functions here are pure functions of immutable inputs and are
deterministic regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .digraph import Digraph, bits, mask_of
from .errors import CapacityError, InputError

EXACT_BICLIQUE_BOUND = 64


@dataclass(frozen=True)
class DegreeProfile:
    """The four maximum-degree variants plus per-vertex degrees.

    delta_tilde_sq is the exact integer max of d+(v)*d-(v); delta_tilde
    is its float square root (kept separate so tests never compare
    floats).
    """

    out_degrees: tuple[int, ...]
    in_degrees: tuple[int, ...]
    delta_max: int
    delta_tilde_sq: int
    delta_plus: int
    delta_min: int

    @property
    def delta_tilde(self) -> float:
        return math.sqrt(self.delta_tilde_sq)


def degree_profile(d: Digraph) -> DegreeProfile:
    if d.n == 0:
        raise InputError("degree profile of the empty digraph is undefined")
    outs = tuple(d.out_degree(v) for v in range(d.n))
    ins = tuple(d.in_degree(v) for v in range(d.n))
    return DegreeProfile(
        out_degrees=outs,
        in_degrees=ins,
        delta_max=max(max(o, i) for o, i in zip(outs, ins)),
        delta_tilde_sq=max(o * i for o, i in zip(outs, ins)),
        delta_plus=max(outs),
        delta_min=max(min(o, i) for o, i in zip(outs, ins)),
    )


# -- biclique number -----------------------------------------------------


def biclique_number(
    d: Digraph, exact_bound: int = EXACT_BICLIQUE_BOUND
) -> tuple[int, set[int]]:
    """Size of the largest biclique (clique of the digon graph) plus one
    witness set.

    Branch and bound with a greedy-colouring upper bound on the digon
    graph; vertices explored in descending digon-degree order, ties by
    index, so the witness is reproducible.  Raises CapacityError above
    ``exact_bound`` (use :func:`biclique_lower_bound` there instead).
    """
    if d.n > exact_bound:
        raise CapacityError(
            f"exact biclique search capped at n={exact_bound}; "
            "use the greedy lower-bound mode for larger digraphs"
        )
    if d.n == 0:
        return 0, set()
    adj = [d.digon_mask(v) for v in range(d.n)]
    order = sorted(range(d.n), key=lambda v: (-adj[v].bit_count(), v))

    best_mask = 1 << order[0]
    best_size = 1
    greedy = greedy_digon_clique(d)
    if len(greedy) > best_size:
        best_size, best_mask = len(greedy), mask_of(greedy)

    def colour_bound(candidates: int) -> int:
        # Greedy colouring of the candidate set: #classes bounds the clique.
        classes: list[int] = []
        rest = candidates
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            for i, cls in enumerate(classes):
                if not (adj[v] & cls):
                    classes[i] |= 1 << v
                    break
            else:
                classes.append(1 << v)
        return len(classes)

    def expand(current_mask: int, size: int, candidates: int):
        nonlocal best_mask, best_size
        if not candidates:
            if size > best_size:
                best_size, best_mask = size, current_mask
            return
        if size + colour_bound(candidates) <= best_size:
            return
        rest = [v for v in order if candidates >> v & 1]
        for v in rest:
            if size + candidates.bit_count() <= best_size:
                return
            candidates ^= 1 << v
            expand(current_mask | (1 << v), size + 1, candidates & adj[v])

    expand(0, 0, (1 << d.n) - 1)
    return best_size, set(bits(best_mask))


def greedy_digon_clique(d: Digraph) -> set[int]:
    """Greedy biclique lower bound: repeatedly take the highest
    digon-degree vertex among remaining candidates (ties by index)."""
    if d.n == 0:
        return set()
    adj = [d.digon_mask(v) for v in range(d.n)]
    clique: set[int] = set()
    candidates = (1 << d.n) - 1
    while candidates:
        v = min(
            bits(candidates),
            key=lambda u: (-(adj[u] & candidates).bit_count(), u),
        )
        clique.add(v)
        candidates &= adj[v]
    return clique


# -- sparsity ------------------------------------------------------------


@dataclass(frozen=True)
class SparsityReport:
    d: float
    delta_max: int
    threshold: float  # delta_max*(delta_max-1) - d*delta_max
    arcs_in_out_neighbourhood: tuple[int, ...]
    sparse: frozenset[int]
    dense: frozenset[int]

    def is_sparse(self, v: int) -> bool:
        return v in self.sparse


def arcs_inside(d: Digraph, subset_mask: int) -> int:
    total = 0
    rest = subset_mask
    while rest:
        v = (rest & -rest).bit_length() - 1
        rest &= rest - 1
        total += (d.out_masks[v] & subset_mask).bit_count()
    return total


def classify_sparsity(d: Digraph, sparsity_d: float) -> SparsityReport:
    """Tag every vertex d-sparse or d-dense.

    A vertex is d-sparse iff its out-neighbourhood carries at most
    Delta(Delta-1) - d*Delta arcs, with Delta = delta_max of the whole
    digraph.  "At most" is inclusive: hitting the threshold exactly is
    sparse.
    """
    if sparsity_d < 0:
        raise InputError("sparsity parameter must be non-negative")
    if d.n == 0:
        return SparsityReport(sparsity_d, 0, 0.0, (), frozenset(), frozenset())
    delta_max = degree_profile(d).delta_max
    threshold = delta_max * (delta_max - 1) - sparsity_d * delta_max
    counts = tuple(arcs_inside(d, d.out_masks[v]) for v in range(d.n))
    sparse = frozenset(v for v in range(d.n) if counts[v] <= threshold)
    return SparsityReport(
        d=sparsity_d,
        delta_max=delta_max,
        threshold=threshold,
        arcs_in_out_neighbourhood=counts,
        sparse=sparse,
        dense=frozenset(range(d.n)) - sparse,
    )


def default_sparsity_parameter(delta_max: int) -> float:
    """d = max(1, ln(delta_max)^3).  Natural logarithm."""
    if delta_max <= 1:
        return 1.0
    return max(1.0, math.log(delta_max) ** 3)


def default_attachment_radius(delta_max: int) -> float:
    """r = max(1, ln(delta_max)^4).  Natural logarithm."""
    if delta_max <= 1:
        return 1.0
    return max(1.0, math.log(delta_max) ** 4)


# -- boundaries and matchings --------------------------------------------


def boundary_sizes(d: Digraph, subset) -> tuple[int, int]:
    """(#arcs leaving the set, #arcs entering the set)."""
    subset = set(subset)
    if any(not (0 <= v < d.n) for v in subset):
        raise InputError("boundary subset is not a subset of the vertex set")
    inside = mask_of(subset)
    out_count = sum((d.out_masks[v] & ~inside).bit_count() for v in subset)
    in_count = sum((d.in_masks[v] & ~inside).bit_count() for v in subset)
    return out_count, in_count


def has_matching_of_size(d: Digraph, k: int) -> tuple[bool, list[tuple[int, int]]]:
    """Whether k pairwise vertex-disjoint arcs exist, with a witness.

    Exact recursive search over arcs in ascending order with a simple
    remaining-vertex bound.  Exact for every k (only k <= 3 is ever
    needed by the structural machinery, where exactness is mandatory).
    """
    if k < 0:
        raise InputError("matching size must be non-negative")
    if k == 0:
        return True, []
    arcs = d.arcs()
    witness: list[tuple[int, int]] = []

    def search(start: int, used: int, chosen: list[tuple[int, int]]) -> bool:
        if len(chosen) == k:
            witness.extend(chosen)
            return True
        if len(chosen) + (d.n - used.bit_count()) // 2 < k:
            return False
        for i in range(start, len(arcs)):
            u, v = arcs[i]
            if used >> u & 1 or used >> v & 1:
                continue
            if search(i + 1, used | 1 << u | 1 << v, chosen + [(u, v)]):
                return True
        return False

    ok = search(0, 0, [])
    return ok, witness


def maximum_matching(d: Digraph, cap: Optional[int] = None) -> list[tuple[int, int]]:
    """A maximum matching (set of disjoint arcs), canonical.

    Canonical: for the maximum size, the witness is the one found first
    by the deterministic ascending-arc search.  Sizes are probed upward,
    which is fast when the matching number is small (the only regime the
    classification machinery needs); ``cap`` truncates the probe.
    """
    upper = d.n // 2 if cap is None else min(cap, d.n // 2)
    best: list[tuple[int, int]] = []
    for k in range(1, upper + 1):
        ok, witness = has_matching_of_size(d, k)
        if not ok:
            break
        best = witness
    return best
