"""Dense decompositions and the structural machinery built on them:
near-biclique parts, low-attachment outside vertices, saviour vertices,
and the disjoint saviour-tuple collections.

The decomposition partitions the vertex set into parts X_1..X_t (one per
retained dense seed) and a sparse remainder S.  Part construction is a
two-phase fixpoint per seed v:

  1. start from the closed out-neighbourhood of v;
  2. peel every vertex whose out-neighbour count inside the set falls
     below (1-eps)*delta_max;
  3. then absorb every outside vertex whose count reaches the threshold.

Both phases have order-independent results (peeling can never keep a
vertex that any fixpoint excludes, absorption is a monotone closure), so
a worklist implementation is used; the extremal-first orders are
equivalent.  The quantitative size/boundary bounds hold only for very
large delta_max and are reported as diagnostics, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .digraph import Digraph, bits, mask_of
from .errors import InputError
from .params import classify_sparsity, degree_profile

TYPE_BICLIQUE = 1
TYPE_ONE_ARC_SHORT = 2
TYPE_TRIANGLE_JOIN = 3
TYPE_NEAR_BICLIQUE_VERTEX = 4
TYPE_DOMINATED_SPLIT = 5


@dataclass(frozen=True)
class PartDiagnostics:
    seed: int
    size: int
    out_boundary: int
    in_boundary: int
    size_in_bounds: bool
    boundary_in_bounds: bool


@dataclass(frozen=True)
class DenseDecomposition:
    """Partition into parts X_1..X_t plus sparse set S.

    ``small_delta_overlap`` flags the small-delta_max regime: either two
    seed parts overlapped (contested vertices went to the earlier part)
    or a dense seed was not covered by any part.  The fixpoint and
    sparse-membership properties are exact whenever the flag is off;
    when it is on, their violations are reported instead of asserted.
    """

    epsilon: float
    d: float
    delta_max: int
    parts: tuple[frozenset[int], ...]
    sparse: frozenset[int]
    seeds: tuple[int, ...]
    small_delta_overlap: bool
    fixpoint_violations: tuple[tuple[int, int], ...]
    sparse_violations: tuple[int, ...]
    diagnostics: tuple[PartDiagnostics, ...]

    @property
    def t(self) -> int:
        return len(self.parts)

    @property
    def fixpoint_ok(self) -> bool:
        return not self.fixpoint_violations

    @property
    def sparse_ok(self) -> bool:
        return not self.sparse_violations

    @property
    def size_bounds_ok(self) -> bool:
        return all(p.size_in_bounds for p in self.diagnostics)

    @property
    def boundary_bounds_ok(self) -> bool:
        return all(p.boundary_in_bounds for p in self.diagnostics)

    def flags(self) -> dict[str, bool]:
        return {
            "size_bounds": self.size_bounds_ok,
            "boundary_bounds": self.boundary_bounds_ok,
            "fixpoint": self.fixpoint_ok,
            "sparse_ok": self.sparse_ok,
            "small_delta_overlap": self.small_delta_overlap,
        }


def build_part(d: Digraph, seed: int, epsilon: float, delta_max: int) -> frozenset[int]:
    """Fixpoint part grown from a dense seed vertex (see module docs).

    The result satisfies exactly: u is in the part iff u has at least
    (1-eps)*delta_max out-neighbours inside it.  The seed itself may be
    expelled when delta_max is small.
    """
    threshold = (1.0 - epsilon) * delta_max
    x_mask = d.out_masks[seed] | (1 << seed)

    counts = {u: (d.out_masks[u] & x_mask).bit_count() for u in bits(x_mask)}
    work = [u for u in sorted(counts) if counts[u] < threshold]
    while work:
        u = work.pop()
        if not (x_mask >> u & 1) or counts[u] >= threshold:
            continue
        x_mask ^= 1 << u
        for w in bits(d.in_masks[u] & x_mask):
            counts[w] -= 1
            if counts[w] < threshold:
                work.append(w)

    outside_counts = [
        (d.out_masks[u] & x_mask).bit_count() if not (x_mask >> u & 1) else -1
        for u in range(d.n)
    ]
    work = [u for u in range(d.n) if outside_counts[u] >= threshold]
    while work:
        u = work.pop()
        if x_mask >> u & 1 or outside_counts[u] < threshold:
            continue
        x_mask |= 1 << u
        outside_counts[u] = -1
        for w in bits(d.in_masks[u] & ~x_mask):
            outside_counts[w] += 1
            if outside_counts[w] >= threshold:
                work.append(w)
    return frozenset(bits(x_mask))


def dense_decomposition(
    d: Digraph, epsilon: float, sparsity_d: float
) -> DenseDecomposition:
    """Partition V into dense parts and a sparse set.

    Seeds are the d-dense vertices in ascending index; a seed already
    covered by an earlier part is skipped.  Contested vertices (overlap
    between parts) stay with the earlier part under the small-delta
    warning flag.
    """
    if not (0 < epsilon < 0.5):
        raise InputError("epsilon must lie strictly between 0 and 1/2")
    if sparsity_d < 0:
        raise InputError("sparsity parameter must be non-negative")
    if d.n == 0:
        return DenseDecomposition(
            epsilon, sparsity_d, 0, (), frozenset(), (), False, (), (), ()
        )

    delta_max = degree_profile(d).delta_max
    report = classify_sparsity(d, sparsity_d)
    threshold = (1.0 - epsilon) * delta_max

    parts: list[frozenset[int]] = []
    seeds: list[int] = []
    covered = 0
    warning = False
    for v in sorted(report.dense):
        if covered >> v & 1:
            continue
        part = build_part(d, v, epsilon, delta_max)
        part_mask = mask_of(part)
        if not (part_mask >> v & 1):
            warning = True  # coverage guarantee failed at this delta_max
        contested = part_mask & covered
        if contested:
            warning = True
            part_mask &= ~covered
        if part_mask:
            parts.append(frozenset(bits(part_mask)))
            seeds.append(v)
            covered |= part_mask
    sparse = frozenset(v for v in range(d.n) if not (covered >> v & 1))

    sparse_violations = tuple(sorted(set(report.dense) & sparse))
    if sparse_violations:
        warning = True

    fixpoint_violations: list[tuple[int, int]] = []
    for i, part in enumerate(parts):
        part_mask = mask_of(part)
        for u in range(d.n):
            qualifies = (d.out_masks[u] & part_mask).bit_count() >= threshold
            if qualifies != (u in part):
                fixpoint_violations.append((i, u))

    diagnostics = []
    size_low = delta_max - 3.0 * sparsity_d / epsilon
    size_high = delta_max + 1 + 4.0 * sparsity_d
    boundary_cap = 8.0 / epsilon * sparsity_d * delta_max
    for seed, part in zip(seeds, parts):
        part_mask = mask_of(part)
        out_b = sum((d.out_masks[v] & ~part_mask).bit_count() for v in part)
        in_b = sum((d.in_masks[v] & ~part_mask).bit_count() for v in part)
        diagnostics.append(
            PartDiagnostics(
                seed=seed,
                size=len(part),
                out_boundary=out_b,
                in_boundary=in_b,
                size_in_bounds=size_low < len(part) < size_high,
                boundary_in_bounds=out_b <= boundary_cap and in_b <= boundary_cap,
            )
        )

    return DenseDecomposition(
        epsilon=epsilon,
        d=sparsity_d,
        delta_max=delta_max,
        parts=tuple(parts),
        sparse=sparse,
        seeds=tuple(seeds),
        small_delta_overlap=warning,
        fixpoint_violations=tuple(fixpoint_violations),
        sparse_violations=sparse_violations,
        diagnostics=tuple(diagnostics),
    )


# -- low-attachment outside vertices ---------------------------------------


def low_attachment_vertices(d: Digraph, part, radius: float) -> set[int]:
    """Vertices outside the part with fewer than ``radius`` in-neighbours
    and fewer than ``radius`` out-neighbours inside it."""
    if radius <= 0:
        raise InputError("attachment radius must be positive")
    part_mask = mask_of(part)
    if part_mask >> d.n:
        raise InputError("part is not a subset of the vertex set")
    result = set()
    for z in range(d.n):
        if part_mask >> z & 1:
            continue
        if (
            (d.in_masks[z] & part_mask).bit_count() < radius
            and (d.out_masks[z] & part_mask).bit_count() < radius
        ):
            result.add(z)
    return result


# -- quasi-biclique classification ------------------------------------------


@dataclass(frozen=True)
class QuasiBicliqueClassification:
    """Lowest-numbered matching near-biclique type with its witness.

    type 1: the set is a biclique (witness empty);
    type 2: one missing arc (x,y) away from a biclique;
    type 3: exactly a directed triangle joined to a biclique (witness is
            the triangle);
    type 4: biclique plus one special vertex x with large out-attachment;
    type 5: partition (R, W, K) with R of size <= 4 dominating the
            biclique-half K whose vertices all have in-degree delta+1.
    """

    type: Optional[int]
    pair: Optional[tuple[int, int]] = None
    triangle: Optional[tuple[int, int, int]] = None
    special_vertex: Optional[int] = None
    split: Optional[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = None


def _missing_pairs(d: Digraph, xs: list[int]) -> list[tuple[int, int]]:
    inside = mask_of(xs)
    missing = []
    for u in xs:
        absent = inside & ~d.out_masks[u] & ~(1 << u)
        missing.extend((u, v) for v in bits(absent))
    return sorted(missing)


def _is_biclique(d: Digraph, xs) -> bool:
    inside = mask_of(xs)
    return all(
        (d.digon_mask(v) & inside) == inside ^ (1 << v) for v in xs
    )


def classify_quasi_biclique(
    d: Digraph, part, delta: int
) -> QuasiBicliqueClassification:
    """Classify a vertex set into the five near-biclique shapes.

    Returns the lowest-numbered satisfied type, each checked only when
    all lower types failed; type 5 draws its R-candidates from the
    endpoints of a canonical maximum matching of the missing-arc digraph
    (size <= 2, else no type applies).
    """
    xs = sorted(set(part))
    if any(not (0 <= v < d.n) for v in xs):
        raise InputError("part is not a subset of the vertex set")
    if not xs:
        return QuasiBicliqueClassification(None)
    missing = _missing_pairs(d, xs)

    if not missing:
        return QuasiBicliqueClassification(TYPE_BICLIQUE)

    if len(missing) == 1:
        return QuasiBicliqueClassification(TYPE_ONE_ARC_SHORT, pair=missing[0])

    touched = sorted({v for pair in missing for v in pair})
    if len(missing) == 3 and len(touched) == 3:
        a, b, c = touched
        miss_set = set(missing)
        if miss_set in ({(a, b), (b, c), (c, a)}, {(a, c), (c, b), (b, a)}):
            # present arcs on the triple are the reverse 3-cycle
            return QuasiBicliqueClassification(
                TYPE_TRIANGLE_JOIN, triangle=(a, b, c)
            )

    for x in touched:
        if all(x in pair for pair in missing):
            if (d.out_masks[x] & mask_of(xs)).bit_count() >= 0.99 * delta:
                return QuasiBicliqueClassification(
                    TYPE_NEAR_BICLIQUE_VERTEX, special_vertex=x
                )

    split = _dominated_split(d, xs, delta)
    if split is not None:
        return QuasiBicliqueClassification(TYPE_DOMINATED_SPLIT, split=split)
    return QuasiBicliqueClassification(None)


def _dominated_split(d: Digraph, xs: list[int], delta: int):
    from .params import maximum_matching  # local: avoids import at module load
    from .digraph import complement, induced

    sub, index = induced(d, xs)
    back = {i: v for v, i in index.items()}
    comp = complement(sub)
    matching = maximum_matching(comp, cap=3)
    if not (1 <= len(matching) <= 2):
        return None
    r_set = sorted({back[i] for arc in matching for i in arc})
    r_masks = [d.out_masks[v] for v in r_set]
    k_mask = mask_of(xs) & ~mask_of(r_set)
    for m in r_masks:
        k_mask &= m
    k_set = sorted(bits(k_mask))
    w_set = sorted(set(xs) - set(r_set) - set(k_set))
    if len(k_set) * 2 <= len(xs):
        return None
    if not _is_biclique(d, w_set + k_set):
        return None
    if any(d.in_degree(v) != delta + 1 for v in k_set):
        return None
    return tuple(r_set), tuple(w_set), tuple(k_set)


def saving_part(d: Digraph, part, classification: QuasiBicliqueClassification) -> set[int]:
    """The sub-part whose vertices can yield colour savings, per type."""
    xs = set(part)
    t = classification.type
    if t is None:
        raise InputError("saving part of an unclassified set")
    if t == TYPE_BICLIQUE:
        return xs
    if t == TYPE_ONE_ARC_SHORT:
        return xs - set(classification.pair)
    if t == TYPE_TRIANGLE_JOIN:
        return xs - set(classification.triangle)
    if t == TYPE_NEAR_BICLIQUE_VERTEX:
        return xs - {classification.special_vertex}
    return set(classification.split[2])


# -- saviours ----------------------------------------------------------------

CONDITION_LETTERS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class SaviourRecord:
    vertex: int
    condition: str
    witnesses: tuple[int, ...]


def _saviour_conditions(
    d: Digraph, x: int, z_mask: int, delta: int
) -> list[tuple[str, tuple[int, ...]]]:
    """All satisfied saviour conditions of x with canonical witnesses."""
    out_z = d.out_masks[x] & z_mask
    in_z = d.in_masks[x] & z_mask
    found = []
    if d.out_degree(x) == delta - 1 and out_z:
        found.append(("a", (next(bits(out_z)),)))
    if d.in_degree(x) == delta - 1 and in_z:
        found.append(("b", (next(bits(in_z)),)))
    if d.out_degree(x) <= delta and out_z.bit_count() >= 2:
        it = bits(out_z)
        found.append(("c", (next(it), next(it))))
    if d.in_degree(x) <= delta and in_z.bit_count() >= 2:
        it = bits(in_z)
        found.append(("d", (next(it), next(it))))
    return found


def find_saviours(
    d: Digraph,
    part,
    radius: float,
    delta: int,
    classification: QuasiBicliqueClassification,
) -> list[SaviourRecord]:
    """All saving-part vertices satisfying a saviour condition, each
    tagged with its lowest-letter condition and smallest witnesses."""
    saving = saving_part(d, part, classification)
    z_mask = mask_of(low_attachment_vertices(d, part, radius))
    records = []
    for x in sorted(saving):
        conds = _saviour_conditions(d, x, z_mask, delta)
        if conds:
            letter, witnesses = conds[0]
            records.append(SaviourRecord(x, letter, witnesses))
    return records


def part_core(d: Digraph, part) -> set[int]:
    """Vertices of the part lying in the closed out-neighbourhood of
    every part vertex."""
    part = set(part)
    if not part:
        raise InputError("core of an empty part")
    core_mask = mask_of(part)
    for x in part:
        core_mask &= d.out_masks[x] | (1 << x)
    return set(bits(core_mask))


@dataclass(frozen=True)
class TupleCollection:
    """Disjoint saviour tuples of a single condition kind.

    ``target_lower_bound`` is the asymptotic guarantee ceil(delta/(50 r)),
    reported for comparison only.
    """

    kind: Optional[str]
    tuples: tuple[tuple[int, ...], ...]
    target_lower_bound: int
    no_saviour_warning: bool = False


def build_saviour_tuples(
    d: Digraph,
    part,
    saviours: Sequence[SaviourRecord],
    radius: float,
    delta: int,
) -> TupleCollection:
    """Greedy disjoint tuple collection over the dominant saviour kind.

    The kind is the condition letter satisfied by the most saviours in
    the part core (ties a<b<c<d).  Tuples are (x,u) for kinds a/b and
    (x,u,v) for c/d; after each pick every neighbour of the chosen
    low-attachment witnesses leaves the candidate pool, which forces the
    pairwise disjointness of the tuples.
    """
    target = math.ceil(delta / (50.0 * radius)) if radius > 0 else 0
    core = part_core(d, part)
    z_mask = mask_of(low_attachment_vertices(d, part, radius))
    eligible = sorted({rec.vertex for rec in saviours} & core)

    by_letter: dict[str, list[int]] = {letter: [] for letter in CONDITION_LETTERS}
    for x in eligible:
        for letter, _ in _saviour_conditions(d, x, z_mask, delta):
            by_letter[letter].append(x)
    kind = max(CONDITION_LETTERS, key=lambda L: (len(by_letter[L]), -ord(L)))
    if not by_letter[kind]:
        return TupleCollection(None, (), target, no_saviour_warning=True)

    pool = set(by_letter[kind])
    tuples: list[tuple[int, ...]] = []
    while pool:
        x = min(pool)
        side = d.out_masks[x] if kind in ("a", "c") else d.in_masks[x]
        candidates = list(bits(side & z_mask))
        if kind in ("a", "b"):
            u = candidates[0]
            tuples.append((x, u))
            removed = d.neighbour_mask(u)
        else:
            u, v = candidates[0], candidates[1]
            tuples.append((x, u, v))
            removed = d.neighbour_mask(u) | d.neighbour_mask(v)
        pool.discard(x)
        pool -= set(bits(removed))
    return TupleCollection(kind, tuple(tuples), target)
