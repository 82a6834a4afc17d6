"""Dicolouring: verification, greedy colouring, the exact dichromatic
number solver, Brooks-style classification, and the extendability
machinery used by the random colouring process.

A k-dicolouring assigns every vertex a colour in 1..k so that each
colour class induces an acyclic subdigraph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .decomposition import part_core
from .digraph import (
    Digraph,
    bits,
    components,
    find_directed_cycle,
    induced,
    is_symmetric,
)
from .errors import CapacityError, InputError
from .params import degree_profile, greedy_digon_clique

EXACT_CHI_BOUND = 24

OUT_AVOID = "out-avoid"
IN_AVOID = "in-avoid"


@dataclass(frozen=True)
class PartialDicolouring:
    """Colour map over a k-palette; None marks an uncoloured vertex."""

    k: int
    colours: tuple[Optional[int], ...]

    def __post_init__(self):
        for v, c in enumerate(self.colours):
            if c is not None and not (1 <= c <= self.k):
                raise InputError(f"colour {c} of vertex {v} outside [1,{self.k}]")

    @staticmethod
    def empty(n: int, k: int) -> "PartialDicolouring":
        return PartialDicolouring(k, (None,) * n)

    @staticmethod
    def total(k: int, colours: Sequence[int]) -> "PartialDicolouring":
        return PartialDicolouring(k, tuple(colours))

    @property
    def n(self) -> int:
        return len(self.colours)

    def is_total(self) -> bool:
        return all(c is not None for c in self.colours)

    def uncoloured(self) -> list[int]:
        return [v for v, c in enumerate(self.colours) if c is None]

    def colour_class_mask(self, c: int) -> int:
        mask = 0
        for v, col in enumerate(self.colours):
            if col == c:
                mask |= 1 << v
        return mask

    def with_colour(self, v: int, c: Optional[int]) -> "PartialDicolouring":
        colours = list(self.colours)
        colours[v] = c
        return PartialDicolouring(self.k, tuple(colours))


def is_dicolouring(
    d: Digraph, phi: PartialDicolouring
) -> tuple[bool, Optional[list[int]]]:
    """Validity check: no colour class holds a directed cycle.

    Uncoloured vertices belong to no class.  Returns the first violating
    monochromatic cycle (smallest colour, then DFS order) if invalid.
    """
    if phi.n != d.n:
        raise InputError("colouring length does not match digraph order")
    for c in range(1, phi.k + 1):
        class_vertices = [v for v in range(d.n) if phi.colours[v] == c]
        if len(class_vertices) < 2:
            continue
        sub, index = induced(d, class_vertices)
        cycle = find_directed_cycle(sub)
        if cycle is not None:
            back = {i: v for v, i in index.items()}
            return False, [back[i] for i in cycle]
    return True, None


@dataclass(frozen=True)
class GreedyOutcome:
    colouring: Optional[PartialDicolouring]
    failed_at: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.colouring is not None


def greedy_dicolour(
    d: Digraph,
    order: Sequence[int],
    k: int,
    rule: str = OUT_AVOID,
    start: Optional[PartialDicolouring] = None,
) -> GreedyOutcome:
    """Colour ``order`` greedily on top of ``start`` (all-uncoloured by
    default).

    Each vertex takes the smallest colour absent from its already
    coloured out-neighbourhood (rule ``out-avoid``) or in-neighbourhood
    (``in-avoid``).  The outcome is always a valid partial dicolouring:
    a monochromatic cycle would need a monochromatic coloured
    out-neighbour (resp. in-neighbour) at its last-coloured vertex,
    which the rule forbids.
    """
    if rule not in (OUT_AVOID, IN_AVOID):
        raise InputError(f"unknown greedy rule {rule!r}")
    if start is None:
        start = PartialDicolouring.empty(d.n, k)
    if start.k != k:
        raise InputError("palette of the starting colouring differs from k")
    colours = list(start.colours)
    if sorted(order) != sorted(v for v in range(d.n) if colours[v] is None):
        raise InputError("order must be a permutation of the uncoloured vertices")
    masks = d.out_masks if rule == OUT_AVOID else d.in_masks
    for v in order:
        used = set()
        for u in bits(masks[v]):
            if colours[u] is not None:
                used.add(colours[u])
        c = next((c for c in range(1, k + 1) if c not in used), None)
        if c is None:
            return GreedyOutcome(None, failed_at=v)
        colours[v] = c
    return GreedyOutcome(PartialDicolouring(k, tuple(colours)))


# -- exact dichromatic number ---------------------------------------------


@dataclass(frozen=True)
class ChiResult:
    value: int
    colouring: PartialDicolouring
    # infeasibility certificate for value-1: ("clique", witness-vertices)
    # when a digon clique of size `value` forces the bound, else
    # ("exhaustion", nodes-explored-at-value-1).
    certificate: tuple = ()
    nodes: int = 0


def _reaches(d: Digraph, source_mask: int, target: int, allowed: int) -> bool:
    """Whether any vertex of source_mask reaches ``target`` inside
    ``allowed`` (breadth-first over out-arcs)."""
    frontier = source_mask & allowed
    seen = frontier
    target_bit = 1 << target
    while frontier:
        step = 0
        rest = frontier
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if d.out_masks[v] & target_bit:
                return True
            step |= d.out_masks[v]
        frontier = step & allowed & ~seen
        seen |= frontier
    return False


def _creates_monochromatic_cycle(d: Digraph, v: int, class_mask: int) -> bool:
    # New cycle must pass through v: some out-neighbour of v inside the
    # class must reach v through the class.
    return _reaches(d, d.out_masks[v], v, class_mask | (1 << v))


class _Search:
    """Backtracking k-dicolourability search.

    Vertices are assigned in descending total-degree order (ties by
    index); colours are tried ascending with first-use symmetry breaking,
    so the first witness found is canonical (smallest colour sequence).
    """

    def __init__(self, d: Digraph, order: Sequence[int]):
        self.d = d
        self.order = list(order)
        self.nodes = 0

    def run(self, k: int) -> Optional[list[int]]:
        d = self.d
        n = d.n
        assignment: list[int] = [0] * n
        class_masks = [0] * (k + 1)

        def recurse(pos: int, used: int) -> bool:
            self.nodes += 1
            if pos == len(self.order):
                return True
            v = self.order[pos]
            limit = min(used + 1, k)
            for c in range(1, limit + 1):
                mask = class_masks[c]
                if not _creates_monochromatic_cycle(d, v, mask):
                    assignment[v] = c
                    class_masks[c] = mask | (1 << v)
                    if recurse(pos + 1, max(used, c)):
                        return True
                    class_masks[c] = mask
                    assignment[v] = 0
            return False

        if recurse(0, 0):
            return assignment
        return None


def upper_bound_dicolouring(d: Digraph) -> PartialDicolouring:
    """Greedy out-avoid colouring in descending degree order; always
    succeeds with at most delta_max+1 colours."""
    if d.n == 0:
        return PartialDicolouring(1, ())
    profile = degree_profile(d)
    order = sorted(
        range(d.n),
        key=lambda v: (-(profile.out_degrees[v] + profile.in_degrees[v]), v),
    )
    outcome = greedy_dicolour(d, order, profile.delta_max + 1, OUT_AVOID)
    assert outcome.ok
    used = max((c for c in outcome.colouring.colours if c), default=1)
    return PartialDicolouring(used, outcome.colouring.colours)


def dichromatic_number(
    d: Digraph,
    mode: str = "exact",
    exact_bound: int = EXACT_CHI_BOUND,
    force: bool = False,
) -> ChiResult:
    """The dichromatic number with a witness colouring.

    Exact mode runs the branch-and-bound search from the greedy
    digon-clique lower bound upward and reports, for the first feasible
    k, either the clique certificate (k-1 < clique size) or the
    exhaustion of the k-1 search.  ``upper-bound`` mode returns the
    greedy witness only.
    """
    if d.n == 0:
        return ChiResult(0, PartialDicolouring(1, ()), ("clique", ()))
    if mode == "upper-bound":
        ub = upper_bound_dicolouring(d)
        return ChiResult(ub.k, ub, ())
    if mode != "exact":
        raise InputError(f"unknown mode {mode!r}")
    if d.n > exact_bound and not force:
        raise CapacityError(
            f"exact dichromatic number capped at n={exact_bound} (use force)"
        )

    clique = sorted(greedy_digon_clique(d))
    lower = max(1, len(clique))
    ub = upper_bound_dicolouring(d)
    if ub.k < lower:  # greedy clique can exceed chi only through a bug
        raise AssertionError("upper bound fell below clique lower bound")

    profile = degree_profile(d)
    order = sorted(
        range(d.n),
        key=lambda v: (-(profile.out_degrees[v] + profile.in_degrees[v]), v),
    )
    prev_nodes = 0
    for k in range(lower, ub.k + 1):
        if k >= ub.k:
            certificate = (
                ("clique", tuple(clique)) if k == lower else ("exhaustion", prev_nodes)
            )
            return ChiResult(ub.k, ub, certificate, nodes=prev_nodes)
        search = _Search(d, order)
        assignment = search.run(k)
        if assignment is not None:
            certificate = (
                ("clique", tuple(clique)) if k == lower else ("exhaustion", prev_nodes)
            )
            return ChiResult(
                k,
                PartialDicolouring(k, tuple(assignment)),
                certificate,
                nodes=search.nodes,
            )
        prev_nodes = search.nodes
    raise AssertionError("unreachable: upper bound colouring is feasible")


# -- Brooks classification -------------------------------------------------

BOUNDED = "bounded"
DIRECTED_CYCLE = "directed_cycle"
SYMMETRIC_ODD_CYCLE = "symmetric_odd_cycle"
COMPLETE_DIGRAPH = "complete_digraph"
UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class BrooksReport:
    chi: int
    delta_max: int
    case: str
    component: tuple[int, ...] = ()


def _is_directed_cycle_component(d: Digraph, comp: list[int]) -> bool:
    sub, _ = induced(d, comp)
    if sub.m != sub.n or sub.n < 2:
        return False
    if any(sub.out_degree(v) != 1 or sub.in_degree(v) != 1 for v in range(sub.n)):
        return False
    cycle = find_directed_cycle(sub)
    return cycle is not None and len(cycle) == sub.n


def _is_symmetric_odd_cycle_component(d: Digraph, comp: list[int]) -> bool:
    sub, _ = induced(d, comp)
    if sub.n < 3 or sub.n % 2 == 0:
        return False
    if not is_symmetric(sub):
        return False
    return all(sub.out_degree(v) == 2 for v in range(sub.n))


def _is_complete_component(d: Digraph, comp: list[int], size: int) -> bool:
    if len(comp) != size:
        return False
    sub, _ = induced(d, comp)
    full = (1 << sub.n) - 1
    return all(sub.digon_mask(v) == full ^ (1 << v) for v in range(sub.n))


def brooks_classify(d: Digraph, exact_bound: int = EXACT_CHI_BOUND) -> BrooksReport:
    """Classify against the Brooks-style bound chi <= delta_max.

    If chi = delta_max + 1, the guilty component is (per the directed
    Brooks theorem) a directed cycle (delta_max 1), a symmetric odd cycle
    (delta_max 2), or a complete digraph on delta_max+1 vertices; checks
    run in that order of specificity: complete digraph, directed cycle,
    symmetric odd cycle.  Components are scanned in ascending order of
    smallest vertex; an instance matching no case reports
    ``unclassified`` (which would refute the classification).
    """
    if d.n == 0:
        return BrooksReport(0, 0, BOUNDED)
    profile = degree_profile(d)
    chi = dichromatic_number(d, exact_bound=exact_bound).value
    if chi <= profile.delta_max:
        return BrooksReport(chi, profile.delta_max, BOUNDED)
    for comp in components(d):
        if _is_complete_component(d, comp, profile.delta_max + 1):
            return BrooksReport(chi, profile.delta_max, COMPLETE_DIGRAPH, tuple(comp))
        if profile.delta_max == 1 and _is_directed_cycle_component(d, comp):
            return BrooksReport(chi, profile.delta_max, DIRECTED_CYCLE, tuple(comp))
        if profile.delta_max == 2 and _is_symmetric_odd_cycle_component(d, comp):
            return BrooksReport(
                chi, profile.delta_max, SYMMETRIC_ODD_CYCLE, tuple(comp)
            )
    return BrooksReport(chi, profile.delta_max, UNCLASSIFIED)


# -- extendability ----------------------------------------------------------
#
# A partial (delta-1)-dicolouring is "i-extendable" for a part X_i of a
# dense decomposition when three distinct uncoloured vertices of the
# part's core (vertices lying in the closed out-neighbourhood of every
# part vertex) each satisfy one of the degree/repeat conditions below.
# It is "extendable" when that holds for every part and every sparse
# vertex has three repeated colours in its out-neighbourhood.  A
# repeated colour is one assigned to at least two vertices of the
# neighbourhood in question (distinct colours are counted, not pairs).

COND_OUT_TIGHT = 1  # d+(x) = delta-1, one repeat in N+(x)
COND_IN_TIGHT = 2  # d-(x) = delta-1, one repeat in N-(x)
COND_OUT_SLACK = 3  # d+(x) <= delta, two repeats in N+(x)
COND_IN_SLACK = 4  # d-(x) <= delta, two repeats in N-(x)


@dataclass(frozen=True)
class PartWitness:
    vertex: int
    condition: int


@dataclass(frozen=True)
class ExtendabilityReport:
    delta: int
    i_extendable: tuple[bool, ...]
    witnesses: tuple[tuple[PartWitness, ...], ...]
    sparse_repeat_counts: dict[int, int] = field(default_factory=dict)
    extendable: bool = False


def repeated_colours(
    d: Digraph, phi: PartialDicolouring, neighbours_mask: int
) -> int:
    """Number of distinct colours used by >= 2 coloured vertices of the
    given neighbourhood mask."""
    counts: dict[int, int] = {}
    for u in bits(neighbours_mask):
        c = phi.colours[u]
        if c is not None:
            counts[c] = counts.get(c, 0) + 1
    return sum(1 for c in counts.values() if c >= 2)


def _witness_condition(
    d: Digraph, phi: PartialDicolouring, x: int, delta: int
) -> Optional[int]:
    d_out = d.out_degree(x)
    d_in = d.in_degree(x)
    out_rep = repeated_colours(d, phi, d.out_masks[x])
    in_rep = repeated_colours(d, phi, d.in_masks[x])
    if d_out == delta - 1 and out_rep >= 1:
        return COND_OUT_TIGHT
    if d_in == delta - 1 and in_rep >= 1:
        return COND_IN_TIGHT
    if d_out <= delta and out_rep >= 2:
        return COND_OUT_SLACK
    if d_in <= delta and in_rep >= 2:
        return COND_IN_SLACK
    return None


def check_extendable(
    d: Digraph, phi: PartialDicolouring, parts, delta: int
) -> ExtendabilityReport:
    """Evaluate extendability of ``phi`` against a dense decomposition.

    ``parts`` is any object with ``parts`` (sequence of vertex sets) and
    ``sparse`` (vertex set) attributes partitioning V; ``delta`` is the
    degree parameter fixed by the caller (the palette is delta-1).
    """
    part_sets = [set(p) for p in parts.parts]
    sparse = set(parts.sparse)
    covered: set[int] = set()
    for p in part_sets:
        covered |= p
    disjoint = sum(len(p) for p in part_sets) == len(covered) and not (
        covered & sparse
    )
    if not disjoint or covered | sparse != set(range(d.n)) or any(
        not p for p in part_sets
    ):
        raise InputError("part structure does not partition the vertex set")

    flags = []
    witnesses = []
    for part in part_sets:
        core = part_core(d, part)
        found: list[PartWitness] = []
        for x in sorted(core):
            if phi.colours[x] is not None:
                continue
            cond = _witness_condition(d, phi, x, delta)
            if cond is not None:
                found.append(PartWitness(x, cond))
            if len(found) == 3:
                break
        witnesses.append(tuple(found))
        flags.append(len(found) >= 3)

    sparse_counts = {
        s: repeated_colours(d, phi, d.out_masks[s]) for s in sorted(sparse)
    }
    extendable = all(flags) and all(c >= 3 for c in sparse_counts.values())
    return ExtendabilityReport(
        delta=delta,
        i_extendable=tuple(flags),
        witnesses=tuple(witnesses),
        sparse_repeat_counts=sparse_counts,
        extendable=extendable,
    )


def extend_extendable(
    d: Digraph,
    phi: PartialDicolouring,
    parts,
    report: ExtendabilityReport,
    delta: int,
) -> PartialDicolouring:
    """Complete an extendable partial dicolouring to a total one.

    Parts are finished in order, their three witnesses last (each avoids
    the side named by its condition), then the sparse set, each vertex
    avoiding its out-neighbourhood colours.  Greedy failure (the caller's
    degree hypotheses were violated) raises InputError with the stuck
    vertex; success always passes is_dicolouring.
    """
    if not report.extendable:
        raise InputError("colouring is not extendable")
    colours = list(phi.colours)
    k = phi.k

    def paint(v: int, masks) -> None:
        used = {colours[u] for u in bits(masks[v]) if colours[u] is not None}
        for c in range(1, k + 1):
            if c not in used:
                colours[v] = c
                return
        raise InputError(f"greedy extension stuck at vertex {v}")

    for part, part_witnesses in zip(parts.parts, report.witnesses):
        witness_vertices = [w.vertex for w in part_witnesses]
        rest = sorted(v for v in part if colours[v] is None and v not in witness_vertices)
        for v in rest:
            paint(v, d.out_masks)
        for w in sorted(part_witnesses, key=lambda w: w.vertex):
            side = (
                d.out_masks
                if w.condition in (COND_OUT_TIGHT, COND_OUT_SLACK)
                else d.in_masks
            )
            paint(w.vertex, side)
    for s in sorted(parts.sparse):
        if colours[s] is None:
            paint(s, d.out_masks)
    return PartialDicolouring(k, tuple(colours))
