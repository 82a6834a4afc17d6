"""The random colour-and-uncolour process and its Monte-Carlo harness.

One trial: assign every vertex an independent uniform colour from the
palette, then simultaneously uncolour every vertex that has a same-
coloured in-neighbour and a same-coloured out-neighbour.  The surviving
partial colouring is always a valid partial dicolouring (every vertex of
a monochromatic cycle has a monochromatic predecessor and successor, so
the whole cycle is uncoloured).

Trials are independent with index-derived seeds (see dichro.prng), so
aggregate statistics are bit-identical for a fixed master seed at any
worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .coloring import PartialDicolouring, check_extendable, repeated_colours
from .decomposition import DenseDecomposition, build_saviour_tuples, find_saviours
from .decomposition import classify_quasi_biclique, part_core
from .digraph import Digraph, bits
from .errors import InputError
from .prng import Stream, mix64, trial_seed


@lru_cache(maxsize=8)
def _adjacency_lists(d: Digraph) -> tuple[tuple[tuple[int, ...], ...], ...]:
    outs = tuple(tuple(bits(d.out_masks[v])) for v in range(d.n))
    ins = tuple(tuple(bits(d.in_masks[v])) for v in range(d.n))
    return outs, ins


def random_colouring(d: Digraph, k: int, seed: int) -> tuple[int, ...]:
    """Total assignment: every vertex an independent uniform colour in
    1..k, deterministic in the seed."""
    if k < 1:
        raise InputError("palette must have at least one colour")
    stream = Stream(mix64(seed))
    return tuple(1 + stream.below(k) for _ in range(d.n))


@dataclass(frozen=True)
class ProcessOutcome:
    seed: Optional[int]
    psi: tuple[int, ...]
    uncoloured: frozenset[int]
    phi: PartialDicolouring
    sparse_repeat_counts: Optional[dict[int, int]] = None
    part_flags: Optional[tuple[bool, ...]] = None

    @property
    def extendable(self) -> Optional[bool]:
        if self.part_flags is None or self.sparse_repeat_counts is None:
            return None
        return all(self.part_flags) and all(
            c >= 3 for c in self.sparse_repeat_counts.values()
        )


def uncoloured_set(d: Digraph, psi: tuple[int, ...]) -> frozenset[int]:
    """Vertices with a same-coloured in-neighbour and a same-coloured
    out-neighbour under the total assignment psi."""
    outs, ins = _adjacency_lists(d)
    removed = set()
    for x in range(d.n):
        c = psi[x]
        if any(psi[u] == c for u in ins[x]) and any(psi[u] == c for u in outs[x]):
            removed.add(x)
    return frozenset(removed)


def uncolour_step(d: Digraph, psi, k: Optional[int] = None, seed=None) -> ProcessOutcome:
    """Single simultaneous uncolouring pass (no iteration)."""
    psi = tuple(psi)
    if len(psi) != d.n:
        raise InputError("assignment length does not match digraph order")
    if k is None:
        k = max(psi, default=1)
    removed = uncoloured_set(d, psi)
    colours = tuple(None if v in removed else psi[v] for v in range(d.n))
    return ProcessOutcome(seed, psi, removed, PartialDicolouring(k, colours))


def m_s_simple(d: Digraph, phi: PartialDicolouring, s: int) -> int:
    """Distinct colours retained by >= 2 out-neighbours of s."""
    return repeated_colours(d, phi, d.out_masks[s])


def non_digon_out_pairs(d: Digraph, s: int) -> list[tuple[int, int]]:
    """Unordered pairs of distinct out-neighbours of s not inducing a
    digon (the pair set whose size drives the repeat-count expectation)."""
    outs = sorted(bits(d.out_masks[s]))
    pairs = []
    for i, x in enumerate(outs):
        for y in outs[i + 1 :]:
            if not (d.has_arc(x, y) and d.has_arc(y, x)):
                pairs.append((x, y))
    return pairs


def m_s_strict(
    d: Digraph, psi, uncoloured: frozenset[int], s: int
) -> int:
    """Repeat count restricted to non-digon out-pairs that fully retain.

    Counts colours c such that some non-digon pair of out-neighbours of
    s is assigned c, and every non-digon out-pair assigned c retained
    both endpoints.  Only same-coloured pairs can matter, so the pairs
    are generated per colour class rather than over all of U_s.
    """
    outs, _ = _adjacency_lists(d)
    by_colour: dict[int, list[int]] = {}
    for u in outs[s]:
        by_colour.setdefault(psi[u], []).append(u)
    count = 0
    for members in by_colour.values():
        if len(members) < 2:
            continue
        seen_pair = False
        all_retained = True
        for i, x in enumerate(members):
            for y in members[i + 1 :]:
                if d.has_arc(x, y) and d.has_arc(y, x):
                    continue
                seen_pair = True
                if x in uncoloured or y in uncoloured:
                    all_retained = False
                    break
            if not all_retained:
                break
        if seen_pair and all_retained:
            count += 1
    return count


# -- Monte-Carlo harness -----------------------------------------------------


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval (well-behaved at small counts).

    The interval always contains the sample proportion; the explicit
    clamp guards against float roundoff at the endpoints.
    """
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return min(p, max(0.0, centre - half)), max(p, min(1.0, centre + half))


def lll_margin(p_hat: float, dep_degree: int) -> tuple[float, bool]:
    """e * p * (d+1) and whether it meets the <= 1 criterion."""
    if not (0.0 <= p_hat <= 1.0):
        raise InputError("probability estimate outside [0,1]")
    margin = math.e * p_hat * (dep_degree + 1)
    return margin, margin <= 1.0


@dataclass(frozen=True)
class EventStats:
    occurrences: int
    trials: int
    mean: float
    variance: float

    @property
    def p_hat(self) -> float:
        return self.occurrences / self.trials if self.trials else 0.0

    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.occurrences, self.trials)


def _moments(total: int, total_sq: int, trials: int) -> tuple[float, float]:
    mean = total / trials
    if trials < 2:
        return mean, 0.0
    return mean, (total_sq - trials * mean * mean) / (trials - 1)


@dataclass(frozen=True)
class TrialStatistics:
    trials: int
    k: int
    delta: int
    seed: int
    dep_degree: int
    sparse_events: dict[int, EventStats]  # A_s: fewer than 3 repeats at s
    part_events: tuple[EventStats, ...]  # B_i: not i-extendable
    m_s_strict_stats: dict[int, EventStats]
    tuple_kinds: tuple[Optional[str], ...]
    tuple_counts: tuple[int, ...]
    m_i_stats: tuple[EventStats, ...]
    extendable_count: int = 0

    def worst_p_hat(self) -> float:
        probes = [e.p_hat for e in self.sparse_events.values()]
        probes += [e.p_hat for e in self.part_events]
        return max(probes, default=0.0)

    def lll(self) -> tuple[float, bool]:
        return lll_margin(self.worst_p_hat(), self.dep_degree)


def _tuple_counted(
    d: Digraph,
    psi,
    uncoloured: frozenset[int],
    entry: tuple[int, ...],
    core_list: list[int],
    tuple_vertices: frozenset[int],
) -> bool:
    x = entry[0]
    if x not in uncoloured:
        return False
    for w in entry[1:]:
        if w in uncoloured:
            return False
        if not any(psi[y] == psi[w] for y in core_list):
            return False
    for w in entry:
        if any(psi[other] == psi[w] for other in tuple_vertices if other != w):
            return False
    return True


def run_trials(
    d: Digraph,
    k: int,
    parts: DenseDecomposition,
    delta: int,
    trials: int,
    seed: int,
    radius: float = 1.0,
    per_trial: Optional[Callable[[int, ProcessOutcome], None]] = None,
) -> TrialStatistics:
    """Monte-Carlo estimation of the process events over seeded trials.

    Per trial: colour, uncolour, evaluate extendability; aggregates the
    bad-event frequencies (fewer than three sparse repeats; parts not
    extendable), both repeat-count variables, and the per-part disjoint
    tuple counts.  ``per_trial`` receives every outcome (used by the CSV
    writer).
    """
    if trials < 1:
        raise InputError("at least one trial is required")
    if k < 1:
        raise InputError("palette must have at least one colour")

    sparse = sorted(parts.sparse)
    part_list = [sorted(p) for p in parts.parts]
    cores = [sorted(part_core(d, p)) for p in part_list]

    collections = []
    for p in part_list:
        cls = classify_quasi_biclique(d, p, delta)
        if cls.type is None:
            collections.append(None)
            continue
        saviours = find_saviours(d, p, radius, delta, cls)
        collections.append(build_saviour_tuples(d, p, saviours, radius, delta))

    a_counts = {s: 0 for s in sparse}
    b_counts = [0] * len(part_list)
    ms_tot = {s: 0 for s in sparse}
    ms_sq = {s: 0 for s in sparse}
    mi_tot = [0] * len(part_list)
    mi_sq = [0] * len(part_list)
    extendable_count = 0

    for t in range(trials):
        psi = random_colouring(d, k, trial_seed(seed, t))
        removed = uncoloured_set(d, psi)
        phi = PartialDicolouring(
            k, tuple(None if v in removed else psi[v] for v in range(d.n))
        )
        report = check_extendable(d, phi, parts, delta)
        outcome = ProcessOutcome(
            seed=t,
            psi=psi,
            uncoloured=removed,
            phi=phi,
            sparse_repeat_counts=report.sparse_repeat_counts,
            part_flags=report.i_extendable,
        )
        for s in sparse:
            if report.sparse_repeat_counts[s] < 3:
                a_counts[s] += 1
            value = m_s_strict(d, psi, removed, s)
            ms_tot[s] += value
            ms_sq[s] += value * value
        for i, flag in enumerate(report.i_extendable):
            if not flag:
                b_counts[i] += 1
            coll = collections[i]
            if coll is not None and coll.tuples:
                tuple_vertices = frozenset(v for tup in coll.tuples for v in tup)
                value = sum(
                    1
                    for tup in coll.tuples
                    if _tuple_counted(d, psi, removed, tup, cores[i], tuple_vertices)
                )
                mi_tot[i] += value
                mi_sq[i] += value * value
        if report.extendable:
            extendable_count += 1
        if per_trial is not None:
            per_trial(t, outcome)

    delta_max = parts.delta_max
    dep_degree = (2 * delta_max) ** 5

    def indicator_stats(count: int) -> EventStats:
        # indicator variable: squared values equal the values
        return EventStats(count, trials, *_moments(count, count, trials))

    sparse_events = {s: indicator_stats(a_counts[s]) for s in sparse}
    part_events = tuple(indicator_stats(b) for b in b_counts)
    ms_stats = {
        s: EventStats(ms_tot[s], trials, *_moments(ms_tot[s], ms_sq[s], trials))
        for s in sparse
    }
    mi_stats = tuple(
        EventStats(mi_tot[i], trials, *_moments(mi_tot[i], mi_sq[i], trials))
        for i in range(len(part_list))
    )
    return TrialStatistics(
        trials=trials,
        k=k,
        delta=delta,
        seed=seed,
        dep_degree=dep_degree,
        sparse_events=sparse_events,
        part_events=part_events,
        m_s_strict_stats=ms_stats,
        tuple_kinds=tuple(c.kind if c else None for c in collections),
        tuple_counts=tuple(len(c.tuples) if c else 0 for c in collections),
        m_i_stats=mi_stats,
        extendable_count=extendable_count,
    )


def expected_repeat_lower_bound(d: Digraph, s: int, delta: int) -> float:
    """|U_s| / (e^6 (delta-1)): the expectation floor for the strict-variant
    repeat count at a sparse vertex."""
    u_s = len(non_digon_out_pairs(d, s))
    return u_s / (math.e**6 * (delta - 1))
