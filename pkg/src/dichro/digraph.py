"""Core digraph value type and elementary constructions.

Digraphs are loop-free and have no parallel arcs.  Vertices are the dense
integer indices ``0..n-1``; vertex sets are plain Python sets of indices
and, internally, bitmasks, which makes neighbourhood intersections a
single ``&``.  Values are immutable after construction and safe to share
between concurrent workers.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import InputError, ParseError

DIGON = "digon"
SIMPLE_FORWARD = "simple_forward"
SIMPLE_BACKWARD = "simple_backward"
NON_ADJACENT = "non_adjacent"


class Digraph:
    """A loop-free simple digraph on vertices ``0..n-1``.

    ``out_masks[v]`` / ``in_masks[v]`` are bitmasks of out- and
    in-neighbours; both directions are stored because the degree and
    density computations repeatedly intersect them.
    """

    __slots__ = ("n", "out_masks", "in_masks", "m", "_hash")

    def __init__(self, n: int, out_masks: Sequence[int], _trusted: bool = False):
        if not _trusted:
            if n < 0:
                raise InputError("vertex count must be non-negative")
            if len(out_masks) != n:
                raise InputError("adjacency length does not match vertex count")
            full = (1 << n) - 1
            for v, mask in enumerate(out_masks):
                if mask & ~full:
                    raise InputError(f"out-neighbour of {v} out of range")
                if mask >> v & 1:
                    raise InputError(f"loop at vertex {v}")
        self.n = n
        self.out_masks = tuple(out_masks)
        in_masks = [0] * n
        for v, mask in enumerate(self.out_masks):
            rest = mask
            while rest:
                u = (rest & -rest).bit_length() - 1
                in_masks[u] |= 1 << v
                rest &= rest - 1
        self.in_masks = tuple(in_masks)
        self.m = sum(mask.bit_count() for mask in self.out_masks)
        self._hash = hash((n, self.out_masks))

    # -- basic accessors -------------------------------------------------

    def vertices(self) -> range:
        return range(self.n)

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs in ascending (tail, head) order."""
        result = []
        for v in range(self.n):
            result.extend((v, u) for u in bits(self.out_masks[v]))
        return result

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    def out_neighbours(self, v: int) -> set[int]:
        return set(bits(self.out_masks[v]))

    def in_neighbours(self, v: int) -> set[int]:
        return set(bits(self.in_masks[v]))

    def out_degree(self, v: int) -> int:
        return self.out_masks[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_masks[v].bit_count()

    def digon_mask(self, v: int) -> int:
        """Bitmask of vertices joined to ``v`` by a digon (N+ ∩ N-)."""
        return self.out_masks[v] & self.in_masks[v]

    def neighbour_mask(self, v: int) -> int:
        return self.out_masks[v] | self.in_masks[v]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Digraph)
            and self.n == other.n
            and self.out_masks == other.out_masks
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


def bits(mask: int) -> Iterable[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_arcs(n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
    """Build a digraph from an arc list.  Duplicate arcs collapse."""
    if n < 0:
        raise InputError("vertex count must be non-negative")
    out_masks = [0] * n
    for u, v in arcs:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"arc ({u},{v}) has an endpoint outside [0,{n})")
        if u == v:
            raise InputError(f"loop arc ({u},{u}) is not allowed")
        out_masks[u] |= 1 << v
    return Digraph(n, out_masks, _trusted=True)


def join_complete(h1: Digraph, h2: Digraph) -> Digraph:
    """Disjoint union of h1 and h2 plus all digons between them.

    h1 keeps its indices, h2 is shifted by h1.n.
    """
    n = h1.n + h2.n
    shift = h1.n
    left_all = (1 << shift) - 1
    right_all = ((1 << h2.n) - 1) << shift
    out_masks = [h1.out_masks[v] | right_all for v in range(h1.n)]
    out_masks += [(h2.out_masks[v] << shift) | left_all for v in range(h2.n)]
    return Digraph(n, out_masks, _trusted=True)


def complement(d: Digraph) -> Digraph:
    """Arc uv present iff u != v and uv missing in d.  An involution."""
    full = (1 << d.n) - 1
    out_masks = [full & ~d.out_masks[v] & ~(1 << v) for v in range(d.n)]
    return Digraph(d.n, out_masks, _trusted=True)


def underlying_edges(d: Digraph) -> list[tuple[int, int]]:
    """Edge set of the underlying graph: uv iff uv or vu is an arc."""
    edges = []
    for v in range(d.n):
        mask = (d.out_masks[v] | d.in_masks[v]) >> (v + 1) << (v + 1)
        edges.extend((v, u) for u in bits(mask))
    return edges


def induced(d: Digraph, subset: Iterable[int]) -> tuple[Digraph, dict[int, int]]:
    """Subdigraph induced by ``subset`` plus the old->new index map."""
    sub = sorted(set(subset))
    if sub and not (0 <= sub[0] and sub[-1] < d.n):
        raise InputError("induced subset is not a subset of the vertex set")
    index = {v: i for i, v in enumerate(sub)}
    out_masks = [0] * len(sub)
    for v in sub:
        mask = 0
        for u in bits(d.out_masks[v]):
            if u in index:
                mask |= 1 << index[u]
        out_masks[index[v]] = mask
    return Digraph(len(sub), out_masks, _trusted=True), index


def is_acyclic(d: Digraph) -> bool:
    return find_directed_cycle(d) is None


def subset_is_acyclic(d: Digraph, subset_mask: int) -> bool:
    """Whether the subdigraph induced by a vertex bitmask is acyclic.

    Iterative sink removal; cheap enough to call per colour class.
    """
    remaining = subset_mask
    changed = True
    while remaining and changed:
        changed = False
        rest = remaining
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if not (d.out_masks[v] & remaining):
                remaining ^= low
                changed = True
    return remaining == 0


def find_directed_cycle(d: Digraph) -> Optional[list[int]]:
    """One directed cycle, or None iff the digraph is acyclic.

    Depth-first search with colour marks, started from vertex 0 upward
    with out-neighbours scanned ascending, so the returned cycle (the
    first one closed in DFS order) is deterministic.  A digon yields a
    cycle of length 2.
    """
    state = [0] * d.n  # 0 unseen, 1 on stack, 2 done
    parent: dict[int, int] = {}
    for root in range(d.n):
        if state[root]:
            continue
        stack = [(root, iter(bits(d.out_masks[root])))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if state[u] == 0:
                    state[u] = 1
                    parent[u] = v
                    stack.append((u, iter(bits(d.out_masks[u]))))
                    advanced = True
                    break
                if state[u] == 1:
                    cycle = [v]
                    w = v
                    while w != u:
                        w = parent[w]
                        cycle.append(w)
                    cycle.reverse()
                    return cycle
            if not advanced:
                state[v] = 2
                stack.pop()
    return None


def classify_pair(d: Digraph, u: int, v: int) -> str:
    """Classify an ordered vertex pair: digon / simple u->v / simple v->u /
    non-adjacent."""
    if u == v:
        raise InputError("pair classification needs two distinct vertices")
    uv = d.has_arc(u, v)
    vu = d.has_arc(v, u)
    if uv and vu:
        return DIGON
    if uv:
        return SIMPLE_FORWARD
    if vu:
        return SIMPLE_BACKWARD
    return NON_ADJACENT


def digon_neighbours(d: Digraph, v: int) -> set[int]:
    return set(bits(d.digon_mask(v)))


def simple_out_neighbours(d: Digraph, v: int) -> set[int]:
    return set(bits(d.out_masks[v] & ~d.in_masks[v]))


def simple_in_neighbours(d: Digraph, v: int) -> set[int]:
    return set(bits(d.in_masks[v] & ~d.out_masks[v]))


def is_symmetric(d: Digraph) -> bool:
    return all(d.out_masks[v] == d.in_masks[v] for v in range(d.n))


def components(d: Digraph) -> list[list[int]]:
    """Connected components of the underlying graph, each sorted, in
    ascending order of smallest vertex."""
    seen = [False] * d.n
    result = []
    for root in range(d.n):
        if seen[root]:
            continue
        comp = []
        stack = [root]
        seen[root] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in bits(d.out_masks[v] | d.in_masks[v]):
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        result.append(sorted(comp))
    return result


# -- canonical arc-list text format -------------------------------------
#
# First line `d <n> <m>`, then m lines `<u> <v>`, ASCII decimal,
# 0-indexed, one arc per line, LF terminated.  write_arc_list emits arcs
# in ascending order, so write(parse(text)) is byte-identical for
# canonical inputs.


def write_arc_list(d: Digraph) -> str:
    lines = [f"d {d.n} {d.m}"]
    lines.extend(f"{u} {v}" for u, v in d.arcs())
    return "\n".join(lines) + "\n"


def parse_arc_list(text: str, allow_duplicates: bool = False) -> Digraph:
    """Parse the canonical arc-list format.

    Duplicate arcs are rejected unless ``allow_duplicates`` is set, in
    which case they collapse silently.
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "d":
        raise ParseError("expected header `d <n> <m>`", 1)
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError("non-numeric header fields", 1) from None
    if n < 0 or m < 0:
        raise ParseError("negative count in header", 1)
    arcs = []
    seen = set()
    lineno = 1
    for raw in lines[1:]:
        lineno += 1
        stripped = raw.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError("expected `<u> <v>`", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("non-numeric arc endpoint", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"arc endpoint outside [0,{n})", lineno)
        if u == v:
            raise ParseError("loop arc", lineno)
        if (u, v) in seen:
            if not allow_duplicates:
                raise ParseError(f"duplicate arc ({u},{v})", lineno)
            continue
        seen.add((u, v))
        arcs.append((u, v))
    if len(arcs) != m:
        raise ParseError(f"header announces {m} arcs, found {len(arcs)}", 1)
    return from_arcs(n, arcs)
