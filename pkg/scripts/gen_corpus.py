#!/usr/bin/env python3
"""Regenerate the shipped corpus/ of arc-list files.

Every file is produced by a library generator with a fixed seed, so the
corpus is reproducible byte-for-byte; `dichro verify corpus/` must exit 0.
"""

from pathlib import Path

from dichro.digraph import write_arc_list
from dichro.transforms import (
    complete_digraph,
    directed_cycle,
    directed_path,
    make_bk_tight,
    make_hk,
    make_k_obstruction,
    np_gadget_reduction,
    random_digraph,
    random_tournament,
    symmetric_lift,
)


def build_corpus() -> dict[str, object]:
    corpus = {
        "h3.d": make_hk(3),
        "h5.d": make_hk(5),
        "h7.d": make_hk(7),
        "bk_tight.d": make_bk_tight(),
        "complete_6.d": complete_digraph(6),
        "cycle_7.d": directed_cycle(7),
        "path_6.d": directed_path(6),
        "lift_c5.d": symmetric_lift(5, [(i, (i + 1) % 5) for i in range(5)]),
        "tournament_9.d": random_tournament(9, seed=1),
        "random_sparse_12.d": random_digraph(12, 0.1, 0.15, seed=2),
        "random_dense_10.d": random_digraph(10, 0.5, 0.1, seed=3),
        "kobs_5_i_2.d": make_k_obstruction(5, "i", 2)[0],
        "kobs_6_ii_3.d": make_k_obstruction(6, "ii", 3)[0],
        "kobs_6_iii_4.d": make_k_obstruction(6, "iii", 4)[0],
        "reduce_c3_k2.d": np_gadget_reduction(directed_cycle(3), 2)[0],
    }
    return corpus


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "corpus"
    out_dir.mkdir(exist_ok=True)
    for name, digraph in sorted(build_corpus().items()):
        (out_dir / name).write_text(write_arc_list(digraph), encoding="ascii")
        print(f"wrote {name}: n={digraph.n} m={digraph.m}")


if __name__ == "__main__":
    main()
