#!/usr/bin/env python3
"""Monte-Carlo sweep of the colour-and-uncolour process on circulant
tournaments (every vertex degree (n-1)/2, all vertices sparse).

Prints, per order n: the empirical extendability rate, the worst
bad-event frequency over the sparse vertices, and the LLL margin it
would need.  Desk-scale degrees are far below the asymptotic regime, so
the margins are descriptive, not asserted.

Usage: python scripts/extendability_experiment.py [trials] [seed]
"""

import sys

from dichro.decomposition import dense_decomposition
from dichro.digraph import from_arcs
from dichro.randproc import run_trials


def circulant_tournament(n: int):
    half = (n - 1) // 2
    return from_arcs(n, [(i, (i + j) % n) for i in range(n) for j in range(1, half + 1)])


def main() -> None:
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    print(f"{'n':>4} {'delta':>5} {'P(extendable)':>14} {'max P(A_s)':>11} "
          f"{'LLL margin':>12}")
    for n in (41, 55, 69, 83, 97):
        d = circulant_tournament(n)
        delta = (n - 1) // 2 + 1
        dec = dense_decomposition(d, 0.01, 10.0)
        stats = run_trials(d, delta - 1, dec, delta, trials, seed)
        margin, _ = stats.lll()
        print(
            f"{n:>4} {delta:>5} {stats.extendable_count / trials:>14.3f} "
            f"{stats.worst_p_hat():>11.3f} {margin:>12.4g}"
        )


if __name__ == "__main__":
    main()
