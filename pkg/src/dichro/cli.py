"""Command-line frontend.

Subcommands: params, chi, decompose, classify, saviours, simulate, gen,
reduce, transform, verify.  Every randomized command takes (or defaults)
a seed; identical configuration yields identical output bytes.  Exit
codes: 0 success, 1 invariant violation found by verify, 2 malformed
input, 3 capacity bound exceeded.

The --threads flag (fallback: DICHRO_THREADS) caps worker parallelism.
All computations currently run on one worker, which trivially satisfies
the determinism-at-any-thread-count requirement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import coloring, decomposition, params, randproc, transforms
from .digraph import (
    Digraph,
    complement,
    find_directed_cycle,
    parse_arc_list,
    subset_is_acyclic,
    write_arc_list,
)
from .errors import CapacityError, InputError, ParseError
from .params import default_attachment_radius, default_sparsity_parameter
from .prng import Stream, mix64

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _read_digraph(path: str) -> Digraph:
    try:
        text = Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}", 1) from None
    return parse_arc_list(text)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="ascii")


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _delta_default(d: Digraph) -> int:
    return params.degree_profile(d).delta_max if d.n else 0


# -- params -------------------------------------------------------------------


def cmd_params(args) -> int:
    d = _read_digraph(args.file)
    profile = params.degree_profile(d)
    sparsity_d = (
        args.d if args.d is not None else default_sparsity_parameter(profile.delta_max)
    )
    report = params.classify_sparsity(d, sparsity_d)
    biclique, _ = params.biclique_number(d, exact_bound=args.bound)
    payload = {
        "n": d.n,
        "m": d.m,
        "delta_max": profile.delta_max,
        "delta_tilde_sq": profile.delta_tilde_sq,
        "delta_plus": profile.delta_plus,
        "delta_min": profile.delta_min,
        "biclique_number": biclique,
        "sparse": sorted(report.sparse),
        "dense": sorted(report.dense),
    }
    if args.json:
        _emit(_dump_json(payload), None)
    else:
        print(f"n = {d.n}, m = {d.m}")
        print(
            "delta_max = {delta_max}, delta_tilde^2 = {delta_tilde_sq}, "
            "delta_plus = {delta_plus}, delta_min = {delta_min}".format(**payload)
        )
        print(f"biclique number = {biclique}")
        print(f"d = {sparsity_d:.4f}: {len(report.sparse)} sparse, "
              f"{len(report.dense)} dense")
    return EXIT_OK


# -- chi ----------------------------------------------------------------------


def cmd_chi(args) -> int:
    d = _read_digraph(args.file)
    if args.greedy:
        k = args.k if args.k is not None else _delta_default(d) + 1
        order = sorted(range(d.n))
        outcome = coloring.greedy_dicolour(d, order, k, coloring.OUT_AVOID)
        if args.json:
            payload = {
                "mode": "greedy",
                "k": k,
                "chi": None,
                "failed_at": outcome.failed_at,
                "colouring": list(outcome.colouring.colours) if outcome.ok else None,
            }
            _emit(_dump_json(payload), None)
        elif outcome.ok:
            used = max(c for c in outcome.colouring.colours if c)
            print(f"greedy colours = {used}")
            for v, c in enumerate(outcome.colouring.colours):
                print(f"{v} {c}")
        else:
            print(f"greedy failed at vertex {outcome.failed_at}")
        return EXIT_OK
    result = coloring.dichromatic_number(
        d, mode="exact", exact_bound=args.bound, force=args.force
    )
    if args.json:
        payload = {
            "mode": "exact",
            "k": result.value,
            "chi": result.value,
            "failed_at": None,
            "colouring": list(result.colouring.colours),
            "certificate": {
                "kind": result.certificate[0],
                "detail": list(result.certificate[1])
                if result.certificate[0] == "clique"
                else result.certificate[1],
            },
        }
        _emit(_dump_json(payload), None)
    else:
        print(f"chi = {result.value}")
        for v, c in enumerate(result.colouring.colours):
            print(f"{v} {c}")
    return EXIT_OK


# -- decompose / classify / saviours -----------------------------------------


def _decomposition_for(args, d: Digraph):
    delta_max = _delta_default(d)
    eps = args.eps
    sparsity_d = (
        args.d if args.d is not None else default_sparsity_parameter(delta_max)
    )
    return decomposition.dense_decomposition(d, eps, sparsity_d)


def cmd_decompose(args) -> int:
    d = _read_digraph(args.file)
    dec = _decomposition_for(args, d)
    payload = {
        "parts": [sorted(p) for p in dec.parts],
        "sparse": sorted(dec.sparse),
        "flags": dec.flags(),
    }
    if args.json:
        _emit(_dump_json(payload), None)
    else:
        print(f"t = {dec.t}, |S| = {len(dec.sparse)}")
        for i, part in enumerate(dec.parts):
            diag = dec.diagnostics[i]
            print(
                f"X_{i + 1} (seed {diag.seed}): size {diag.size}, "
                f"out-boundary {diag.out_boundary}, in-boundary {diag.in_boundary}"
            )
        print("flags:", json.dumps(dec.flags(), sort_keys=True))
    return EXIT_OK


def cmd_classify(args) -> int:
    d = _read_digraph(args.file)
    dec = _decomposition_for(args, d)
    delta = args.delta if args.delta is not None else _delta_default(d)
    rows = []
    for i, part in enumerate(dec.parts):
        cls = decomposition.classify_quasi_biclique(d, part, delta)
        rows.append(
            {
                "part": i,
                "size": len(part),
                "type": cls.type,
                "pair": list(cls.pair) if cls.pair else None,
                "triangle": list(cls.triangle) if cls.triangle else None,
                "special_vertex": cls.special_vertex,
                "split": [list(x) for x in cls.split] if cls.split else None,
            }
        )
    if args.json:
        _emit(_dump_json({"delta": delta, "parts": rows}), None)
    else:
        for row in rows:
            print(f"X_{row['part'] + 1}: size {row['size']}, type {row['type']}")
    return EXIT_OK


def cmd_saviours(args) -> int:
    d = _read_digraph(args.file)
    dec = _decomposition_for(args, d)
    delta = args.delta if args.delta is not None else _delta_default(d)
    radius = (
        args.r if args.r is not None else default_attachment_radius(_delta_default(d))
    )
    rows = []
    for i, part in enumerate(dec.parts):
        cls = decomposition.classify_quasi_biclique(d, part, delta)
        if cls.type is None:
            rows.append({"part": i, "type": None, "saviours": [], "tuples": None})
            continue
        saviours = decomposition.find_saviours(d, part, radius, delta, cls)
        coll = decomposition.build_saviour_tuples(d, part, saviours, radius, delta)
        rows.append(
            {
                "part": i,
                "type": cls.type,
                "saviours": [
                    {
                        "vertex": rec.vertex,
                        "condition": rec.condition,
                        "witnesses": list(rec.witnesses),
                    }
                    for rec in saviours
                ],
                "tuples": {
                    "kind": coll.kind,
                    "entries": [list(t) for t in coll.tuples],
                    "target_lower_bound": coll.target_lower_bound,
                    "no_saviour_warning": coll.no_saviour_warning,
                },
            }
        )
    if args.json:
        _emit(_dump_json({"delta": delta, "r": radius, "parts": rows}), None)
    else:
        for row in rows:
            n_savs = len(row["saviours"])
            print(f"X_{row['part'] + 1}: type {row['type']}, {n_savs} saviours")
            if row["tuples"]:
                print(
                    f"  tuples: kind {row['tuples']['kind']}, "
                    f"{len(row['tuples']['entries'])} disjoint "
                    f"(target {row['tuples']['target_lower_bound']})"
                )
    return EXIT_OK


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args) -> int:
    d = _read_digraph(args.file)
    delta = args.delta if args.delta is not None else _delta_default(d)
    k = args.k if args.k is not None else max(1, delta - 1)
    dec = _decomposition_for(args, d)
    radius = (
        args.r if args.r is not None else default_attachment_radius(_delta_default(d))
    )
    csv_rows: list[str] = []

    def per_trial(t, outcome):
        if args.csv:
            flags = ",".join(
                "1" if f else "0" for f in (outcome.part_flags or ())
            )
            base = f"{t},{len(outcome.uncoloured)},{1 if outcome.extendable else 0}"
            csv_rows.append(base + ("," + flags if flags else ""))

    stats = randproc.run_trials(
        d, k, dec, delta, args.trials, args.seed, radius=radius, per_trial=per_trial
    )
    if args.csv:
        header = "trial,v_psi,extendable" + "".join(
            f",part_{i}" for i in range(dec.t)
        )
        _emit("\n".join([header] + csv_rows) + "\n", None)
        return EXIT_OK
    margin, satisfied = stats.lll()
    payload = {
        "trials": stats.trials,
        "k": stats.k,
        "delta": stats.delta,
        "seed": stats.seed,
        "dep_degree": stats.dep_degree,
        "extendable_count": stats.extendable_count,
        "sparse": {
            str(s): {
                "p_a": ev.p_hat,
                "wilson": list(ev.wilson()),
                "m_s_mean": stats.m_s_strict_stats[s].mean,
                "m_s_variance": stats.m_s_strict_stats[s].variance,
            }
            for s, ev in stats.sparse_events.items()
        },
        "parts": [
            {
                "p_b": ev.p_hat,
                "wilson": list(ev.wilson()),
                "tuple_kind": stats.tuple_kinds[i],
                "tuple_count": stats.tuple_counts[i],
                "m_i_mean": stats.m_i_stats[i].mean,
                "m_i_variance": stats.m_i_stats[i].variance,
            }
            for i, ev in enumerate(stats.part_events)
        ],
        "lll": {"margin": margin, "satisfied": satisfied},
    }
    if args.json:
        _emit(_dump_json(payload), None)
    else:
        print(
            f"{stats.trials} trials, k = {stats.k}, delta = {stats.delta}, "
            f"seed = {stats.seed}"
        )
        print(f"extendable in {stats.extendable_count}/{stats.trials} trials")
        print(f"worst event p = {stats.worst_p_hat():.4f}, "
              f"LLL margin {margin:.4g} ({'<=1' if satisfied else '>1'})")
    return EXIT_OK


# -- generators / transforms --------------------------------------------------


def cmd_gen(args) -> int:
    if args.family == "hk":
        d = transforms.make_hk(args.k)
    elif args.family == "bk-tight":
        d = transforms.make_bk_tight()
    elif args.family == "obstruction":
        d, _ = transforms.make_k_obstruction(args.k, args.sub_kind, args.split)
    elif args.family == "random":
        d = transforms.random_digraph(args.n, args.p_digon, args.p_arc, args.seed)
    else:
        raise InputError(f"unknown family {args.family!r}")
    _emit(write_arc_list(d), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    d = _read_digraph(args.file)
    out, _ = transforms.np_gadget_reduction(d, args.k)
    _emit(write_arc_list(out), args.output)
    return EXIT_OK


def cmd_transform(args) -> int:
    if args.transformation != "delta-min":
        raise InputError(f"unknown transformation {args.transformation!r}")
    d = _read_digraph(args.file)
    out, a_set, b_set = transforms.delta_min_transform(d)
    if args.json:
        payload = {
            "a": sorted(a_set),
            "b": sorted(b_set),
            "arc_list": write_arc_list(out),
        }
        _emit(_dump_json(payload), args.output)
    else:
        _emit(write_arc_list(out), args.output)
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def _verify_digraph(d: Digraph, text: str, label: str, seed: int) -> list[str]:
    problems: list[str] = []

    def check(ok: bool, what: str):
        if not ok:
            problems.append(f"{label}: {what}")

    canonical = write_arc_list(d)
    check(parse_arc_list(canonical) == d, "round-trip through writer changed the digraph")
    check(text == canonical, "file is not byte-identical to its canonical form")

    if d.n:
        profile = params.degree_profile(d)
        check(sum(profile.out_degrees) == d.m, "sum of out-degrees != m")
        check(sum(profile.in_degrees) == d.m, "sum of in-degrees != m")
        for v in range(d.n):
            union = (d.out_masks[v] | d.in_masks[v]).bit_count()
            inter = (d.out_masks[v] & d.in_masks[v]).bit_count()
            if profile.out_degrees[v] + profile.in_degrees[v] - inter != union:
                check(False, f"degree identity fails at {v}")
                break
    check(complement(complement(d)) == d, "complement is not an involution")
    check(
        (find_directed_cycle(d) is None) == subset_is_acyclic(d, (1 << d.n) - 1),
        "cycle detection disagrees with sink peeling",
    )

    if d.n:
        stream = Stream(mix64(seed))
        sample = {v for v in range(d.n) if stream.below(2)}
        out_b, in_b = params.boundary_sizes(d, sample)
        inside = params.arcs_inside(d, sum(1 << v for v in sample))
        total_out = sum(d.out_degree(v) for v in sample)
        check(out_b == total_out - inside, "boundary identity fails")
        check(params.boundary_sizes(d, range(d.n)) == (0, 0), "full-set boundary nonzero")

        delta_max = params.degree_profile(d).delta_max
        order = sorted(range(d.n))
        greedy = coloring.greedy_dicolour(d, order, delta_max + 1)
        check(greedy.ok, "greedy out-avoid failed with delta_max+1 colours")
        if greedy.ok:
            ok, _ = coloring.is_dicolouring(d, greedy.colouring)
            check(ok, "greedy produced an invalid colouring")

        k = max(1, delta_max)
        for t in range(3):
            psi = randproc.random_colouring(d, k, seed + t)
            outcome = randproc.uncolour_step(d, psi, k)
            ok, _ = coloring.is_dicolouring(d, outcome.phi)
            check(ok, f"uncolour step yielded an invalid colouring (trial {t})")

    if 1 <= d.n <= 400:
        delta_max = params.degree_profile(d).delta_max
        dec = decomposition.dense_decomposition(
            d, 0.01, default_sparsity_parameter(delta_max)
        )
        covered = set(dec.sparse)
        total = 0
        for p in dec.parts:
            covered |= p
            total += len(p)
        check(
            covered == set(range(d.n)) and total + len(dec.sparse) == d.n,
            "decomposition does not partition V",
        )
        if not dec.small_delta_overlap:
            check(dec.fixpoint_ok, "fixpoint violated without small-delta warning")
            check(dec.sparse_ok, "sparse set violated without small-delta warning")

    if 1 <= d.n <= 12:
        result = coloring.dichromatic_number(d)
        biclique, _ = params.biclique_number(d)
        check(biclique <= result.value, "chi below biclique number")
        ub = coloring.upper_bound_dicolouring(d)
        check(result.value <= ub.k, "chi above greedy upper bound")
        ok, _ = coloring.is_dicolouring(d, result.colouring)
        check(ok, "exact witness invalid")
        report = coloring.brooks_classify(d)
        check(report.case != coloring.UNCLASSIFIED, "Brooks classification failed")
    return problems


def cmd_verify(args) -> int:
    paths: list[Path] = []
    for target in args.targets:
        p = Path(target)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.d")))
        else:
            paths.append(p)
    if not paths:
        print("verify: no input files", file=sys.stderr)
        return EXIT_INPUT
    problems: list[str] = []
    for path in paths:
        text = path.read_text(encoding="ascii")
        d = parse_arc_list(text)
        issues = _verify_digraph(d, text, path.name, args.seed)
        status = "ok" if not issues else "FAIL"
        print(f"{path.name}: n={d.n} m={d.m} {status}")
        problems.extend(issues)
    for issue in problems:
        print(f"violation: {issue}", file=sys.stderr)
    return EXIT_VIOLATION if problems else EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dichro", description="digraph dicolouring toolkit"
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("DICHRO_THREADS", "1")),
        help="cap on worker parallelism (results are identical at any value)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="degree parameters and sparsity report")
    p.add_argument("file")
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--bound", type=int, default=params.EXACT_BICLIQUE_BOUND)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("chi", help="dichromatic number")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--greedy", action="store_true")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--bound", type=int, default=coloring.EXACT_CHI_BOUND)
    p.add_argument("--force", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chi)

    for name, func in (
        ("decompose", cmd_decompose),
        ("classify", cmd_classify),
        ("saviours", cmd_saviours),
    ):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--eps", type=float, default=0.01)
        p.add_argument("--d", type=float, default=None)
        if name != "decompose":
            p.add_argument("--delta", type=int, default=None)
        if name == "saviours":
            p.add_argument("--r", type=float, default=None)
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", help="random colour-and-uncolour trials")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--delta", type=int, default=None)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="generate a named family")
    gen_sub = p.add_subparsers(dest="family", required=True)
    g = gen_sub.add_parser("hk")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("-o", "--output", default=None)
    g = gen_sub.add_parser("bk-tight")
    g.add_argument("-o", "--output", default=None)
    g = gen_sub.add_parser("obstruction")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--sub-kind", choices=("i", "ii", "iii"), required=True)
    g.add_argument("--split", type=int, required=True)
    g.add_argument("-o", "--output", default=None)
    g = gen_sub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p-digon", type=float, default=0.0)
    g.add_argument("--p-arc", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="hardness gadget reduction")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("transform")
    p.add_argument("transformation", choices=("delta-min",))
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="run the invariant suite over a corpus")
    p.add_argument("targets", nargs="+")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
