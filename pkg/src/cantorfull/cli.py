"""Command-line entry points: deterministic batch runs with CSV/JSON artifacts.

Every command writes ``<out>/<command>.csv`` (and ``<command>.json`` with
``--json``); commands with something worth drawing also render a PNG figure
next to the delimited output unless ``--no-figure`` is given.  All asserted
comparisons are exact rational arithmetic; floats appear only in columns whose
names say so.  The same invocation always produces byte-identical artifacts.

Exit status: 0 when all asserted checks pass, 1 on a check failure (the report
is still written), 2 on a configuration error (including any rational given as
a decimal instead of "p/q").
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys as _sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import elekmonod, folner, fullgroup, groups, hyperfinite, lef, sofic, systems


def rational(text: str) -> Fraction:
    """Exact rational "p/q" or integer; decimals are rejected."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(
            f"{text!r}: rationals must be written as p/q or an integer"
        )
    try:
        if "/" in text:
            p, q = text.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: {exc}") from exc


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return str(v)  # "p/q" or "p"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def _write_csv(path: str, header: Sequence[str], rows: Sequence[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(r.get(k, "")) for k in header])


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (tuple, list, set, frozenset)):
        return [_jsonable(x) for x in sorted(v) if isinstance(v, (set, frozenset))] if isinstance(
            v, (set, frozenset)
        ) else [_jsonable(x) for x in v]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return repr(v)


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, name: str, header, rows, meta: dict, figure: Optional[Callable[[str], None]]):
    os.makedirs(args.out, exist_ok=True)
    _write_csv(os.path.join(args.out, f"{name}.csv"), header, rows)
    if args.json:
        _write_json(os.path.join(args.out, f"{name}.json"), {"meta": meta, "rows": rows})
    if figure is not None and not args.no_figure:
        figure(os.path.join(args.out, f"{name}.png"))


# -- systems shared by several commands ------------------------------------


def _binary_setup(with_swap: bool):
    sys_ = systems.odometer_system((2,))
    plus = fullgroup.constant_table(sys_, (1,))
    minus = fullgroup.constant_table(sys_, (-1,))
    gens = [plus, minus]
    if with_swap:
        gens.append(fullgroup.digit_swap_table(sys_))
    return sys_, gens


def _reduced_words(max_len: int):
    for length in range(1, max_len + 1):
        for tup in itertools.product(elekmonod.WORD_LETTERS, repeat=length):
            if all(a != b for a, b in zip(tup, tup[1:])):
                yield "".join(tup)


# -- commands ---------------------------------------------------------------


def cmd_entropy(args) -> int:
    n_max = args.n
    half = args.budget  # optional horizontal half-width override
    rows = elekmonod.entropy_table(n_max, h_half_width=half)
    ok = True
    for r in rows:
        r["bound_ok"] = r["count"] <= r["bound"]
        ok = ok and r["bound_ok"]
    header = [
        "n", "count", "bound", "bound_ok",
        "normalized_log_count", "normalized_log_bound", "majorant", "digest",
    ]
    meta = {"command": "entropy", "n_max": n_max, "seed": args.seed, "pass": ok}

    def fig(path):
        from . import plots

        plots.render_entropy(rows, path)

    _emit(args, "entropy", header, rows, meta, fig)
    return 0 if ok else 1


def cmd_freewords(args) -> int:
    rows = []
    ok = True
    words = list(_reduced_words(args.max_len))
    if args.budget is not None:
        words = words[: args.budget]
    for word in words:
        res = elekmonod.word_acts_nontrivially(word, args.radius)
        witnessed = res is not None
        ok = ok and witnessed
        rows.append(
            {
                "word": word,
                "witnessed": witnessed,
                "witness": res["witness"] if witnessed else "",
                "image": res["image"] if witnessed else "",
                "method": res["method"] if witnessed else "",
                "certified_radius": res["certified_radius"] if witnessed else "",
            }
        )
    header = ["word", "witnessed", "witness", "image", "method", "certified_radius"]
    meta = {
        "command": "freewords",
        "max_len": args.max_len,
        "radius": args.radius,
        "seed": args.seed,
        "pass": ok,
    }
    _emit(args, "freewords", header, rows, meta, None)
    return 0 if ok else 1


def cmd_sofic_check(args) -> int:
    sys_, gens = _binary_setup(with_swap=True)
    ball = fullgroup.subgroup_ball(gens, args.ball)
    action = sofic.build_theta(sys_, systems.odometer_zero(sys_), args.n, ball)
    report = sofic.check_injective_almost_action(action, ball, args.eps)
    row = {
        "n": args.n,
        "ball_radius": args.ball,
        "ball_size": len(ball),
        "carrier": action.size,
        "epsilon": args.eps,
        "mult_defect": report["conditions"]["mult_defect"],
        "min_displacement": report["conditions"]["min_displacement"],
        "identity_ok": report["conditions"]["identity_ok"],
        "pass": report["pass"],
    }
    header = list(row)
    meta = {"command": "sofic-check", "seed": args.seed, **{k: row[k] for k in row}}
    _emit(args, "sofic-check", header, [row], meta, None)
    return 0 if report["pass"] else 1


def cmd_quasitile(args) -> int:
    from . import boxes

    ctx = groups.int_vector_context(2)
    S = [tuple(v) for v in ctx.generators]
    A = boxes.Box.cube(2, 1, args.side)
    tiles = [boxes.Box.cube(2, 1, args.tile)]
    failure = None
    tiling = None
    cert = None
    try:
        tiling = hyperfinite.quasitile(
            ctx, A, tiles, args.eps, grid_first=not args.no_grid_first
        )
        cert = hyperfinite.folner_graph_partition(ctx, A, S, tiling, args.eps)
    except (hyperfinite.CertificateError, hyperfinite.GreedyFailure) as exc:
        failure = f"{type(exc).__name__}: {exc}"
    rows = (
        [
            {"tile": k, "center": c, "fresh_points": len(pts)}
            for k, c, pts in tiling.exact_tiles
        ]
        if tiling is not None
        else []
    )
    ok = cert is not None and tiling.coverage >= 1 - args.eps and cert.fraction < args.eps
    meta = {
        "command": "quasitile",
        "side": args.side,
        "tile": args.tile,
        "epsilon": args.eps,
        "coverage": tiling.coverage if tiling is not None else None,
        "blocks": len(cert.blocks) if cert is not None else None,
        "K": cert.K if cert is not None else None,
        "crossing_fraction": cert.fraction if cert is not None else None,
        "failure": failure,
        "seed": args.seed,
        "pass": ok,
    }

    def fig(path):
        from . import plots

        plots.render_quasitile(tiling, args.side, path)

    _emit(
        args,
        "quasitile",
        ["tile", "center", "fresh_points"],
        rows,
        meta,
        fig if tiling is not None else None,
    )
    return 0 if ok else 1


def cmd_folner_bound(args) -> int:
    ctx = groups.int_vector_context(args.d)
    S = [tuple(v) for v in ctx.generators]
    rows = []
    for l in range(1, args.l + 1):
        b = folner.folner_bound_zd(l, args.d, S, args.t_size, args.eps)
        rows.append({"l": l, **b})
    header = ["l", "m", "C", "k_statement", "k_proof", "bound_statement", "bound_proof"]
    meta = {
        "command": "folner-bound",
        "d": args.d,
        "t_size": args.t_size,
        "epsilon": args.eps,
        "seed": args.seed,
        "pass": True,
    }

    def fig(path):
        from . import plots

        plots.render_folner_bounds(
            [r["l"] for r in rows],
            [r["bound_statement"] for r in rows],
            [r["bound_proof"] for r in rows],
            path,
        )

    _emit(args, "folner-bound", header, rows, meta, fig)
    return 0


def _cycle_blocks(perm: Sequence[int], K: int) -> List[frozenset]:
    """Cut the cycles of a permutation into consecutive segments of length K."""
    seen = [False] * len(perm)
    blocks: List[frozenset] = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = perm[i]
        for j in range(0, len(cycle), K):
            blocks.append(frozenset(cycle[j : j + K]))
    return blocks


def cmd_folner_extract(args) -> int:
    sys_, _ = _binary_setup(with_swap=False)
    plus = fullgroup.constant_table(sys_, (1,))
    T = [plus]
    action = sofic.build_theta(sys_, systems.odometer_zero(sys_), args.n, T)
    graph = sofic.schreier_graph(action, T)
    K = max(2, -(-2 * args.eps.denominator // args.eps.numerator))
    blocks = _cycle_blocks(action.perm(plus), K)
    cert = hyperfinite.verify_certificate(graph, blocks, K, args.eps)
    report = folner.extract_folner_set(cert, action, T, args.ball, args.eps)
    bounds = folner.folner_bound_zd(1, 1, [(0,), (1,), (-1,)], len(T) + 1, args.eps)
    ok = (
        report.defect <= args.eps
        and report.size <= bounds["bound_proof"]
        and report.provenance["met"]
    )
    row = {
        "n": args.n,
        "ball_radius": args.ball,
        "epsilon": args.eps,
        "size": report.size,
        "defect": report.defect,
        "bound_statement": bounds["bound_statement"],
        "bound_proof": bounds["bound_proof"],
        "within_proof_bound": report.size <= bounds["bound_proof"],
        "pass": ok,
    }
    meta = {"command": "folner-extract", "seed": args.seed, **row}
    _emit(args, "folner-extract", list(row), [row], meta, None)
    return 0 if ok else 1


def _recursion_command(args, name: str, value_key: str) -> int:
    ctx = groups.int_vector_context(1)
    S = [tuple(v) for v in ctx.generators]
    steps = args.steps if args.budget is None else min(args.steps, args.budget)
    if value_key == "Phi":
        rows = folner.phi_recursion(ctx, S, args.eps, steps)
        header = ["i", "Phi", "phi", "epsilon_call", "witness", "certified"]
    else:
        rows = folner.psi_tilde_recursion(ctx, S, args.eps, steps)
        header = ["i", "Psi", "r", "epsilon_call"]
    meta = {
        "command": name,
        "steps": steps,
        "epsilon": args.eps,
        "seed": args.seed,
        "pass": True,
    }

    def fig(path):
        from . import plots

        plots.render_recursion(rows, value_key, path)

    _emit(args, name, header, rows, meta, fig)
    return 0


def cmd_phi_table(args) -> int:
    return _recursion_command(args, "phi-table", "Phi")


def cmd_psi_table(args) -> int:
    return _recursion_command(args, "psi-table", "Psi")


def cmd_lef(args) -> int:
    sys_, _ = _binary_setup(with_swap=False)
    gens = [fullgroup.constant_table(sys_, (1,)), fullgroup.digit_swap_table(sys_)]
    result = lef.minimal_model_size((2,), gens, args.ball, args.max_n)
    rows = [
        {
            "n": h["n"],
            "mult_exact": h["mult_exact"],
            "mult_worst": h["mult_worst"],
            "displacement_ok": h["displacement_ok"],
            "min_displacement": min(h["displacements"], default=Fraction(1)),
            "pass": h["pass"],
        }
        for h in result["history"]
    ]
    ok = result["minimal_n"] is not None
    header = ["n", "mult_exact", "mult_worst", "displacement_ok", "min_displacement", "pass"]
    meta = {
        "command": "lef",
        "ball_radius": args.ball,
        "ball_size": result["ball_size"],
        "minimal_n": result["minimal_n"],
        "seed": args.seed,
        "pass": ok,
    }
    _emit(args, "lef", header, rows, meta, None)
    return 0 if ok else 1


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorfull",
        description="Exact finite-approximation experiments for topological full groups.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="recorded in artifacts")
    common.add_argument("--budget", type=int, default=None, help="generic size cap")
    common.add_argument("--out", default=".", help="artifact directory")
    common.add_argument("--json", action="store_true", help="also write a JSON artifact")
    common.add_argument("--no-figure", action="store_true", help="skip PNG rendering")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="pattern counts vs the factorial bound")
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("freewords", parents=[common], help="nontriviality witnesses for reduced words")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--radius", type=int, default=32)
    p.set_defaults(func=cmd_freewords)

    p = sub.add_parser("sofic-check", parents=[common], help="injective almost action on the binary odometer")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--ball", type=int, default=2)
    p.add_argument("--eps", type=rational, default=Fraction(3, 4))
    p.set_defaults(func=cmd_sofic_check)

    p = sub.add_parser("quasitile", parents=[common], help="quasi-tiling plus graph partition certificate")
    p.add_argument("--side", type=int, default=512)
    p.add_argument("--tile", type=int, default=64)
    p.add_argument("--eps", type=rational, default=Fraction(1, 10))
    p.add_argument("--no-grid-first", action="store_true")
    p.set_defaults(func=cmd_quasitile)

    p = sub.add_parser("folner-bound", parents=[common], help="closed-form Folner function bounds")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--t-size", type=int, default=2)
    p.add_argument("--eps", type=rational, default=Fraction(1, 2))
    p.set_defaults(func=cmd_folner_bound)

    p = sub.add_parser("folner-extract", parents=[common], help="Folner set from a partition certificate")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--ball", type=int, default=2)
    p.add_argument("--eps", type=rational, default=Fraction(1, 2))
    p.set_defaults(func=cmd_folner_extract)

    p = sub.add_parser("phi-table", parents=[common], help="witness-size recursion table")
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--eps", type=rational, default=Fraction(1, 2))
    p.set_defaults(func=cmd_phi_table)

    p = sub.add_parser("psi-table", parents=[common], help="ball-volume recursion table")
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--eps", type=rational, default=Fraction(1, 2))
    p.set_defaults(func=cmd_psi_table)

    p = sub.add_parser("lef", parents=[common], help="minimal finite model passing both embedding conditions")
    p.add_argument("--ball", type=int, default=1)
    p.add_argument("--max-n", type=int, default=8)
    p.set_defaults(func=cmd_lef)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
