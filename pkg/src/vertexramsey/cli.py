"""Command-line interface: density computation, potential evaluation,
strategy export, interactive/scripted play, the exhaustive oracle, and
Monte-Carlo simulation sweeps.

Colors are 1-based on the command line and in all printed output; vertex ids
are 0-based arrival indices.  Rationals are written ``p/q`` (or an integer);
decimals are rejected everywhere except ``simulate``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from functools import partial
from typing import Optional, Sequence

from .graphs import Graph, enumerate_ordered_subgraphs, load_graph
from .rationals import NEG_INFINITY, format_rational, is_finite, parse_rational

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3


class ValidationFailure(Exception):
    pass


def _load(path: str) -> Graph:
    try:
        return load_graph(path)
    except (OSError, ValueError) as exc:
        raise ValidationFailure(f"cannot read graph file {path!r}: {exc}") from exc


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise ValidationFailure(f"malformed rational {text!r}: write p/q or an integer") from exc


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--graph", required=True, help="edge-list file for the target graph")
    p.add_argument("--colors", type=int, required=True, help="number of colors r >= 2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vertexramsey",
        description="Exact online vertex-Ramsey densities, optimal strategies, "
        "and simulation of online coloring of random graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="compute the online vertex-Ramsey density m1*(F,r)")
    _add_common(p)
    p.add_argument("--max-den", type=int, default=64, help="denominator bound for the root search")
    p.add_argument("--induced-opt", action="store_true",
                   help="restrict the subgraph family to induced subgraphs")
    p.add_argument("--jobs", type=int, default=1, help="worker bound (results identical for any value)")

    p = sub.add_parser("lambda", help="evaluate the decision value at a given theta")
    _add_common(p)
    p.add_argument("--theta", required=True, help="theta as p/q")

    p = sub.add_parser("strategy", help="export the painter priority list at theta*")
    _add_common(p)
    p.add_argument("--out", required=True, help="output file for the priority list")
    p.add_argument("--max-den", type=int, default=64)

    p = sub.add_parser("play", help="play the deterministic game on stdin/stdout")
    _add_common(p)
    p.add_argument("--mode", choices=["builder", "painter"], required=True)
    p.add_argument("--density", help="density restriction d as p/q")
    p.add_argument("--theta", help="generalized restriction theta as p/q")
    p.add_argument("--beta", help="generalized restriction beta as p/q")
    p.add_argument("--interactive", action="store_true", help="prompt a human opponent")
    p.add_argument("--list", dest="list_file", help="painter mode: import a priority list")

    p = sub.add_parser("oracle", help="exhaustive minimax for the bounded game")
    _add_common(p)
    p.add_argument("--density", required=True, help="density restriction d as p/q")
    p.add_argument("--max-steps", type=int, required=True)

    p = sub.add_parser("simulate", help="Monte-Carlo survival sweep over G(n,p)")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p-exp", required=True,
                   help="comma-separated exponents g; each point uses p = n^(-g)")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--painter", choices=["paint", "greedy"], default="paint")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--emit-points", help="also write two columns (log10 p, rate) to this file")
    return parser


# ---------------------------------------------------------------------------
# priority-list serialization


def _encode_graph_field(cls) -> str:
    h, edges = cls
    body = ",".join(f"{a}-{b}" for a, b in sorted(edges))
    return f"<{h};{body}>"


def _decode_graph_field(text: str):
    if not (text.startswith("<") and text.endswith(">")):
        raise ValueError(f"malformed graph field {text!r}")
    head, _, body = text[1:-1].partition(";")
    h = int(head)
    edges = frozenset(
        tuple(int(x) for x in pair.split("-")) for pair in body.split(",") if pair
    )
    return (h, edges)


def export_priority_list(plist, path: str):
    lines = []
    for e in plist.entries:
        lam = "-inf" if not is_finite(e.lam) else format_rational(e.lam)
        lines.append(
            f"{e.rank}  {e.color + 1}  lambda={lam}  flag={1 if e.flagged else 0}"
            f"  graph={_encode_graph_field(e.cls)}"
        )
    header = (
        f"# priority list: colors={plist.r} theta={format_rational(plist.theta)}"
        f" alpha={','.join(str(a + 1) for a in plist.alpha)}\n"
    )
    with open(path, "w") as fh:
        fh.write(header + "\n".join(lines) + "\n")


def import_priority_list(path: str):
    from .graphs import CanonicalKey, encode_oclass
    from .painter import PriorityEntry, PriorityList

    entries = []
    r = 0
    theta = None
    alpha: tuple = ()
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("colors="):
                        r = int(tok[7:])
                    elif tok.startswith("theta="):
                        theta = parse_rational(tok[6:])
                    elif tok.startswith("alpha="):
                        alpha = tuple(int(x) - 1 for x in tok[6:].split(","))
                continue
            fields = line.split()
            rank = int(fields[0])
            color = int(fields[1]) - 1
            lam_text = fields[2].split("=", 1)[1]
            lam = NEG_INFINITY if lam_text == "-inf" else parse_rational(lam_text)
            flag = fields[3].split("=", 1)[1] == "1"
            cls = _decode_graph_field(fields[4].split("=", 1)[1])
            entries.append(
                PriorityEntry(rank, color, cls, CanonicalKey(encode_oclass(cls)), lam, flag)
            )
    entries.sort(key=lambda e: e.rank)
    by_color = tuple(tuple(e for e in entries if e.color == s) for s in range(r))
    n = max(cls[0] for e in entries for cls in [e.cls])
    return PriorityList(
        F=Graph(max(1, n), frozenset()),  # placeholder; decisions need classes only
        r=r,
        theta=theta,
        alpha=alpha,
        entries=tuple(entries),
        by_color=by_color,
    )


# ---------------------------------------------------------------------------
# commands


def _cmd_density(args) -> int:
    from .density import RootNotFound, online_vertex_ramsey_density

    F = _load(args.graph)
    try:
        res = online_vertex_ramsey_density(
            F, args.colors, max_denominator=args.max_den, induced_only=args.induced_opt
        )
    except RootNotFound as exc:
        print(f"no rational root with denominator <= {args.max_den}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    print(
        f"m1_star = {format_rational(res.m1_star)}  "
        f"(theta_star = {format_rational(res.theta_star)})"
    )
    return EXIT_OK


def _cmd_lambda(args) -> int:
    from .weights import big_lambda

    F = _load(args.graph)
    theta = _rational(args.theta)
    out = big_lambda(F, args.colors, theta)
    val = "-inf" if not is_finite(out.value) else format_rational(out.value)
    alpha = ",".join(str(a + 1) for a in out.alpha_star)
    print(f"lambda = {val}  (alpha_star = {alpha})")
    return EXIT_OK


def _cmd_strategy(args) -> int:
    from .density import RootNotFound, online_vertex_ramsey_density
    from .painter import derive_priority_list

    F = _load(args.graph)
    try:
        res = online_vertex_ramsey_density(F, args.colors, max_denominator=args.max_den)
    except RootNotFound as exc:
        print(f"no rational root with denominator <= {args.max_den}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    plist, _ = derive_priority_list(F, args.colors, res.theta_star, res.alpha_star)
    export_priority_list(plist, args.out)
    print(f"wrote {len(plist.entries)} entries to {args.out}")
    return EXIT_OK


def _restriction_from_args(args):
    if args.density is not None:
        if args.theta is not None or args.beta is not None:
            raise ValidationFailure("--density is mutually exclusive with --theta/--beta")
        return {"density": _rational(args.density)}
    if args.theta is None or args.beta is None:
        raise ValidationFailure("specify --density p/q, or both --theta and --beta")
    return {"theta": _rational(args.theta), "beta": _rational(args.beta)}


def _cmd_play(args) -> int:
    F = _load(args.graph)
    r = args.colors
    if args.mode == "painter":
        return _play_painter(args, F, r)
    return _play_builder(args, F, r)


def _play_painter(args, F: Graph, r: int) -> int:
    from .density import online_vertex_ramsey_density
    from .engine import Board
    from .painter import derive_priority_list, paint_decide

    if args.list_file:
        plist = import_priority_list(args.list_file)
        if plist.r != r:
            raise ValidationFailure(
                f"priority list is for {plist.r} colors, --colors says {r}"
            )
    else:
        res = online_vertex_ramsey_density(F, r)
        plist, _ = derive_priority_list(F, r, res.theta_star, res.alpha_star)
    board = Board()
    prompt = "neighbors of the new vertex (space-separated ids, empty=none): "
    while True:
        if args.interactive:
            print(prompt, end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            break
        line = line.strip()
        if line in ("quit", "exit"):
            break
        try:
            nbrs = [int(x) for x in line.split()] if line else []
        except ValueError:
            print(f"cannot parse move {line!r}", file=sys.stderr)
            return EXIT_VALIDATION
        if any(not 0 <= u < board.n for u in nbrs):
            print(f"move references unknown vertices: {line!r}", file=sys.stderr)
            return EXIT_VALIDATION
        color = paint_decide(board, nbrs, plist)
        v = board.add_vertex(nbrs)
        board.set_color(v, color)
        print(f"vertex {v} color {color + 1}", flush=True)
    return EXIT_OK


def _play_builder(args, F: Graph, r: int) -> int:
    from .builder import StepBudgetExceeded, abuild_session
    from .density import online_vertex_ramsey_density

    restriction = _restriction_from_args(args)
    if "density" in restriction:
        theta = Fraction(1, 1) / restriction["density"]
        beta = Fraction(0)
    else:
        theta, beta = restriction["theta"], restriction["beta"]

    step = [0]

    def stdin_painter(board, nbrs) -> int:
        step[0] += 1
        edges = " ".join(f"{board.n}-{u}" for u in nbrs) or "-"
        print(f"step {step[0]} attach {board.n} edges {edges}", flush=True)
        if args.interactive:
            print(f"color for the new vertex (1..{r}): ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            raise EOFError("painter input ended")
        color = int(line.strip()) - 1
        if not 0 <= color < r:
            raise ValidationFailure(f"color out of range: {line.strip()}")
        return color

    try:
        result = abuild_session(F, r, theta, stdin_painter, beta=beta,
                                check_legality=False)
    except EOFError:
        print("input ended before the game finished", file=sys.stderr)
        return EXIT_VALIDATION
    except StepBudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RESOURCE
    print(f"builder wins after {result.steps} steps "
          f"(graph {result.winning_index} holds the monochromatic copy)")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    from .engine import GameConfig, ResourceBudgetExceeded, solve_game_exhaustive

    F = _load(args.graph)
    cfg = GameConfig(F, args.colors, density=_rational(args.density))
    try:
        result = solve_game_exhaustive(cfg, args.max_steps)
    except ResourceBudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RESOURCE
    print(f"winner: {'builder' if result.builder_wins else 'painter'}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    import math

    from .density import online_vertex_ramsey_density
    from .painter import derive_priority_list
    from .process import fast_greedy_painter, fast_priority_painter, sweep

    F = _load(args.graph)
    r = args.colors
    try:
        exponents = [float(x) for x in args.p_exp.split(",") if x]
    except ValueError:
        raise ValidationFailure(f"malformed exponent list {args.p_exp!r}")
    if not exponents:
        raise ValidationFailure("empty exponent list")
    if args.painter == "paint":
        res = online_vertex_ramsey_density(F, r)
        plist, _ = derive_priority_list(F, r, res.theta_star, res.alpha_star)
        factory = partial(fast_priority_painter, plist)
    else:
        factory = partial(fast_greedy_painter, F, r)
    result = sweep(F, r, args.n, exponents, args.trials, args.seed, factory,
                   jobs=args.jobs)
    sys.stdout.write(result.to_csv())
    if args.emit_points:
        with open(args.emit_points, "w") as fh:
            for row in result.rows:
                fh.write(f"{math.log10(row.p)!r} {row.rate!r}\n")
    return EXIT_OK


_COMMANDS = {
    "density": _cmd_density,
    "lambda": _cmd_lambda,
    "strategy": _cmd_strategy,
    "play": _cmd_play,
    "oracle": _cmd_oracle,
    "simulate": _cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    if args.colors < 1:
        print("--colors must be at least 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return _COMMANDS[args.command](args)
    except ValidationFailure as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
