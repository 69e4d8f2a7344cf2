"""Command-line front end: ``pcg <command> [spec flags] [options]``.

Spec flags (pick one variant)::

    --numeric M [--losing 1,3] [--permissive] [--bounded-decrement]
    --field 0x11B                      (p = 2 bitmask)
    --field 1,2,0,1 --field-prime 3    (little-endian coefficients)
    --chain N,G    or    --N N --g G

Exit status: 0 success, 1 verification violations, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable

from . import finite_field as ff
from .analysis import (
    comparison_table,
    density_series,
    empirical_density,
    exact_losing_count,
    periodicity_check,
    write_density_csv,
    write_periodicity_csv,
)
from .chain_rsa import ChainSpec, chain_to_pcg, crt_losing_check, evaluate_chain, flatten_exponent
from .collapse import alignment_hypothesis_scan
from .errors import PCGError, SearchBudgetExceeded
from .game_core import (
    ChainRSA,
    FieldPCG,
    GameSpec,
    Move,
    NumericPCG,
    RegionTag,
    apply_move,
    invariant,
    invariant_label,
    is_legal,
    is_losing_predicate,
    legal_moves,
    normalize,
    oracle_for,
    outcome,
    region,
    repair_move,
    validate_position,
)
from .grundy import grundy_standard, grundy_table, product_sg, single_hole_check
from .schema import spec_to_dict
from .suites import SUITES


class UsageError(Exception):
    pass


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(x, 0) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_spec_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("game spec")
    g.add_argument("--numeric", type=int, metavar="M", help="numeric PCG modulus")
    g.add_argument("--losing", type=_csv_ints, default=None, metavar="R1,R2", help="losing residues (default 1)")
    g.add_argument("--permissive", action="store_true", help="allow non-unit heap labels")
    g.add_argument("--bounded-decrement", action="store_true", help="cap each decrement at m-1")
    g.add_argument("--field", metavar="POLY", help="irreducible polynomial: hex mask (p=2) or coefficient list")
    g.add_argument("--field-prime", type=int, default=2, metavar="P")
    g.add_argument("--chain", type=_csv_ints, metavar="N,G", help="exponent-chain game")
    g.add_argument("--N", type=int, help="chain modulus (with --g)")
    g.add_argument("--g", type=int, help="chain base (with --N)")


def _add_common(p: argparse.ArgumentParser, heaps: bool = True):
    if heaps:
        p.add_argument("--heaps", type=_csv_ints, metavar="H1,H2,...")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--csv", metavar="PATH", help="also write a CSV report")
    p.add_argument("--seed", type=int, default=0, help="seed for any sampling (default 0)")


def field_from_args(args) -> ff.FieldSpec:
    text = args.field
    if args.field_prime == 2 and "," not in text:
        return ff.field_from_hex(text)
    coeffs = _csv_ints(text)
    return ff.field_new(args.field_prime, len(coeffs) - 1, coeffs)


def spec_from_args(args, required: bool = True) -> GameSpec | None:
    chosen = [x is not None for x in (args.numeric, args.field, args.chain)] + [args.N is not None]
    if sum(chosen) > 1:
        raise UsageError("choose exactly one of --numeric, --field, --chain/--N")
    if args.numeric is not None:
        losing = frozenset(args.losing or [1])
        return NumericPCG(args.numeric, losing, unit_mode=not args.permissive,
                          bounded_decrement=args.bounded_decrement)
    if args.field is not None:
        return FieldPCG(field_from_args(args))
    if args.chain is not None:
        if len(args.chain) != 2:
            raise UsageError("--chain takes N,G")
        return ChainRSA(*args.chain)
    if args.N is not None:
        if args.g is None:
            raise UsageError("--N needs --g")
        return ChainRSA(args.N, args.g)
    if required:
        raise UsageError("a game spec is required (--numeric, --field or --chain)")
    return None


def _heaps(args, spec) -> tuple[int, ...]:
    if not args.heaps:
        raise UsageError("--heaps is required")
    if isinstance(spec, ChainRSA):
        chain_to_pcg(spec)
    return validate_position(spec, args.heaps)


def _oracle_outcome(spec, pos) -> str | None:
    try:
        return str(oracle_for(spec).outcome(pos))
    except (SearchBudgetExceeded, PCGError):
        return None


def _invariant_text(spec, pos):
    inv = invariant(spec, pos)
    if isinstance(spec, FieldPCG):
        return {"label": inv.index, "polynomial": str(inv)}
    return inv


def _emit(args, data: dict, lines: list[str], out):
    if args.json:
        print(json.dumps(data, indent=2, default=str), file=out)
    else:
        for line in lines:
            print(line, file=out)


def cmd_analyze(args, out) -> int:
    spec = spec_from_args(args)
    pos = _heaps(args, spec)
    data = {
        "spec": spec_to_dict(spec),
        "heaps": list(pos),
        "invariant": _invariant_text(spec, pos),
        "losing_predicate": is_losing_predicate(spec, pos),
        "region": str(region(spec, pos)),
        "outcome": str(outcome(spec, pos)),
        "oracle_outcome": _oracle_outcome(spec, pos),
        "legal_moves": len(legal_moves(spec, pos)),
    }
    lines = [f"spec:      {spec}", f"heaps:     {pos}", f"invariant: {data['invariant']}",
             f"predicate: {'losing' if data['losing_predicate'] else 'not losing'}",
             f"region:    {data['region']}", f"outcome:   {data['outcome']}",
             f"oracle:    {data['oracle_outcome']}", f"moves:     {data['legal_moves']}"]
    _emit(args, data, lines, out)
    return 0


def cmd_moves(args, out) -> int:
    spec = spec_from_args(args)
    pos = _heaps(args, spec)
    moves = legal_moves(spec, pos)
    data = {"heaps": list(pos), "moves": [{"heap_index": m.heap_index, "new_value": m.new_value,
                                           "result": list(apply_move(spec, pos, m))} for m in moves]}
    lines = [f"{len(moves)} legal moves from {pos}"]
    lines += [f"  heap {m.heap_index}: {pos[m.heap_index]} -> {m.new_value}" for m in moves]
    _emit(args, data, lines, out)
    return 0


def cmd_repair(args, out) -> int:
    spec = spec_from_args(args)
    pos = _heaps(args, spec)
    mv = repair_move(spec, pos)
    after = apply_move(spec, pos, mv)
    data = {"heaps": list(pos), "move": {"heap_index": mv.heap_index, "new_value": mv.new_value},
            "result": list(after), "result_losing": is_losing_predicate(spec, after)}
    _emit(args, data, [f"repair: heap {mv.heap_index}: {pos[mv.heap_index]} -> {mv.new_value}, now {after}"], out)
    return 0


def cmd_normalize(args, out) -> int:
    spec = spec_from_args(args)
    pos = _heaps(args, spec)
    norm = normalize(spec, pos)
    data = {"heaps": list(pos), "normalized": list(norm), "invariant": invariant_label(spec, pos)}
    lines = [f"normalized: {norm} (invariant {data['invariant']})"]
    if not is_losing_predicate(spec, norm):
        mv = repair_move(spec, norm)
        data["repair"] = {"heap_index": mv.heap_index, "new_value": mv.new_value,
                          "result": list(apply_move(spec, norm, mv))}
        lines.append(f"repair:     {norm[0]} -> {mv.new_value}")
    _emit(args, data, lines, out)
    return 0


def cmd_grundy(args, out) -> int:
    spec = spec_from_args(args)
    if args.table:
        table = grundy_table(spec, args.table)
        _emit(args, {"table": table}, [f"{h:>5}  {g}" for h, g in table.items()], out)
        return 0
    pos = _heaps(args, spec)
    data = {"heaps": list(pos), "grundy": grundy_standard(spec, pos)}
    lines = [f"classical Grundy: {data['grundy']}"]
    if region(spec, pos) is RegionTag.THRESHOLD and spec_to_dict(spec).get("losing", [1]) == [1]:
        sg = product_sg(spec, pos)
        hole = single_hole_check(spec, pos)
        data["product_sg"] = {"idx": sg.idx, "element": sg.element}
        data["single_hole"] = hole.holds
        lines += [f"product-SG:       idx {sg.idx} (element {sg.element})",
                  f"single hole:      {hole.holds}"]
    _emit(args, data, lines, out)
    return 0


def cmd_verify(args, out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        kwargs = {}
        if name == "compression":
            spec = spec_from_args(args, required=False)
            if spec is not None:
                kwargs.update(N=spec.N, g=spec.g)
            kwargs.update(bound=args.bound or 8, n=args.n or 3)
        elif name == "threshold":
            kwargs.update(bounded_decrement=args.bounded_decrement)
        results.append(SUITES[name](**kwargs))
    if args.json:
        print(json.dumps([r.to_dict() for r in results], indent=2), file=out)
    else:
        for r in results:
            print(r.summary(), file=out)
            if r.name == "compression":
                print(f"  {r.notes['total']} positions, {len(r.violations)} counterexamples", file=out)
            for k, v in r.notes.items():
                print(f"  {k}: {v}", file=out)
            for v in r.violations[:5]:
                print(f"  violation: {v}", file=out)
    return 0 if all(r.passed for r in results) else 1


def cmd_density(args, out) -> int:
    spec = spec_from_args(args)
    n = args.n or 2
    if args.bound:
        bounds = sorted({args.bound} | set(args.series or []))
        reports = density_series(spec, n, bounds) if args.series else [empirical_density(spec, n, args.bound)]
    else:
        reports = [exact_losing_count(spec, n)]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_density_csv(reports, fh)
    data = [{"spec": r.spec, "n": r.n, "bound": r.bound, "total": r.total, "losing": r.losing,
             "ratio": str(r.ratio), "predicted": str(r.predicted),
             "game_tree_losing": r.game_tree_losing} for r in reports]
    lines = [f"{r.spec} n={r.n} bound={r.bound}: {r.losing}/{r.total} = {r.ratio} "
             f"(predicted {r.predicted}, {float(r.ratio):.5f})" for r in reports]
    _emit(args, {"reports": data}, lines, out)
    return 0


def cmd_period(args, out) -> int:
    spec = spec_from_args(args)
    ctx = tuple(args.heaps or ())
    j = len(ctx) if args.j is None else args.j
    from .game_core import modulus

    x_max = args.x_max or 4 * modulus(spec)
    rep = periodicity_check(spec, ctx, j, x_max, use_fast_path=args.fast)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_periodicity_csv([rep], fh)
    data = {"context": list(ctx), "j": j, "x_range": list(rep.x_range), "violations": rep.violations,
            "rows": [{"x": r.x, "outcome_x": str(r.outcome_x), "outcome_x_plus_m": str(r.outcome_x_plus_m)}
                     for r in rep.rows]}
    lines = [f"context {ctx}, insert at {j}, x in {rep.x_range}: {len(rep.rows)} comparisons, "
             f"{len(rep.violations)} violations"]
    lines += [f"  x={r.x:>3}: {r.outcome_x} / x+m: {r.outcome_x_plus_m}" for r in rep.rows]
    _emit(args, data, lines, out)
    return 1 if rep.violations else 0


def cmd_collapse(args, out) -> int:
    m = args.m or 4
    scan = alignment_hypothesis_scan(m, args.M, args.bound or 100)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            scan.write_csv(fh)
    data = {"m": m, "M": args.M, "bound": scan.bound, "failures": scan.failures,
            "rows": [r.__dict__ for r in scan.rows]}
    lines = [f"divisor-ratio generation scan, m={m}, t in [{args.M}, {scan.bound}]",
             f"failures ({len(scan.failures)}): {scan.failures}"]
    _emit(args, data, lines, out)
    return 0


def cmd_chain(args, out) -> int:
    spec = spec_from_args(args)
    if not isinstance(spec, ChainRSA):
        raise UsageError("chain needs --chain N,G or --N/--g")
    heaps = tuple(args.heaps or ())
    if not heaps:
        raise UsageError("--heaps is required")
    e = evaluate_chain(spec, heaps)
    flat = flatten_exponent(heaps)
    data = {"N": spec.N, "g": spec.g, "k": spec.k, "heaps": list(heaps), "tower": e,
            "tower_losing": e == spec.g, "H": flat.value, "H_mod_k": flat.value % spec.k}
    lines = [f"N={spec.N} g={spec.g} k=ord_N(g)={spec.k}", f"E(h) = {e} ({'= g, losing' if e == spec.g else '!= g'})",
             f"H = {flat.value}, H mod k = {flat.value % spec.k}"]
    if spec.k >= 2:
        overall, parts = crt_losing_check(spec, heaps)
        data["crt"] = {"overall": overall, "components": parts}
        lines.append(f"CRT components: {parts} -> {overall}")
    _emit(args, data, lines, out)
    return 0


def cmd_table(args, out) -> int:
    N, g = (args.chain or [args.N or 15, args.g or 2])[:2]
    field_spec = field_from_args(args) if args.field else ff.aes_field()
    table = comparison_table(ChainSpec(N, g), field_spec, args.m or 6)
    if args.json:
        print(table.to_json(), file=out)
    else:
        print(table.to_markdown(), file=out)
    return 0


@dataclass
class Transcript:
    start: tuple[int, ...]
    turns: list[tuple[str, Move, tuple[int, ...]]] = field(default_factory=list)
    winner: str | None = None


def engine_move(spec: GameSpec, pos: tuple[int, ...]) -> Move:
    """Oracle-optimal move; the repair move is preferred among winning moves."""
    try:
        wins = oracle_for(spec).winning_moves(pos)
    except SearchBudgetExceeded:
        wins = None
    if wins is None:
        if region(spec, pos) is RegionTag.THRESHOLD and not is_losing_predicate(spec, pos):
            return repair_move(spec, pos)
        return legal_moves(spec, pos)[0]
    if not wins:
        return legal_moves(spec, pos)[0]
    try:
        rep = repair_move(spec, pos)
        if rep in wins:
            return rep
    except PCGError:
        pass
    return wins[0]


def _parse_move(text: str) -> Move | None:
    parts = text.replace(":", " ").replace(",", " ").split()
    if len(parts) != 2:
        return None
    try:
        return Move(int(parts[0]), int(parts[1]))
    except ValueError:
        return None


def play(spec: GameSpec, start, human_first: bool, ask: Callable[[str], str] = input,
         say: Callable[[str], None] = print) -> Transcript:
    """Alternate human and engine turns until someone cannot move (that player loses)."""
    pos = validate_position(spec, start)
    t = Transcript(pos)
    human = human_first
    while True:
        moves = legal_moves(spec, pos)
        if not moves:
            t.winner = "engine" if human else "human"
            say(f"{pos}: no legal moves, {'you lose' if human else 'engine loses'}")
            return t
        if human:
            while True:
                try:
                    reply = ask(f"{pos} your move (heap_index new_value, q to quit): ").strip()
                except EOFError:
                    reply = "q"
                if reply.lower() in {"q", "quit"}:
                    t.winner = "engine"
                    return t
                mv = _parse_move(reply)
                if mv is not None and is_legal(spec, pos, mv):
                    break
                say("illegal move, try again")
            who = "human"
        else:
            mv = engine_move(spec, pos)
            who = "engine"
            say(f"engine: heap {mv.heap_index}: {pos[mv.heap_index]} -> {mv.new_value}")
        pos = apply_move(spec, pos, mv)
        t.turns.append((who, mv, pos))
        human = not human


def cmd_play(args, out) -> int:
    spec = spec_from_args(args)
    pos = _heaps(args, spec)
    t = play(spec, pos, human_first=not args.engine_first, say=lambda s: print(s, file=out))
    print(f"winner: {t.winner}", file=out)
    return 0


COMMANDS = {
    "analyze": cmd_analyze, "moves": cmd_moves, "repair": cmd_repair, "normalize": cmd_normalize,
    "grundy": cmd_grundy, "verify": cmd_verify, "density": cmd_density, "period": cmd_period,
    "collapse": cmd_collapse, "chain": cmd_chain, "table": cmd_table, "play": cmd_play,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcg", description="Product-congruence game engine and verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in [("analyze", "invariant, region and outcome of a position"),
                        ("moves", "list legal moves"), ("repair", "one-move repair to a losing position"),
                        ("normalize", "compress to one heap, then repair"), ("chain", "evaluate an exponent chain")]:
        p = sub.add_parser(name, help=help_)
        _add_spec_flags(p)
        _add_common(p)

    p = sub.add_parser("grundy", help="classical Grundy and product-SG values")
    _add_spec_flags(p)
    _add_common(p)
    p.add_argument("--table", type=int, metavar="MAX", help="single-heap Grundy table up to MAX")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=[*SUITES, "all"])
    _add_spec_flags(p)
    _add_common(p, heaps=False)
    p.add_argument("--bound", type=int)
    p.add_argument("--n", type=int)

    p = sub.add_parser("density", help="exact or empirical losing density")
    _add_spec_flags(p)
    _add_common(p, heaps=False)
    p.add_argument("--n", type=int)
    p.add_argument("--bound", type=int, help="empirical density over labels <= bound")
    p.add_argument("--series", type=_csv_ints, help="extra bounds for a convergence series")

    p = sub.add_parser("period", help="ultimate periodicity in one heap")
    _add_spec_flags(p)
    _add_common(p)
    p.add_argument("--j", type=int, help="insertion index of the varying heap (default: last)")
    p.add_argument("--x-max", type=int)
    p.add_argument("--fast", action="store_true", help="classify Threshold positions by predicate")

    p = sub.add_parser("collapse", help="divisor-ratio generation scan")
    _add_common(p, heaps=False)
    p.add_argument("--m", type=int)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--bound", type=int)

    p = sub.add_parser("table", help="comparison table from live instances")
    _add_spec_flags(p)
    _add_common(p, heaps=False)
    p.add_argument("--m", type=int)

    p = sub.add_parser("play", help="play against the engine in the terminal")
    _add_spec_flags(p)
    _add_common(p)
    p.add_argument("--engine-first", action="store_true")
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, PCGError) as exc:
        print(f"pcg {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
