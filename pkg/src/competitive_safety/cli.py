"""Command-line front end.

Exit codes: 0 ok, 1 internal error, 2 bad input, 3 check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import auction, load_balancing as lb
from .equilibria import compare_safety_vs_nash, pure_equilibria, strictly_mixed_equilibrium
from .gamefile import game_to_dict, load_game
from .games import (
    BimatrixGame,
    GameError,
    as_fraction,
    format_fraction,
    make_aumann_game,
    make_cyclic_voting_game,
    make_leader_election,
    make_load_balancing_2x2,
    make_section51_game,
)
from .safety import safety_level, safety_level_lp
from .set_theoretic import (
    full_support_diagnostic,
    make_set_theoretic,
    strictly_mixed_equilibrium_support_enum,
    transplant_safety_value,
)

EXIT_OK, EXIT_INTERNAL, EXIT_BAD_INPUT, EXIT_CHECK_FAILED = 0, 1, 2, 3
DEFAULT_SEED = 42


class BadInput(Exception):
    pass


# ---------------------------------------------------------------- rendering


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def render_rows(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    columns = list(rows[0])
    if fmt == "json":
        return json.dumps([{k: _jsonable(r[k]) for k in columns} for r in rows], indent=2) + "\n"
    cells = [[_cell(r[k]) for k in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


# ---------------------------------------------------------------- inputs


def _number_list(text: str, conv, what: str) -> list:
    try:
        values = [conv(part) for part in text.split(",") if part.strip()]
    except (ValueError, GameError) as exc:
        raise BadInput(f"could not parse {what} {text!r}: {exc}") from None
    if not values:
        raise BadInput(f"empty {what}")
    return values


def _int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text} is not an integer")
    return int(value)


PRESETS = ("section51", "aumann", "leader", "loadbalance", "voting")


def _preset_game(name: str, params: str | None) -> BimatrixGame:
    values = _number_list(params, as_fraction, "--params") if params else None
    try:
        if name == "section51":
            return make_section51_game()
        if name == "aumann":
            return make_aumann_game()
        if name == "voting":
            return make_cyclic_voting_game()
        if name == "leader":
            values = values or [1, 1, 1, 1]
            if len(values) != 4:
                raise BadInput("leader preset takes --params a,b,c,d")
            return make_leader_election(*values)
        if name == "loadbalance":
            values = values or [Fraction(4, 5), 1]
            if len(values) not in (1, 2):
                raise BadInput("loadbalance preset takes --params alpha[,X]")
            return make_load_balancing_2x2(*values)
    except GameError as exc:
        raise BadInput(str(exc)) from None
    raise BadInput(f"unknown preset {name!r}")


def _load_input_game(args) -> BimatrixGame:
    if args.game:
        try:
            text = Path(args.game).read_text()
        except OSError as exc:
            raise BadInput(f"cannot read {args.game}: {exc}") from None
        try:
            return load_game(text)
        except GameError as exc:
            raise BadInput(str(exc)) from None
    return _preset_game(args.preset or "section51", args.params)


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> tuple[str, int]:
    g = _load_input_game(args)
    players = [args.player] if args.player else [1, 2]
    if g.shape != (2, 2):
        reports = [safety_level_lp(g, p) for p in players]
        if args.format == "json":
            return json.dumps({"game": game_to_dict(g), "safety": [r.to_json() for r in reports]}, indent=2) + "\n", 0
        rows = [
            {"player": r.player, "safety_strategy": list(r.strategy.probs), "safety_value": r.value, "safety_kind": r.kind}
            for r in reports
        ]
        return render_rows(rows, args.format), EXIT_OK

    comparisons = [compare_safety_vs_nash(g, p) for p in players]
    eq = strictly_mixed_equilibrium(g)
    pures = pure_equilibria(g)
    if args.format == "json":
        doc = {
            "game": game_to_dict(g),
            "comparisons": [c.to_json() for c in comparisons],
            "strictly_mixed_equilibrium": None if eq is None else eq.to_json(),
            "pure_equilibria": [[g.labels[0][pr.s1.support[0]], g.labels[1][pr.s2.support[0]]] for pr in pures],
        }
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    rows = [
        {
            "player": c.player,
            "safety_strategy": list(c.safety_strategy.probs),
            "safety_value": c.safety_value,
            "safety_kind": c.safety_kind,
            "nash_value": c.nash_value,
            "nash_kind": c.nash_kind,
            "equal": c.equal,
            "ratio": c.ratio,
        }
        for c in comparisons
    ]
    out = render_rows(rows, args.format)
    if args.format == "table":
        if eq is not None:
            out += f"strictly mixed equilibrium: p={format_fraction(eq.p)} q={format_fraction(eq.q)}\n"
        else:
            out += "strictly mixed equilibrium: none\n"
        cells = ", ".join(f"({g.labels[0][pr.s1.support[0]]},{g.labels[1][pr.s2.support[0]]})" for pr in pures)
        out += f"pure equilibria: {cells or 'none'}\n"
    return out, EXIT_OK


def cmd_set_theoretic(args) -> tuple[str, int]:
    if args.game:
        g = _load_input_game(args)
    else:
        g = _preset_game(args.preset or "voting", args.params)
    try:
        st = make_set_theoretic(g)
        eq = strictly_mixed_equilibrium_support_enum(st)
    except GameError as exc:
        raise BadInput(str(exc)) from None
    if eq is None:
        msg = f"no full-support equilibrium: {full_support_diagnostic(st)}\n"
        return msg, EXIT_OK
    rows = []
    for player in (1, 2):
        rep = transplant_safety_value(st, eq, player)
        lp = safety_level_lp(g, player)
        rows.append(
            {
                "player": player,
                "equilibrium_strategy": list(eq.profile.of(player).probs),
                "equilibrium_payoff": eq.payoffs[player - 1],
                "transplanted_strategy": list(rep.strategy.probs),
                "transplanted_value": rep.value,
                "lp_safety_value": lp.value,
                "equal": rep.value == eq.payoffs[player - 1] == lp.value,
                "multiple": eq.multiple,
            }
        )
    return render_rows(rows, args.format), EXIT_OK


def _family(args) -> lb.LoadBalancingFamily:
    alphas = _number_list(args.alphas, as_fraction, "--alphas")
    try:
        X = as_fraction(args.X)
        return lb.LoadBalancingFamily(tuple(alphas), X)
    except GameError as exc:
        raise BadInput(str(exc)) from None


def cmd_loadbalance(args) -> tuple[str, int]:
    fam = _family(args)
    ns = _number_list(args.n, _int, "--n")
    try:
        rows = lb.ratio_table(fam, ns)
    except GameError as exc:
        raise BadInput(str(exc)) from None
    return render_rows([r.to_row() for r in rows], args.format), EXIT_OK


def cmd_auction(args) -> tuple[str, int]:
    ns = _number_list(args.n, _int, "--n")
    try:
        v = float(args.v)
    except ValueError:
        raise BadInput(f"invalid valuation {args.v!r}") from None
    rows = []
    try:
        for n in ns:
            rep = auction.safety_report(v, n)
            row = rep.to_row()
            if args.samples:
                row["mc_mean"], row["mc_stderr"] = auction.monte_carlo_payoff(
                    v, auction.truthful, n, args.samples, args.seed
                )
            rows.append(row)
    except GameError as exc:
        raise BadInput(str(exc)) from None
    return render_rows(rows, args.format), EXIT_OK


def run_checks(seed: int = DEFAULT_SEED) -> list[tuple[str, bool, str]]:
    """Every preset against its reference number; (name, passed, detail)."""
    results = []

    def record(name, ok, detail):
        results.append((name, bool(ok), detail))

    g = make_section51_game()
    c = compare_safety_vs_nash(g, 1)
    eq = strictly_mixed_equilibrium(g)
    record(
        "section51: safety 50, nash 52, q=1/5, p=1/2",
        c.safety_value == 50 and c.nash_value == 52 and eq.q == Fraction(1, 5) and eq.p == Fraction(1, 2),
        f"safety={format_fraction(c.safety_value)} nash={format_fraction(c.nash_value)} "
        f"q={format_fraction(eq.q)} p={format_fraction(eq.p)}",
    )
    c = compare_safety_vs_nash(make_aumann_game(), 1)
    record("aumann: safety = nash = 3", c.safety_value == c.nash_value == 3,
           f"safety={format_fraction(c.safety_value)} nash={format_fraction(c.nash_value)}")
    c = compare_safety_vs_nash(make_leader_election(1, 1, 1, 1), 1)
    record("leader 1,1,1,1: safety = nash = 1/2", c.safety_value == c.nash_value == Fraction(1, 2),
           f"safety={format_fraction(c.safety_value)} nash={format_fraction(c.nash_value)}")
    alpha = Fraction(4, 5)
    c = compare_safety_vs_nash(make_load_balancing_2x2(alpha, 1), 1)
    expected = Fraction(3, 2) * alpha / (1 + alpha)
    record("load balancing 2x2 alpha=4/5: safety = nash = 2/3",
           c.safety_value == c.nash_value == expected,
           f"safety={format_fraction(c.safety_value)} nash={format_fraction(c.nash_value)}")

    voting = make_cyclic_voting_game()
    st = make_set_theoretic(voting)
    seq = strictly_mixed_equilibrium_support_enum(st)
    ok = seq is not None and all(
        transplant_safety_value(st, seq, p).value == seq.payoffs[p - 1] == safety_level_lp(voting, p).value
        for p in (1, 2)
    )
    record("voting: transplanted value = equilibrium payoff = LP value", ok,
           "" if seq is None else f"payoffs={format_fraction(seq.payoffs[0])},{format_fraction(seq.payoffs[1])}")

    row = lb.ratio_table(lb.LoadBalancingFamily.binary(0.5), [10_000])[0]
    record("loadbalance alpha=0.5 n=10000: ratio within 1% of 9/8",
           abs(row.ratio - 1.125) <= 0.01 * 1.125, f"ratio={row.ratio!r}")
    _, bound = lb.cor1_strategy(Fraction(1, 3))
    record("two links alpha=1/3: combined strategy bound 4/3", bound == Fraction(4, 3),
           f"bound={format_fraction(bound)}")
    fam = lb.LoadBalancingFamily((1.0, 0.6, 0.3))
    row = lb.ratio_table(fam, [10_000])[0]
    k = lb.k_regularity(fam)
    record("loadbalance alphas=1,0.6,0.3 n=10000: ratio <= k-regularity + 1%",
           row.ratio <= k * 1.01, f"ratio={row.ratio!r} k={k!r}")

    r = auction.competitive_ratio(10**6)
    record("auction n=10^6: ratio within 1e-5 of e", abs(r - math.e) <= 1e-5, f"ratio={r!r}")
    record("auction n=2: ratio 2", auction.competitive_ratio(2) == 2.0, f"ratio={auction.competitive_ratio(2)!r}")
    mean, se = auction.monte_carlo_payoff(0.9, auction.truthful, 3, 100_000, seed)
    target = auction.equilibrium_expected_payoff(0.9, 3)
    record("auction v=0.9 n=3: simulated payoff within 4 se of v^n/n",
           abs(mean - target) <= 4 * se, f"mean={mean!r} se={se!r} closed={target!r}")
    return results


def cmd_check(args) -> tuple[str, int]:
    results = run_checks(args.seed)
    if args.format == "table":
        lines = [f"{'PASS' if ok else 'FAIL'}  {name}  [{detail}]" for name, ok, detail in results]
        out = "\n".join(lines) + "\n"
    else:
        out = render_rows([{"check": n, "passed": ok, "detail": d} for n, ok, d in results], args.format)
    failed = sum(not ok for _, ok, _ in results)
    return out, EXIT_CHECK_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------- parser


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("table", "csv", "json"), default=default("table"))
    parser.add_argument("--seed", type=int, default=default(DEFAULT_SEED))
    parser.add_argument("--output", default=default(None), help="write output to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compsafety", description="Safety-level strategies versus Nash equilibrium payoffs."
    )
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="maximin value vs. equilibrium payoff of a game")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--game", help="game JSON file")
    src.add_argument("--preset", choices=PRESETS)
    p.add_argument("--params", help="preset parameters, e.g. 1,1,1,1 for leader")
    p.add_argument("--player", type=int, choices=(1, 2))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("set-theoretic", parents=[common], help="full-support equilibrium and transplant value")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--game", help="game JSON file")
    src.add_argument("--preset", choices=("voting", "leader"))
    p.add_argument("--params")
    p.set_defaults(func=cmd_set_theoretic)

    p = sub.add_parser("loadbalance", parents=[common], help="competitive ratio table over n")
    p.add_argument("--alphas", default="1,0.5", help="link speeds, fastest first (must start with 1)")
    p.add_argument("--X", default="1")
    p.add_argument("--n", default="10,100,1000,10000")
    p.set_defaults(func=cmd_loadbalance)

    p = sub.add_parser("auction", parents=[common], help="first-price auction safety analysis")
    p.add_argument("--n", default="2,5,10,100")
    p.add_argument("--v", default="0.9")
    p.add_argument("--samples", type=int, help="add Monte Carlo columns")
    p.set_defaults(func=cmd_auction)

    p = sub.add_parser("check", parents=[common], help="reproduce every reference number")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    try:
        out, code = args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
