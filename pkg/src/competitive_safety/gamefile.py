"""JSON game format.

    {"strategies": [["r1", "r2"], ["c1", "c2"]],
     "u1": [["1/2", "1"], ["4/5", "2/5"]],
     "u2": [["1/2", "4/5"], ["1", "2/5"]]}

Payoffs are integers or exact rational strings ("p/q" or decimals).
"strategies" is optional.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .games import BimatrixGame, GameError, as_fraction, format_fraction


class GameFormatError(GameError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _table(data, key: str) -> list[list[Fraction]]:
    if key not in data:
        raise GameFormatError(f"$.{key}", "missing payoff table")
    rows = data[key]
    if not isinstance(rows, list) or not rows:
        raise GameFormatError(f"$.{key}", "expected a non-empty list of rows")
    out = []
    for j, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise GameFormatError(f"$.{key}[{j}]", "expected a non-empty list")
        parsed = []
        for k, v in enumerate(row):
            path = f"$.{key}[{j}][{k}]"
            if isinstance(v, float) or isinstance(v, bool) or not isinstance(v, (int, str)):
                raise GameFormatError(path, f"expected an integer or rational string, got {v!r}")
            try:
                parsed.append(as_fraction(v))
            except GameError as exc:
                raise GameFormatError(path, str(exc)) from None
        out.append(parsed)
    width = len(out[0])
    for j, row in enumerate(out):
        if len(row) != width:
            raise GameFormatError(f"$.{key}[{j}]", f"row has {len(row)} entries, expected {width}")
    return out


def game_from_dict(data) -> BimatrixGame:
    if not isinstance(data, dict):
        raise GameFormatError("$", "expected a JSON object")
    u1, u2 = _table(data, "u1"), _table(data, "u2")
    if (len(u2), len(u2[0])) != (len(u1), len(u1[0])):
        raise GameFormatError("$.u2", f"shape differs from u1 ({len(u1)}x{len(u1[0])})")
    labels = None
    if "strategies" in data:
        labels = data["strategies"]
        if (
            not isinstance(labels, list)
            or len(labels) != 2
            or not all(isinstance(side, list) and all(isinstance(s, str) for s in side) for side in labels)
        ):
            raise GameFormatError("$.strategies", "expected two lists of strategy names")
        for i, (side, size) in enumerate(zip(labels, (len(u1), len(u1[0])))):
            if len(side) != size:
                raise GameFormatError(f"$.strategies[{i}]", f"expected {size} names, got {len(side)}")
    return BimatrixGame(u1, u2, labels)


def load_game(text: str) -> BimatrixGame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError("$", f"invalid JSON: {exc}") from None
    return game_from_dict(data)


def game_to_dict(g: BimatrixGame) -> dict:
    return {
        "strategies": [list(g.labels[0]), list(g.labels[1])],
        "u1": [[format_fraction(v) for v in row] for row in g.u1],
        "u2": [[format_fraction(v) for v in row] for row in g.u2],
    }


def dump_game(g: BimatrixGame) -> str:
    return json.dumps(game_to_dict(g))
