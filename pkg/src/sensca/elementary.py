"""Elementary cellular automata (Wolfram rules) as single-layer rule tables."""

from __future__ import annotations

from sensca.core import Configuration, Layer, RuleTable, line_neighborhood


def elementary_rule(number: int) -> RuleTable:
    """Wolfram rule `number` encoded as an 8-entry wildcard-free table.

    Only rules with 000 -> 0 admit the all-zero quiescent background needed
    for sparse simulation; others are built without a declared quiescent.
    """
    if not 0 <= number <= 255:
        raise ValueError("elementary rule number must be in 0..255")
    layer = Layer("bit", ("0", "1"))
    rules = []
    for code in range(7, -1, -1):
        l, c, r = (code >> 2) & 1, (code >> 1) & 1, code & 1
        out = (number >> code) & 1
        rules.append(
            (
                ((str(l),), (str(c),), (str(r),)),
                (str(out),),
            )
        )
    quiescent = ("0",) if number & 1 == 0 else None
    return RuleTable(
        layers=(layer,),
        neighborhood=line_neighborhood(1),
        rules=rules,
        quiescent=quiescent,
        name=f"rule-{number}",
    )


def line_config(bits: str, start: int = 0) -> Configuration:
    """1D configuration over 0-background from a 01-string placed at `start`."""
    cells = {(start + i,): (b,) for i, b in enumerate(bits)}
    return Configuration.build(1, ("0",), cells)


def config_bits(config: Configuration, lo: int, hi: int) -> str:
    """Dense 01-string of a 1D configuration over [lo, hi]."""
    return "".join(config.get((i,))[0] for i in range(lo, hi + 1))
