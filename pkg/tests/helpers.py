"""Shared test utilities: random rules/configs and the elementary-CA oracle."""

from __future__ import annotations

import random

from sensca.core import Configuration, Layer, Neighborhood, RuleTable, WILDCARD


def random_rule_table(rng: random.Random, dimension: int = 1) -> RuleTable:
    """Random small wildcard rule table with a guaranteed-fixed quiescent state."""
    n_layers = rng.randint(1, 2)
    layers = []
    for i in range(n_layers):
        k = rng.randint(2, 3)
        layers.append(Layer(f"L{i}", tuple(f"s{j}" for j in range(k))))
    if dimension == 1:
        offsets = [(-1,), (0,), (1,)]
    else:
        offsets = [(0, 0), (0, 1), (1, 0), (0, -1), (-1, 0)]
    nb = Neighborhood(tuple(offsets))
    quiescent = tuple(l.symbols[0] for l in layers)

    def rand_entry():
        return tuple(
            WILDCARD if rng.random() < 0.4 else rng.choice(l.symbols) for l in layers
        )

    def rand_state():
        return tuple(rng.choice(l.symbols) for l in layers)

    rules = [tuple(tuple(quiescent) for _ in offsets)]
    # leading rule pins the all-quiescent neighborhood to quiescent
    rules = [(tuple(tuple(quiescent) for _ in offsets), quiescent)]
    for _ in range(rng.randint(1, 8)):
        pat = tuple(rand_entry() for _ in offsets)
        rules.append((pat, rand_state()))
    return RuleTable(layers, nb, rules, quiescent=quiescent)


def random_config(rng: random.Random, rule: RuleTable, span: int = 6, density: float = 0.5) -> Configuration:
    d = rule.neighborhood.dimension
    states = list(rule.states())
    cells = {}
    if d == 1:
        coords = [(i,) for i in range(-span, span + 1)]
    else:
        coords = [(i, j) for i in range(-span, span + 1) for j in range(-span, span + 1)]
    for pos in coords:
        if rng.random() < density:
            cells[pos] = rng.choice(states)
    return Configuration.build(d, rule.quiescent, cells)


def eca_oracle_row(number: int, row: list) -> list:
    """One step of Wolfram rule `number` on a 0-padded dense row (list of 0/1)."""
    padded = [0, 0] + row + [0, 0]
    out = []
    for i in range(1, len(padded) - 1):
        code = (padded[i - 1] << 2) | (padded[i] << 1) | padded[i + 1]
        out.append((number >> code) & 1)
    return out


def eca_oracle_trace(number: int, row: list, steps: int) -> list:
    """Dense trace of `steps` updates; rows grow by one cell on each side per step."""
    rows = [list(row)]
    cur = list(row)
    for _ in range(steps):
        cur = eca_oracle_row(number, cur)
        rows.append(cur)
    return rows
