"""JSON interchange formats for rule tables, configurations, words, and machines.

Both formats round-trip exactly: parsing the serialized form of a canonical
object returns an equal object, and serialization is deterministic.
"""

from __future__ import annotations

import json

from sensca.core import Configuration, Layer, Neighborhood, RuleTable, Word
from sensca.errors import BadConfiguration, BadRuleTable


def rule_to_obj(rule: RuleTable) -> dict:
    obj = {
        "dimension": rule.neighborhood.dimension,
        "layers": [{"name": l.name, "symbols": list(l.symbols)} for l in rule.layers],
        "neighborhood": [list(off) for off in rule.neighborhood.offsets],
        "rules": [
            {"pattern": [list(entry) for entry in pat], "output": list(out)}
            for pat, out in rule.rules
        ],
    }
    if rule.quiescent is not None:
        obj["quiescent"] = list(rule.quiescent)
    if rule.name:
        obj["name"] = rule.name
    return obj


def rule_from_obj(obj: dict) -> RuleTable:
    try:
        layers = tuple(Layer(l["name"], tuple(l["symbols"])) for l in obj["layers"])
        nb = Neighborhood(tuple(tuple(off) for off in obj["neighborhood"]))
        rules = [
            (tuple(tuple(e) for e in r["pattern"]), tuple(r["output"]))
            for r in obj["rules"]
        ]
        quiescent = tuple(obj["quiescent"]) if "quiescent" in obj else None
    except (KeyError, TypeError) as exc:
        raise BadRuleTable(f"malformed rule object: {exc}") from exc
    if nb.dimension != obj["dimension"]:
        raise BadRuleTable("declared dimension does not match neighborhood")
    return RuleTable(layers, nb, rules, quiescent=quiescent, name=obj.get("name", ""))


def config_to_obj(config: Configuration) -> dict:
    return {
        "dimension": config.dimension,
        "background": list(config.background),
        "cells": [
            {"pos": list(pos), "state": list(st)}
            for pos, st in sorted(config.cells.items())
        ],
    }


def config_from_obj(obj: dict) -> Configuration:
    try:
        return Configuration.build(
            obj["dimension"],
            tuple(obj["background"]),
            {tuple(c["pos"]): tuple(c["state"]) for c in obj["cells"]},
        )
    except (KeyError, TypeError) as exc:
        raise BadConfiguration(f"malformed configuration object: {exc}") from exc


def word_to_obj(word: Word) -> dict:
    return {
        "dimension": word.dimension,
        "content": [
            {"pos": list(pos), "state": list(st)}
            for pos, st in sorted(word.content.items())
        ],
    }


def word_from_obj(obj: dict) -> Word:
    return Word.build(obj["dimension"], {tuple(c["pos"]): tuple(c["state"]) for c in obj["content"]})


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_rule(rule: RuleTable, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(rule_to_obj(rule)))


def load_rule(path: str) -> RuleTable:
    with open(path, "r", encoding="utf-8") as f:
        return rule_from_obj(json.load(f))


def save_config(config: Configuration, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(config_to_obj(config)))


def load_config(path: str) -> Configuration:
    with open(path, "r", encoding="utf-8") as f:
        return config_from_obj(json.load(f))
