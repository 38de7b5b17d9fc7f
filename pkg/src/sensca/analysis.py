"""Blocking-word prover/falsifier and sensitivity evidence probes.

The prover runs a per-layer set-valued simulation: every cell layer holds a
concrete symbol, a small set of candidate symbols, or unknown (TOP); cells
outside a finite region are all-TOP, and a cell's next value joins the
outputs of every rule that could fire under some completion of the unknowns.
This over-approximates every concrete evolution of every configuration
containing the word, so once the symbolic state cycles with the window
concrete throughout, the word blocks the window for all time.  Falsification
is exact: two explicit finite configurations agreeing on the word whose
evolutions differ on the window.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Optional

from sensca import rulefiles
from sensca.core import Configuration, RuleTable, Word, embed, step
from sensca.errors import DimensionMismatch, WindowOutsideWord

TOP = "⊤"  # unknown layer value; reserved, never a rule symbol

SET_CAP = 8  # candidate sets larger than this widen to TOP

WILDCARD = "*"


def _layer_possible(value, symbol) -> bool:
    """Can this layer value be `symbol` under some completion?"""
    if value is TOP or value == TOP:
        return True
    if isinstance(value, frozenset):
        return symbol in value
    return value == symbol


def _layer_concrete(value) -> bool:
    return not (value is TOP or value == TOP or isinstance(value, frozenset))


def _join_layer(values):
    """Union of candidate layer values, widened to TOP past SET_CAP."""
    acc = set()
    for v in values:
        if v is TOP or v == TOP:
            return TOP
        if isinstance(v, frozenset):
            acc |= v
        else:
            acc.add(v)
        if len(acc) > SET_CAP:
            return TOP
    if len(acc) == 1:
        return next(iter(acc))
    return frozenset(acc)


def _box_coords(lo, hi):
    """All integer coordinates of the box [lo, hi] (inclusive, per axis)."""
    coords = [()]
    for axis in range(len(lo)):
        coords = [c + (x,) for c in coords for x in range(lo[axis], hi[axis] + 1)]
    return coords


@dataclass
class SymbolicConfiguration:
    """Three-valued configuration on a fixed finite box; outside is unknown."""

    dimension: int
    lo: tuple
    hi: tuple
    cells: dict  # Coord -> tuple of per-layer values (symbol or TOP)

    @staticmethod
    def from_word(rule: RuleTable, word: Word, margin: int) -> "SymbolicConfiguration":
        if not word.content:
            raise ValueError("empty word")
        d = word.dimension
        lo = tuple(min(p[i] for p in word.content) - margin for i in range(d))
        hi = tuple(max(p[i] for p in word.content) + margin for i in range(d))
        top_cell = None
        n_layers = len(rule.layers)
        top_cell = tuple([TOP] * n_layers)
        cells = {}
        for pos in _box_coords(lo, hi):
            st = word.content.get(pos)
            cells[pos] = tuple(st) if st is not None else top_cell
        return SymbolicConfiguration(d, lo, hi, cells)

    def get(self, pos):
        cell = self.cells.get(pos)
        if cell is None:
            return tuple([TOP] * len(next(iter(self.cells.values()))))
        return cell

    def is_concrete(self, pos) -> bool:
        return all(_layer_concrete(v) for v in self.get(pos))

    def key(self):
        return tuple(self.cells[pos] for pos in sorted(self.cells))


def _match3(pattern, nbhd):
    """YES/NO/MAYBE match of a per-layer wildcard pattern against symbolic cells."""
    maybe = False
    for entry, cell in zip(pattern, nbhd):
        for e, v in zip(entry, cell):
            if e == WILDCARD:
                continue
            if not _layer_possible(v, e):
                return 0  # NO
            if not _layer_concrete(v):
                maybe = True
    return 1 if not maybe else 2  # YES / MAYBE


def _center_index(rule: RuleTable):
    """Rules bucketed by their center constraint on the most selective layer."""
    cache = getattr(rule, "_sym_index", None)
    if cache is not None:
        return cache
    c = rule.neighborhood.center_index
    n_layers = len(rule.layers)
    # pick the layer most often pinned by center patterns
    best_l, best_n = 0, -1
    for l in range(n_layers):
        n = sum(1 for pat, _ in rule.rules if pat[c][l] != WILDCARD)
        if n > best_n:
            best_l, best_n = l, n
    buckets = {}
    for i, (pat, out) in enumerate(rule.rules):
        key = pat[c][best_l]
        buckets.setdefault(key, []).append((i, pat, out))
    per_symbol = {}
    for sym in rule.layers[best_l].symbols:
        merged = sorted(buckets.get(sym, []) + buckets.get(WILDCARD, []))
        per_symbol[sym] = merged
    cache = (best_l, per_symbol, sorted((i, p, o) for i, (p, o) in enumerate(rule.rules)))
    rule._sym_index = cache
    return cache


def _symbolic_local(rule: RuleTable, nbhd, memo) -> tuple:
    out = memo.get(nbhd)
    if out is not None:
        return out
    center = nbhd[rule.neighborhood.center_index]
    layer_idx, per_symbol, full = _center_index(rule)
    v = center[layer_idx]
    if _layer_concrete(v):
        pool = per_symbol[v]
    else:
        pool = full
    candidates = []
    matched_yes = False
    for _, pat, rule_out in pool:
        m = _match3(pat, nbhd)
        if m == 0:
            continue
        candidates.append(rule_out)
        if m == 1:
            matched_yes = True
            break
    if not matched_yes:
        candidates.append(center)
    n_layers = len(rule.layers)
    joined = tuple(_join_layer(c[l] for c in candidates) for l in range(n_layers))
    memo[nbhd] = joined
    return joined


def symbolic_step(rule: RuleTable, sym: SymbolicConfiguration, memo=None) -> SymbolicConfiguration:
    """Sound three-valued image: every concrete completion of ``sym`` steps to
    a completion of the result."""
    if sym.dimension != rule.neighborhood.dimension:
        raise DimensionMismatch("symbolic configuration dimension mismatch")
    if memo is None:
        memo = {}
    offsets = rule.neighborhood.offsets
    new = {}
    get = sym.get
    for pos in sym.cells:
        nbhd = tuple(get(tuple(a + b for a, b in zip(pos, off))) for off in offsets)
        new[pos] = _symbolic_local(rule, nbhd, memo)
    return SymbolicConfiguration(sym.dimension, sym.lo, sym.hi, new)


# ---------------------------------------------------------------------------
# blocking queries
# ---------------------------------------------------------------------------


@dataclass
class BlockingQuery:
    word: Word
    offset: tuple  # p
    window: int  # m
    horizon: int  # T: falsifier depth and symbolic step budget
    margin: int = 8
    seed: int = 0
    sample_extensions: int = 64

    def window_coords(self):
        d = self.word.dimension
        coords = [()]
        for axis in range(d):
            coords = [c + (self.offset[axis] + x,) for c in coords for x in range(self.window + 1)]
        return coords


@dataclass
class BlockingCertificate:
    """Machine-checkable proof that a word is blocking: the bounded-region
    symbolic state enters a cycle with the window concrete throughout."""

    query: BlockingQuery
    cycle_start: int  # n0
    cycle_period: int  # lambda
    region_lo: tuple
    region_hi: tuple
    window_trace: list  # per step, list of window cell states
    state_hashes: list  # per step, hash of the full symbolic state

    def to_obj(self, rule_name=""):
        return {
            "kind": "blocking-certificate",
            "rule": rule_name,
            "word": rulefiles.word_to_obj(self.query.word),
            "offset": list(self.query.offset),
            "window": self.query.window,
            "horizon": self.query.horizon,
            "margin": self.query.margin,
            "seed": self.query.seed,
            "cycle_start": self.cycle_start,
            "cycle_period": self.cycle_period,
            "region": [list(self.region_lo), list(self.region_hi)],
            "window_trace": [[list(st) for st in row] for row in self.window_trace],
            "state_hashes": self.state_hashes,
        }


@dataclass
class Certified:
    certificate: BlockingCertificate


@dataclass
class Falsified:
    left: Configuration
    right: Configuration
    steps: int  # window mismatch after this many steps


@dataclass
class Unknown:
    reason: str


def _symbolic_phase(rule: RuleTable, query: BlockingQuery, budget: int):
    sym = SymbolicConfiguration.from_word(rule, query.word, query.margin)
    window = query.window_coords()
    memo = {}
    seen = {}
    window_trace = []
    hashes = []
    for t in range(budget + 1):
        if not all(sym.is_concrete(pos) for pos in window):
            return None
        window_trace.append([sym.get(pos) for pos in window])
        key = sym.key()
        hashes.append(hash(key))
        if key in seen:
            n0 = seen[key]
            lam = t - n0
            return BlockingCertificate(
                query, n0, lam, sym.lo, sym.hi, window_trace, hashes
            )
        seen[key] = t
        sym = symbolic_step(rule, sym, memo)
    return None


def _extension_sites(rule: RuleTable, word: Word, width: int):
    d = word.dimension
    lo = tuple(min(p[i] for p in word.content) for i in range(d))
    hi = tuple(max(p[i] for p in word.content) for i in range(d))
    sites = []
    for pos in _box_coords(tuple(x - width for x in lo), tuple(x + width for x in hi)):
        if pos not in word.content:
            sites.append(pos)
    return sites


def _falsify(rule: RuleTable, query: BlockingQuery):
    if rule.quiescent is None:
        return None
    bg = rule.quiescent
    base = embed(Configuration.build(query.word.dimension, bg, {}), query.word)
    window = query.window_coords()
    r = rule.neighborhood.radius
    states = list(rule.states())
    rng = random.Random(query.seed)

    def diverges(variant):
        a, b = base, variant
        for t in range(1, query.horizon + 1):
            a = step(rule, a)
            b = step(rule, b)
            for pos in window:
                if a.get(pos) != b.get(pos):
                    return t
        return None

    sites = _extension_sites(rule, query.word, 2 * r)
    state_pool = states if len(states) <= 24 else rng.sample(states, 24)
    for pos in sites:
        for st in state_pool:
            if st == bg:
                continue
            cells = dict(base.cells)
            cells[pos] = st
            variant = Configuration.build(base.dimension, bg, cells)
            t = diverges(variant)
            if t is not None:
                return Falsified(base, variant, t)
    # random phase: sample extensions from the whole cone of influence
    d = query.word.dimension
    lo = tuple(min(p[i] for p in query.word.content) for i in range(d))
    hi = tuple(max(p[i] for p in query.word.content) for i in range(d))
    reach = min(2 * r + query.horizon * r, 300)
    for _ in range(query.sample_extensions):
        cells = dict(base.cells)
        changed = False
        for _ in range(rng.randint(1, 4)):
            pos = tuple(rng.randint(lo[i] - reach, hi[i] + reach) for i in range(d))
            if pos in query.word.content:
                continue
            cells[pos] = rng.choice(states)
            changed = True
        if not changed:
            continue
        variant = Configuration.build(base.dimension, bg, cells)
        if dict(variant.cells) == dict(base.cells):
            continue
        t = diverges(variant)
        if t is not None:
            return Falsified(base, variant, t)
    return None


def check_blocking(rule: RuleTable, query: BlockingQuery):
    """Certified (sound for all time) / Falsified (exact, replayable) / Unknown."""
    window = query.window_coords()
    missing = [pos for pos in window if pos not in query.word.content]
    if missing:
        raise WindowOutsideWord(f"window cells {missing} not covered by the word")
    cert = _symbolic_phase(rule, query, budget=max(query.horizon, 64))
    if cert is not None:
        return Certified(cert)
    fals = _falsify(rule, query)
    if fals is not None:
        return fals
    return Unknown("symbolic state did not cycle with a concrete window and no counterexample was found")


def replay_certificate(rule: RuleTable, cert: BlockingCertificate) -> bool:
    """Re-run the symbolic simulation and confirm the recorded cycle and the
    window concreteness at every recorded step."""
    query = cert.query
    sym = SymbolicConfiguration.from_word(rule, query.word, query.margin)
    window = query.window_coords()
    memo = {}
    total = cert.cycle_start + cert.cycle_period
    keys = []
    for t in range(total + 1):
        if not all(sym.is_concrete(pos) for pos in window):
            return False
        if [sym.get(pos) for pos in window] != cert.window_trace[t]:
            return False
        keys.append(sym.key())
        if t < total:
            sym = symbolic_step(rule, sym, memo)
    return keys[cert.cycle_start] == keys[total]


def certificate_from_obj(obj: dict) -> BlockingCertificate:
    word = rulefiles.word_from_obj(obj["word"])
    query = BlockingQuery(
        word=word,
        offset=tuple(obj["offset"]),
        window=obj["window"],
        horizon=obj["horizon"],
        margin=obj["margin"],
        seed=obj.get("seed", 0),
    )
    return BlockingCertificate(
        query=query,
        cycle_start=obj["cycle_start"],
        cycle_period=obj["cycle_period"],
        region_lo=tuple(obj["region"][0]),
        region_hi=tuple(obj["region"][1]),
        window_trace=[[tuple(st) for st in row] for row in obj["window_trace"]],
        state_hashes=obj["state_hashes"],
    )


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------


def difference_cone(rule: RuleTable, base: Configuration, site, T: int):
    """Step-indexed difference supports of base vs base-with-one-changed-cell."""
    site = tuple(site)
    states = [s for s in rule.states() if s != base.get(site)]
    if not states:
        raise ValueError("no alternative state for the perturbation site")
    cells = dict(base.cells)
    st = states[0]
    if st == base.background:
        cells.pop(site, None)
    else:
        cells[site] = st
    other = Configuration.build(base.dimension, base.background, cells)
    cones = []
    a, b = base, other
    for _ in range(T + 1):
        diff = {pos for pos in set(a.cells) | set(b.cells) if a.get(pos) != b.get(pos)}
        cones.append(diff)
        a, b = step(rule, a), step(rule, b)
    return cones


@dataclass
class SensitivityEvidence:
    """Bounded-scope evidence; never an unconditional sensitivity verdict."""

    rule_name: str
    max_length: int
    horizon: int
    window: int
    seed: int
    per_length: dict  # length -> {"certified": n, "falsified": n, "unknown": n}
    examples: dict  # length -> one word (list of states) per verdict kind
    cone_growth: list  # per-trial difference-support sizes over time
    note: str = (
        "verdicts are bounded-scope: certified words block forever, falsified "
        "words provably leak, and no aggregate sensitivity claim is made"
    )

    def to_obj(self):
        return {
            "kind": "sensitivity-evidence",
            "rule": self.rule_name,
            "max_length": self.max_length,
            "horizon": self.horizon,
            "window": self.window,
            "seed": self.seed,
            "per_length": {str(k): v for k, v in self.per_length.items()},
            "examples": {str(k): v for k, v in self.examples.items()},
            "cone_growth": self.cone_growth,
            "note": self.note,
        }


def probe_sensitivity(
    rule: RuleTable,
    max_length: int,
    horizon: int,
    seed: int = 0,
    window: Optional[int] = None,
    word_cap: int = 256,
    cone_trials: int = 5,
) -> SensitivityEvidence:
    """Run check_blocking over 1D words up to ``max_length`` (exhaustively for
    small alphabets, sampling otherwise) and collect difference-cone growth."""
    if rule.neighborhood.dimension != 1:
        raise DimensionMismatch("probe_sensitivity operates on 1D rules")
    m = rule.neighborhood.radius if window is None else window
    rng = random.Random(seed)
    states = list(rule.states())
    per_length = {}
    examples = {}
    for length in range(m + 1, max_length + 1):
        total = len(states) ** length
        if total <= word_cap:
            pool = _all_words(states, length)
        else:
            pool = [[rng.choice(states) for _ in range(length)] for _ in range(word_cap)]
        counts = {"certified": 0, "falsified": 0, "unknown": 0}
        ex = {}
        for letters in pool:
            word = Word.from_line(letters, start=0)
            p = ((length - 1 - m) // 2,)
            query = BlockingQuery(word, p, m, horizon, seed=rng.randrange(2**30))
            verdict = check_blocking(rule, query)
            kind = (
                "certified" if isinstance(verdict, Certified) else "falsified" if isinstance(verdict, Falsified) else "unknown"
            )
            counts[kind] += 1
            ex.setdefault(kind, [list(s) for s in letters])
        per_length[length] = counts
        examples[length] = ex
    growth = []
    if rule.quiescent is not None:
        for _ in range(cone_trials):
            span = max_length + 2
            cells = {}
            for i in range(-span, span + 1):
                if rng.random() < 0.4:
                    cells[(i,)] = rng.choice(states)
            base = Configuration.build(1, rule.quiescent, cells)
            cones = difference_cone(rule, base, (0,), min(horizon, 32))
            growth.append([len(c) for c in cones])
    return SensitivityEvidence(
        rule_name=rule.name,
        max_length=max_length,
        horizon=horizon,
        window=m,
        seed=seed,
        per_length=per_length,
        examples=examples,
        cone_growth=growth,
    )


def word_from_config(config: Configuration, box=None) -> Word:
    """Interpret a configuration file as a word: every cell of the box (its
    bounding box by default), background-valued where not stored."""
    if box is None:
        bb = config.bounding_box()
        if bb is None:
            raise ValueError("empty configuration cannot define a word")
        lo, hi = bb
    else:
        d = config.dimension
        lo, hi = tuple(box[:d]), tuple(box[d:])
    return Word(config.dimension, {pos: config.get(pos) for pos in _box_coords(lo, hi)})


def lift_blocking_query(query: BlockingQuery, plane_span: Optional[int] = None) -> BlockingQuery:
    """Lift a d-dimensional blocking query to d+1 dimensions: the word is
    replicated on the slices x_{d+1} = 0..m and the window becomes the
    (d+1)-cube of the same size (the construction in the slicing proof)."""
    m = query.window if plane_span is None else plane_span
    content = {}
    for pos, st in query.word.content.items():
        for k in range(m + 1):
            content[pos + (k,)] = st
    word = Word(query.word.dimension + 1, content)
    return BlockingQuery(
        word=word,
        offset=query.offset + (0,),
        window=query.window,
        horizon=query.horizon,
        margin=query.margin,
        seed=query.seed,
        sample_extensions=query.sample_extensions,
    )


def _all_words(states, length):
    words = [[]]
    for _ in range(length):
        words = [w + [s] for w in words for s in states]
    return words


def save_json(obj: dict, path: str):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")
