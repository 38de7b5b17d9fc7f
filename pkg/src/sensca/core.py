"""Dimension-generic cellular automata over sparse finite-support configurations.

States are tuples of per-layer symbols.  Rule tables are ordered lists of
(pattern, output) pairs with per-layer wildcards and first-match-wins
semantics; when no rule matches, a cell keeps its state.  Configurations
assign states to finitely many cells of Z^d over a uniform background.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from sensca.errors import (
    BadConfiguration,
    BadRuleTable,
    DimensionMismatch,
    NonQuiescentBackground,
)

State = tuple  # tuple[str, ...], one symbol per layer
Coord = tuple  # tuple[int, ...]

WILDCARD = "*"


@dataclass(frozen=True)
class Layer:
    name: str
    symbols: tuple

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise BadRuleTable(f"layer {self.name!r} has duplicate symbols")
        if WILDCARD in self.symbols:
            raise BadRuleTable(f"layer {self.name!r} uses the reserved symbol {WILDCARD!r}")


@dataclass(frozen=True)
class Neighborhood:
    offsets: tuple  # tuple[Coord, ...], ordered

    def __post_init__(self):
        if not self.offsets:
            raise BadRuleTable("empty neighborhood")
        d = len(self.offsets[0])
        if any(len(o) != d for o in self.offsets):
            raise BadRuleTable("neighborhood offsets of mixed dimension")
        if len(set(self.offsets)) != len(self.offsets):
            raise BadRuleTable("neighborhood offsets must be pairwise distinct")
        if tuple([0] * d) not in self.offsets:
            raise BadRuleTable("neighborhood must include the zero vector")

    @property
    def dimension(self) -> int:
        return len(self.offsets[0])

    @property
    def radius(self) -> int:
        return max(max(abs(x) for x in off) for off in self.offsets)

    @property
    def center_index(self) -> int:
        return self.offsets.index(tuple([0] * self.dimension))


def line_neighborhood(radius: int = 1) -> Neighborhood:
    """1D neighborhood [-r..r] in left-to-right order."""
    return Neighborhood(tuple((i,) for i in range(-radius, radius + 1)))


def von_neumann_neighborhood() -> Neighborhood:
    """2D cross: center, north, east, south, west (y grows north)."""
    return Neighborhood(((0, 0), (0, 1), (1, 0), (0, -1), (-1, 0)))


class RuleTable:
    """Ordered wildcard rules over layered states (the paper-style rule formalism).

    ``rules`` is a sequence of (pattern, output): the pattern gives, for each
    neighborhood offset in order, one entry per layer that is either a concrete
    symbol or ``"*"``; the output is a fully concrete state for the center.
    """

    def __init__(self, layers, neighborhood, rules, quiescent=None, name=""):
        self.layers = tuple(layers)
        self.neighborhood = neighborhood
        self.rules = tuple((tuple(tuple(p) for p in pat), tuple(out)) for pat, out in rules)
        self.quiescent = tuple(quiescent) if quiescent is not None else None
        self.name = name
        self._validate()
        self._center = neighborhood.center_index
        # lazy caches: per-center-state rule sublists, and full-neighborhood memo
        self._sublists: dict = {}
        self._memo: dict = {}
        if self.quiescent is not None:
            quiet = tuple([self.quiescent] * len(self.neighborhood.offsets))
            if self.local(quiet) != self.quiescent:
                raise BadRuleTable("declared quiescent state is not a rule fixpoint")

    def _validate(self):
        n_off = len(self.neighborhood.offsets)
        n_lay = len(self.layers)
        alphabets = [set(l.symbols) for l in self.layers]
        for pat, out in self.rules:
            if len(pat) != n_off:
                raise BadRuleTable("pattern arity does not match neighborhood")
            for entry in pat:
                if len(entry) != n_lay:
                    raise BadRuleTable("pattern entry arity does not match layer count")
                for l, s in enumerate(entry):
                    if s != WILDCARD and s not in alphabets[l]:
                        raise BadRuleTable(f"pattern symbol {s!r} not in layer {self.layers[l].name!r}")
            if len(out) != n_lay:
                raise BadRuleTable("output arity does not match layer count")
            for l, s in enumerate(out):
                if s not in alphabets[l]:
                    raise BadRuleTable(f"output symbol {s!r} not in layer {self.layers[l].name!r}")
        if self.quiescent is not None:
            for l, s in enumerate(self.quiescent):
                if s not in alphabets[l]:
                    raise BadRuleTable("quiescent state uses unknown symbols")

    # -- state helpers -------------------------------------------------

    def states(self) -> Iterator[State]:
        """All layered states (cartesian product of layer alphabets)."""
        import itertools

        return (tuple(s) for s in itertools.product(*(l.symbols for l in self.layers)))

    def state_count(self) -> int:
        n = 1
        for l in self.layers:
            n *= len(l.symbols)
        return n

    def check_state(self, state: State):
        if len(state) != len(self.layers):
            raise BadConfiguration(f"state {state!r} has wrong layer count")
        for l, s in enumerate(state):
            if s not in self.layers[l].symbols:
                raise BadConfiguration(f"symbol {s!r} not in layer {self.layers[l].name!r}")

    # -- evaluation ----------------------------------------------------

    def _sublist_for(self, center: State):
        sub = self._sublists.get(center)
        if sub is None:
            sub = []
            c = self._center
            for pat, out in self.rules:
                entry = pat[c]
                if all(e == WILDCARD or e == v for e, v in zip(entry, center)):
                    sub.append((pat, out))
            sub = tuple(sub)
            self._sublists[center] = sub
        return sub

    def local(self, nbhd: tuple) -> State:
        """Apply the local function to a tuple of states (one per offset, in order)."""
        out = self._memo.get(nbhd)
        if out is not None:
            return out
        center = nbhd[self._center]
        c = self._center
        result = center  # default: unchanged
        for pat, rule_out in self._sublist_for(center):
            ok = True
            for k, entry in enumerate(pat):
                if k == c:
                    continue
                cell = nbhd[k]
                for e, v in zip(entry, cell):
                    if e != WILDCARD and e != v:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                result = rule_out
                break
        self._memo[nbhd] = result
        return result


@dataclass(frozen=True)
class Configuration:
    """Finite-support assignment of states over Z^d with a uniform background."""

    dimension: int
    background: State
    cells: Mapping  # Coord -> State, canonical (no cell equals background)

    @staticmethod
    def build(dimension: int, background, cells=None) -> "Configuration":
        background = tuple(background)
        canon = {}
        for pos, st in (cells or {}).items():
            pos = tuple(pos)
            st = tuple(st)
            if len(pos) != dimension:
                raise BadConfiguration(f"cell position {pos!r} has wrong dimension")
            if st != background:
                canon[pos] = st
        return Configuration(dimension, background, canon)

    def get(self, pos: Coord) -> State:
        return self.cells.get(pos, self.background)

    def support(self):
        return set(self.cells)

    def bounding_box(self):
        """(lo, hi) inclusive per axis, or None for the empty configuration."""
        if not self.cells:
            return None
        lo = [min(p[i] for p in self.cells) for i in range(self.dimension)]
        hi = [max(p[i] for p in self.cells) for i in range(self.dimension)]
        return tuple(lo), tuple(hi)

    def __eq__(self, other):
        return (
            isinstance(other, Configuration)
            and self.dimension == other.dimension
            and self.background == other.background
            and dict(self.cells) == dict(other.cells)
        )

    def __hash__(self):
        return hash((self.dimension, self.background, frozenset(self.cells.items())))


@dataclass(frozen=True)
class Word:
    """A finite pattern: total map from a finite domain K subset of Z^d to states."""

    dimension: int
    content: Mapping  # Coord -> State

    @staticmethod
    def build(dimension: int, content) -> "Word":
        out = {}
        for pos, st in content.items():
            pos = tuple(pos)
            if len(pos) != dimension:
                raise BadConfiguration(f"word position {pos!r} has wrong dimension")
            out[pos] = tuple(st)
        return Word(dimension, out)

    @staticmethod
    def from_line(states: Sequence[State], start: int = 0) -> "Word":
        """1D word covering [start, start+len-1]."""
        return Word(1, {(start + i,): tuple(s) for i, s in enumerate(states)})

    def domain(self):
        return set(self.content)

    def shifted(self, p: Coord) -> "Word":
        p = tuple(p)
        return Word(self.dimension, {tuple(a + b for a, b in zip(pos, p)): st for pos, st in self.content.items()})


def _add(a: Coord, b: Coord) -> Coord:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Coord, b: Coord) -> Coord:
    return tuple(x - y for x, y in zip(a, b))


def _check_dims(rule: RuleTable, config: Configuration):
    if config.dimension != rule.neighborhood.dimension:
        raise DimensionMismatch(
            f"configuration is {config.dimension}D but rule is {rule.neighborhood.dimension}D"
        )


def step(rule: RuleTable, config: Configuration) -> Configuration:
    """One synchronous update of the global map; result is in canonical sparse form."""
    _check_dims(rule, config)
    offsets = rule.neighborhood.offsets
    bg = config.background
    quiet = tuple([bg] * len(offsets))
    if rule.local(quiet) != bg:
        raise NonQuiescentBackground(f"background {bg!r} is not fixed by the rule")
    cells = config.cells
    get = cells.get
    local = rule.local
    candidates = set()
    for c in cells:
        for off in offsets:
            candidates.add(_sub(c, off))
    new = {}
    for c in candidates:
        nb = tuple(get(_add(c, off), bg) for off in offsets)
        out = local(nb)
        if out != bg:
            new[c] = out
    return Configuration(config.dimension, bg, new)


def evolve(rule: RuleTable, config: Configuration, n: int):
    """Trace of length n+1 including the input configuration."""
    if n < 0:
        raise ValueError("step count must be nonnegative")
    trace = [config]
    cur = config
    for _ in range(n):
        cur = step(rule, cur)
        trace.append(cur)
    return trace


def distance(x: Configuration, y: Configuration) -> Fraction:
    """Cantor-style metric 2^-min{||n||_inf : x(n) != y(n)}; 0 when equal.

    Configurations with different backgrounds are at distance 1 by convention
    (they differ at arbitrarily large coordinates).
    """
    if x.dimension != y.dimension:
        raise DimensionMismatch("configurations of different dimension")
    if x.background != y.background:
        return Fraction(1)
    diff = set()
    for pos in set(x.cells) | set(y.cells):
        if x.get(pos) != y.get(pos):
            diff.add(pos)
    if not diff:
        return Fraction(0)
    m = min(max(abs(c) for c in pos) if pos else 0 for pos in diff)
    return Fraction(1, 2**m)


def shift(config: Configuration, p: Coord) -> Configuration:
    """sigma^p: result at u equals input at u+p."""
    p = tuple(p)
    if len(p) != config.dimension:
        raise DimensionMismatch("shift vector of wrong dimension")
    return Configuration(config.dimension, config.background, {_sub(pos, p): st for pos, st in config.cells.items()})


def embed(config: Configuration, word: Word) -> Configuration:
    """Overwrite the configuration on the word's domain with its content."""
    if config.dimension != word.dimension:
        raise DimensionMismatch("word of wrong dimension")
    cells = dict(config.cells)
    for pos, st in word.content.items():
        if st == config.background:
            cells.pop(pos, None)
        else:
            cells[pos] = st
    return Configuration(config.dimension, config.background, cells)


def contains(config: Configuration, word: Word) -> bool:
    """Membership in the cylinder Cyl(word, K)."""
    if config.dimension != word.dimension:
        raise DimensionMismatch("word of wrong dimension")
    return all(config.get(pos) == st for pos, st in word.content.items())


def slice_lift(rule: RuleTable) -> RuleTable:
    """Lift a d-dimensional rule to d+1 dimensions acting independently on each
    hyperplane x_{d+1} = k."""
    new_offsets = tuple(off + (0,) for off in rule.neighborhood.offsets)
    return RuleTable(
        layers=rule.layers,
        neighborhood=Neighborhood(new_offsets),
        rules=rule.rules,
        quiescent=rule.quiescent,
        name=(rule.name + "+lift") if rule.name else "lift",
    )


def lift_config(config: Configuration, plane: int = 0) -> Configuration:
    """Embed a d-dimensional configuration into the slice x_{d+1} = plane."""
    return Configuration(
        config.dimension + 1,
        config.background,
        {pos + (plane,): st for pos, st in config.cells.items()},
    )
