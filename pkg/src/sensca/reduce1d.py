"""One-dimensional sensitivity reduction: compile a Turing machine into a
cellular automaton whose computational blocks simulate it.

Layers (radius-1 neighborhood, left/center/right):

* ``witness``  in {_, 1}: read-only copy of the input, eroded right of blanks
* ``head``     in {_} + Q: machine head occupancy
* ``tape``     in A: working tape symbols
* ``delim``    in {_, <, >, p, xr, xl, x0}: block delimiters, the bouncing
  extension symbols, and the sensitivity particle p

A block is a run ``>^a x <^b``.  The machine head computes on ``>`` columns
(delimiters act as walls), the x symbol shuttles between the block ends,
extends the block into blank space by pushing a ``<`` outward, and restarts
the computation with a reset sweep (x0) after each extension.  A halting head
floods the block with halt marks and the block is then demolished right to
left, matching the rightmost-block-dies-first ordering of the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from sensca.core import Configuration, Layer, RuleTable, Word, line_neighborhood
from sensca.errors import AlphabetCollision, BlockTooSmall
from sensca.turing import BLANK, SEMI_INFINITE, TuringMachine

RESERVED_DELIMS = ("_", "<", ">", "p", "xr", "xl", "x0")

W_ = "*"  # pattern wildcard shorthand


@dataclass
class Reduction1DOutput:
    rule: RuleTable
    manifest: dict


@dataclass
class ComputationalBlock:
    """A delimiter-bounded zone: ``>^a x <^b`` with input, running head, and a
    parked head on the last column that serves as the x turn marker."""

    word: Word
    width: int
    input: int
    x_col: int
    spin_col: int  # where loop-state machines settle (input-length column)
    machine_name: str


def _check_machine(machine: TuringMachine):
    if machine.mode != SEMI_INFINITE:
        raise ValueError("compile expects a semi-infinite machine; apply to_semi_infinite first")
    clash = set(machine.alphabet) & set(RESERVED_DELIMS) - {BLANK}
    clash |= set(machine.states) & set(RESERVED_DELIMS)
    if clash:
        raise AlphabetCollision(f"machine names collide with reserved delimiter symbols: {sorted(clash)}")


def compile_sensitivity_1d(machine: TuringMachine) -> Reduction1DOutput:
    return _compile(machine, with_particle=True)


def compile_nilpotency_1d(machine: TuringMachine) -> Reduction1DOutput:
    """The particle-free variant used for the finite-nilpotency reduction."""
    return _compile(machine, with_particle=False)


def _compile(machine: TuringMachine, with_particle: bool) -> Reduction1DOutput:
    _check_machine(machine)
    Q = list(machine.states)
    A = list(machine.alphabet)
    qh = machine.halt
    qi = machine.initial
    heads = ["_"] + Q
    delims = ["_", "<", ">", "p", "xr", "xl", "x0"] if with_particle else ["_", "<", ">", "xr", "xl", "x0"]
    open_delims = ["_", "p"] if with_particle else ["_"]

    wit_l = Layer("witness", ("_", "1"))
    head_l = Layer("head", tuple(heads))
    tape_l = Layer("tape", tuple(A))
    delim_l = Layer("delim", tuple(delims))
    layers = (wit_l, head_l, tape_l, delim_l)

    BLANK_STATE = ("_", "_", BLANK, "_")
    XS = ["xr", "xl", "x0"]
    BLOCKISH = [">"] + XS  # delimiters heads and waves travel on

    rules = []

    def pat(wit=W_, head=W_, tape=W_, delim=W_):
        return (wit, head, tape, delim)

    ANY = pat()

    def rule(l, c, r, out):
        rules.append(((l, c, r), out))

    def wit_map(w):
        return "1" if w == "1" else BLANK

    # -- A: flood demolition (right to left: a halt-marked cell disappears
    #    once nothing right of it needs the wall; the '>' start of a live
    #    block to the right keeps it waiting, giving the rightmost-block-dies
    #    -first ordering)
    for d in open_delims + ["<"]:
        rule(ANY, pat(head=qh), pat(delim=d), BLANK_STATE)

    # -- B: halt-marked cells otherwise hold every layer (freezing x symbols
    #    and shielding later rules)
    for w in ("_", "1"):
        for a in A:
            for d in delims:
                rule(ANY, (w, qh, a, d), ANY, (w, qh, a, d))

    # -- C: heads riding on x columns are malformed; the column vaporizes.
    #    Adjacent x symbols (never produced by a well-formed block) likewise
    #    annihilate.
    for x in XS:
        for q in Q:
            if q == qh:
                continue  # handled by A/B
            rule(ANY, pat(head=q, delim=x), ANY, BLANK_STATE)
    for x in XS:
        for x2 in XS:
            rule(pat(delim=x2), pat(delim=x), ANY, BLANK_STATE)
            rule(ANY, pat(delim=x), pat(delim=x2), BLANK_STATE)

    # -- D: halt wave. Spreads over a block through {>, x, <} columns but
    #    never into the start of the next block and never right-to-left into
    #    a '<' column; frozen heads under '<' are infected, active heads block.
    for w in ("_", "1"):
        for a in A:
            # left-to-right (crossing from '<' only into '<' or x columns, so
            # the wave never enters the '>' start of the next block)
            for dl in BLOCKISH:
                for dc in BLOCKISH + ["<"]:
                    rule(pat(head=qh, delim=dl), (w, "_", a, dc), ANY, (w, qh, a, dc))
            for dc in XS + ["<"]:
                rule(pat(head=qh, delim="<"), (w, "_", a, dc), ANY, (w, qh, a, dc))
            # right-to-left (never into '<')
            for dc in BLOCKISH:
                for dr in BLOCKISH + ["<"]:
                    rule(ANY, (w, "_", a, dc), pat(head=qh, delim=dr), (w, qh, a, dc))
            # frozen heads under '<' columns are swept up by the wave
            for q in Q:
                if q == qh:
                    continue
                for dl in BLOCKISH + ["<"]:
                    rule(pat(head=qh, delim=dl), (w, q, a, "<"), ANY, (w, qh, a, "<"))

    # -- E: the sensitivity particle p (right-mover on fully blank cells,
    #    destroyed by any contact)
    if with_particle:
        rule(pat(head="_", wit="_", tape=BLANK, delim="p"), BLANK_STATE, ANY, ("_", "_", BLANK, "p"))
        rule(ANY, pat(delim="p"), ANY, BLANK_STATE)

    # -- F: extension push: a blank column next to an extending x becomes new
    #    runway for the block
    rule(pat(head="_", delim="xr"), pat(delim="_"), ANY, ("_", "_", BLANK, "<"))

    # -- G: blank-delimiter columns carry no content
    rule(ANY, pat(delim="_"), ANY, BLANK_STATE)

    # -- K: machine steps on '>' columns (delimiters act as walls; blocked
    #    moves wait via the default).  Head arrivals precede x arrivals so a
    #    head always wins a contested column.
    for (q, a), (q2, b, m) in machine.delta.items():
        if q == qh:
            continue
        for w in ("_", "1"):
            if m == 0:
                rule(ANY, (w, q, a, ">"), ANY, (w, q2, b, ">"))
            elif m == 1:
                rule(ANY, (w, q, a, ">"), pat(head="_", delim=">"), (w, "_", b, ">"))
            else:
                rule(pat(head="_", delim=">"), (w, q, a, ">"), ANY, (w, "_", b, ">"))
    for (q, a), (q2, b, m) in machine.delta.items():
        if q == qh or m == 0:
            continue
        for w in ("_", "1"):
            for ac in A:
                if m == 1:
                    rule(pat(head=q, tape=a, delim=">"), (w, "_", ac, ">"), ANY, (w, q2, ac, ">"))
                else:
                    rule(ANY, (w, "_", ac, ">"), pat(head=q, tape=a, delim=">"), (w, q2, ac, ">"))

    # -- I: x arrivals
    for w in ("_", "1"):
        for a in A:
            # '<' column is entered by a right-moving x
            rule(pat(head="_", delim="xr"), (w, "_", a, "<"), ANY, (w, "_", a, "xr"))
            # '>' column is entered by the reset sweeper
            rule(ANY, (w, "_", a, ">"), pat(head="_", delim="x0"), (w, "_", a, "x0"))
        # a blank-tape '>' column is entered by a left-moving x
        rule(ANY, (w, "_", BLANK, ">"), pat(head="_", delim="xl"), (w, "_", BLANK, "xl"))

    # -- H: x self-transitions.  The left-mover xl turns at columns holding
    #    heads or written tape, so it never enters a machine's working region;
    #    the reset sweeper x0 stops at active heads.
    for w in ("_", "1"):
        for a in A:
            # xr: deposit a fresh head when departing the left end of its
            # '>'-zone (anything but '>' on the left marks the zone edge)
            for dl in [d for d in delims if d != ">"]:
                rule(
                    pat(delim=dl),
                    (w, "_", a, "xr"),
                    pat(head="_", delim="<"),
                    (w, qi, a, ">"),
                )
            # an x pinned between open space and an occupied wall is junk
            for dl in open_delims:
                rule(pat(delim=dl), (w, "_", a, "xr"), pat(delim="<"), BLANK_STATE)
            rule(ANY, (w, "_", a, "xr"), pat(head="_", delim="<"), (w, "_", a, ">"))
            rule(ANY, (w, "_", a, "xr"), pat(delim="_"), (w, "_", a, "x0"))
            rule(ANY, (w, "_", a, "xr"), pat(delim="<"), (w, "_", a, "xl"))
            for d in [">", "xr", "xl", "x0"] + (["p"] if with_particle else []):
                rule(ANY, (w, "_", a, "xr"), pat(delim=d), (w, "_", a, "xl"))
            # xl
            rule(pat(head="_", tape=BLANK, delim=">"), (w, "_", a, "xl"), ANY, (w, "_", a, "<"))
            rule(pat(delim=">"), (w, "_", a, "xl"), ANY, (w, "_", a, "xr"))
            for d in (["_", "<", "xr", "xl", "x0"] + (["p"] if with_particle else [])):
                rule(pat(delim=d), (w, "_", a, "xl"), ANY, (w, "_", a, "xr"))
    # x0: reset sweep rewrites the working tape from the witness
    for w in ("_", "1"):
        rule(pat(head="_", delim=">"), pat(wit=w, delim="x0"), ANY, (w, "_", wit_map(w), "<"))
        rule(pat(delim=">"), pat(wit=w, delim="x0"), ANY, (w, "_", wit_map(w), "xr"))
        for d in (["_", "<", "xr", "xl", "x0"] + (["p"] if with_particle else [])):
            rule(pat(delim=d), pat(wit=w, delim="x0"), ANY, (w, "_", wit_map(w), "xr"))

    # -- J: x insertion revives delimiter runs facing open space
    for w in ("_", "1"):
        for a in A:
            for d in open_delims:
                rule(ANY, (w, "_", a, ">"), pat(delim=d), (w, "_", a, "xr"))

    # -- L: witness erosion (a blank propagates rightward inside a block,
    #    keeping inputs contiguous); paused next to heads and x symbols
    for a in A:
        for dc in (">", "<"):
            rule(pat(wit="_", head="_", delim=">"), ("1", "_", a, dc), ANY, ("_", "_", a, dc))

    # -- N: '<' columns erode left to right when orphaned
    for dl in open_delims + [">"]:
        rule(pat(delim=dl), pat(delim="<"), ANY, BLANK_STATE)

    table = RuleTable(
        layers,
        line_neighborhood(1),
        rules,
        quiescent=BLANK_STATE,
        name=f"reduce1d[{machine.name}]" + ("" if with_particle else "+nilpotent"),
    )
    manifest = {
        "machine": machine.name,
        "variant": "sensitivity" if with_particle else "nilpotency",
        "radius": 1,
        "layers": {
            "witness": list(wit_l.symbols),
            "head": list(head_l.symbols),
            "tape": list(tape_l.symbols),
            "delim": list(delim_l.symbols),
        },
        "machine_states": list(Q),
        "machine_alphabet": list(A),
        "initial": qi,
        "halt": qh,
        "blank_state": list(BLANK_STATE),
        "notes": [
            "state = (witness, head, tape, delim); the paper's working layer is the head x tape product",
            "blocks are runs >^a x <^b; heads compute on '>' columns and wait at walls",
            "extension pushes a '<' outward and triggers an x0 reset sweep (restart on the witness input)",
            "halting floods the block with halt marks; demolition proceeds right to left",
        ],
    }
    return Reduction1DOutput(table, manifest)


def make_block(
    machine: TuringMachine, n: int, length: int | None = None, parked: bool = True
) -> ComputationalBlock:
    """A well-formed computational block with input n.

    Layout: columns 0..a-1 hold ``>`` (the workspace; witness/tape input 1^n
    at its left end with a fresh head), column a holds ``xr``, columns
    a+1..W-1 hold ``<`` (the runway).  By default the last column carries a
    parked head: it freezes under ``<`` and turns the x around, which keeps
    the whole block's evolution independent of anything beyond the word; in
    a halting flood it is swept up with the rest of the block.  Unparked
    blocks extend into open space (and restart on each extension).
    """
    _check_machine(machine)
    b = 3
    min_width = (n + 3) + 1 + b
    if length is None:
        length = min_width
    if length < min_width:
        raise BlockTooSmall(f"requested length {length} below minimum {min_width} for input {n}")
    a = length - 1 - b
    width = length
    qi = machine.initial
    cells = {}
    for i in range(width):
        wit = "1" if i < n else "_"
        tape = "1" if i < n else BLANK
        if i == a - 1:
            tape = "1"  # frontier marker: keeps the bouncing x out of the workspace
        head = "_"
        if i == 0:
            head = qi
        if i == width - 1 and parked:
            head = qi
        delim = ">" if i < a else ("xr" if i == a else "<")
        cells[(i,)] = (wit, head, tape, delim)
    word = Word.build(1, cells)
    return ComputationalBlock(
        word=word,
        width=width,
        input=n,
        x_col=a,
        spin_col=n,
        machine_name=machine.name,
    )


def double_block_word(block: ComputationalBlock) -> Word:
    """The pattern uu: two adjacent copies of the block."""
    shifted = block.word.shifted((block.width,))
    merged = dict(block.word.content)
    merged.update(shifted.content)
    return Word(1, merged)


def block_config(block_or_word, background=("_", "_", BLANK, "_")) -> Configuration:
    word = block_or_word.word if isinstance(block_or_word, ComputationalBlock) else block_or_word
    return Configuration.build(1, background, dict(word.content))


def place_particle(config: Configuration, col: int) -> Configuration:
    """Drop a p particle on an otherwise blank column."""
    cells = dict(config.cells)
    cells[(col,)] = ("_", "_", BLANK, "p")
    return Configuration.build(1, config.background, cells)


def golly_export(out: Reduction1DOutput) -> str:
    """Golly-style @TABLE text (documented lossy: per-layer wildcards are
    flattened to enumerated variable lines and rule order is not preserved)."""
    rule = out.rule
    states = {st: i for i, st in enumerate(rule.states())}
    lines = [
        "# Golly-style export (lossy: first-match order flattened)",
        f"# {rule.name}",
        "@TABLE",
        f"n_states:{len(states)}",
        "neighborhood:oneDimensional",
        "symmetries:none",
    ]
    for (l, c, r), outp in rule.rules:
        def entry(e):
            if all(x == W_ for x in e):
                return "any"
            return ",".join(x for x in e)

        lines.append(f"# {entry(l)} | {entry(c)} | {entry(r)} -> {','.join(outp)}")
    return "\n".join(lines) + "\n"
