"""Machine library: test fixtures, a two-way corpus, and the twin-prime machine.

The twin-prime machine halts on unary input n iff some p >= n has p and p+2
both prime; on halting the tape holds 1^p starting at cell 0 (the witness).
Primality is unary trial division: candidate block ``L 1^p`` against a growing
divisor block ``# 1^d``, marking consumed units with X (candidate) and Y
(divisor).
"""

from __future__ import annotations

from sensca.turing import (
    BLANK,
    HALT,
    LEFT,
    RIGHT,
    SEMI_INFINITE,
    STAY,
    TWO_WAY,
    Block,
    Exit,
    TuringMachine,
    assemble,
)


def always_halt() -> TuringMachine:
    """Halts in one step on every input."""
    A = (BLANK, "1")
    delta = {("run", a): ("halt", a, STAY) for a in A}
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("run", "halt"), A, "run", "halt", delta, SEMI_INFINITE, "always-halt")


def never_halt() -> TuringMachine:
    """Spins forever on every input."""
    A = (BLANK, "1")
    delta = {("spin", a): ("spin", a, STAY) for a in A}
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("spin", "halt"), A, "spin", "halt", delta, SEMI_INFINITE, "never-halt")


def loop_on(k: int) -> TuringMachine:
    """Halts on every input except k; on k it spins in place forever."""
    if k < 0:
        raise ValueError("k must be a natural number")
    A = (BLANK, "1")
    states = [f"c{i}" for i in range(k + 2)] + ["spin", "halt"]
    delta = {}
    for i in range(k + 2):
        if i <= k:
            delta[(f"c{i}", "1")] = (f"c{i+1}", "1", RIGHT)
        else:
            delta[(f"c{i}", "1")] = ("halt", "1", STAY)
        if i == k:
            delta[(f"c{i}", BLANK)] = ("spin", BLANK, STAY)
        else:
            delta[(f"c{i}", BLANK)] = ("halt", BLANK, STAY)
    for a in A:
        delta[("spin", a)] = ("spin", a, STAY)
        delta[("halt", a)] = ("halt", a, STAY)
    return TuringMachine(tuple(states), A, "c0", "halt", delta, SEMI_INFINITE, f"loop-on-{k}")


def seek_blank_right() -> TuringMachine:
    """Walks right over the input block and halts on the first blank."""
    A = (BLANK, "1")
    delta = {
        ("seek", "1"): ("seek", "1", RIGHT),
        ("seek", BLANK): ("halt", BLANK, STAY),
    }
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("seek", "halt"), A, "seek", "halt", delta, SEMI_INFINITE, "seek-blank-right")


def erase_right() -> TuringMachine:
    """Erases the input block left to right, then halts."""
    A = (BLANK, "1")
    delta = {
        ("er", "1"): ("er", BLANK, RIGHT),
        ("er", BLANK): ("halt", BLANK, STAY),
    }
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("er", "halt"), A, "er", "halt", delta, SEMI_INFINITE, "erase-right")


def bounce_once() -> TuringMachine:
    """Walks to the right end of the input and back one cell, then halts."""
    A = (BLANK, "1")
    delta = {
        ("rb", "1"): ("rb", "1", RIGHT),
        ("rb", BLANK): ("lb", BLANK, LEFT),
        ("lb", "1"): ("halt", "1", STAY),
        ("lb", BLANK): ("halt", BLANK, STAY),
    }
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("rb", "lb", "halt"), A, "rb", "halt", delta, SEMI_INFINITE, "bounce-once")


# -- two-way corpus for conversion tests ------------------------------------


def left_seeker() -> TuringMachine:
    """Two-way: walks left to the first blank and halts (visits cell -1)."""
    A = (BLANK, "1")
    delta = {
        ("seek", "1"): ("seek", "1", LEFT),
        ("seek", BLANK): ("halt", BLANK, STAY),
    }
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("seek", "halt"), A, "seek", "halt", delta, TWO_WAY, "left-seeker")


def left_writer() -> TuringMachine:
    """Two-way: writes two 1s to the left of the input and halts."""
    A = (BLANK, "1")
    delta = {}
    for a in A:
        delta[("a0", a)] = ("a1", "1", LEFT)
        delta[("a1", a)] = ("a2", "1", LEFT)
        delta[("a2", a)] = ("halt", "1", STAY)
        delta[("halt", a)] = ("halt", a, STAY)
    return TuringMachine(("a0", "a1", "a2", "halt"), A, "a0", "halt", delta, TWO_WAY, "left-writer")


def blank_bouncer() -> TuringMachine:
    """Two-way: left to the first blank, then right to the first blank, halt."""
    A = (BLANK, "1")
    delta = {
        ("lb", "1"): ("lb", "1", LEFT),
        ("lb", BLANK): ("rb", BLANK, RIGHT),
        ("rb", "1"): ("rb", "1", RIGHT),
        ("rb", BLANK): ("halt", BLANK, STAY),
    }
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("lb", "rb", "halt"), A, "lb", "halt", delta, TWO_WAY, "blank-bouncer")


def zigzag_eraser() -> TuringMachine:
    """Two-way: erases the input from alternating ends until empty."""
    A = (BLANK, "1")
    delta = {
        ("ql", "1"): ("qr_scan", BLANK, RIGHT),
        ("ql", BLANK): ("halt", BLANK, STAY),
        ("qr_scan", "1"): ("qr_scan", "1", RIGHT),
        ("qr_scan", BLANK): ("qr_erase", BLANK, LEFT),
        ("qr_erase", "1"): ("ql_scan", BLANK, LEFT),
        ("qr_erase", BLANK): ("halt", BLANK, STAY),
        ("ql_scan", "1"): ("ql_scan", "1", LEFT),
        ("ql_scan", BLANK): ("ql", BLANK, RIGHT),
    }
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(
        ("ql", "qr_scan", "qr_erase", "ql_scan", "halt"), A, "ql", "halt", delta, TWO_WAY, "zigzag-eraser"
    )


def left_runner() -> TuringMachine:
    """Two-way: runs left forever (never halts)."""
    A = (BLANK, "1")
    delta = {("run", a): ("run", a, LEFT) for a in A}
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("run", "halt"), A, "run", "halt", delta, TWO_WAY, "left-runner")


def two_way_corpus():
    return [left_seeker(), left_writer(), blank_bouncer(), zigzag_eraser(), left_runner()]


# -- twin-prime machine ------------------------------------------------------

TP_ALPHABET = (BLANK, "1", "X", "#", "Y", "L")


def _init_block() -> Block:
    # 1^n at 0 -> L 1^n with the candidate block at cells 1..n
    t = {
        ("i0", BLANK): (Exit("done"), "L", STAY),
        ("i0", "1"): ("walk", "X", RIGHT),
        ("walk", "1"): ("walk", "1", RIGHT),
        ("walk", BLANK): ("back", "1", LEFT),
        ("back", "1"): ("back", "1", LEFT),
        ("back", "X"): (Exit("done"), "L", STAY),
    }
    return Block("init", "i0", t)


def _prime_block(name: str) -> Block:
    """Primality of the candidate block; entry and exits at the L cell.

    Round flags: r1/r2/r3 count completed subtraction rounds (r3 = two or
    more); exhaustion of candidate units while fetching for the round's first
    divisor unit means the previous round divided exactly, so quotient 1
    (r2, meaning d == p) proves primality and anything else proves
    compositeness.  Exhaustion mid-round means d does not divide p.
    """
    t = {}

    def add(q, a, target, w, m):
        t[(q, a)] = (target, w, m)

    add("e0", "L", "chk1", "L", RIGHT)
    add("chk1", BLANK, "npb", BLANK, LEFT)  # p = 0
    add("chk1", "1", "chk2", "1", RIGHT)
    add("chk2", BLANK, "npb", BLANK, LEFT)  # p = 1
    add("chk2", "1", "chk3", "1", RIGHT)
    add("chk3", BLANK, "pb", BLANK, LEFT)  # p = 2
    add("chk3", "1", "sw", "1", RIGHT)
    for st, exit_label in (("npb", "not_prime"), ("pb", "prime")):
        add(st, "1", st, "1", LEFT)
        add(st, "L", Exit(exit_label), "L", STAY)
    # divisor setup: append "# 1 1" after the candidate block
    add("sw", "1", "sw", "1", RIGHT)
    add("sw", BLANK, "sd1", "#", RIGHT)
    add("sd1", BLANK, "sd2", "1", RIGHT)
    add("sd2", BLANK, "dent", "1", LEFT)
    add("dent", "1", "dent", "1", LEFT)
    add("dent", "#", "dsa.r1", "#", RIGHT)

    nxt = {"r1": "r2", "r2": "r3", "r3": "r3"}
    for r in ("r1", "r2", "r3"):
        # find the round's first unmarked divisor unit
        add(f"dsa.{r}", "Y", f"dsb.{r}", "Y", RIGHT)
        add(f"dsa.{r}", "1", f"pkt.{r}", "Y", LEFT)
        # later units of the same round
        add(f"dsb.{r}", "Y", f"dsb.{r}", "Y", RIGHT)
        add(f"dsb.{r}", "1", f"pkf.{r}", "Y", LEFT)
        add(f"dsb.{r}", BLANK, f"usw.{nxt[r]}", BLANK, LEFT)
        # round boundary: unmark divisor units and start the next round
        add(f"usw.{r}", "Y", f"usw.{r}", "1", LEFT)
        add(f"usw.{r}", "#", f"dsa.{r}", "#", RIGHT)
        # fetch one candidate unit (uf encodes first-unit-of-round)
        for uf, seek in (("t", f"pkt.{r}"), ("f", f"pkf.{r}")):
            seek2 = f"pk2{uf}.{r}"
            add(seek, "Y", seek, "Y", LEFT)
            add(seek, "#", seek2, "#", LEFT)
            add(seek2, "X", seek2, "X", LEFT)
            add(seek2, "1", f"tod.{r}", "X", RIGHT)
        # exhausted mid-round: d does not divide p
        add(f"pk2f.{r}", "L", "xrs", "L", RIGHT)
        # back to the divisor region for the next unit
        add(f"tod.{r}", "X", f"tod.{r}", "X", RIGHT)
        add(f"tod.{r}", "1", f"tod.{r}", "1", RIGHT)
        add(f"tod.{r}", "#", f"dsb.{r}", "#", RIGHT)
    # exhausted at a round's first fetch: the previous round divided exactly,
    # so quotient 1 (exactly one completed round) means d == p, hence prime
    add("pk2t.r2", "L", "pc1", "L", RIGHT)
    add("pk2t.r1", "L", "nc1", "L", RIGHT)
    add("pk2t.r3", "L", "nc1", "L", RIGHT)
    # not divisible: reset marks, extend the divisor by one, test again
    add("xrs", "X", "xrs", "1", RIGHT)
    add("xrs", "1", "xrs", "1", RIGHT)
    add("xrs", "#", "yrs", "#", RIGHT)
    add("yrs", "Y", "yrs", "1", RIGHT)
    add("yrs", "1", "yrs", "1", RIGHT)
    add("yrs", BLANK, "drt", "1", LEFT)
    add("drt", "1", "drt", "1", LEFT)
    add("drt", "#", "drtp", "#", LEFT)
    add("drtp", "1", "drtp", "1", LEFT)
    add("drtp", "X", "drtp", "X", LEFT)
    add("drtp", "L", "den2", "L", RIGHT)
    add("den2", "1", "den2", "1", RIGHT)
    add("den2", "#", "dsa.r1", "#", RIGHT)
    # cleanup: unmark candidate, erase divisor region, exit at L
    for pre, exit_label in (("pc", "prime"), ("nc", "not_prime")):
        add(f"{pre}1", "X", f"{pre}1", "1", RIGHT)
        add(f"{pre}1", "1", f"{pre}1", "1", RIGHT)
        add(f"{pre}1", "#", f"{pre}2", BLANK, RIGHT)
        add(f"{pre}2", "Y", f"{pre}2", BLANK, RIGHT)
        add(f"{pre}2", "1", f"{pre}2", BLANK, RIGHT)
        add(f"{pre}2", BLANK, f"{pre}3", BLANK, LEFT)
        add(f"{pre}3", BLANK, f"{pre}3", BLANK, LEFT)
        add(f"{pre}3", "1", f"{pre}3", "1", LEFT)
        add(f"{pre}3", "L", Exit(exit_label), "L", STAY)
    return Block(name, "e0", t)


def _append_block(name: str, count: int) -> Block:
    t = {("w0", "L"): ("w0", "L", RIGHT), ("w0", "1"): ("w0", "1", RIGHT)}
    prev = "w0"
    for i in range(count):
        cur = f"w{i+1}"
        last = i == count - 1
        t[(prev, BLANK)] = (("bk" if last else cur), "1", LEFT if last else RIGHT)
        prev = cur
    t[("bk", "1")] = ("bk", "1", LEFT)
    t[("bk", "L")] = (Exit("done"), "L", STAY)
    return Block(name, "w0", t)


def _drop_block(name: str, count: int, then_halt: bool = False) -> Block:
    t = {("w0", "L"): ("w0", "L", RIGHT), ("w0", "1"): ("w0", "1", RIGHT), ("w0", BLANK): ("e1", BLANK, LEFT)}
    for i in range(1, count + 1):
        t[(f"e{i}", "1")] = ((f"e{i+1}" if i < count else "bk"), BLANK, LEFT)
    t[("bk", "1")] = ("bk", "1", LEFT)
    if then_halt:
        t[("bk", "L")] = (Exit("__halt__"), "1", STAY)  # witness 1^p from cell 0
    else:
        t[("bk", "L")] = (Exit("done"), "L", STAY)
    return Block(name, "w0", t)


def twin_prime_machine() -> TuringMachine:
    """Halts on input n iff a twin-prime pair (p, p+2) with p >= n exists.

    Witness encoding on halt: tape is 1^p starting at cell 0, head at cell 0.
    """
    blocks = [
        _init_block(),
        _prime_block("prime1"),
        _prime_block("prime2"),
        _append_block("inc1", 1),
        _append_block("add2", 2),
        _drop_block("drop1", 1),
        _drop_block("finish", 3, then_halt=True),
    ]
    wiring = {
        ("init", "done"): "prime1",
        ("prime1", "prime"): "add2",
        ("prime1", "not_prime"): "inc1",
        ("inc1", "done"): "prime1",
        ("add2", "done"): "prime2",
        ("prime2", "prime"): "finish",
        ("prime2", "not_prime"): "drop1",
        ("drop1", "done"): "prime1",
    }
    return assemble(blocks, wiring, "init", TP_ALPHABET, mode=SEMI_INFINITE, name="twin-prime")


def read_unary_witness(snapshot) -> int:
    """Count the 1-block at cell 0 of a halted snapshot."""
    p = 0
    while snapshot.read(p) == "1":
        p += 1
    return p
