"""Turing machines: model, interpreter, two-way to semi-infinite conversion,
and a macro-assembler for composing machines from named sub-machines.

Conventions: blank is "_", inputs are unary blocks of "1" starting at cell 0
with the head on the first 1 (on a blank at 0 for n = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Union

from sensca.errors import BadConfiguration, HeadUnderflow, UnwiredExit

BLANK = "_"
LEFT, STAY, RIGHT = -1, 0, 1

TWO_WAY = "two-way"
SEMI_INFINITE = "semi-infinite"


@dataclass(frozen=True)
class TuringMachine:
    states: tuple
    alphabet: tuple
    initial: str
    halt: str
    delta: Mapping  # (state, symbol) -> (state, symbol, move)
    mode: str = SEMI_INFINITE
    name: str = ""

    def __post_init__(self):
        if BLANK not in self.alphabet or "1" not in self.alphabet:
            raise BadConfiguration("alphabet must contain '_' and '1'")
        if self.initial not in self.states or self.halt not in self.states:
            raise BadConfiguration("initial/halt state not in state set")
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise BadConfiguration(f"delta is not total: missing ({q!r}, {a!r})")
        for a in self.alphabet:
            if self.delta[(self.halt, a)] != (self.halt, a, STAY):
                raise BadConfiguration("halting state must be absorbing")
        for (q, a), (q2, b, m) in self.delta.items():
            if q not in self.states or a not in self.alphabet:
                raise BadConfiguration(f"delta key ({q!r}, {a!r}) outside Q x A")
            if q2 not in self.states or b not in self.alphabet or m not in (-1, 0, 1):
                raise BadConfiguration(f"delta value for ({q!r}, {a!r}) malformed")

    def moves_left(self) -> bool:
        return any(m == LEFT for (_, _, m) in self.delta.values())


@dataclass(frozen=True)
class MachineSnapshot:
    tape: Mapping  # position -> symbol, blank omitted
    head: int
    state: str
    steps: int

    def read(self, pos: int) -> str:
        return self.tape.get(pos, BLANK)

    def tape_string(self, lo: int, hi: int) -> str:
        return "".join(self.read(i) for i in range(lo, hi + 1))


@dataclass(frozen=True)
class Halted:
    steps: int
    snapshot: MachineSnapshot


@dataclass(frozen=True)
class FuelExhausted:
    snapshot: MachineSnapshot


RunOutcome = Union[Halted, FuelExhausted]


def tm_init(machine: TuringMachine, n: int) -> MachineSnapshot:
    """Initial snapshot on unary input n: tape 1^n at cells 0..n-1, head at 0."""
    if n < 0:
        raise ValueError("input must be a natural number")
    return MachineSnapshot({i: "1" for i in range(n)}, 0, machine.initial, 0)


def tm_step(machine: TuringMachine, snap: MachineSnapshot) -> MachineSnapshot:
    """Apply delta once (identity on tape/head/state once halted)."""
    q = snap.state
    a = snap.read(snap.head)
    q2, b, m = machine.delta[(q, a)]
    tape = dict(snap.tape)
    if b == BLANK:
        tape.pop(snap.head, None)
    else:
        tape[snap.head] = b
    head = snap.head + m
    if machine.mode == SEMI_INFINITE and head < 0:
        raise HeadUnderflow(f"machine {machine.name!r} moved below cell 0 in state {q!r}")
    return MachineSnapshot(tape, head, q2, snap.steps + 1)


def tm_run(machine: TuringMachine, n: int, fuel: int) -> RunOutcome:
    """Run on unary input n until the halt state or fuel exhaustion."""
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    # compiled fast path: integer states/symbols, list tape for semi-infinite
    states = {q: i for i, q in enumerate(machine.states)}
    syms = {a: i for i, a in enumerate(machine.alphabet)}
    n_sym = len(machine.alphabet)
    table = [None] * (len(machine.states) * n_sym)
    for (q, a), (q2, b, m) in machine.delta.items():
        table[states[q] * n_sym + syms[a]] = (states[q2], syms[b], m)
    blank = syms[BLANK]
    one = syms["1"]
    halt = states[machine.halt]
    state = states[machine.initial]
    semi = machine.mode == SEMI_INFINITE

    tape = [one] * n
    neg = {}  # two-way only: position -1-k -> symbol
    head = 0
    steps = 0
    while steps < fuel and state != halt:
        if head >= 0:
            if head >= len(tape):
                tape.extend([blank] * (head - len(tape) + 1))
            a = tape[head]
        else:
            a = neg.get(head, blank)
        state, b, m = table[state * n_sym + a]
        if head >= 0:
            tape[head] = b
        elif b == blank:
            neg.pop(head, None)
        else:
            neg[head] = b
        head += m
        if semi and head < 0:
            raise HeadUnderflow(f"machine {machine.name!r} moved below cell 0")
        steps += 1

    inv_sym = list(machine.alphabet)
    inv_state = list(machine.states)
    sparse = {i: inv_sym[s] for i, s in enumerate(tape) if s != blank}
    sparse.update({i: inv_sym[s] for i, s in neg.items()})
    snap = MachineSnapshot(sparse, head, inv_state[state], steps)
    if state == halt:
        return Halted(steps, snap)
    return FuelExhausted(snap)


# ---------------------------------------------------------------------------
# two-way -> semi-infinite conversion
# ---------------------------------------------------------------------------


def to_semi_infinite(machine: TuringMachine) -> TuringMachine:
    """Simulate a two-way machine on a semi-infinite tape.

    When the head would move left from cell 0, all tape content between the
    cell-0 mark and the right-end mark is copied one step to the right.
    Machines that never move left are returned unchanged apart from the mode.
    """
    if machine.mode == SEMI_INFINITE:
        return machine
    if not machine.moves_left():
        return replace(machine, mode=SEMI_INFINITE, name=machine.name + "+semi")

    A = list(machine.alphabet)
    marked = {a: f"{a}^" for a in A}  # cell-0 marks
    END = "$"
    alphabet = tuple(A + [marked[a] for a in A] + [END])
    Q = list(machine.states)
    halt = machine.halt

    delta = {}
    states = set()

    def st(name):
        states.add(name)
        return name

    def add(q, a, q2, b, m):
        delta[(q, a)] = (q2, b, m)

    INIT = st("conv.init")
    SCAN = st("conv.scan")
    RET = st("conv.ret")

    # mark cell 0, place the end mark after the input block, return
    for a in A:
        add(INIT, a, SCAN, marked[a], RIGHT)
    add(SCAN, "1", SCAN, "1", RIGHT)
    add(SCAN, BLANK, RET, END, LEFT)
    add(RET, "1", RET, "1", LEFT)
    for a in A:
        add(RET, marked[a], machine.initial, marked[a], STAY)

    for q in Q:
        st(q)

    def goto_end(q):
        return st(f"conv.end[{q}]")

    def put_end(q):
        return st(f"conv.put[{q}]")

    def skip(q):
        return st(f"conv.skip[{q}]")

    def read_l(q):
        return st(f"conv.read[{q}]")

    def skip2(q):
        return st(f"conv.skip2[{q}]")

    def write_r(q, c):
        return st(f"conv.write[{q},{c}]")

    def write_last(q, c):
        return st(f"conv.last[{q},{c}]")

    def back(q):
        return st(f"conv.back[{q}]")

    def place(q):
        return st(f"conv.place[{q}]")

    def ret_q(q):
        return st(f"conv.ret[{q}]")

    for q in Q:
        if q == halt:
            continue
        for a in A:
            q2, b, m = machine.delta[(q, a)]
            # interior cells behave as in the original machine
            add(q, a, q2, b, m)
            # marked cell 0
            if m == LEFT:
                add(q, marked[a], goto_end(q2), marked[b], RIGHT)
            else:
                add(q, marked[a], q2, marked[b], m)
        # frontier push: reading the end mark means reading a blank one cell
        # before a fresh end mark
        add(q, END, place(q), BLANK, RIGHT)
        add(place(q), BLANK, back(q), END, LEFT)
        add(back(q), BLANK, q, BLANK, STAY)

    # right-shift procedure for each resumption state p
    for p in Q:
        ge, pe, sk, rl, s2, bq = goto_end(p), put_end(p), skip(p), read_l(p), skip2(p), ret_q(p)
        for a in A:
            add(ge, a, ge, a, RIGHT)
        add(ge, END, pe, BLANK, RIGHT)
        add(pe, BLANK, sk, END, LEFT)
        add(sk, BLANK, rl, BLANK, LEFT)
        for c in A:
            add(rl, c, write_r(p, c), c, RIGHT)
            add(rl, marked[c], write_last(p, c), marked[BLANK], RIGHT)
            for b in A:
                add(write_r(p, c), b, s2, c, LEFT)
            add(write_r(p, c), BLANK, s2, c, LEFT)
        for a in A:
            add(s2, a, rl, a, LEFT)
        for c in A:
            for b in A:
                add(write_last(p, c), b, bq, c, LEFT)
        for a in A:
            add(bq, marked[a], p, marked[a], STAY)

    STUCK = st("conv.stuck")
    all_states = tuple(sorted(states) + ([halt] if halt not in states else []))
    all_states = tuple(dict.fromkeys(list(all_states)))
    for q in all_states:
        for a in alphabet:
            if (q, a) not in delta:
                if q == halt:
                    delta[(q, a)] = (halt, a, STAY)
                else:
                    delta[(q, a)] = (STUCK, a, STAY)
    for a in alphabet:
        delta.setdefault((STUCK, a), (STUCK, a, STAY))
    all_states = tuple(dict.fromkeys(list(all_states) + [STUCK]))

    return TuringMachine(
        states=all_states,
        alphabet=alphabet,
        initial=INIT,
        halt=halt,
        delta=delta,
        mode=SEMI_INFINITE,
        name=machine.name + "+semi",
    )


# ---------------------------------------------------------------------------
# macro-assembler
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Exit:
    label: str


HALT = Exit("__halt__")


@dataclass
class Block:
    """A named sub-machine with one entry state and labelled exits.

    Transition targets are internal state names or Exit(label) markers.
    """

    name: str
    entry: str
    transitions: dict  # (state, symbol) -> (target, write, move)

    def exits(self):
        return {t.label for (t, _, _) in self.transitions.values() if isinstance(t, Exit)}


def assemble(blocks, wiring, start: str, alphabet, mode=SEMI_INFINITE, name="assembled") -> TuringMachine:
    """Flatten wired sub-machines into a single TuringMachine.

    ``wiring`` maps (block_name, exit_label) to a successor block name or
    HALT.  Every exit must be wired.  Transitions left unspecified go to a
    non-halting reject state so that wiring bugs surface as non-termination
    rather than as spurious halts.
    """
    alphabet = tuple(alphabet)
    by_name = {b.name: b for b in blocks}
    if start not in by_name:
        raise UnwiredExit(f"start block {start!r} not supplied")
    for b in blocks:
        for label in b.exits():
            if label == HALT.label:
                continue
            if (b.name, label) not in wiring:
                raise UnwiredExit(f"exit {label!r} of block {b.name!r} has no successor")

    def flat(block, state):
        return f"{block}.{state}"

    halt = "halt"
    reject = "reject"
    delta = {}
    states = {halt, reject}

    def resolve(block: Block, target, write, move):
        if isinstance(target, Exit):
            if target.label == HALT.label:
                return (halt, write, move)
            succ = wiring.get((block.name, target.label))
            if succ is None:
                raise UnwiredExit(f"exit {target.label!r} of block {block.name!r} has no successor")
            if succ is HALT or succ == HALT.label:
                return (halt, write, move)
            return (flat(succ, by_name[succ].entry), write, move)
        return (flat(block.name, target), write, move)

    for b in blocks:
        for (q, a), (target, write, move) in b.transitions.items():
            if a not in alphabet or write not in alphabet:
                raise BadConfiguration(f"block {b.name!r} uses symbols outside the alphabet")
            src = flat(b.name, q)
            states.add(src)
            nxt = resolve(b, target, write, move)
            states.add(nxt[0])
            delta[(src, a)] = nxt

    for q in list(states):
        for a in alphabet:
            if (q, a) not in delta:
                if q == halt:
                    delta[(q, a)] = (halt, a, STAY)
                else:
                    delta[(q, a)] = (reject, a, STAY)
    for a in alphabet:
        delta[(reject, a)] = (reject, a, STAY)

    return TuringMachine(
        states=tuple(sorted(states)),
        alphabet=alphabet,
        initial=flat(start, by_name[start].entry),
        halt=halt,
        delta=delta,
        mode=mode,
        name=name,
    )


# ---------------------------------------------------------------------------
# machine file format
# ---------------------------------------------------------------------------


def machine_to_obj(machine: TuringMachine) -> dict:
    return {
        "states": list(machine.states),
        "alphabet": list(machine.alphabet),
        "initial": machine.initial,
        "halt": machine.halt,
        "mode": machine.mode,
        "name": machine.name,
        "delta": [
            {"state": q, "read": a, "next": q2, "write": b, "move": m}
            for (q, a), (q2, b, m) in sorted(machine.delta.items())
        ],
    }


def machine_from_obj(obj: dict) -> TuringMachine:
    delta = {
        (t["state"], t["read"]): (t["next"], t["write"], t["move"])
        for t in obj["delta"]
    }
    return TuringMachine(
        states=tuple(obj["states"]),
        alphabet=tuple(obj["alphabet"]),
        initial=obj["initial"],
        halt=obj["halt"],
        delta=delta,
        mode=obj["mode"],
        name=obj.get("name", ""),
    )


def save_machine(machine: TuringMachine, path: str):
    import json

    with open(path, "w", encoding="utf-8") as f:
        json.dump(machine_to_obj(machine), f, indent=2, sort_keys=True)
        f.write("\n")


def load_machine(path: str) -> TuringMachine:
    import json

    with open(path, "r", encoding="utf-8") as f:
        return machine_from_obj(json.load(f))
