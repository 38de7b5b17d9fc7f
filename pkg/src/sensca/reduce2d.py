"""Two-dimensional reduction: rectangular red loops act as circular Turing
tapes driven by particle signals, with green tentacles for extra space and a
halting signal that erases a zone.

Layers (von Neumann neighborhood; y grows north):

* ``tape``  in A: machine tape symbols written on loop cells
* ``head``  in {_} + Q: machine head occupancy on loop cells
* ``tent``  in {_, tr, tb, tt, tn, th}: tentacle request/body/tips and the
  halting signal
* ``part``  in {_, p, pr, pl, qr, ql, pru, prd, plu, pld, qru, qrd, qlu, qld}
* ``color`` in {r1, r2, r3, r4, w, g}: edge markers, white, green

Loop conventions (frozen here and in the manifest): bottom edge r1 owns the
bottom-right corner, left edge r2 owns the bottom-left, top edge r3 owns the
top-left, right edge r4 owns the top-right.  The tape starts at the top cell
of the left edge (below the top-left corner) and runs down the left edge,
east along the bottom, up the right edge, and west along the top; the first
w+h-2 cells (markers r2 and r1) carry the unary input 1s.  Signals enter at
the tape start from the west.
"""

from __future__ import annotations

from dataclasses import dataclass

from sensca.core import Configuration, Layer, RuleTable, Word, von_neumann_neighborhood
from sensca.errors import (
    AlphabetCollision,
    PerimeterTooSmall,
    TargetInsideRedZone,
    TargetUnreachable,
)
from sensca.turing import BLANK, SEMI_INFINITE, TuringMachine

REDS = ("r1", "r2", "r3", "r4")
COLORS = REDS + ("w", "g")
TENTS = ("_", "tr", "tb", "tt", "tn", "th")
PARTS = ("_", "p", "pr", "pl", "qr", "ql", "pru", "prd", "plu", "pld", "qru", "qrd", "qlu", "qld")

W_ = "*"

# offset order in the neighborhood: center, north, east, south, west
C, N, E, S, W = 0, 1, 2, 3, 4
DIRS = {"N": N, "E": E, "S": S, "W": W}


@dataclass
class Reduction2DOutput:
    rule: RuleTable
    manifest: dict


@dataclass
class RedLoop:
    """Rectangle ring at (x0, y0) (bottom-left cell) of size w x h (>= 3)."""

    x0: int
    y0: int
    w: int
    h: int

    @property
    def x1(self):
        return self.x0 + self.w - 1

    @property
    def y1(self):
        return self.y0 + self.h - 1

    @property
    def input(self):
        return self.w + self.h - 2

    def marker(self, pos):
        x, y = pos
        if x == self.x0 and self.y0 <= y <= self.y1 - 1:
            return "r2"
        if y == self.y0 and self.x0 + 1 <= x <= self.x1:
            return "r1"
        if y == self.y1 and self.x0 <= x <= self.x1 - 1:
            return "r3"
        if x == self.x1 and self.y0 + 1 <= y <= self.y1:
            return "r4"
        return None

    def ring_cells(self):
        return [pos for pos in self.box_cells() if self.marker(pos) is not None]

    def box_cells(self):
        return [(x, y) for x in range(self.x0, self.x1 + 1) for y in range(self.y0, self.y1 + 1)]

    def interior_cells(self):
        return [
            (x, y)
            for x in range(self.x0 + 1, self.x1)
            for y in range(self.y0 + 1, self.y1)
        ]

    def tape_start(self):
        return (self.x0, self.y1 - 1)

    def tape_cells(self):
        """Loop cells in tape order (left edge down, bottom east, right up, top west)."""
        cells = [(self.x0, y) for y in range(self.y1 - 1, self.y0 - 1, -1)]
        cells += [(x, self.y0) for x in range(self.x0 + 1, self.x1 + 1)]
        cells += [(self.x1, y) for y in range(self.y0 + 1, self.y1 + 1)]
        cells += [(x, self.y1) for x in range(self.x1 - 1, self.x0 - 1, -1)]
        return cells


def make_red_loop(half_perimeter: int, at=(0, 0)) -> RedLoop:
    """Smallest near-square loop whose tape encodes ``half_perimeter`` as input."""
    y = half_perimeter
    if y < 4:
        raise PerimeterTooSmall("half-perimeter must be at least 4 (3x3 loop)")
    w = max(3, (y + 2) // 2)
    h = y + 2 - w
    if h < 3:
        w, h = y - 1, 3
    assert w + h - 2 == y and w >= 3 and h >= 3
    return RedLoop(at[0], at[1], w, h)


def _check_machine(machine: TuringMachine):
    if machine.mode != SEMI_INFINITE:
        raise ValueError("compile expects a semi-infinite machine")
    clash = (set(machine.alphabet) | set(machine.states)) & (set(COLORS) | set(TENTS) | set(PARTS)) - {BLANK}
    if clash:
        raise AlphabetCollision(f"machine names collide with reserved symbols: {sorted(clash)}")


def compile_sensitivity_2d(machine: TuringMachine) -> Reduction2DOutput:
    _check_machine(machine)
    Q = list(machine.states)
    A = list(machine.alphabet)
    qh = machine.halt
    qi = machine.initial

    tape_l = Layer("tape", tuple(A))
    head_l = Layer("head", ("_",) + tuple(Q))
    tent_l = Layer("tent", TENTS)
    part_l = Layer("part", PARTS)
    color_l = Layer("color", COLORS)
    layers = (tape_l, head_l, tent_l, part_l, color_l)

    BLANKC = (BLANK, "_", "_", "_", "w")

    rules = []

    def pat(tape=W_, head=W_, tent=W_, part=W_, color=W_):
        return (tape, head, tent, part, color)

    ANY = pat()

    def rule(center, out, **sides):
        full = [ANY] * 5
        full[C] = center
        for d, p in sides.items():
            full[DIRS[d]] = p
        rules.append((tuple(full), out))

    # ---- halting signal: death, ignition, spread ------------------------
    # th spreads along a zone's connectivity but only through the sides a
    # cell's validity checks (never through its outward side), so junk beyond
    # a healthy loop's border cannot inject the signal
    rule(pat(tent="th"), BLANKC)
    for c in REDS:
        for q in (qh,):
            rule(pat(head=q, color=c), (BLANK, "_", "th", "_", c))
    # unconditional sides never face the exterior on any ring cell; the gated
    # sides do face out at one corner, which the gate excludes
    for c, d in (("r1", "N"), ("r1", "W"), ("r2", "N"), ("r2", "E"), ("r3", "E"), ("r3", "S"), ("r4", "S"), ("r4", "W"), ("g", "W"), ("g", "S")):
        rule(pat(color=c), (BLANK, "_", "th", "_", c), **{d: pat(tent="th")})
    for inner in ("w", "g"):
        rule(pat(color="r1"), (BLANK, "_", "th", "_", "r1"), E=pat(tent="th"), N=pat(color=inner))
        rule(pat(color="r2"), (BLANK, "_", "th", "_", "r2"), S=pat(tent="th"), E=pat(color=inner))
        rule(pat(color="r3"), (BLANK, "_", "th", "_", "r3"), W=pat(tent="th"), S=pat(color=inner))
        rule(pat(color="r4"), (BLANK, "_", "th", "_", "r4"), N=pat(tent="th"), W=pat(color=inner))

    # ---- red validity (inward/along-edge sides checked; outward free) ---
    def death_rules(marker, checks):
        """checks: dict side -> set of allowed colors; all other color
        combinations on those sides kill the cell."""
        sides = sorted(checks)
        combos = [()]
        for s in sides:
            combos = [c + (col,) for c in combos for col in COLORS]
        for combo in combos:
            ok = all(col in checks[s] for s, col in zip(sides, combo))
            if ok:
                continue
            rule(
                pat(color=marker),
                BLANKC,
                **{s: pat(color=col) for s, col in zip(sides, combo)},
            )

    nonred = {"w", "g"}
    # two signature variants per marker: the corner it owns, and the interior
    # (emit survival first as explicit no-ops is unnecessary: death rules are
    # complementary within the checked sides)
    def valid(*variants):
        """Build the per-side allowed sets as the union over signature variants."""
        union = {}
        for var in variants:
            for s, allowed in var.items():
                union.setdefault(s, set()).update(allowed)
        return union

    # a red cell survives iff some variant matches on every checked side; the
    # union-based death rules are weaker (survive if each side is allowed by
    # any variant), which only delays erosion, never kills a healthy loop
    death_rules("r1", valid({"N": {"r4"}, "W": {"r1", "r2"}, "E": COLORS}, {"N": nonred, "W": {"r1", "r2"}, "E": {"r1"}}))
    death_rules("r2", valid({"N": {"r2", "r3"}, "S": {"r2"}, "E": nonred}, {"N": {"r2"}, "S": COLORS, "E": {"r1"}}))
    death_rules("r3", valid({"E": {"r3", "r4"}, "W": {"r3"}, "S": nonred}, {"E": {"r3"}, "W": COLORS, "S": {"r2"}}))
    death_rules("r4", valid({"S": {"r4", "r1"}, "N": {"r4"}, "W": nonred}, {"S": {"r4"}, "N": COLORS, "W": {"r3"}}))

    # ---- green validity and collisions ----------------------------------
    rule(pat(color="g", tent="tt"), BLANKC, E=pat(color="g", tent="tb"))
    rule(pat(color="g", tent="tb"), BLANKC, W=pat(color="g", tent="tt"))
    rule(pat(color="g"), BLANKC, W=pat(color="w"), S=pat(color="w"))

    # ---- tape-start detection helper -------------------------------------
    START = dict(color="r2")  # with N = r3

    # ---- q rider: init sweep along the tape -----------------------------
    # deposit at wrap (full circuit): head q_i at the tape start
    rule(pat(color="r2"), ("1", qi, "_", "_", "r2"), N=pat(color="r3", part="qr"))
    # entry from the west at the tape start (accepts q movers and p movers/flashes)
    rule(pat(color="r2"), ("1", "_", "_", "qr", "r2"), N=pat(color="r3"), W=pat(color="w", part="qr"))
    for a in A:
        for h in ("_",) + tuple(Q):
            rule(
                pat(color="r2", tape=a, head=h),
                (a, h, "_", "p", "r2"),
                N=pat(color="r3"),
                W=pat(color="w", part="pr"),
            )
            rule(
                pat(color="r2", tape=a, head=h),
                (a, h, "_", "p", "r2"),
                N=pat(color="r3"),
                W=pat(color="w", part="p"),
            )

    # rider adjacency: (my marker, side the rider comes from, allowed source markers)
    RIDE_IN = [
        ("r2", "N", ("r2",)),  # descending the left edge (from r3 only at the start)
        ("r1", "W", ("r2", "r1")),  # east along the bottom (BL corner is r2)
        ("r4", "S", ("r1", "r4")),  # up the right edge (BR corner is r1)
        ("r3", "E", ("r4", "r3")),  # west along the top (TR corner is r4)
    ]
    init_write = {"r1": "1", "r2": "1", "r3": BLANK, "r4": BLANK}

    # q rider propagation: writes the unary input, erases heads
    for mine, side, sources in RIDE_IN:
        for src in sources:
            rule(
                pat(color=mine),
                (init_write[mine], "_", "_", "qr", mine),
                **{side: pat(color=src, part="qr")},
            )
    # q rider vacates
    rule(pat(color="r2", part="qr", head="_"), ("1", "_", "_", "_", "r2"))
    for mine in ("r1", "r4", "r3"):
        rule(pat(color=mine, part="qr"), (init_write[mine], "_", "_", "_", mine))
    # the deposited head survives the vacate step at the start cell
    for q in Q:
        rule(pat(color="r2", part="qr", head=q), ("1", q, "_", "_", "r2"))

    # ---- p rider: one machine step per signal ---------------------------
    # wrap death at the tape start
    for a in A:
        rule(pat(color="r2", tape=a, head="_"), (a, "_", "_", "_", "r2"), N=pat(color="r3", part="p"))
    # out-of-space: a head needing to step past the tape's end (the top-left
    # corner, recognized by its white/green west side) posts a tentacle
    # request and waits; the signal is consumed
    for (q, a), (q2, b, m) in machine.delta.items():
        if q == qh or m != 1:
            continue
        for wcol in ("w", "g"):
            rule(pat(color="r3", tape=a, head=q, part="p"), (a, q, "tr", "_", "r3"), W=pat(color=wcol))
    # delta firing: rider sits on the head cell
    for (q, a), (q2, b, m) in machine.delta.items():
        if q == qh:
            continue
        for mine in REDS:
            out_head = q2 if m == 0 else "_"
            rule(pat(color=mine, tape=a, head=q, part="p"), (b, out_head, "_", "_", mine))
    # head arrival along the tape's directed adjacencies (pred marker, succ
    # marker, direction from pred to succ); the top-west-to-start wrap is
    # excluded on both sides (semi-infinite machines never wrap)
    OPP = {"N": "S", "S": "N", "E": "W", "W": "E"}
    ADJ = [
        ("r2", "r2", "S"),
        ("r2", "r1", "E"),
        ("r1", "r1", "E"),
        ("r1", "r4", "N"),
        ("r4", "r4", "N"),
        ("r4", "r3", "W"),
        ("r3", "r3", "W"),
    ]
    for (q, a), (q2, b, m) in machine.delta.items():
        if q == qh or m == 0:
            continue
        fire = pat(color=W_, tape=a, head=q, part="p")
        for pm, sm, d in ADJ:
            for at in A:
                if m == 1:
                    # I am the successor; the firing predecessor lies opposite d
                    rule(
                        pat(color=sm, tape=at, head="_"),
                        (at, q2, "_", "_", sm),
                        **{OPP[d]: pat(color=pm, tape=a, head=q, part="p")},
                    )
                else:
                    # I am the predecessor; the firing successor lies along d
                    rule(
                        pat(color=pm, tape=at, head="_"),
                        (at, q2, "_", "_", pm),
                        **{d: pat(color=sm, tape=a, head=q, part="p")},
                    )

    # p rider propagation: onto the head cell first (the step trigger), else
    # onward over head-free cells
    for mine, side, sources in RIDE_IN:
        for src in sources:
            for at in A:
                for q in Q:
                    rule(
                        pat(color=mine, tape=at, head=q),
                        (at, q, "_", "p", mine),
                        **{side: pat(color=src, part="p", head="_")},
                    )
                rule(
                    pat(color=mine, tape=at, head="_"),
                    (at, "_", "_", "p", mine),
                    **{side: pat(color=src, part="p", head="_")},
                )
    # p rider vacates head-free cells
    for mine in REDS:
        for at in A:
            rule(pat(color=mine, tape=at, head="_", part="p"), (at, "_", "_", "_", mine))

    # ---- eastbound p movers, splits, detours, merges ---------------------
    # movers vacate (white only; particles die on green per the tentacle-tip
    # convention)
    for mover in ("pr", "pl", "qr", "ql", "p"):
        rule(pat(color="w", part=mover), (BLANK, "_", "_", "_", "w"))
    # head-on meet first: both movers enter one cell and flash into a plain p
    rule(
        pat(color="w", part="_"),
        (BLANK, "_", "_", "p", "w"),
        W=pat(color="w", part="pr"),
        E=pat(color="w", part="pl"),
    )
    rule(
        pat(color="w", part="_"),
        (BLANK, "_", "_", "p", "w"),
        W=pat(color="w", part="qr"),
        E=pat(color="w", part="ql"),
    )
    # straight motion on white
    rule(pat(color="w", part="_"), (BLANK, "_", "_", "pr", "w"), W=pat(color="w", part="pr"))
    rule(pat(color="w", part="_"), (BLANK, "_", "_", "pl", "w"), E=pat(color="w", part="pl"))
    rule(pat(color="w", part="_"), (BLANK, "_", "_", "qr", "w"), W=pat(color="w", part="qr"))
    rule(pat(color="w", part="_"), (BLANK, "_", "_", "ql", "w"), E=pat(color="w", part="ql"))
    # p_r contact with a left edge (non-start rows): ride on as a transient
    for a in A:
        for h in ("_",) + tuple(Q):
            rule(
                pat(color="r2", tape=a, head=h),
                (a, h, "_", "pr", "r2"),
                N=pat(color="r2"),
                W=pat(color="w", part="pr"),
            )
            # p_l contact with a right edge: transient on r4
            rule(
                pat(color="r4", tape=a, head=h),
                (a, h, "_", "pl", "r4"),
                E=pat(color="w", part="pl"),
            )
    # split: the transient's red neighbors pick up the up/down riders
    for a in A:
        for h in ("_",) + tuple(Q):
            for mine in ("r2", "r3"):
                rule(pat(color=mine, tape=a, head=h), (a, h, "_", "pru", mine), S=pat(color="r2", part="pr"))
            rule(pat(color="r2", tape=a, head=h), (a, h, "_", "prd", "r2"), N=pat(color="r2", part="pr"))
            rule(pat(color="r4", tape=a, head=h), (a, h, "_", "plu", "r4"), S=pat(color="r4", part="pl"))
            rule(pat(color="r4", tape=a, head=h), (a, h, "_", "pld", "r4"), N=pat(color="r4", part="pl"))
            rule(pat(color="r1", tape=a, head=h), (a, h, "_", "pld", "r1"), N=pat(color="r4", part="pl"))
    # transients clear
    for a in A:
        for h in ("_",) + tuple(Q):
            rule(pat(color="r2", tape=a, head=h, part="pr"), (a, h, "_", "_", "r2"))
            rule(pat(color="r4", tape=a, head=h, part="pl"), (a, h, "_", "_", "r4"))

    # detour riders around the loop (marker-guided), with merge on the far edge
    DETOUR = {
        # state: list of (my marker, side of source, source markers)
        "pru": [("r2", "S", ("r2",)), ("r3", "S", ("r2",)), ("r3", "W", ("r3",)), ("r4", "W", ("r3",)), ("r4", "N", ("r4",))],
        "prd": [("r2", "N", ("r2",)), ("r1", "W", ("r2", "r1")), ("r4", "S", ("r1", "r4"))],
        "plu": [("r4", "S", ("r4",)), ("r3", "E", ("r4", "r3")), ("r2", "N", ("r3", "r2"))],
        "pld": [("r4", "N", ("r4",)), ("r1", "N", ("r4",)), ("r1", "E", ("r1",)), ("r2", "E", ("r1",)), ("r2", "S", ("r2",))],
    }
    # merge takes precedence over single-rider propagation
    for a in A:
        for h in ("_",) + tuple(Q):
            for s_src in ("r4", "r1"):
                rule(
                    pat(color="r4", tape=a, head=h),
                    (a, h, "_", "pr", "r4"),
                    N=pat(color="r4", part="pru"),
                    S=pat(color=s_src, part="prd"),
                )
            for n_src in ("r2", "r3"):
                rule(
                    pat(color="r2", tape=a, head=h),
                    (a, h, "_", "pl", "r2"),
                    N=pat(color=n_src, part="plu"),
                    S=pat(color="r2", part="pld"),
                )
    for rider, hops in DETOUR.items():
        for mine, side, sources in hops:
            for src in sources:
                for a in A:
                    for h in ("_",) + tuple(Q):
                        rule(
                            pat(color=mine, tape=a, head=h),
                            (a, h, "_", rider, mine),
                            **{side: pat(color=src, part=rider)},
                        )
    for rider in DETOUR:
        for mine in REDS:
            for a in A:
                for h in ("_",) + tuple(Q):
                    rule(pat(color=mine, tape=a, head=h, part=rider), (a, h, "_", "_", mine))
    # merge transients exit outward
    rule(pat(color="w", part="_"), (BLANK, "_", "_", "pr", "w"), W=pat(color="r4", part="pr"))
    rule(pat(color="w", part="_"), (BLANK, "_", "_", "pl", "w"), E=pat(color="r2", part="pl"))
    for a in A:
        for h in ("_",) + tuple(Q):
            rule(pat(color="r4", tape=a, head=h, part="pr"), (a, h, "_", "_", "r4"))
            rule(pat(color="r2", tape=a, head=h, part="pl"), (a, h, "_", "_", "r2"))

    # q movers that hit a wall anywhere but the tape start simply vanish via
    # the generic vacate rule (no arrival); westbound q movers never deliver.

    # ---- tentacles: out-of-space request, growth east/north --------------
    # request: a head that must step past the tape's top-left end posts tr
    for (q, a), (q2, b, m) in machine.delta.items():
        if q == qh or m != 1:
            continue
        rule(pat(color="r3", tape=a, head=q, part="p"), (b, "_", "tr", "_", "r3"), W=pat(color="w"))
    # tr travels east along the top edge to the top-right corner (the r3 hop
    # is gated on a non-red south side so the top-left corner, whose west
    # faces open space, never reads it)
    for a in A:
        for inner in ("w", "g"):
            rule(
                pat(color="r3", tape=a, head="_"),
                (a, "_", "tr", "_", "r3"),
                W=pat(color="r3", tent="tr"),
                S=pat(color=inner),
            )
        rule(pat(color="r4", tape=a, head="_"), (a, "_", "tr", "_", "r4"), W=pat(color="r3", tent="tr"))
    for mine in ("r3", "r4"):
        for a in A:
            rule(pat(color=mine, tape=a, tent="tr"), (a, "_", "_", "_", mine))
    # seed: the white cell east of the top-right corner turns green
    rule(pat(color="w"), (BLANK, "_", "tt", "_", "g"), W=pat(color="r4", tent="tr"))
    # growth east; blocked-east tips turn north
    rule(pat(color="w", part="_"), (BLANK, "_", "tt", "_", "g"), W=pat(color="g", tent="tt"))
    for c in REDS:
        rule(pat(color="g", tent="tt"), (BLANK, "_", "tn", "_", "g"), E=pat(color=c))
    rule(pat(color="w", part="_"), (BLANK, "_", "tt", "_", "g"), S=pat(color="g", tent="tn"))
    rule(pat(color="g", tent="tt"), (BLANK, "_", "tb", "_", "g"), E=pat(color="g", tent="tt"))
    rule(pat(color="g", tent="tn"), (BLANK, "_", "tb", "_", "g"), N=pat(color="g", tent="tt"))

    # ---- white cells shed stray content ---------------------------------
    for a in A:
        if a != BLANK:
            rule(pat(color="w", tape=a), BLANKC)
    for q in Q:
        rule(pat(color="w", head=q), BLANKC)
    for t in ("tr", "tb", "tt", "tn"):
        rule(pat(color="w", tent=t), (BLANK, "_", "_", "_", "w"))

    table = RuleTable(
        layers,
        von_neumann_neighborhood(),
        rules,
        quiescent=BLANKC,
        name=f"reduce2d[{machine.name}]",
    )
    manifest = {
        "machine": machine.name,
        "layers": {
            "tape": list(tape_l.symbols),
            "head": list(head_l.symbols),
            "tent": list(tent_l.symbols),
            "part": list(part_l.symbols),
            "color": list(color_l.symbols),
        },
        "machine_states": list(Q),
        "machine_alphabet": list(A),
        "initial": qi,
        "halt": qh,
        "blank_state": list(BLANKC),
        "corners": {
            "bottom-left": "r2",
            "bottom-right": "r1",
            "top-left": "r3",
            "top-right": "r4",
        },
        "tape_order": "start below the top-left corner; left edge down, bottom east, right up, top west",
        "input_encoding": "count of r2 plus r1 cells = w + h - 2 (half the loop perimeter)",
        "notes": [
            "signals enter only at the tape start from the west; q movers elsewhere are destroyed",
            "q detour states (qru/qrd/qlu/qld) are declared but unused",
            "particles are destroyed on green cells (tentacle-tip convention)",
        ],
    }
    return Reduction2DOutput(table, manifest)


# ---------------------------------------------------------------------------
# configuration builders
# ---------------------------------------------------------------------------


def loop_word(out: Reduction2DOutput, loop: RedLoop, initialized=True, head=False) -> Word:
    """The loop as a 2D word: markers plus, optionally, the post-init tape
    (1s on r2/r1 cells) and the initial head at the tape start."""
    qi = out.manifest["initial"]
    content = {}
    for pos in loop.ring_cells():
        m = loop.marker(pos)
        tape = "1" if (initialized and m in ("r1", "r2")) else BLANK
        h = qi if (head and pos == loop.tape_start()) else "_"
        content[pos] = (tape, h, "_", "_", m)
    for pos in loop.interior_cells():
        content[pos] = (BLANK, "_", "_", "_", "w")
    return Word(2, content)


def loop_config(out: Reduction2DOutput, loop: RedLoop, **kw) -> Configuration:
    word = loop_word(out, loop, **kw)
    return Configuration.build(2, tuple(out.rule.quiescent), dict(word.content))


def place_part(config: Configuration, pos, kind: str) -> Configuration:
    cells = dict(config.cells)
    bg = config.background
    cells[tuple(pos)] = (bg[0], bg[1], bg[2], kind, bg[4])
    return Configuration.build(2, bg, cells)


# ---------------------------------------------------------------------------
# stabilization analysis
# ---------------------------------------------------------------------------


def _components(cells):
    """4-connected components over a set of coordinates."""
    remaining = set(cells)
    comps = []
    while remaining:
        seed = remaining.pop()
        comp = {seed}
        frontier = [seed]
        while frontier:
            x, y = frontier.pop()
            for nb in ((x, y + 1), (x + 1, y), (x, y - 1), (x - 1, y)):
                if nb in remaining:
                    remaining.remove(nb)
                    comp.add(nb)
                    frontier.append(nb)
        comps.append(comp)
    return comps


def red_components(config: Configuration):
    reds = {pos for pos, st in config.cells.items() if st[4] in REDS}
    return _components(reds)


def is_stabilized(config: Configuration):
    """True iff every red component is a marked rectangular loop and every
    green component satisfies the tentacle anchoring rule.  Returns
    (flag, diagnostics)."""
    bad_red = []
    bad_green = []
    for comp in red_components(config):
        xs = [p[0] for p in comp]
        ys = [p[1] for p in comp]
        loop = RedLoop(min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)
        ok = loop.w >= 3 and loop.h >= 3 and set(loop.ring_cells()) == comp
        if ok:
            for pos in comp:
                if config.get(pos)[4] != loop.marker(pos):
                    ok = False
                    break
        if not ok:
            bad_red.append(sorted(comp))
    greens = {pos for pos, st in config.cells.items() if st[4] == "g"}
    for comp in _components(greens):
        for (x, y) in comp:
            wn = config.get((x - 1, y))[4]
            sn = config.get((x, y - 1))[4]
            if wn not in REDS + ("g",) and sn not in REDS + ("g",):
                bad_green.append(sorted(comp))
                break
    ok = not bad_red and not bad_green
    diag = {"non_loop_red_components": bad_red, "non_tentacle_green_components": bad_green}
    return ok, diag


def find_loops(config: Configuration):
    """The red loops of a stabilized configuration."""
    loops = []
    for comp in red_components(config):
        xs = [p[0] for p in comp]
        ys = [p[1] for p in comp]
        loop = RedLoop(min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)
        if set(loop.ring_cells()) == comp:
            loops.append(loop)
    return loops


# ---------------------------------------------------------------------------
# particle routing: deterministic path tracing plus meet planning
# ---------------------------------------------------------------------------


def trace_particle(config: Configuration, start, kind: str, max_steps: int = 4000, limits=None):
    """Walk a single mover's deterministic route over a stabilized (static)
    configuration, mirroring the rule table's routing.  Returns the list of
    (position, step) visits of the mover on white cells, or None if it dies."""
    loops = find_loops(config)

    def loop_at(pos):
        for lp in loops:
            if lp.marker(pos) is not None:
                return lp
        return None

    def occupied(pos):
        return config.get(pos)[4] in REDS

    if limits is not None:
        limit_lo, limit_hi = limits
    else:
        bbox = config.bounding_box()
        if bbox is None:
            limit_lo, limit_hi = start[0] - 2, start[0] + 2
        else:
            limit_lo, limit_hi = bbox[0][0] - 2, bbox[1][0] + 2

    x, y = start
    t = 0
    visits = [((x, y), 0)]
    heading = 1 if kind in ("pr", "qr") else -1
    while t < max_steps:
        if (heading == 1 and x > limit_hi) or (heading == -1 and x < limit_lo):
            return visits  # past every obstacle, going straight forever
        nxt = (x + heading, y)
        if not occupied(nxt):
            x, y = nxt
            t += 1
            visits.append(((x, y), t))
            continue
        lp = loop_at(nxt)
        marker = lp.marker(nxt) if lp is not None else None
        if marker is None or kind in ("qr", "ql"):
            return None  # q movers deliver at the tape start only (die here)
        if heading == 1 and marker == "r2":
            if nxt == lp.tape_start():
                return None  # swallowed as a signal
            # splits, riders around the loop, merge east of the r4 edge
            steps_on = _detour_steps(lp, nxt, eastbound=True)
            if steps_on is None:
                return None
            exit_pos, dt = steps_on
            x, y = exit_pos
            t += dt
            visits.append(((x, y), t))
            continue
        if heading == -1 and marker == "r4":
            steps_on = _detour_steps(lp, nxt, eastbound=False)
            if steps_on is None:
                return None
            exit_pos, dt = steps_on
            x, y = exit_pos
            t += dt
            visits.append(((x, y), t))
            continue
        return None  # destroyed on any other contact


def _detour_steps(loop: RedLoop, contact, eastbound: bool):
    """Ride-on, split, opposite riders, merge, exit: returns (exit cell, dt)
    measured from the mover standing one cell before the contact."""
    ring = loop.ring_cells()
    per = len(ring)
    cx, cy = contact
    if eastbound:
        if cy == loop.y0:  # BL corner is r2 but has no southern red neighbor
            return None
        # the split riders spawn north/south of the contact after 2 steps
        # (ride-on, split); they travel |ring|/2 - 1 further and merge on the
        # east edge mirrored about the loop's horizontal midline
        merge_y = loop.y0 + loop.y1 - cy
        exit_pos = (loop.x1 + 1, merge_y)
        dt = 2 + (per - 2) // 2 + 1
        return exit_pos, dt
    else:
        merge_y = loop.y0 + loop.y1 - cy
        if cy == loop.y0:
            return None
        exit_pos = (loop.x0 - 1, merge_y)
        dt = 2 + (per - 2) // 2 + 1
        return exit_pos, dt


def place_particles_to_meet(config: Configuration, target, search_rows: int = 6, max_dist: int = 200):
    """Start positions for a right mover and a left mover, outside the
    configuration's bounding box, whose forward evolutions meet at ``target``.

    Deterministic backward reconstruction: candidate approach rows are walked
    forward with the routing tracer until one passes through the target.
    """
    target = tuple(target)
    for lp in find_loops(config):
        if lp.marker(target) is not None:
            raise TargetInsideRedZone(f"target {target} lies on a red loop")
        if target in lp.interior_cells():
            raise TargetUnreachable(f"target {target} is enclosed by a red loop")
    bbox = config.bounding_box()
    if bbox is None:
        lo, hi = (target[0] - 1, target[1] - 1), (target[0] + 1, target[1] + 1)
    else:
        lo, hi = bbox
    margin = 4
    west_x = min(lo[0], target[0]) - margin
    east_x = max(hi[0], target[0]) + margin

    def plan(kind):
        start_x = west_x if kind == "pr" else east_x
        for dy in range(-search_rows, search_rows + 1):
            row = target[1] + dy
            path = trace_particle(config, (start_x, row), kind, limits=(west_x - 1, east_x + 1))
            if not path:
                continue
            for (pos, t) in path:
                if pos == target:
                    return (start_x, row), t
        return None

    right = plan("pr")
    left = plan("pl")
    if right is None or left is None:
        raise TargetUnreachable(f"no deterministic route reaches {target}")
    (rp, rt), (lp_, lt) = right, left
    # pad the shorter route by moving its start outward (one cell = one step)
    if rt < lt:
        rp = (rp[0] - (lt - rt), rp[1])
        rt = lt
    elif lt < rt:
        lp_ = (lp_[0] + (rt - lt), lp_[1])
        lt = rt
    return {"right": {"pos": rp, "kind": "pr"}, "left": {"pos": lp_, "kind": "pl"}, "meet_step": rt}


# ---------------------------------------------------------------------------
# driving machines on loops
# ---------------------------------------------------------------------------


def send_q_then_p(out: Reduction2DOutput, config: Configuration, loop: RedLoop, k: int, spacing=None):
    """Initialize the loop's machine with a q signal, then advance it by k p
    signals; returns the evolved configuration.  Signals are injected at the
    tape-start row, spaced so each completes before the next arrives."""
    from sensca.core import step as _step

    per = len(loop.ring_cells())
    spacing = spacing or (per + 6)
    sx, sy = loop.tape_start()
    gate = (sx - 1, sy)
    cur = place_part(config, gate, "qr")
    for _ in range(spacing):
        cur = _step(out.rule, cur)
    for _ in range(k):
        cur = place_part(cur, gate, "pr")
        for _ in range(spacing):
            cur = _step(out.rule, cur)
    return cur


def read_loop_machine(out: Reduction2DOutput, config: Configuration, loop: RedLoop):
    """(state-or-None, head tape position, tape string) from the loop cells."""
    cells = loop.tape_cells()
    state = None
    head_pos = None
    tape = []
    for i, pos in enumerate(cells):
        st = config.get(pos)
        tape.append(st[0])
        if st[1] != "_":
            state = st[1]
            head_pos = i
    return state, head_pos, "".join(tape)
