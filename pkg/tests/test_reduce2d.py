"""2D reduction: loop geometry, stabilization, signals, lockstep, particles,
tentacles, and the interior blocking window."""

import random

import pytest

from sensca.analysis import BlockingQuery, Certified, check_blocking, replay_certificate
from sensca.core import Configuration, Word, embed, evolve, step
from sensca.errors import PerimeterTooSmall, TargetInsideRedZone, TargetUnreachable
from sensca.machines import always_halt, bounce_once, loop_on, seek_blank_right
from sensca.reduce2d import (
    RedLoop,
    compile_sensitivity_2d,
    find_loops,
    is_stabilized,
    loop_config,
    loop_word,
    make_red_loop,
    place_part,
    place_particles_to_meet,
    read_loop_machine,
    red_components,
    send_q_then_p,
    trace_particle,
)
from sensca.turing import BLANK, RIGHT, SEMI_INFINITE, STAY, TuringMachine, tm_init, tm_step


def right_runner():
    A = (BLANK, "1")
    delta = {("run", a): ("run", a, RIGHT) for a in A}
    delta.update({("halt", a): ("halt", a, STAY) for a in A})
    return TuringMachine(("run", "halt"), A, "run", "halt", delta, SEMI_INFINITE, "right-runner")


def spiral_config(rule):
    # the defective spiral from the stabilization figure (5 x 6, y up)
    rows = ["_4334", "_4__4", "21__4", "2___4", "2___4", "21111"]
    cells = {}
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch != "_":
                cells[(c, 5 - r)] = ("_", "_", "_", "_", f"r{ch}")
    return Configuration.build(2, rule.quiescent, cells)


def test_make_red_loop_geometry():
    loop = make_red_loop(6)
    assert (loop.w, loop.h) == (4, 4)
    assert loop.input == 6
    assert len(loop.ring_cells()) == 2 * loop.w + 2 * loop.h - 4
    assert len(loop.tape_cells()) == len(loop.ring_cells())
    # corner ownership
    assert loop.marker((loop.x0, loop.y0)) == "r2"
    assert loop.marker((loop.x1, loop.y0)) == "r1"
    assert loop.marker((loop.x0, loop.y1)) == "r3"
    assert loop.marker((loop.x1, loop.y1)) == "r4"


def test_make_red_loop_too_small():
    with pytest.raises(PerimeterTooSmall):
        make_red_loop(3)


def test_neighborhood_is_von_neumann():
    out = compile_sensitivity_2d(always_halt())
    assert set(out.rule.neighborhood.offsets) == {(0, 0), (0, 1), (1, 0), (0, -1), (-1, 0)}


def test_all_white_fixed():
    out = compile_sensitivity_2d(always_halt())
    empty = Configuration.build(2, out.rule.quiescent, {})
    assert step(out.rule, empty) == empty


def test_loop_invariance():
    out = compile_sensitivity_2d(loop_on(6))
    loop = make_red_loop(6)
    for initialized in (False, True):
        cfg = loop_config(out, loop, initialized=initialized)
        trace = evolve(out.rule, cfg, 100)
        assert all(c == cfg for c in trace)


def test_lone_pr_travels_east():
    out = compile_sensitivity_2d(always_halt())
    cfg = place_part(Configuration.build(2, out.rule.quiescent, {}), (0, 0), "pr")
    for t in range(1, 6):
        cfg = step(out.rule, cfg)
        assert set(cfg.cells) == {(t, 0)}
        assert cfg.get((t, 0))[3] == "pr"


def test_split_and_rejoin_golden_trace():
    # p_r meets a loop's left edge, splits, and the riders reform east of it
    out = compile_sensitivity_2d(loop_on(6))
    loop = make_red_loop(6, at=(0, 0))
    cfg = place_part(loop_config(out, loop, initialized=True), (-5, 1), "pr")
    rejoined = None
    for t in range(1, 40):
        cfg = step(out.rule, cfg)
        parts = {pos: st[3] for pos, st in cfg.cells.items() if st[3] != "_"}
        kinds = set(parts.values())
        if t == 7:
            assert {"pru", "prd"} <= kinds, f"expected split riders at t=7, got {parts}"
        if any(k == "pr" and p[0] > loop.x1 for p, k in parts.items()):
            rejoined = (t, [p for p, k in parts.items() if k == "pr"][0])
            break
    assert rejoined is not None
    t, pos = rejoined
    assert pos[1] == loop.y0 + loop.y1 - 1  # exit row mirrors the entry row
    assert t == 12  # golden trace from simulation (merge exits east at x1+1)


def test_q_signal_initializes_tape():
    m = seek_blank_right()
    out = compile_sensitivity_2d(m)
    loop = make_red_loop(6)
    cfg = send_q_then_p(out, loop_config(out, loop, initialized=False), loop, 0)
    state, head_pos, tape = read_loop_machine(out, cfg, loop)
    assert state == m.initial and head_pos == 0
    assert tape == "1" * loop.input + "_" * (len(loop.tape_cells()) - loop.input)


def test_lockstep_three_machines():
    for m, size, kmax in ((seek_blank_right(), 6, 6), (bounce_once(), 6, 7), (loop_on(6), 6, 15)):
        out = compile_sensitivity_2d(m)
        loop = make_red_loop(size)
        cfg = send_q_then_p(out, loop_config(out, loop, initialized=True), loop, 0)
        snap = tm_init(m, loop.input)
        per = len(loop.tape_cells())
        sx, sy = loop.tape_start()
        spacing = per + 6
        for k in range(1, kmax + 1):
            cfg = place_part(cfg, (sx - 1, sy), "pr")
            for _ in range(spacing):
                cfg = step(out.rule, cfg)
            snap = tm_step(m, snap)
            assert snap.state != m.halt, "test machines must stay live for kmax steps"
            state, head_pos, tape = read_loop_machine(out, cfg, loop)
            exp_tape = "".join(snap.read(i) for i in range(per))
            assert (state, head_pos, tape) == (snap.state, snap.head, exp_tape), (m.name, k)


def test_halting_erases_loop():
    m = always_halt()
    out = compile_sensitivity_2d(m)
    loop = make_red_loop(6)
    cfg = send_q_then_p(out, loop_config(out, loop, initialized=True), loop, 1)
    for _ in range(40):
        if not cfg.cells:
            break
        cfg = step(out.rule, cfg)
    assert not cfg.cells, "halted machine must erase its loop"


def test_head_conflict_resolved():
    # two heads on one loop: the blocked arrival erases the moving head,
    # leaving at most one within a circuit
    m = seek_blank_right()
    out = compile_sensitivity_2d(m)
    loop = make_red_loop(6)
    word = loop_word(out, loop, initialized=True, head=True)
    cells = dict(word.content)
    second = loop.tape_cells()[1]
    st = cells[second]
    cells[second] = (st[0], m.initial, st[2], st[3], st[4])
    cfg = Configuration.build(2, out.rule.quiescent, cells)
    per = len(loop.tape_cells())
    sx, sy = loop.tape_start()
    for _ in range(per):
        cfg = place_part(cfg, (sx - 1, sy), "pr")
        for _ in range(per + 6):
            cfg = step(out.rule, cfg)
    heads = [pos for pos, st in cfg.cells.items() if st[1] != "_"]
    assert len(heads) <= 1


def test_spiral_erased_and_stabilization_monotone():
    out = compile_sensitivity_2d(loop_on(4))
    cfg = spiral_config(out.rule)
    ok0, diag = is_stabilized(cfg)
    assert not ok0 and diag["non_loop_red_components"]
    stabilized_at = None
    for t in range(1, 40):
        cfg = step(out.rule, cfg)
        ok, _ = is_stabilized(cfg)
        if ok and stabilized_at is None:
            stabilized_at = t
    assert stabilized_at == 15  # golden trace from simulation
    assert not [st for st in cfg.cells.values() if st[4].startswith("r")]


def test_is_stabilized_examples():
    out = compile_sensitivity_2d(loop_on(6))
    empty = Configuration.build(2, out.rule.quiescent, {})
    assert is_stabilized(empty)[0]
    loop = make_red_loop(6)
    assert is_stabilized(loop_config(out, loop))[0]


def test_stabilization_random_soups():
    rng = random.Random(3)
    out = compile_sensitivity_2d(loop_on(6))
    for _ in range(10):
        cells = {}
        lp = make_red_loop(rng.choice([6, 7, 8]), at=(rng.randint(-4, 2), rng.randint(-4, 2)))
        for pos in lp.ring_cells():
            cells[pos] = ("_", "_", "_", "_", lp.marker(pos))
        for _ in range(rng.randint(10, 30)):
            pos = (rng.randint(8, 16), rng.randint(-6, 6))
            cells[pos] = ("_", "_", "_", "_", rng.choice(["r1", "r2", "r3", "r4", "g"]))
        cfg = Configuration.build(2, out.rule.quiescent, cells)
        stab_at = None
        comps = None
        for t in range(120):
            ok, _ = is_stabilized(cfg)
            if ok and stab_at is None:
                stab_at, comps = t, len(red_components(cfg))
            elif stab_at is not None:
                assert len(red_components(cfg)) == comps
            cfg = step(out.rule, cfg)
            if stab_at is not None and t > stab_at + 20:
                break
        assert stab_at is not None


def test_meet_straight_and_detour():
    out = compile_sensitivity_2d(loop_on(6))
    loop = make_red_loop(6, at=(0, 0))
    cfg0 = loop_config(out, loop, initialized=True)
    for target in [(2, 5), (6, 2), (2, -3)]:
        plan = place_particles_to_meet(cfg0, target)
        cfg = place_part(place_part(cfg0, plan["right"]["pos"], "pr"), plan["left"]["pos"], "pl")
        met = None
        for t in range(1, plan["meet_step"] + 4):
            cfg = step(out.rule, cfg)
            if cfg.get(target)[3] == "p":
                met = t
                break
        assert met == plan["meet_step"], target


def test_meet_empty_config():
    out = compile_sensitivity_2d(loop_on(6))
    empty = Configuration.build(2, out.rule.quiescent, {})
    plan = place_particles_to_meet(empty, (5, 5))
    assert plan["right"]["pos"][1] == 5 and plan["left"]["pos"][1] == 5


def test_meet_errors():
    out = compile_sensitivity_2d(loop_on(6))
    loop = make_red_loop(6, at=(0, 0))
    cfg = loop_config(out, loop, initialized=True)
    with pytest.raises(TargetUnreachable):
        place_particles_to_meet(cfg, (1, 1))
    with pytest.raises(TargetInsideRedZone):
        place_particles_to_meet(cfg, (0, 1))


def test_tentacle_growth_east_then_north():
    out = compile_sensitivity_2d(right_runner())
    lp = make_red_loop(6, at=(0, 0))
    cfg = send_q_then_p(out, loop_config(out, lp, initialized=True), lp, 14)
    greens = sorted(p for p, st in cfg.cells.items() if st[4] == "g")
    assert greens and greens[0] == (lp.x1 + 1, lp.y1)
    assert all(p[1] == lp.y1 for p in greens)  # pure eastward growth

    blocker = RedLoop(6, -1, 3, 5)
    cfg = embed(loop_config(out, lp, initialized=True), loop_word(out, blocker, initialized=False))
    cfg = send_q_then_p(out, cfg, lp, 18)
    greens = sorted(p for p, st in cfg.cells.items() if st[4] == "g")
    assert any(p[1] == lp.y1 + 1 for p in greens), "blocked tentacle must grow north"


def test_green_zones_erase_each_other():
    out = compile_sensitivity_2d(loop_on(6))
    lp = make_red_loop(6, at=(0, 0))
    cells = dict(loop_word(out, lp, initialized=False).content)
    cells[(4, 3)] = ("_", "_", "tb", "_", "g")
    cells[(5, 3)] = ("_", "_", "tt", "_", "g")  # tip facing a foreign body
    cells[(6, 3)] = ("_", "_", "tb", "_", "g")
    cells[(7, 3)] = ("_", "_", "tb", "_", "g")
    cfg = Configuration.build(2, out.rule.quiescent, cells)
    cfg = step(out.rule, cfg)
    greens = sorted(p for p, st in cfg.cells.items() if st[4] == "g")
    assert (5, 3) not in greens and (6, 3) not in greens
    cfg = step(out.rule, cfg)
    greens = sorted(p for p, st in cfg.cells.items() if st[4] == "g")
    assert greens == [(4, 3)]  # the anchored stub survives; the orphan died


def test_interior_window_certified():
    m = loop_on(6)
    out = compile_sensitivity_2d(m)
    loop = make_red_loop(6, at=(0, 0))
    word = loop_word(out, loop, initialized=True, head=False)
    q = BlockingQuery(word, (loop.x0 + 1, loop.y0 + 1), 1, horizon=80, margin=3)
    verdict = check_blocking(out.rule, q)
    assert isinstance(verdict, Certified)
    assert replay_certificate(out.rule, verdict.certificate)


def test_particles_cannot_penetrate():
    out = compile_sensitivity_2d(loop_on(6))
    loop = make_red_loop(6, at=(0, 0))
    cfg = place_part(loop_config(out, loop, initialized=True), (-4, 1), "pr")
    for _ in range(30):
        cfg = step(out.rule, cfg)
        for pos in loop.interior_cells():
            assert cfg.get(pos) == tuple(out.rule.quiescent), "interior must stay untouched"
