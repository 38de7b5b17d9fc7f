"""Acceptance suite: one test per primary criterion, at the stated tolerances.

Each test prints a [PASS] line on success; pytest failure output marks the
criterion red.  Frozen regression constants live in this module.
"""

import random
import time

import pytest

from sensca.analysis import (
    BlockingQuery,
    Certified,
    check_blocking,
    lift_blocking_query,
    probe_sensitivity,
    replay_certificate,
)
from sensca.core import Configuration, Word, embed, evolve, lift_config, shift, slice_lift, step
from sensca.elementary import config_bits, elementary_rule, line_config
from sensca.errors import TargetUnreachable
from sensca.machines import always_halt, loop_on, never_halt, read_unary_witness, twin_prime_machine
from sensca.reduce1d import (
    block_config,
    compile_nilpotency_1d,
    compile_sensitivity_1d,
    double_block_word,
    make_block,
    place_particle,
)
from sensca.reduce2d import (
    compile_sensitivity_2d,
    is_stabilized,
    loop_config,
    loop_word,
    make_red_loop,
    place_part,
    place_particles_to_meet,
    read_loop_machine,
    red_components,
    send_q_then_p,
)
from sensca.turing import BLANK, Halted, STAY, SEMI_INFINITE, TuringMachine, tm_init, tm_run, tm_step

from helpers import eca_oracle_trace, random_config, random_rule_table

# ---- frozen regression constants (found by simulation, see git history) ----
ALWAYS_HALT_DESTRUCTION_HORIZON = 30  # measured 10..24 over n = 0..5
NILPOTENCY_HORIZON = 100  # measured worst case 22 over seeded soups
TWIN_PRIME_BLOCK_HORIZON = {0: 800, 5: 1600, 8: 9000}  # measured 694/1412/8651
TWIN_PRIME_BLOCK_LENGTH = {0: 20, 5: 24, 8: 36}  # machine excursion + 8


def _ok(line):
    print(f"[PASS] {line}")


def test_c01_engine_laws():
    """Determinism, shift equivariance, quiescent fixpoint, support growth,
    locality on >= 1000 randomized cases; rule 110/90 oracle traces, < 10 s."""
    t0 = time.time()
    rng = random.Random(2024)
    cases = 0
    while cases < 1000:
        rule = random_rule_table(rng, dimension=1)
        cfg = random_config(rng, rule, span=5, density=0.4)
        r = rule.neighborhood.radius
        out1, out2 = step(rule, cfg), step(rule, cfg)
        assert out1 == out2, "determinism violated"
        p = (rng.randint(-4, 4),)
        assert step(rule, shift(cfg, p)) == shift(out1, p), "equivariance violated"
        empty = Configuration.build(1, rule.quiescent, {})
        assert step(rule, empty) == empty, "quiescent fixpoint violated"
        dilated = {(q[0] + d,) for q in cfg.support() for d in range(-r, r + 1)}
        assert out1.support() <= dilated, "support growth violated"
        # locality on a small region
        region = [(i,) for i in range(-1, 2)]
        other = random_config(rng, rule, span=5, density=0.4)
        cells = dict(other.cells)
        for (i,) in region:
            for d in range(-r, r + 1):
                pos = (i + d,)
                if cfg.get(pos) == cfg.background:
                    cells.pop(pos, None)
                else:
                    cells[pos] = cfg.get(pos)
        patched = Configuration.build(1, cfg.background, cells)
        sa, sb = out1, step(rule, patched)
        for pos in region:
            assert sa.get(pos) == sb.get(pos), "locality violated"
        cases += 1

    for number in (110, 90):
        rule = elementary_rule(number)
        trace = evolve(rule, line_config("1"), 64)
        oracle = eca_oracle_trace(number, [1], 64)
        for t, row in enumerate(oracle):
            assert config_bits(trace[t], -t, t) == "".join(map(str, row)), f"rule {number} step {t}"
    wall = time.time() - t0
    assert wall < 10, f"engine laws took {wall:.1f}s"
    _ok(f"C1 engine laws: 1000 randomized cases + rule-110/90 oracle traces in {wall:.1f}s")


def test_c02_slicing():
    """Lifted rules equal embedded base evolution on 100 random cases; a
    certified 1D blocking word lifts to a certified 2D one."""
    rng = random.Random(7)
    for _ in range(100):
        rule = random_rule_table(rng, dimension=1)
        lifted = slice_lift(rule)
        cfg = random_config(rng, rule, span=4, density=0.4)
        plane = rng.randint(-3, 3)
        base_trace = evolve(rule, cfg, 3)
        lift_trace = evolve(lifted, lift_config(cfg, plane=plane), 3)
        for a, b in zip(base_trace, lift_trace):
            assert lift_config(a, plane=plane) == b, "slice evolution mismatch"

    m = loop_on(3)
    out = compile_sensitivity_1d(m)
    blk = make_block(m, 3)
    uu = double_block_word(blk)
    query = BlockingQuery(uu, (blk.width + blk.spin_col,), 1, horizon=100, margin=5)
    v1 = check_blocking(out.rule, query)
    assert isinstance(v1, Certified)
    lifted_rule = slice_lift(out.rule)
    v2 = check_blocking(lifted_rule, lift_blocking_query(query))
    assert isinstance(v2, Certified)
    assert replay_certificate(lifted_rule, v2.certificate)
    _ok("C2 slicing: 100 slice-evolution cases exact; certified 1D word lifts to certified 2D word")


def test_c03_lemma4_forward():
    """always_halt blocks for n in 0..5 become all-blank and a trailing p
    crosses the footprint, within the frozen horizon; < 60 s."""
    t0 = time.time()
    m = always_halt()
    out = compile_sensitivity_1d(m)
    for n in range(6):
        blk = make_block(m, n)
        start = -(ALWAYS_HALT_DESTRUCTION_HORIZON + 2)
        cfg = place_particle(block_config(blk), start)
        blank_at = None
        crossed = False
        for t in range(1, ALWAYS_HALT_DESTRUCTION_HORIZON + blk.width - start + 10):
            cfg = step(out.rule, cfg)
            non_p = {pos for pos, st in cfg.cells.items() if st[3] != "p"}
            if blank_at is None and not non_p:
                blank_at = t
            if blank_at is not None and len(cfg.cells) == 1:
                (pos, st), = cfg.cells.items()
                if st[3] == "p" and pos[0] >= blk.width:
                    crossed = True
                    break
        assert blank_at is not None and blank_at <= ALWAYS_HALT_DESTRUCTION_HORIZON, f"n={n}"
        assert crossed, f"n={n}: particle did not cross"
    wall = time.time() - t0
    assert wall < 60
    _ok(f"C3 Lemma 4 forward: blocks n=0..5 destroyed within {ALWAYS_HALT_DESTRUCTION_HORIZON} steps and crossed in {wall:.1f}s")


def test_c04_lemma4_backward():
    """loop_on(3) uu certified at window m = r; replay passes; 200 randomized
    extension pairs at 4x cycle horizon show zero window mismatches."""
    m = loop_on(3)
    out = compile_sensitivity_1d(m)
    blk = make_block(m, 3)
    uu = double_block_word(blk)
    r = out.rule.neighborhood.radius
    query = BlockingQuery(uu, (blk.width + blk.spin_col,), r, horizon=100, margin=6)
    verdict = check_blocking(out.rule, query)
    assert isinstance(verdict, Certified), "uu must certify"
    cert = verdict.certificate
    assert replay_certificate(out.rule, cert), "replay failed"

    horizon = 4 * (cert.cycle_start + cert.cycle_period)
    window = query.window_coords()
    bg = out.rule.quiescent
    base = embed(Configuration.build(1, bg, {}), uu)
    rng = random.Random(99)
    states = list(out.rule.states())
    width = 2 * blk.width
    for _ in range(200):
        def extended():
            cells = dict(base.cells)
            for _ in range(rng.randint(1, 5)):
                pos = (rng.choice(list(range(-8, 0)) + list(range(width, width + 8))),)
                cells[pos] = rng.choice(states)
            return Configuration.build(1, bg, cells)

        a, b = extended(), extended()
        for t in range(horizon):
            a, b = step(out.rule, a), step(out.rule, b)
            for pos in window:
                assert a.get(pos) == b.get(pos), f"window mismatch at step {t + 1}"
    _ok(f"C4 Lemma 4 backward: uu certified (n0={cert.cycle_start}, lambda={cert.cycle_period}), replayed, 200 extension pairs clean over {horizon} steps")


def test_c05_finite_nilpotency():
    """Particle-free always_halt automaton blanks 20 randomized configs within
    the frozen horizon; the loop_on(3) variant survives 10^4 steps."""
    nil = compile_nilpotency_1d(always_halt())
    rng = random.Random(0)
    states = list(nil.rule.states())
    for trial in range(20):
        cells = {}
        blk = make_block(always_halt(), rng.randint(0, 4))
        off = rng.randint(-25, -12)
        for (i,), st in blk.word.content.items():
            cells[(i + off,)] = st
        for i in range(-14, 18):
            if (i,) not in cells and rng.random() < 0.5:
                cells[(i,)] = rng.choice(states)
        cfg = Configuration.build(1, nil.rule.quiescent, cells)
        for t in range(1, NILPOTENCY_HORIZON + 1):
            cfg = step(nil.rule, cfg)
            if not cfg.cells:
                break
        assert not cfg.cells, f"soup {trial} not blank within {NILPOTENCY_HORIZON}"

    nil3 = compile_nilpotency_1d(loop_on(3))
    cfg = block_config(make_block(loop_on(3), 3), background=nil3.rule.quiescent)
    for _ in range(10_000):
        cfg = step(nil3.rule, cfg)
        if not cfg.cells:
            pytest.fail("loop_on(3) block must not blank")
    assert cfg.cells
    _ok(f"C5 nilpotency: 20 soups blank within {NILPOTENCY_HORIZON} steps; loop_on(3) block alive at 10^4")


FIG4A_ROWS = ["_4334", "_4__4", "21__4", "2___4", "2___4", "21111"]
FIG4B_ROWS = ["__gg_", "___g_", "__ggg", "__g__", "ggg__", "_____"]


def _pattern_config(rule, rows):
    cells = {}
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch == "_":
                continue
            color = "g" if ch == "g" else f"r{ch}"
            cells[(c, len(rows) - 1 - r)] = ("_", "_", "_", "_", color)
    return Configuration.build(2, rule.quiescent, cells)


def test_c06_lemma5_stabilization():
    """Defective patterns erase; is_stabilized flips false -> true and the red
    component count is constant afterwards on 10 randomized soups; < 60 s."""
    t0 = time.time()
    out = compile_sensitivity_2d(loop_on(4))
    for rows in (FIG4A_ROWS, FIG4B_ROWS):
        cfg = _pattern_config(out.rule, rows)
        assert not is_stabilized(cfg)[0] or rows is FIG4B_ROWS
        for _ in range(40):
            cfg = step(out.rule, cfg)
        ok, _ = is_stabilized(cfg)
        assert ok, "defective pattern did not stabilize"
        assert not [st for st in cfg.cells.values() if st[4] != "w"], "defects must erase"

    rng = random.Random(3)
    out6 = compile_sensitivity_2d(loop_on(6))
    for trial in range(10):
        cells = {}
        lp = make_red_loop(rng.choice([6, 7, 8]), at=(rng.randint(-4, 2), rng.randint(-4, 2)))
        for pos in lp.ring_cells():
            cells[pos] = ("_", "_", "_", "_", lp.marker(pos))
        for _ in range(rng.randint(10, 30)):
            pos = (rng.randint(8, 16), rng.randint(-6, 6))
            cells[pos] = ("_", "_", "_", "_", rng.choice(["r1", "r2", "r3", "r4", "g"]))
        cfg = Configuration.build(2, out6.rule.quiescent, cells)
        assert not is_stabilized(cfg)[0] or not cells
        stab_at, comps = None, None
        for t in range(120):
            ok, _ = is_stabilized(cfg)
            if ok and stab_at is None:
                stab_at, comps = t, len(red_components(cfg))
            elif stab_at is not None:
                assert len(red_components(cfg)) == comps, "red components changed"
            cfg = step(out6.rule, cfg)
            if stab_at is not None and t > stab_at + 25:
                break
        assert stab_at is not None, f"soup {trial} never stabilized"
    wall = time.time() - t0
    assert wall < 60
    _ok(f"C6 Lemma 5: defective patterns erased, 10 soups stabilized with constant red components in {wall:.1f}s")


def test_c07_lemma6_meetings():
    """place_particles_to_meet verified by forward simulation on 50 randomized
    stabilized configurations; interior targets raise TargetUnreachable."""
    rng = random.Random(11)
    out = compile_sensitivity_2d(loop_on(6))
    verified = 0
    attempts = 0
    while verified < 50:
        attempts += 1
        assert attempts < 600, "too many resamples"
        loops = [make_red_loop(rng.choice([6, 7, 8]), at=(0, 0))]
        if rng.random() < 0.5:
            loops.append(make_red_loop(rng.choice([6, 7]), at=(rng.randint(8, 12), rng.randint(-3, 3))))
        cells = {}
        for lp in loops:
            for pos in lp.ring_cells():
                cells[pos] = ("_", "_", "_", "_", lp.marker(pos))
        cfg = Configuration.build(2, out.rule.quiescent, cells)
        assert is_stabilized(cfg)[0]
        target = (rng.randint(-6, 18), rng.randint(-6, 8))
        if any(lp.marker(target) is not None or target in lp.interior_cells() for lp in loops):
            continue
        try:
            plan = place_particles_to_meet(cfg, target)
        except TargetUnreachable:
            continue  # routing cannot reach loop-shadowed rows; resample
        sim = place_part(place_part(cfg, plan["right"]["pos"], "pr"), plan["left"]["pos"], "pl")
        met = None
        for t in range(1, plan["meet_step"] + 4):
            sim = step(out.rule, sim)
            if sim.get(target)[3] == "p":
                met = t
                break
        assert met == plan["meet_step"], f"meet mismatch at {target}"
        verified += 1

    lp = make_red_loop(8, at=(0, 0))
    cfg = loop_config(out, lp, initialized=False)
    with pytest.raises(TargetUnreachable):
        place_particles_to_meet(cfg, (lp.x0 + 1, lp.y0 + 1))
    _ok(f"C7 Lemma 6: 50 planned meetings verified by forward simulation ({attempts} samples); interior targets unreachable")


def test_c08_lemma7_blocking_and_halting():
    """A loop encoding a non-halting input certifies its interior window at
    three sizes; with always_halt the loop halts, erases, and a previously
    blocked pair then meets beyond it."""
    for size in (6, 7, 8):
        m = loop_on(size)
        out = compile_sensitivity_2d(m)
        loop = make_red_loop(size, at=(0, 0))
        word = loop_word(out, loop, initialized=True, head=False)
        q = BlockingQuery(word, (loop.x0 + 1, loop.y0 + 1), 1, horizon=80, margin=3)
        verdict = check_blocking(out.rule, q)
        assert isinstance(verdict, Certified), f"loop size {size} not certified"
        assert replay_certificate(out.rule, verdict.certificate)

    m = always_halt()
    out = compile_sensitivity_2d(m)
    loop = make_red_loop(6, at=(0, 0))
    cfg = loop_config(out, loop, initialized=True)
    target = (loop.x1 + 3, loop.y0 + 1)  # shadowed row while the loop lives
    with pytest.raises(TargetUnreachable):
        place_particles_to_meet(cfg, target)
    cfg = send_q_then_p(out, cfg, loop, 1)
    for _ in range(40):
        cfg = step(out.rule, cfg)
    assert not [st for st in cfg.cells.values() if st[4] != "w"], "loop must be erased after halting"
    plan = place_particles_to_meet(cfg, target)
    sim = place_part(place_part(cfg, plan["right"]["pos"], "pr"), plan["left"]["pos"], "pl")
    met = None
    for t in range(1, plan["meet_step"] + 4):
        sim = step(out.rule, sim)
        if sim.get(target)[3] == "p":
            met = t
            break
    assert met == plan["meet_step"]
    _ok("C8 Lemma 7: interior windows certified at sizes 6/7/8; halting erased the loop and the blocked pair met beyond it")


def _toggler():
    A = (BLANK, "1", "X")
    delta = {
        ("ca", "1"): ("cb", "X", STAY),
        ("cb", "X"): ("ca", "1", STAY),
    }
    for q in ("ca", "cb"):
        for a in A:
            delta.setdefault((q, a), (q, a, STAY))
    for a in A:
        delta[("halt", a)] = ("halt", a, STAY)
    return TuringMachine(("ca", "cb", "halt"), A, "ca", "halt", delta, SEMI_INFINITE, "toggler")


def test_c09_lockstep_fidelity():
    """Loop-tape execution equals the interpreter state-for-state for
    k <= 200 signals on 3 machines."""
    for m in (never_halt(), loop_on(6), _toggler()):
        out = compile_sensitivity_2d(m)
        loop = make_red_loop(6)
        per = len(loop.tape_cells())
        cfg = send_q_then_p(out, loop_config(out, loop, initialized=True), loop, 0)
        snap = tm_init(m, loop.input)
        sx, sy = loop.tape_start()
        spacing = per + 6
        for k in range(1, 201):
            cfg = place_part(cfg, (sx - 1, sy), "pr")
            for _ in range(spacing):
                cfg = step(out.rule, cfg)
            snap = tm_step(m, snap)
            assert snap.state != m.halt
            state, head_pos, tape = read_loop_machine(out, cfg, loop)
            exp = (snap.state, snap.head, "".join(snap.read(i) for i in range(per)))
            assert (state, head_pos, tape) == exp, (m.name, k)
    _ok("C9 lockstep: 3 machines match the interpreter state-for-state for k <= 200 signals")


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def test_c10_twin_prime():
    """Witnesses match a trial-division oracle for all n <= 50; the compiled
    automaton destroys input-n blocks for n in {0, 5, 8} within the frozen
    horizons."""
    tp = twin_prime_machine()
    for n in range(51):
        out = tm_run(tp, n, 10_000_000)
        assert isinstance(out, Halted), f"no halt on {n}"
        p = read_unary_witness(out.snapshot)
        q = n
        while not (is_prime(q) and is_prime(q + 2)):
            q += 1
        assert p == q, f"wrong witness for {n}: {p} != {q}"

    red = compile_sensitivity_1d(tp)
    for n, horizon in TWIN_PRIME_BLOCK_HORIZON.items():
        blk = make_block(tp, n, length=TWIN_PRIME_BLOCK_LENGTH[n])
        cfg = block_config(blk)
        destroyed = None
        for t in range(1, horizon + 1):
            cfg = step(red.rule, cfg)
            if not cfg.cells:
                destroyed = t
                break
        assert destroyed is not None, f"block n={n} not destroyed within {horizon}"
    _ok("C10 twin-prime: witnesses correct for n <= 50; blocks for n in {0,5,8} destroyed within frozen horizons")


def test_c11_probe_honesty():
    """probe_sensitivity certifies every length <= 6 on rule 204, falsifies
    all words <= 6 on rule 170 at horizon 64, and never emits an unconditional
    sensitivity verdict."""
    ev204 = probe_sensitivity(elementary_rule(204), 6, 64, seed=1)
    for length, counts in ev204.per_length.items():
        assert counts["certified"] > 0 and counts["falsified"] == 0 and counts["unknown"] == 0, length

    ev170 = probe_sensitivity(elementary_rule(170), 6, 64, seed=1)
    for length, counts in ev170.per_length.items():
        assert counts["certified"] == 0 and counts["unknown"] == 0, length
        assert counts["falsified"] > 0

    for ev in (ev204, ev170):
        obj = ev.to_obj()
        assert "sensitive" not in {k.lower() for k in obj}
        assert "bounded-scope" in obj["note"]
    _ok("C11 probe honesty: rule 204 certified at all lengths <= 6, rule 170 falsified everywhere, no aggregate verdicts")
