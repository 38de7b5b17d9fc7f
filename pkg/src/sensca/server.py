"""Explorer backend: session-scoped simulation over HTTP.

Sessions are isolated; step/edit/inject mutate a session under its lock and
return the new step index, everything else is idempotent.
"""

from __future__ import annotations

import itertools
import threading
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from sensca import analysis, rulefiles
from sensca.core import Configuration, RuleTable, step
from sensca.elementary import elementary_rule, line_config
from sensca.errors import SenscaError
from sensca.machines import loop_on, twin_prime_machine
from sensca.reduce1d import block_config, compile_sensitivity_1d, make_block
from sensca.reduce2d import compile_sensitivity_2d, loop_config, make_red_loop

app = FastAPI(title="sensca explorer backend")

_sessions = {}
_ids = itertools.count(1)
_global_lock = threading.Lock()


class Session:
    def __init__(self, rule: RuleTable, config: Configuration):
        self.rule = rule
        self.config = config
        self.step_index = 0
        self.lock = threading.Lock()
        self.history = [config]


def _presets():
    presets = {}
    for n in (110, 90, 204, 170):
        presets[f"rule-{n}"] = lambda n=n: (elementary_rule(n), line_config("1"))

    def twin_prime():
        out = compile_sensitivity_1d(twin_prime_machine())
        blk = make_block(twin_prime_machine(), 0, length=20)
        return out.rule, block_config(blk)

    def demo_block():
        m = loop_on(3)
        out = compile_sensitivity_1d(m)
        return out.rule, block_config(make_block(m, 3))

    def demo_loop():
        m = loop_on(6)
        out = compile_sensitivity_2d(m)
        return out.rule, loop_config(out, make_red_loop(6), initialized=True)

    presets["twin-prime-ca"] = twin_prime
    presets["demo-block"] = demo_block
    presets["demo-loop"] = demo_loop
    return presets


PRESETS = _presets()


class SessionRequest(BaseModel):
    preset: Optional[str] = None
    rule: Optional[dict] = None
    config: Optional[dict] = None


class EditRequest(BaseModel):
    cells: list  # [{"pos": [...], "state": [...]}]


class InjectRequest(BaseModel):
    pos: list
    kind: str  # particle symbol on the rule's particle-carrying layer


class ProbeRequest(BaseModel):
    offset: list
    window: int
    horizon: int = 64
    margin: int = 6
    box: Optional[list] = None  # word box [lo..., hi...]; defaults to the support


def _get(session_id: int) -> Session:
    sess = _sessions.get(session_id)
    if sess is None:
        raise HTTPException(status_code=404, detail="no such session")
    return sess


@app.post("/session")
def create_session(req: SessionRequest):
    try:
        if req.preset:
            if req.preset not in PRESETS:
                raise HTTPException(status_code=422, detail=f"unknown preset {req.preset!r}")
            rule, config = PRESETS[req.preset]()
        else:
            if not req.rule or req.config is None:
                raise HTTPException(status_code=422, detail="need a preset or rule+config")
            rule = rulefiles.rule_from_obj(req.rule)
            config = rulefiles.config_from_obj(req.config)
    except SenscaError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    with _global_lock:
        sid = next(_ids)
        _sessions[sid] = Session(rule, config)
    return {"id": sid, "step": 0, "dimension": config.dimension,
            "layers": [{"name": l.name, "symbols": list(l.symbols)} for l in rule.layers],
            "background": list(config.background)}


@app.post("/session/{session_id}/step")
def step_session(session_id: int, n: int = 1):
    sess = _get(session_id)
    if n < 0:
        raise HTTPException(status_code=422, detail="n must be nonnegative")
    with sess.lock:
        try:
            for _ in range(n):
                sess.config = step(sess.rule, sess.config)
                sess.step_index += 1
                sess.history.append(sess.config)
                if len(sess.history) > 512:
                    sess.history.pop(0)
        except SenscaError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
    return {"step": sess.step_index}


@app.post("/session/{session_id}/edit")
def edit_session(session_id: int, req: EditRequest):
    sess = _get(session_id)
    with sess.lock:
        cells = dict(sess.config.cells)
        for c in req.cells:
            pos = tuple(c["pos"])
            state = tuple(c["state"])
            try:
                sess.rule.check_state(state)
            except SenscaError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            if state == sess.config.background:
                cells.pop(pos, None)
            else:
                cells[pos] = state
        sess.config = Configuration.build(sess.config.dimension, sess.config.background, cells)
        sess.history[-1] = sess.config
    return {"step": sess.step_index}


@app.post("/session/{session_id}/inject")
def inject(session_id: int, req: InjectRequest):
    sess = _get(session_id)
    layer_names = [l.name for l in sess.rule.layers]
    carrier = "part" if "part" in layer_names else "delim" if "delim" in layer_names else None
    if carrier is None:
        raise HTTPException(status_code=422, detail="rule has no particle-carrying layer")
    li = layer_names.index(carrier)
    if req.kind not in sess.rule.layers[li].symbols:
        raise HTTPException(status_code=422, detail=f"unknown particle {req.kind!r}")
    with sess.lock:
        pos = tuple(req.pos)
        base = list(sess.config.get(pos))
        base[li] = req.kind
        cells = dict(sess.config.cells)
        cells[pos] = tuple(base)
        sess.config = Configuration.build(sess.config.dimension, sess.config.background, cells)
        sess.history[-1] = sess.config
    return {"step": sess.step_index}


@app.get("/session/{session_id}/view")
def view(session_id: int, box: str):
    """Windowed state: box is lo..hi per axis, e.g. "-5,5" (1D) or "-5,-5,5,5" (2D)."""
    sess = _get(session_id)
    try:
        parts = [int(x) for x in box.split(",")]
        d = sess.config.dimension
        if len(parts) != 2 * d:
            raise ValueError(f"box needs {2*d} integers")
        lo, hi = parts[:d], parts[d:]
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    cells = []
    for pos, st in sorted(sess.config.cells.items()):
        if all(lo[i] <= pos[i] <= hi[i] for i in range(d)):
            cells.append({"pos": list(pos), "state": list(st)})
    return {
        "step": sess.step_index,
        "box": [lo, hi],
        "background": list(sess.config.background),
        "cells": cells,
    }


@app.post("/session/{session_id}/probe-blocking")
def probe_blocking(session_id: int, req: ProbeRequest):
    sess = _get(session_id)
    with sess.lock:
        config = sess.config
    try:
        word = analysis.word_from_config(config, box=req.box)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    try:
        query = analysis.BlockingQuery(word, tuple(req.offset), req.window, req.horizon, margin=req.margin)
        verdict = analysis.check_blocking(sess.rule, query)
    except SenscaError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    if isinstance(verdict, analysis.Certified):
        return {"verdict": "certified", "cycle_start": verdict.certificate.cycle_start,
                "cycle_period": verdict.certificate.cycle_period}
    if isinstance(verdict, analysis.Falsified):
        diff = sorted(set(verdict.right.cells) - set(verdict.left.cells))
        return {"verdict": "falsified", "steps": verdict.steps,
                "difference_cells": [list(p) for p in diff]}
    return {"verdict": "unknown", "reason": verdict.reason}


def _box_coords(lo, hi):
    coords = [()]
    for axis in range(len(lo)):
        coords = [c + (x,) for c in coords for x in range(lo[axis], hi[axis] + 1)]
    return [tuple(c) for c in coords]


@app.get("/rules/presets")
def presets():
    return {"presets": sorted(PRESETS)}
