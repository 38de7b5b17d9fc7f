"""Regenerate the explorer's golden fixtures from the backend.

Run from the repository root:  python3 frontend/scripts/make_fixtures.py
"""

import json
import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "src"))

from fastapi.testclient import TestClient

from sensca.server import app

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def views(client, rng):
    out = []
    presets = ["rule-110", "rule-90", "demo-block", "demo-loop"]
    for i in range(100):
        preset = rng.choice(presets)
        res = client.post("/session", json={"preset": preset}).json()
        sid = res["id"]
        steps = rng.randint(0, 12)
        if steps:
            client.post(f"/session/{sid}/step", params={"n": steps})
        if res["dimension"] == 1:
            lo = rng.randint(-20, -5)
            hi = rng.randint(5, 20)
            box = f"{lo},{hi}"
        else:
            lo = (rng.randint(-8, -2), rng.randint(-8, -2))
            hi = (rng.randint(4, 10), rng.randint(4, 10))
            box = f"{lo[0]},{lo[1]},{hi[0]},{hi[1]}"
        view = client.get(f"/session/{sid}/view", params={"box": box}).json()
        out.append({
            "preset": preset,
            "steps": steps,
            "box": box,
            "layers": res["layers"],
            "view": view,
        })
    return out


def probes(client, rng):
    scenarios = []
    word = [{"pos": [0], "state": ["1"]}, {"pos": [1], "state": ["0"]}, {"pos": [2], "state": ["1"]},
            {"pos": [3], "state": ["1"]}, {"pos": [4], "state": ["0"]}]
    for preset in ("rule-204", "rule-170"):
        for wlen in (3, 4, 5):
            for off in (1, 2) if wlen == 4 else (1,):
                res = client.post("/session", json={"preset": preset}).json()
                sid = res["id"]
                client.post(f"/session/{sid}/edit", json={"cells": word[:wlen]})
                req = {"offset": [off], "window": 1, "horizon": 48, "box": [0, wlen - 1]}
                verdict = client.post(f"/session/{sid}/probe-blocking", json=req).json()
                scenarios.append({"preset": preset, "word": word[:wlen], "request": req, "response": verdict})
    # a block scenario on the 1D reduction (window inside the block word)
    res = client.post("/session", json={"preset": "demo-block"}).json()
    sid = res["id"]
    req = {"offset": [4], "window": 1, "horizon": 100, "margin": 6, "box": [0, 9]}
    verdict = client.post(f"/session/{sid}/probe-blocking", json=req).json()
    scenarios.append({"preset": "demo-block", "request": req, "response": verdict})

    res = client.post("/session", json={"preset": "demo-loop"}).json()
    sid = res["id"]
    req = {"offset": [1, 1], "window": 1, "horizon": 60, "margin": 3}
    verdict = client.post(f"/session/{sid}/probe-blocking", json=req).json()
    scenarios.append({"preset": "demo-loop", "request": req, "response": verdict})
    return scenarios


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(12345)
    client = TestClient(app)
    with open(os.path.join(OUT, "views.json"), "w") as f:
        json.dump(views(client, rng), f, indent=1, sort_keys=True)
    with open(os.path.join(OUT, "probes.json"), "w") as f:
        json.dump(probes(client, rng), f, indent=1, sort_keys=True)
    print("fixtures written to", OUT)


if __name__ == "__main__":
    main()
