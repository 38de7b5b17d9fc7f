"""Command-line entry point.

Exit codes: 0 success, 2 input validation, 3 honest Unknown verdict from a
probe, 4 internal invariant violation.  Artifact-producing commands write a
sibling ``<output>.manifest.json`` recording inputs, digests, and seeds.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time

import click

import sensca
from sensca import analysis, rulefiles
from sensca.core import Configuration, slice_lift, step
from sensca.errors import SenscaError
from sensca.machines import loop_on, twin_prime_machine
from sensca.reduce1d import (
    block_config,
    compile_nilpotency_1d,
    compile_sensitivity_1d,
    make_block,
)
from sensca.reduce2d import compile_sensitivity_2d, loop_config, make_red_loop
from sensca.turing import Halted, load_machine, save_machine, tm_run

EXIT_VALIDATION = 2
EXIT_UNKNOWN = 3
EXIT_INTERNAL = 4


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        h.update(f.read())
    return h.hexdigest()


def _write_manifest(command, inputs, outputs, seed=None, extra=None):
    for out in outputs:
        manifest = {
            "command": command,
            "tool": f"sensca {sensca.__version__}",
            "inputs": {p: _digest(p) for p in inputs},
            "outputs": {p: _digest(p) for p in outputs},
            "seed": seed,
            "wall_clock": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        if extra:
            manifest.update(extra)
        with open(out + ".manifest.json", "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")


def _die_validation(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_VALIDATION)


@click.group()
def main():
    """Cellular-automaton sensitivity toolkit."""


@main.command("compile-1d")
@click.argument("machine_file", type=click.Path(exists=True))
@click.option("--nilpotent", is_flag=True, help="emit the particle-free nilpotency variant")
@click.option("-o", "--output", default="rule-1d.json", show_default=True)
def compile_1d(machine_file, nilpotent, output):
    """Compile a semi-infinite machine into the 1D sensitivity automaton."""
    try:
        machine = load_machine(machine_file)
        out = (compile_nilpotency_1d if nilpotent else compile_sensitivity_1d)(machine)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    obj = rulefiles.rule_to_obj(out.rule)
    obj["manifest"] = out.manifest
    with open(output, "w", encoding="utf-8") as f:
        f.write(rulefiles.dumps(obj))
    _write_manifest("compile-1d", [machine_file], [output])
    click.echo(f"wrote {output} ({len(out.rule.rules)} rules, {out.rule.state_count()} states)")


@main.command("compile-2d")
@click.argument("machine_file", type=click.Path(exists=True))
@click.option("-o", "--output", default="rule-2d.json", show_default=True)
def compile_2d(machine_file, output):
    """Compile a semi-infinite machine into the 2D red-loop automaton."""
    try:
        machine = load_machine(machine_file)
        out = compile_sensitivity_2d(machine)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    obj = rulefiles.rule_to_obj(out.rule)
    obj["manifest"] = out.manifest
    with open(output, "w", encoding="utf-8") as f:
        f.write(rulefiles.dumps(obj))
    _write_manifest("compile-2d", [machine_file], [output])
    click.echo(f"wrote {output} ({len(out.rule.rules)} rules)")


@main.command("lift")
@click.argument("rule_file", type=click.Path(exists=True))
@click.option("-o", "--output", default="rule-lifted.json", show_default=True)
def lift(rule_file, output):
    """Lift a rule one dimension up (independent action on each slice)."""
    try:
        rule = rulefiles.load_rule(rule_file)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    lifted = slice_lift(rule)
    rulefiles.save_rule(lifted, output)
    _write_manifest("lift", [rule_file], [output])
    click.echo(f"wrote {output} ({lifted.neighborhood.dimension}D)")


@main.command("simulate")
@click.argument("rule_file", type=click.Path(exists=True))
@click.argument("config_file", type=click.Path(exists=True))
@click.option("--steps", type=int, required=True)
@click.option("--trace", "trace_file", default=None, help="stream one configuration per line (JSONL)")
@click.option("--plot", "plot_file", default=None, help="render a figure of the run")
@click.option("-o", "--output", default="final-config.json", show_default=True)
@click.option("--json", "json_mode", is_flag=True, help="print the final configuration as JSON")
def simulate(rule_file, config_file, steps, trace_file, plot_file, output, json_mode):
    """Evolve a configuration and write the final state (optional trace/plot)."""
    try:
        rule = rulefiles.load_rule(rule_file)
        config = rulefiles.load_config(config_file)
        if steps < 0:
            raise ValueError("steps must be nonnegative")
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    try:
        sink = open(trace_file, "w", encoding="utf-8") if trace_file else None
        kept = [config] if plot_file and rule.neighborhood.dimension == 1 else None
        cur = config
        if sink:
            sink.write(json.dumps(rulefiles.config_to_obj(cur), sort_keys=True) + "\n")
        for _ in range(steps):
            cur = step(rule, cur)
            if sink:
                sink.write(json.dumps(rulefiles.config_to_obj(cur), sort_keys=True) + "\n")
            if kept is not None:
                kept.append(cur)
        if sink:
            sink.close()
    except SenscaError as exc:
        _die_validation(exc)
    rulefiles.save_config(cur, output)
    outputs = [output] + ([trace_file] if trace_file else [])
    if plot_file:
        from sensca import report

        if rule.neighborhood.dimension == 1:
            report.space_time_figure(rule, kept, plot_file)
        else:
            report.plane_figure(rule, cur, plot_file)
        outputs.append(plot_file)
    _write_manifest("simulate", [rule_file, config_file], outputs, extra={"steps": steps})
    if json_mode:
        click.echo(json.dumps(rulefiles.config_to_obj(cur), sort_keys=True))
    else:
        click.echo(f"wrote {output} after {steps} steps ({len(cur.cells)} live cells)")


@main.command("probe-blocking")
@click.argument("rule_file", type=click.Path(exists=True))
@click.option("--word", "word_file", type=click.Path(exists=True), required=True, help="configuration file holding the word")
@click.option("--offset", required=True, help="window offset, comma-separated")
@click.option("--window", type=int, required=True)
@click.option("--horizon", type=int, default=64, show_default=True)
@click.option("--margin", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", default="blocking-verdict.json", show_default=True)
def probe_blocking(rule_file, word_file, offset, window, horizon, margin, seed, output):
    """Certify, falsify, or honestly give up on a blocking-word query."""
    try:
        rule = rulefiles.load_rule(rule_file)
        word_cfg = rulefiles.load_config(word_file)
        word = analysis.word_from_config(word_cfg)
        p = tuple(int(x) for x in offset.split(","))
        query = analysis.BlockingQuery(word, p, window, horizon, margin=margin, seed=seed)
        verdict = analysis.check_blocking(rule, query)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    if isinstance(verdict, analysis.Certified):
        obj = verdict.certificate.to_obj(rule_name=rule.name)
    elif isinstance(verdict, analysis.Falsified):
        obj = {
            "kind": "falsified",
            "rule": rule.name,
            "steps": verdict.steps,
            "left": rulefiles.config_to_obj(verdict.left),
            "right": rulefiles.config_to_obj(verdict.right),
        }
    else:
        obj = {"kind": "unknown", "rule": rule.name, "reason": verdict.reason}
    analysis.save_json(obj, output)
    _write_manifest("probe-blocking", [rule_file, word_file], [output], seed=seed)
    click.echo(json.dumps({"verdict": obj["kind"]}))
    if obj["kind"] == "unknown":
        sys.exit(EXIT_UNKNOWN)


@main.command("replay")
@click.argument("rule_file", type=click.Path(exists=True))
@click.argument("certificate_file", type=click.Path(exists=True))
def replay(rule_file, certificate_file):
    """Re-run a certificate; exit nonzero on any mismatch."""
    try:
        rule = rulefiles.load_rule(rule_file)
        with open(certificate_file, "r", encoding="utf-8") as f:
            cert = analysis.certificate_from_obj(json.load(f))
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    ok = analysis.replay_certificate(rule, cert)
    click.echo("replay ok" if ok else "replay MISMATCH")
    if not ok:
        sys.exit(EXIT_INTERNAL)


@main.command("probe-sensitivity")
@click.argument("rule_file", type=click.Path(exists=True))
@click.option("--max-len", type=int, required=True)
@click.option("--horizon", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--plot-prefix", default=None, help="render verdict/cone figures with this prefix")
@click.option("-o", "--output", default="sensitivity-evidence.json", show_default=True)
def probe_sensitivity_cmd(rule_file, max_len, horizon, seed, plot_prefix, output):
    """Aggregate blocking verdicts over all short words (bounded evidence only)."""
    try:
        rule = rulefiles.load_rule(rule_file)
        evidence = analysis.probe_sensitivity(rule, max_len, horizon, seed=seed)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    analysis.save_json(evidence.to_obj(), output)
    outputs = [output]
    if plot_prefix:
        from sensca import report

        outputs += report.evidence_figures(evidence, plot_prefix)
    _write_manifest("probe-sensitivity", [rule_file], outputs, seed=seed)
    click.echo(json.dumps({k: v for k, v in evidence.to_obj()["per_length"].items()}))


@main.command("twin-prime-ca")
@click.option("--machine-out", default="twin-prime-machine.json", show_default=True)
@click.option("--rule-out", default="twin-prime-rule.json", show_default=True)
def twin_prime_ca(machine_out, rule_out):
    """Emit the twin-prime machine and its compiled 1D automaton."""
    machine = twin_prime_machine()
    save_machine(machine, machine_out)
    out = compile_sensitivity_1d(machine)
    obj = rulefiles.rule_to_obj(out.rule)
    obj["manifest"] = out.manifest
    with open(rule_out, "w", encoding="utf-8") as f:
        f.write(rulefiles.dumps(obj))
    _write_manifest("twin-prime-ca", [], [machine_out, rule_out])
    click.echo(f"wrote {machine_out} and {rule_out}")


@main.command("tm-run")
@click.argument("machine_file", type=click.Path(exists=True))
@click.option("--input", "n", type=int, required=True)
@click.option("--fuel", type=str, required=True, help="step budget (scientific notation accepted)")
def tm_run_cmd(machine_file, n, fuel):
    """Run a machine on a unary input and report the outcome as JSON."""
    try:
        machine = load_machine(machine_file)
        budget = int(float(fuel.replace("^", "e").replace("10e", "1e")))
        outcome = tm_run(machine, n, budget)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    if isinstance(outcome, Halted):
        ones = 0
        while outcome.snapshot.read(ones) == "1":
            ones += 1
        click.echo(json.dumps({"outcome": "halted", "steps": outcome.steps, "witness": ones}))
    else:
        click.echo(json.dumps({"outcome": "fuel-exhausted", "steps": outcome.snapshot.steps}))


@main.command("make-loop")
@click.option("--half-perimeter", type=int, required=True)
@click.option("--machine", "machine_file", type=click.Path(exists=True), default=None,
              help="machine defining the layer alphabets (default: loop_on(half-perimeter))")
@click.option("--initialized/--bare", default=True, show_default=True)
@click.option("-o", "--output", default="loop-config.json", show_default=True)
def make_loop_cmd(half_perimeter, machine_file, initialized, output):
    """Emit a red-loop configuration whose tape encodes the given input."""
    try:
        machine = load_machine(machine_file) if machine_file else loop_on(half_perimeter)
        out = compile_sensitivity_2d(machine)
        loop = make_red_loop(half_perimeter)
        cfg = loop_config(out, loop, initialized=initialized)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    rulefiles.save_config(cfg, output)
    _write_manifest("make-loop", [machine_file] if machine_file else [], [output])
    click.echo(f"wrote {output} ({loop.w}x{loop.h} loop, input {loop.input})")


@main.command("make-block")
@click.option("--input", "n", type=int, required=True)
@click.option("--machine", "machine_file", type=click.Path(exists=True), default=None,
              help="machine defining the layer alphabets (default: loop_on(input))")
@click.option("--length", type=int, default=None)
@click.option("--double", is_flag=True, help="emit the uu pattern (two adjacent copies)")
@click.option("-o", "--output", default="block-config.json", show_default=True)
def make_block_cmd(n, machine_file, length, double, output):
    """Emit a computational-block configuration with unary input n."""
    from sensca.reduce1d import double_block_word

    try:
        machine = load_machine(machine_file) if machine_file else loop_on(n)
        blk = make_block(machine, n, length=length)
        if double:
            word = double_block_word(blk)
            cfg = Configuration.build(1, ("_", "_", "_", "_"), dict(word.content))
        else:
            cfg = block_config(blk)
    except (SenscaError, ValueError, KeyError) as exc:
        _die_validation(exc)
    rulefiles.save_config(cfg, output)
    _write_manifest("make-block", [machine_file] if machine_file else [], [output])
    click.echo(f"wrote {output} (width {blk.width}, input {n})")


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, host):
    """Serve the explorer backend."""
    import uvicorn

    from sensca.server import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
