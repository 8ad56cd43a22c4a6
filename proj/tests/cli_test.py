#!/usr/bin/env python3
# CLI contract: exit codes, byte-identical reruns, schema validation, batch and @file input.
# usage: cli_test.py FELAB SCHEMA_DIR DATA_DIR

import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

felab, schema_dir, data_dir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])

schemas = {p.stem: json.loads(p.read_text()) for p in schema_dir.glob("*.json")}
registry = Registry().with_resources((s["$id"], Resource.from_contents(s)) for s in schemas.values())
failures = []


def run(*args):
    r = subprocess.run([felab, *args], capture_output=True, text=True, timeout=600)
    return r.returncode, r.stdout, r.stderr


def validate(doc, where):
    kind = doc.get("kind")
    if kind not in schemas:
        failures.append(f"{where}: no schema for kind {kind!r}")
        return
    v = jsonschema.Draft202012Validator(schemas[kind], registry=registry)
    for err in v.iter_errors(doc):
        failures.append(f"{where}: {err.json_path}: {err.message}")


def expect(cond, what):
    if not cond:
        failures.append(what)


# (args, expected exit status)
cases = [
    (["check", "max", "odd", "--N", "2"], 1),
    (["check", "a-thick", "N", "--n", "10"], 0),
    (["check", "a-ip", "construct(exgamma,20)", "--L", "2", "--horizon", "10000"], 2),
    (["check", "m-ip", "construct(fp_primes,odd,6)", "--L", "4", "--horizon", "10000"], 0),
    (["check", "a-pcws", "odd", "--t-max", "1", "--n", "50", "--horizon", "10000"], 0),
    (["check", "max-star", "construct(thick_nonmaxstar,20)", "--a-max", "20", "--horizon", "10000"], 1),
    (["fe", "{2,3}", "mult(6)"], 0),
    (["fe", "{6,8}", "union(level(2),level(5))"], 1),
    (["fe", "mult(3)", "mult(3)"], 0),
    (["me", "{2,3,5}", "level(2)", "--m", "2"], 0),
    (["diagram", "odd", "--horizon", "5000"], 0),
    (["diagram", "N", "--horizon", "2000"], 0),
    (["construct", "exgamma", "6"], 0),
    (["construct", "sidon", "5"], 0),
    (["construct", "thick_nonmaxstar", "4"], 0),
    (["chain", "3", "6", "--verify"], 0),
    (["chain", "0", "4"], 0),
    (["atlas", "6"], 0),
    (["atlas", "1"], 0),
    (["atlas", "12", "--exhaustive"], 0),
    (["parse", "union(mult(2),compl(primes))"], 0),
    (["fe", "@" + str(data_dir / "fp_small.set"), "mult(2)"], 0),
]

for args, want in cases:
    label = " ".join(args)
    code, out, err = run(*args, "--json")
    expect(code == want, f"{label}: exit {code}, want {want} ({err.strip()})")
    try:
        doc = json.loads(out)
    except json.JSONDecodeError as e:
        failures.append(f"{label}: bad JSON: {e}")
        continue
    validate(doc, label)
    code2, out2, _ = run(*args, "--json")
    expect(code2 == code and out2 == out, f"{label}: second run differs")
    # The table format keeps the same exit status.
    code3, out3, _ = run(*args)
    expect(code3 == code and out3.strip() != "", f"{label}: table run exit {code3}")

# Spot checks on content.
_, out, _ = run("check", "max", "odd", "--N", "2", "--json")
expect(json.loads(out)["bounds"]["n0"] == 2, "max odd: n0 != 2")
_, out, _ = run("construct", "exgamma", "6", "--json")
expect(json.loads(out)["terms"] == [1, 2, 6, 12, 25, 48], "exgamma 6 terms")
_, out, _ = run("fe", "{6,8}", "union(level(2),level(5))", "--json")
expect(json.loads(out)["certificate"]["kind"] == "level-certificate", "fe level certificate")
_, out, _ = run("atlas", "1", "--json")
expect(json.loads(out)["upset_count"] == 2, "atlas 1 upsets")

# Usage and parse errors.
for args in (["check", "bogus", "N"], ["check", "max", "mult("], ["construct", "nosuch", "3"], ["fe", "{2}"],
             ["check", "max", "N", "--horizon", "0"], ["fe", "@" + str(data_dir / "missing.set"), "N"]):
    code, _, err = run(*args)
    expect(code == 3, f"{' '.join(args)}: exit {code}, want 3")
    expect(err.strip() != "", f"{' '.join(args)}: no message on stderr")

# Resource cap.
code, _, _ = run("atlas", "40")
expect(code >= 3, f"atlas 40: exit {code}")

# Batch mode: one JSON line per expression, errors inline, worst status returned.
code, out, _ = run("check", "max", "--N", "2", "--batch", str(data_dir / "batch.txt"), "--json")
lines = [json.loads(l) for l in out.splitlines()]
expect(len(lines) == 5, f"batch: {len(lines)} lines")
expect(code == 3, f"batch: exit {code}")
for i, doc in enumerate(lines):
    validate(doc, f"batch line {i}")
expect(lines[-1]["kind"] == "error" and lines[-1]["line"] == 7, "batch: last line should be the parse error")
expect([d.get("verdict") for d in lines[:2]] == ["refuted", "proved"], "batch: verdicts for odd and N")
code2, out2, _ = run("check", "max", "--N", "2", "--batch", str(data_dir / "batch.txt"), "--json")
expect(out2 == out, "batch: second run differs")

# --emit writes a set file that reads back through @file.
tmp = pathlib.Path(subprocess.run(["mktemp", "-d"], capture_output=True, text=True).stdout.strip())
emitted = tmp / "exgamma.set"
code, _, _ = run("construct", "exgamma", "6", "--emit", str(emitted))
expect(code == 0 and emitted.exists(), "construct --emit")
if emitted.exists():
    code, out, _ = run("parse", "@" + str(emitted), "--json")
    expect(code == 0 and "25" in json.loads(out)["canonical"], "parse of emitted file")

for f in failures:
    print("FAIL", f)
print(f"{len(cases)} command cases, {len(failures)} failures")
sys.exit(1 if failures else 0)
