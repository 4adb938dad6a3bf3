#!/usr/bin/env python3
"""End-to-end checks of the opcoh command line: reports, exit codes, files."""
import json
import os
import subprocess
import sys
import tempfile

OPCOH = sys.argv[1]
DATA = sys.argv[2]
failures = []


def run(*args, expect_exit=0):
    proc = subprocess.run([OPCOH, *args, "--no-timing"] if args and args[0] != "catalog" else [OPCOH, *args],
                          capture_output=True, text=True, timeout=600)
    if proc.returncode != expect_exit:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, expected {expect_exit}\n{proc.stderr}")
        return None
    try:
        return json.loads(proc.stdout) if proc.stdout.strip() else None
    except json.JSONDecodeError as e:
        failures.append(f"{' '.join(args)}: stdout is not one JSON document ({e})")
        return None


def check(cond, what):
    if not cond:
        failures.append(what)


doc = run("dims", "--operad", "as", "--ring", "Q", "--max-arity", "5")
check(doc and doc["result"]["dims"] == [1, 1, 2, 6, 24, 120], "dims as")
check(doc and doc["ring"] == "Q" and doc["window"] == 5, "report context fields")

doc = run("h1", "--operad", "pois", "--ring", "Q", "--max-arity", "5")
check(doc and doc["result"]["h1"] == 1, "h1 pois")

for variant, want in (("full", 1), ("S", 0)):
    doc = run("h2", "--operad", "example28", "--ring", "F2", "--variant", variant, "--max-arity", "3")
    check(doc and doc["result"]["h2"] == want and doc["variant"] == variant, f"h2 example28 {variant}")

doc = run("h2", "--operad", "pois", "--ring", "Fp:101", "-N", "4", "--variant", "S")
check(doc and doc["result"]["h2"] == 1 and doc["result"]["windowed"], "h2 pois")

doc = run("validate", "--file", os.path.join(DATA, "pois.opd"), "-N", "4")
check(doc and doc["result"]["ok"], "validate pois.opd")

a = subprocess.run([OPCOH, "dims", "--operad", "lie", "-N", "4", "--no-timing"], capture_output=True, text=True)
b = subprocess.run([OPCOH, "dims", "--operad", "lie", "-N", "4", "--no-timing"], capture_output=True, text=True)
check(a.stdout == b.stdout and a.stdout, "deterministic output")
check(a.stderr.strip() != "" and a.stderr not in a.stdout, "summary on standard error")

with tempfile.TemporaryDirectory() as tmp:
    bad = os.path.join(tmp, "bad.opd")
    with open(bad, "w") as f:
        f.write("generators\n  m 2\nrelations\n  (comp m 1 m) = (comp m 2 q)\n")
    proc = subprocess.run([OPCOH, "dims", "--file", bad], capture_output=True, text=True)
    check(proc.returncode == 2, "malformed document exits 2")
    err = json.loads(proc.stdout)["error"] if proc.stdout.strip() else {}
    check(err.get("kind") == "ParseError" and "line 4" in err.get("message", "") + proc.stderr, "parse error position")

    der = os.path.join(tmp, "der.json")
    images = [("1_0", 0, "1_0", "-1"), ("mu(x1,x2)", 2, "mu(x1,x2)", "1"), ("br(x1,x2)", 2, None, None)]
    entries = []
    for src, n, dst, c in images:
        entries.append({"source": {"arity": n, "terms": {src: "1"}},
                        "image": {"arity": n, "terms": {dst: c} if dst else {}}})
    with open(der, "w") as f:
        json.dump({"map": entries}, f)
    doc = run("fixed", "--operad", "pois", "--derivation", der)
    check(doc and doc["result"]["dims"] == [0, 1, 1, 2, 6, 24], "fixed suboperad of the Pois derivation")

    with open(der, "w") as f:
        json.dump({"map": entries[1:]}, f)
    run("fixed", "--operad", "pois", "--derivation", der, expect_exit=1)

    iso = os.path.join(tmp, "iso.json")
    with open(iso, "w") as f:
        json.dump({"map": [{"source": {"arity": 0, "terms": {"1_0": "1"}}, "image": {"arity": 0, "terms": {"1_0": "1"}}},
                           {"source": {"arity": 2, "terms": {"21": "1"}}, "image": {"arity": 2, "terms": {"1_2": "1"}}}]}, f)
    doc = run("iso", "--operad", "as", "--mod-ideal", "1", "--target", "com", "--images", iso, "-N", "5")
    check(doc and doc["result"]["is_iso"], "As/1I iso Com")

    cocycle_doc = run("h2", "--operad", "pois", "-N", "4", "--variant", "S")
    if cocycle_doc:
        cfile = os.path.join(tmp, "w.json")
        with open(cfile, "w") as f:
            json.dump(cocycle_doc["result"]["representatives"][0], f)
        doc = run("deform", "--operad", "pois", "-N", "4", "--cocycle", cfile)
        check(doc and doc["result"]["is_cocycle"] and doc["result"]["validates"], "deform replays a cocycle")

run("dims", "--operad", "pois", "-N", "9", expect_exit=1)
run("dims", "--bogus", expect_exit=2)
run("h2", "--operad", "as", "--variant", "sideways", expect_exit=2)
doc = run("catalog")
check(doc and len(doc["result"]["operads"]) == 8, "catalog lists eight operads")

for f in failures:
    print("FAIL:", f)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
