#!/usr/bin/env python3
"""Validate CLI reports against docs/report.schema.json and re-check their
certificates with plain arithmetic."""

import csv
import json
import os
import subprocess
import sys
import tempfile

import jsonschema


def read_csv(path):
    with open(path) as f:
        return [[float(v) for v in row] for row in csv.reader(f) if row and not row[0].startswith("#")]


def check_certificate(h, rep):
    cert = rep["certificate"]
    if cert is None:
        return
    x = cert["x"]
    r, n = len(h), len(h[0])
    assert len(x) == r, "certificate length"
    assert abs(sum(x) - 1.0) <= 1e-7, "certificate not on e^T x = 1"
    for j in range(n):
        col = [h[i][j] for i in range(r)]
        scale = sum(col)
        if scale == 0:
            continue
        assert sum(col[i] * x[i] for i in range(r)) / scale >= -1e-7, "certificate outside the polytope"
    sq = sum(v * v for v in x)
    assert abs(sq - cert["squared_norm"]) <= 1e-9 * max(1.0, sq)
    if rep["reason"] == "NormExceedsOne":
        assert sq > 1.0, "norm certificate does not exceed one"


def check_separator(h, rep):
    nc = rep["ncssc"]
    if nc["holds"]:
        return
    y = nc["separator"]
    i = nc["failing_index"] - 1
    r = len(h)
    for j in range(len(h[0])):
        assert sum(h[k][j] * y[k] for k in range(r)) >= -1e-7, "separator not in the dual cone"
    target = sum(y) - y[i]
    assert target < 0, "separator does not cut e - e_i"


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)

    cases = {
        "identity": "1,0,0\n0,1,0\n0,0,1\n",
        "allpairs": "0,1,1,1\n1,0,1,1\n1,1,0,1\n1,1,1,0\n",
        "ones": "1\n1\n1\n",
        "zero_column": "1,0,0,0\n0,1,0,0\n0,0,1,0\n",
        "extra_maximizer": "1,0,0,1\n0,1,1,0\n0,0,2,2\n",
    }
    failures = 0
    with tempfile.TemporaryDirectory() as work:
        runs = []
        for name, text in cases.items():
            path = os.path.join(work, name + ".csv")
            with open(path, "w") as f:
                f.write(text)
            runs.append((name, path, []))
        for seed in range(1, 7):
            path = os.path.join(work, f"gen{seed}.csv")
            subprocess.run([binary, "gen", "--r", "5", "--n", "20", "--k", str(1 + seed % 4), "--seed", str(seed),
                            "--out", path], check=True, capture_output=True)
            runs.append((f"gen{seed}", path, ["--method", "bnb" if seed % 2 else "auto"]))
        runs.append(("deadline", os.path.join(work, "gen1.csv"), ["--deadline", "0"]))

        for name, path, extra in runs:
            out = os.path.join(work, name + ".json")
            proc = subprocess.run([binary, "check", "--input", path, "--json", out] + extra, capture_output=True)
            if proc.returncode not in (0, 1, 2):
                print(f"FAIL {name}: exit {proc.returncode}: {proc.stderr.decode()}")
                failures += 1
                continue
            with open(out) as f:
                rep = json.load(f)
            errors = sorted(validator.iter_errors(rep), key=str)
            for e in errors:
                print(f"FAIL {name}: {e.message} at {list(e.path)}")
            failures += len(errors)
            expected_exit = {"holds": 0, "fails": 1, "unknown": 2}[rep["verdict"]]
            if proc.returncode != expected_exit:
                print(f"FAIL {name}: exit {proc.returncode} for verdict {rep['verdict']}")
                failures += 1
            try:
                h = read_csv(path)
                check_certificate(h, rep)
                check_separator(h, rep)
                assert rep["certificate_verified"]
            except AssertionError as e:
                print(f"FAIL {name}: {e}")
                failures += 1
            print(f"{name}: {rep['verdict']} ({rep['reason']})")

    if failures:
        print(f"{failures} problem(s)")
        return 1
    print("all reports valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
