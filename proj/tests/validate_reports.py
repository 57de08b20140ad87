#!/usr/bin/env python3
"""Run every kolmo-lab command and validate its JSON report against report.schema.json."""

import copy
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = [
    (["frame-tails", "--depth", "6"], 0),
    (["frame-tails", "--frame", "fock", "--family", "coeffs:1;0,1", "--depth", "4"], 0),
    (["toeplitz", "--symbol", "1-|z|^2", "--deg", "16", "--sup-radii", "2", "--sup-angles", "2",
      "--localization-R", "1,2"], 0),
    (["toeplitz", "--symbol", "1", "--deg", "16", "--no-localization"], 0),
    (["hankel", "--fourier", "0,0,1"], 0),
    (["hankel", "--symbol", "1+z", "--deg", "8"], 0),
    (["besov", "--space", "dirichlet", "--depth", "4", "--bp"], 0),
    (["besov", "--space", "weighted-bergman", "--t", "0.5", "--depth", "3"], 0),
    (["l2", "--preset", "gaussian", "--stft"], 0),
    (["l2", "--preset", "sinc", "--radii", "5,20"], 0),
    (["l2", "--preset", "modulated-gaussians", "--kmax", "20", "--radii", "10"], 0),
    (["umbrella", "--umbrella", "zero"], 0),
    (["umbrella", "--umbrella", "coeffs:1", "--depth", "2"], 0),
    (["umbrella", "--frame", "fock", "--umbrella", "gaussian"], 0),
    (["selftest"], None),
]


def main():
    exe, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    reports = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, (args, want) in enumerate(RUNS):
            for stamp in ([], ["--no-timestamp"]):
                out = Path(tmp) / f"r{i}{len(stamp)}.json"
                proc = subprocess.run([exe, *args, *stamp, "--out", str(out)], capture_output=True, text=True)
                label = " ".join(args + stamp)
                if want is not None and proc.returncode != want:
                    print(f"FAIL {label}: exit {proc.returncode}\n{proc.stderr}")
                    failures += 1
                    continue
                report = json.loads(out.read_text(encoding="utf-8"))
                errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
                if errors:
                    failures += 1
                    print(f"FAIL {label}: {errors[0].message} at {list(errors[0].path)}")
                else:
                    print(f"ok   {label}")
                reports.append(report)
                if args[0] == "selftest":
                    break

    # The schema must reject malformed reports too.
    bad = copy.deepcopy(reports[0])
    bad["result"]["unexpected"] = 1
    mutants = [bad]
    bad = copy.deepcopy(reports[0])
    del bad["version"]
    mutants.append(bad)
    bad = copy.deepcopy(reports[4])
    bad["verdict"] = "maybe"
    mutants.append(bad)
    for m in mutants:
        if validator.is_valid(m):
            print("FAIL schema accepted a malformed report")
            failures += 1

    print(f"{len(reports)} reports checked, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
