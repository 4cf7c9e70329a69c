"""Runs the unimap CLI and validates every JSON output against docs/schemas."""

import json
import pathlib
import subprocess
import sys

from jsonschema import Draft202012Validator

CUBIC = '{"a":0,"b":1,"c":0,"d":0,"phi":"t^3"}'
SQUARE = '{"a":0,"b":1,"c":0,"d":0,"phi":"t^2"}'
SHIFTED = '{"a":0,"b":1,"c":0,"d":0,"phi":"t^2+1"}'
DRIFT = '{"a":0,"b":1,"c":0,"d":1,"phi":"t^2"}'
ROTATED = '{"a":3,"b":4,"c":0,"d":0,"phi":"sin(t)"}'

CASES = [
    ("check", ["check", "--map", CUBIC, "--window", "-5", "5"], 0),
    ("check", ["check", "--map", '{"a":0,"b":0,"c":1,"d":0,"phi":"t"}'], 0),
    ("normal-form", ["normal-form", "--map", ROTATED], 0),
    ("invert", ["invert", "--map", SQUARE, "--point", "5", "2"], 0),
    ("fixed-points", ["fixed-points", "--map", SQUARE], 0),
    ("fixed-points", ["fixed-points", "--map", ROTATED, "--window", "-4", "4", "-3", "3"], 0),
    ("fixed-points", ["fixed-points", "--map", SHIFTED], 0),
    ("orbit", ["orbit", "--map", SQUARE, "--start", "0", "1", "--n", "5", "--format", "json"], 0),
    ("periodic", ["periodic", "--map", CUBIC, "--window", "-3", "3", "--pmax", "64"], 0),
    ("periodic", ["periodic", "--map", DRIFT, "--grid", "21", "--pmax", "16"], 0),
    ("disk-test", ["disk-test", "--map", SQUARE, "--center", "0", "3", "--radius", "0.5"], 0),
    ("disk-test", ["disk-test", "--map", SQUARE, "--center", "0", "0", "--radius", "1"], 0),
    ("conjugacy", ["conjugacy", "--map", SHIFTED, "--segment", "0", "0", "1", "0"], 0),
    ("conjugacy", ["conjugacy", "--map", DRIFT, "--check-grid", "-5", "5", "21"], 0),
    ("bifurcate", ["bifurcate", "--map", CUBIC, "--mu-list", "-0.2", "0", "0.2", "--seed-grid", "-5", "5", "3"], 0),
    ("bifurcate", ["bifurcate", "--map", SQUARE, "--mu-list", "0.1", "--seeds", "10", "10", "1", "1"], 0),
]


def run(cli, args):
    return subprocess.run([cli] + args, capture_output=True, text=True, timeout=120)


def main():
    cli = sys.argv[1]
    schema_dir = pathlib.Path(sys.argv[2])
    failures = []

    def check(ok, what):
        print(("ok    " if ok else "FAIL  ") + what)
        if not ok:
            failures.append(what)

    for schema_name, args, code in CASES:
        label = " ".join(a if len(a) < 40 else a[:37] + "..." for a in args)
        proc = run(cli, args)
        check(proc.returncode == code, f"{label}: exit {proc.returncode}")
        try:
            doc = json.loads(proc.stdout)
        except json.JSONDecodeError as e:
            check(False, f"{label}: stdout is not JSON ({e})")
            continue
        schema = json.loads((schema_dir / f"{schema_name}.schema.json").read_text())
        errors = sorted(Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
        check(not errors, f"{label}: schema {schema_name}" + (f" ({errors[0].message})" if errors else ""))

    proc = run(cli, ["orbit", "--map", SQUARE, "--start", "0", "1", "--n", "10"])
    rows = proc.stdout.strip().splitlines()
    check(proc.returncode == 0 and len(rows) == 11, "orbit --n 10 prints 11 CSV rows")
    check(rows[:2] == ["0,0,1", "1,1,1"], "orbit rows are n,x,y")

    a = run(cli, ["bifurcate", "--map", SQUARE, "--mu-list", "-0.1", "0.1", "--seed", "7"])
    b = run(cli, ["bifurcate", "--map", SQUARE, "--mu-list", "-0.1", "0.1", "--seed", "7"])
    check(a.stdout == b.stdout and a.returncode == 0, "identical argv and seed give identical output")

    bad = run(cli, ["check", "--map", '{"a":0,"b":1,"c":0,"d":0,"phi":"t^^2"}'])
    check(bad.returncode == 1 and "grammar" in bad.stderr and '"phi"' in bad.stderr,
          "parse error exits 1 and prints the grammar and spec schema")
    bad = run(cli, ["check", "--map", '{"a":0,"b":1,"c":0,"phi":"t"}'])
    check(bad.returncode == 1, "incomplete spec exits 1")
    bad = run(cli, ["frobnicate"])
    check(bad.returncode == 1, "unknown subcommand exits 1")
    bad = run(cli, ["bifurcate", "--map", SQUARE, "--mu-list", "1.5"])
    check(bad.returncode == 1, "|mu| >= 1 exits 1")
    bad = run(cli, ["conjugacy", "--map", SQUARE])
    check(bad.returncode == 1, "conjugacy on a map with fixed points exits 1")

    map_schema = json.loads((schema_dir / "map.schema.json").read_text())
    check(not list(Draft202012Validator(map_schema).iter_errors(json.loads(CUBIC))), "map spec schema")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
