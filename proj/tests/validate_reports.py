"""Validate report JSON files against the report schema.

usage: validate_reports.py SCHEMA PATH...

Each PATH is a report file or a directory searched recursively for *.json.
Every row of "measurements" must have one entry per column, and "pass" must
agree with the criteria.
"""

import json
import pathlib
import sys

import jsonschema


def reports(paths):
    for p in map(pathlib.Path, paths):
        if p.is_dir():
            found = sorted(q for q in p.rglob("*.json") if not q.name.startswith("opnorm_fit"))
            if not found:
                raise SystemExit(f"{p}: no reports found")
            yield from found
        elif p.is_file():
            yield p
        else:
            raise SystemExit(f"{p}: missing")


def main(argv):
    if len(argv) < 3:
        raise SystemExit(__doc__)
    schema = json.loads(pathlib.Path(argv[1]).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for path in reports(argv[2:]):
        doc = json.loads(path.read_text())
        errors = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in validator.iter_errors(doc)]
        if not errors:
            width = len(doc["columns"])
            errors += [f"measurements/{i}: {len(row)} values for {width} columns"
                       for i, row in enumerate(doc["measurements"]) if len(row) != width]
            if doc["pass"] != all(c["pass"] for c in doc["criteria"]):
                errors.append("pass disagrees with the criteria")
        status = "ok" if not errors else "INVALID"
        print(f"{status} {path}")
        for e in errors:
            print(f"    {e}")
        failures += bool(errors)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
