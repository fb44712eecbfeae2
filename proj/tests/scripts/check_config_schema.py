"""Validate the shipped example configs against docs/config.schema.json."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "docs" / "config.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

failures = 0
for path in sorted((root / "docs" / "examples").glob("*.json")):
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    for e in errors:
        print(f"{path.name}: /{'/'.join(map(str, e.absolute_path))}: {e.message}")
    failures += bool(errors)

bad = {"scenario": {"kind": "stylized", "family": "H"}, "policies": [], "extra": 1}
if validator.is_valid(bad):
    print("schema accepted an invalid config")
    failures += 1
sys.exit(1 if failures else 0)
