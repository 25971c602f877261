"""Validate CLI reports against the published JSON schema."""
import json
import subprocess
import sys

import jsonschema

schema_path, cli = sys.argv[1], sys.argv[2]
with open(schema_path) as f:
    schema = json.load(f)
jsonschema.Draft202012Validator.check_schema(schema)

runs = [
    ["verify", "all", "--samples", "20000", "--timing"],
    ["estimate", "absorption", "--cone", "orthant:4", "--k", "2", "--samples", "10000"],
    ["estimate", "intrinsic-steiner", "--cone", "weyl-b:2", "--samples", "10000"],
    ["estimate", "angle-sums", "--n", "3", "--k", "2", "--j", "0", "--samples", "10000"],
]
for args in runs:
    out = subprocess.run([cli, *args], capture_output=True, text=True)
    if out.returncode not in (0, 3):
        sys.exit(f"{args}: exit {out.returncode}: {out.stderr}")
    jsonschema.validate(json.loads(out.stdout), schema)
    print("valid:", " ".join(args))
