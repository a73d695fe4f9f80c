"""Runs every ofp subcommand and validates each report against the schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    ofp, schema_path = sys.argv[1], Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        log = tmp / "log.fpdsl"
        log.write_text("func lg(x in [0, 2]) = log(x)\n")
        runs = {
            "detect": ["detect", "--budget", "512"],
            "classify": ["classify"],
            "repair": ["repair"],
            "eval": ["eval", "--samples", "50", "--ceiling", "1e-20"],
            "run-all": ["run-all", "--samples", "50"],
            "divergence": ["repair", str(log), "--var", "x", "--at", "0"],
        }
        failed = 0
        for name, args in runs.items():
            out = tmp / f"{name}.json"
            cmd = [ofp, *args, "--out", str(out), "--patch-dir", str(tmp / "patches")]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            if proc.returncode not in (0, 1):
                print(f"{name}: exit {proc.returncode}\n{proc.stderr}")
                failed += 1
                continue
            errors = sorted(validator.iter_errors(json.loads(out.read_text())), key=lambda e: list(e.path))
            for error in errors[:5]:
                print(f"{name}: {'/'.join(map(str, error.path))}: {error.message}")
            failed += bool(errors)
            print(f"{name}: {'invalid' if errors else 'valid'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
