"""Refreeze golden outputs: ``python tests/golden/regenerate.py``.

Each case directory holds ``config.json`` and ``case.json`` (command and
expected exit status); outputs are written to ``expected/``.
"""

import json
import shutil
import sys
from pathlib import Path

from magint.cli import run

HERE = Path(__file__).resolve().parent


def cases():
    for d in sorted(HERE.iterdir()):
        if (d / "case.json").exists():
            yield d, json.loads((d / "case.json").read_text())


def main():
    bad = 0
    for d, case in cases():
        out = d / "expected"
        shutil.rmtree(out, ignore_errors=True)
        status = run(case["command"], str(d / "config.json"), str(out), quiet=True)
        flag = "ok" if status == case["status"] else f"MISMATCH (expected {case['status']})"
        print(f"{d.name}: status {status} {flag}")
        bad += status != case["status"]
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
