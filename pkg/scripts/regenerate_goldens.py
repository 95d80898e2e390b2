#!/usr/bin/env python3
"""Regenerate the checked-in golden catalog files.

Run from the repository root after an intentional change to the record
schema or the LaTeX layout:

    python3 scripts/regenerate_goldens.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from qbailey.cli import main  # noqa: E402

GOLDENS = Path(__file__).parent.parent / "goldens"


def run():
    GOLDENS.mkdir(exist_ok=True)
    for fmt, name in (("json", "catalog_level7_order80.json"),
                      ("latex", "catalog_level7_order80.tex")):
        rc = main(["catalog", "--max-level", "7", "--order", "80",
                   "--format", fmt, "--output", str(GOLDENS / name)])
        if rc != 0:
            raise SystemExit(f"catalog emission failed with exit code {rc}")
        print(f"wrote {GOLDENS / name}")


if __name__ == "__main__":
    run()
