"""Regenerate the annotated listings shipped next to the corpus programs."""

import sys
from pathlib import Path

from qhtt.cli import main

CORPUS = Path(__file__).resolve().parents[1] / "src" / "qhtt" / "corpus"
GOLDEN = ["bell00", "teleport", "teleport2", "deutsch", "cointoss", "parity"]

if __name__ == "__main__":
    for name in GOLDEN:
        out = CORPUS / f"{name}.annotated"
        code = main(["annotate", str(CORPUS / f"{name}.qh"), "-o", str(out)])
        print(f"{out.name}: exit {code}")
        if code:
            sys.exit(code)
