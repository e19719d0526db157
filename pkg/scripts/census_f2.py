"""Classify the smooth pointless quartics over F_2 and write the census as JSONL."""

import sys

from quarticlab.cli import run

if __name__ == "__main__":
    sys.exit(run(["census-f2"] + sys.argv[1:]))
