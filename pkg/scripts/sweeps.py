"""Run the theorem sweeps and pencil survey at the reference sizes."""

import argparse
import sys

from quarticlab.cli import run

REFERENCE = [
    ("thm1", "127", 300),
    ("thm2", "4357", 20),
    ("chebotarev", "127", 100),
    ("flexprob", "1009", 1000),
    ("flexprob", "3:4", 2000),
]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default=".")
    args = ap.parse_args()
    worst = 0
    for cmd, field, n in REFERENCE:
        out = f"{args.outdir}/{cmd}_{field.replace(':', '_')}.csv"
        code = run([cmd, "--field", field, "--samples", str(n), "--seed", str(args.seed),
                    "--workers", str(args.workers), "--csv", "--out", out])
        print(f"{cmd} {field} samples={n} exit={code} -> {out}")
        worst = max(worst, code)
    sys.exit(worst)
