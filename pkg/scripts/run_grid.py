"""Run the identity suite and the orthogonality checks over a grid and write reports.

    python scripts/run_grid.py [--config configs/acceptance_grid.json] [--outdir results]
"""

import argparse
import sys
from pathlib import Path

from eopladder.cli import main


def run(config: str | None, outdir: Path, jobs: int) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    base = ["--jobs", str(jobs)] + (["--config", config] if config else [])
    v = main(["verify", *base, "--out", str(outdir / "verify.json")])
    o = main(["ortho", *base, "--out", str(outdir / "ortho.json"), "--csv", str(outdir / "gram.csv")])
    print(f"verify exit {v}, ortho exit {o}; reports in {outdir}")
    return max(v, o)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", default=None)
    p.add_argument("--outdir", type=Path, default=Path("results"))
    p.add_argument("--jobs", type=int, default=4)
    a = p.parse_args()
    sys.exit(run(a.config, a.outdir, a.jobs))
