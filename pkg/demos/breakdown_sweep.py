"""How the quantum-classical breakdown time moves with hbar.

A packet of fixed width is released on the hilltop of a double well and
evolved twice: with the Moyal term (quantum) and without it (classical).
The breakdown time is when the L1 distance between the two first exceeds
0.1. The logarithmic estimate predicts t_break = lambda^-1 ln(1/hbar) +
const; this script runs the same `compare --hbar-sweep` the CLI offers and
prints the fitted slope. Expect about a minute on one core.

    python demos/breakdown_sweep.py [--runs 4] [--factor 2]
"""

import argparse
import json
import tempfile
from pathlib import Path

from decoherence_lab.cli import main as cli

SCENARIO = Path(__file__).with_name("scenarios") / "double_well_sweep.yaml"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--runs", type=int, default=4)
    parser.add_argument("--factor", type=float, default=2.0)
    args = parser.parse_args()
    with tempfile.TemporaryDirectory() as out:
        cli(["compare", "--scenario", str(SCENARIO), "--hbar-sweep", str(args.runs),
             "--sweep-factor", str(args.factor), "--out", out, "--json"])
        sweep = json.loads((Path(out) / "manifest.json").read_text())["results"]["sweep"]
    print("\nhbar       t_break")
    for h, t in zip(sweep["hbars"], sweep["breakdown_times"]):
        print(f"{h:<10.4g} {t if t is None else round(t, 4)}")
    print(f"slope dt/dln(1/hbar) = {sweep['slope']:.3f}, lambda^-1 = "
          f"{1 / sweep['reference_rate']:.3f}")


if __name__ == "__main__":
    main()
