"""Run the CLI twice on every shipped space/suite pair and report whether outputs are byte-identical."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
PAIRS = [
    ("flat", "classical"),
    ("gaussian_soliton", "soliton"),
    ("euclidean_linear_f", "linear_rigidity"),
    ("euclidean_linear", "falsify_linear"),
    ("sphere_perturbed", "compact"),
    ("generated_f_bounded", "generated_b"),
]


def run(space, suite, fmt):
    cmd = [sys.executable, "-m", "bakryemery", "check", "--space", f"specs/spaces/{space}.yaml",
           "--suite", f"specs/suites/{suite}.yaml", "--format", fmt]
    return subprocess.run(cmd, capture_output=True, cwd=ROOT)


def main():
    bad = 0
    for space, suite in PAIRS:
        for fmt in ("csv", "json"):
            a, b = run(space, suite, fmt), run(space, suite, fmt)
            same = a.stdout == b.stdout
            bad += not same
            print(f"{space:22s} {suite:16s} {fmt:4s} exit={a.returncode} bytes={len(a.stdout):8d} "
                  f"{'identical' if same else 'DIFFERENT'}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
