"""Run every applicable checker on randomly generated spaces and print the worst margins.

    python3 scripts/generator_sweep.py --seeds 100
"""

import argparse

from bakryemery.sweeps import SweepConfig, generator_sweep


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--modes", nargs="+", default=["f_bounded", "f_slope", "N_tensor"])
    args = p.parse_args()

    res = generator_sweep(SweepConfig(seeds=range(args.seeds), modes=tuple(args.modes), grid_count=args.grid))
    print(f"{res.spaces} spaces, {res.reports} reports, {res.seconds:.1f}s")
    print(f"{'check':10s} {'sub':16s} {'min margin':>12s}")
    for (cid, sub), m in sorted(res.worst_sub.items()):
        print(f"{cid:10s} {sub:16s} {m:12.3e}")
    for n, (got, want) in sorted(res.ode_ratios.items()):
        print(f"ODE-bound/main RHS ratio, n={n}: {got:.6f} (closed form {want:.6f})")
    for f in res.failures:
        print("FAILED", f)
    print(f"overall min margin {res.min_margin:.3e}")


if __name__ == "__main__":
    main()
