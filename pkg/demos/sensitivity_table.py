"""Closed-form sensitivity table and the state hierarchy.

Prints 𝔊, 4V(Jz) and the maximal 𝔉 for every family at a chosen (n_a, n_b),
then checks the ordering of the families at equal photon numbers.
"""

import argparse

from mzi_sensitivity import hierarchy_check
from mzi_sensitivity.qfi import table1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--na", type=float, default=10.0)
    ap.add_argument("--nb", type=float, default=10.0)
    args = ap.parse_args()

    print(f"n_a = {args.na:g}, n_b = {args.nb:g}")
    print(f"{'state':<10} {'frak_G':>12} {'4V(Jz)':>12} {'frak_F':>12}  tau_opt  theta_opt")
    for r in table1(args.na, args.nb):
        g = "-" if r.frak_g is None else f"{r.frak_g:12.4f}"
        theta = "any" if r.theta_opt.is_any else f"{r.theta_opt.angle:.4f}"
        print(f"{r.family.value:<10} {g:>12} {r.four_var_jz:12.4f} {r.frak_f:12.4f}"
              f"  {r.tau_opt.value:<7}  {theta}")

    print("\nordering at n_a = n_b = n (smallest frak_F first)")
    for n in (1.0, 2.0, 10.0):
        res = hierarchy_check(n)
        chain = " <= ".join(f"{f.value}={v:.4g}" for f, v in res.values)
        print(f"n = {n:g}: holds={res.holds}  {chain}")


if __name__ == "__main__":
    main()
