"""Cyclic sums with power-mean denominators, and the sharp three-term bound.

Run: python3 demos/cyclic_sums.py
"""

import math

from qcsums import cyclic_bounds as cb


def main():
    print("inf over x of S_{n,k,p}(x)")
    for n, k in ((6, 2), (7, 3), (9, 4)):
        row = []
        for p in (-1, 0, 1, 2, math.inf):
            rep = cb.minimize_diananda(n, k, p, starts=16)
            row.append(f"p={p}: {rep.value:.6f} ({rep.status})")
        print(f"  n={n} k={k}  " + "; ".join(row))

    print("\nlower bounds for large n, per term")
    for k in (2, 3, 5, 10):
        print(f"  k={k}: {cb.diananda_lb(k):.6f}  with p=2: {cb.bkp_lower_bound(k, 2.0, cb.diananda_lb(k)):.6f}")
    print(f"  limit ln 2 = {math.log(2):.6f}")

    print("\na/(b+cx) + b/(c+ax) + c/(a+bx) against its bounds")
    for x in (0.5, 1.0, 2.0, 5.0):
        orig, sharp = cb.mavlo_bounds(x)
        print(f"  x={x}: 3x/(1+x^3)={orig:.6f}  3/(1+x)={sharp:.6f}  at a=b=c: {cb.mavlo_lhs(1, 1, 1, x):.6f}")
    run = cb.mavlo_property_run(20_000, seed=1)
    print(f"  random check: min slack {run['min_slack_sharp']:.3e}, identity residual {run['max_identity_residual']:.1e}")


if __name__ == "__main__":
    main()
