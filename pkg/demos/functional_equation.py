"""F(x) = min (F(y) + x/(y+1)), its staircases and its asymptotics.

Run: python3 demos/functional_equation.py [--csv F.csv]
"""

import argparse
import math

import numpy as np

from qcsums import funceq as fe


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--csv", default=None, help="write the F table here")
    args = ap.parse_args()

    table = fe.build_F_table(1e5)
    print(f"table: {len(table.grid)} points on [0, 1e5]")
    if args.csv:
        table.to_csv(args.csv)

    for x in (2.0, 12.5, 2022.0):
        st = fe.optimal_staircase(x)
        chain = ", ".join(f"{t:.4f}" for t in st.chain)
        print(f"F({x:g}) = {st.value:.9f}  stages={st.n}  chain=({chain})  table={table(x):.9f}")

    print("\nresidual of F against e ln x - A (+ oscillating term)")
    for L in np.linspace(8, 11, 7):
        x = math.exp(L)
        r1, r0 = fe.F_residual(x), fe.F_residual(x, correction=False)
        print(f"  ln x={L:5.2f}: with {r1:+.5f}  without {r0:+.5f}")

    print("\nf(x) = min_n n x^(1/n)")
    for L in (2, 10.5, 30.5):
        val, n = fe.amgm_f(math.exp(L))
        print(f"  ln x={L}: f={val:.6f} at n={n}, residual {fe.amgm_f_residual(math.exp(L)):+.2e}")

    print("\nShallit: 3n - min g_n")
    for n in (1, 5, 10, 25):
        print(f"  n={n:2d}: C_n={fe.shallit_min(n)[1]:.10f}")

    print("\nvariable windows: brute force over k against F(n)")
    for n in (2, 3, 4):
        bf, k = fe.a_n_star_bruteforce(n)
        print(f"  n={n}: {bf:.9f} (k={k})  F(n)={fe.F_exact(n):.9f}")


if __name__ == "__main__":
    main()
