"""Min-sums and max-sums of small digraphs.

Run: python3 demos/graphic_sums.py
"""

from pathlib import Path

import numpy as np

from qcsums import graphic_p_sum, maxsum_infimum, maxsum_witness, minsum_exact, minsum_oracle, read_graph
from qcsums.digraph import girth

DATA = Path(__file__).parent / "data"


def main():
    star = read_graph(str(DATA / "mutual_star.txt"))
    rep = minsum_exact(star)
    print("x1/x3 + x2/x3 + x3/min(x1,x2)")
    print(f"  exact min-sum      {rep.value:.12f}  (2*sqrt(2) = {2 * np.sqrt(2):.12f})")
    print(f"  ranked blocks      {rep.certificate.partition.blocks}")
    print(f"  minimizer          {rep.minimizer_dict()}")
    print(f"  multistart oracle  {minsum_oracle(star):.8f}")

    six = read_graph(str(DATA / "six_vertex.txt"))
    print("\nsix-vertex max-sum")
    print(f"  girth {girth(six)}, infimum {maxsum_infimum(six)}")
    for eps in (1e-1, 1e-3, 1e-6):
        x = maxsum_witness(six, eps)
        print(f"  eps={eps:g}: witness value {graphic_p_sum(six, x, 'inf'):.9f}")
    print(f"  min-sum of the same graph {minsum_exact(six).value:.9f}")


if __name__ == "__main__":
    main()
