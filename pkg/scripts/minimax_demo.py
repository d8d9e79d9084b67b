"""Lawson refinement of a greedy fit: max error vs median before and after."""
import argparse

import numpy as np

from ratapprox import approximate, check, minimax, unit_interval


def ratio(a, z, fz):
    e = np.abs(fz - a(z))
    return np.max(e), np.max(e) / np.median(e)


def main(iterations, max_iter):
    f = lambda z: np.abs(z - 0.5 + 0.05j)
    a = approximate(f, unit_interval, max_iter=max_iter)
    b = minimax(a, iterations)
    t, ft = a.test_points()
    zc = check(a)[0]
    for label, r in (("greedy", a), ("lawson", b)):
        m, q = ratio(r, t, ft)
        mc, qc = ratio(r, zc, f(zc))
        print(f"{label:<7} test max {m:.3e} max/median {q:8.2f} | check max {mc:.3e} max/median {qc:8.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--max-iter", type=int, default=20)
    a = p.parse_args()
    main(a.iterations, a.max_iter)
