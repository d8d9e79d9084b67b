"""Poles found for one function on a domain, reused as a fixed basis for another."""
import numpy as np

from ratapprox import approximate, unit_interval


def main(degree=20):
    a = approximate(lambda z: np.log(1 + 1j + 5j * z), unit_interval)
    print(f"log fit type {a.degrees()}, {len(a.poles())} poles")
    g = lambda z: np.sqrt(1 + 1j + 5j * z)
    for d in (5, 10, degree):
        b = approximate(g, unit_interval, a.poles(), degree=d)
        z = np.linspace(-1, 1, 10001)
        print(f"sqrt with reused poles, polynomial degree {d:>2}: max err {np.max(np.abs(b(z) - g(z))):.2e}")


if __name__ == "__main__":
    main()
