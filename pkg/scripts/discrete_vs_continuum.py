"""A fixed grid hides a near-singularity that the adaptive boundary sampling finds."""
from dataclasses import dataclass

import numpy as np

from ratapprox import approximate, unit_interval


@dataclass
class Config:
    eps: float = 1e-6
    grid: int = 1001
    fine: int = 20001
    window: float = 1e-3


def main(cfg=Config()):
    f = lambda z: np.sqrt(z + 1j * cfg.eps)
    grid = np.linspace(-1, 1, cfg.grid)
    fine = np.linspace(-cfg.window, cfg.window, cfg.fine)
    with np.errstate(all="ignore"):
        d = approximate(f, grid)
    c = approximate(f, unit_interval)
    for label, r in (("discrete", d), ("continuum", c)):
        on_grid = np.max(np.abs(f(grid) - r(grid)))
        near = np.max(np.abs(f(fine) - r(fine)))
        print(f"{label:<10} type {r.degrees()}  grid err {on_grid:.2e}  near-origin err {near:.2e}")


if __name__ == "__main__":
    main()
