"""Convergence histories for a handful of standard test functions.

Writes one CSV per run (n, max_err, allowed) and prints a summary table.
"""
import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ratapprox import approximate, check, exterior, squircle, unit_circle, unit_interval
from ratapprox.cli import write_history_csv


@dataclass
class RunConfig:
    out: Path = Path("runs")
    methods: tuple = ("aaa", "thiele")
    max_iter: int = 150
    cases: dict = field(default_factory=lambda: {
        "log_branch": (lambda z: np.log(1 + 1j + 5j * z), unit_interval),
        "sqrt_near": (lambda z: np.sqrt(z + 1e-6j), unit_interval),
        "abs": (np.abs, unit_interval),
        "tan_circle": (lambda z: np.tan(2 * z), unit_circle),
        "coth_squircle": (lambda z: 1 / np.tanh(1 / z**3), exterior(squircle())),
    })


def main(cfg: RunConfig):
    cfg.out.mkdir(parents=True, exist_ok=True)
    print(f"{'case':<16}{'method':<8}{'type':<10}{'n':>5}{'check err':>12}{'sec':>8}")
    for name, (f, domain) in cfg.cases.items():
        for method in cfg.methods:
            t0 = time.perf_counter()
            a = approximate(f, domain, method=method, max_iter=cfg.max_iter)
            dt = time.perf_counter() - t0
            err = check(a)[2]
            m, n = a.degrees()
            print(f"{name:<16}{method:<8}{f'({m},{n})':<10}{len(a.history):>5}{err:>12.2e}{dt:>8.2f}")
            write_history_csv(cfg.out / f"{name}_{method}.csv", a.history)


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--out", type=Path, default=RunConfig.out)
    p.add_argument("--max-iter", type=int, default=RunConfig.max_iter)
    a = p.parse_args()
    main(RunConfig(out=a.out, max_iter=a.max_iter))
