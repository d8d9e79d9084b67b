"""Interface shared by all rational-function representations."""

from __future__ import annotations

import numpy as np


class ResidueConvergenceError(RuntimeError):
    """Trapezoid-rule residue estimates did not settle; ``estimate`` holds the last one."""

    def __init__(self, msg, estimate):
        super().__init__(msg)
        self.estimate = estimate


def trapezoid_residue(r, s: complex, radius: float, rtol: float = 1e-10, max_points: int = 1024) -> complex:
    """Residue of ``r`` at ``s`` as (1/2 pi i) times the contour integral over
    the circle ``|z - s| = radius``, by the trapezoid rule.

    The point count doubles from 16 until two successive estimates agree to
    ``rtol`` (relative to the estimate or to the size of ``r * radius`` on the
    circle, whichever is larger).
    """
    s = complex(s)
    prev = None
    n = 16
    while True:
        u = np.exp(2j * np.pi * np.arange(n) / n)
        vals = np.asarray(r(s + radius * u), dtype=complex)
        est = complex(radius * np.mean(vals * u))
        if prev is not None:
            scale = max(abs(est), radius * float(np.mean(np.abs(vals))))
            if abs(est - prev) <= rtol * scale:
                return est
        if n >= max_points:
            raise ResidueConvergenceError(f"residue at {s} did not converge with {n} points", est)
        prev = est
        n *= 2


class RationalFunction:
    """Common behaviour for rational functions: evaluation, degrees, poles,
    residues, roots, and a trapezoid-rule residue."""

    def __call__(self, z):
        raise NotImplementedError

    def degrees(self) -> tuple[int, int]:
        raise NotImplementedError

    def degree(self) -> int:
        return self.degrees()[1]

    def poles(self) -> np.ndarray:
        raise NotImplementedError

    def residues(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def roots(self) -> np.ndarray:
        raise NotImplementedError

    def isempty(self) -> bool:
        return False

    def _landmarks(self) -> np.ndarray:
        """Points whose distance limits a default residue contour radius."""
        return np.zeros(0, dtype=complex)

    def _diameter(self) -> float:
        pts = self._landmarks()
        if len(pts) < 2:
            return 1.0
        return float(np.max(np.abs(pts[:, None] - pts[None, :])))

    def default_radius(self, s: complex, others=()) -> float:
        """Half the distance from ``s`` to the nearest other pole or node,
        capped at a tenth of the node set's diameter."""
        pts = np.concatenate([np.asarray(others, dtype=complex), self._landmarks()])
        d = np.abs(pts - s)
        d = d[d > 0]
        cap = 0.1 * self._diameter()
        return min(0.5 * float(d.min()), cap) if len(d) else cap

    def res(self, s: complex, radius: float | None = None) -> complex:
        if radius is None:
            radius = self.default_radius(s, self.poles())
        return trapezoid_residue(self, s, radius)


class RationalInterpolant(RationalFunction):
    """A rational function defined by nodes and the values it takes there."""

    nodes: np.ndarray
    values: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def isempty(self):
        return len(self.nodes) == 0

    def _landmarks(self):
        return np.asarray(self.nodes, dtype=complex)


def as_complex(z):
    """``(array, scalar_flag)`` for vectorized evaluation helpers."""
    scalar = np.ndim(z) == 0
    return np.atleast_1d(np.asarray(z, dtype=complex)), scalar
