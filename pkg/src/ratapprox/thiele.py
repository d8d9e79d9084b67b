"""Thiele continued-fraction interpolants built by inverse differences."""

from __future__ import annotations

import numpy as np

from .bary import Barycentric, aaa
from .rational import RationalInterpolant, as_complex

__all__ = ["Thiele", "ThieleBreakdown", "ThieleWorkspace", "next_weight", "add_nodes"]


class ThieleBreakdown(ArithmeticError):
    """An inverse difference divided by exactly zero: the node cannot be appended."""


def next_weight(nodes, weights, z_new: complex, f_new: complex) -> complex:
    """Continued-fraction coefficient for appending ``(z_new, f_new)``.

    Runs ``u = f_new; u = (z_new - z_k) / (u - d_k)`` over the existing nodes,
    which costs O(n).
    """
    u = complex(f_new)
    for zk, dk in zip(nodes, weights):
        diff = u - dk
        if diff == 0:
            raise ThieleBreakdown(f"inverse difference breaks down at node {zk}")
        u = (complex(z_new) - zk) / diff
    return u


class Thiele(RationalInterpolant):
    """r(z) = d_1 + (z - z_1) / (d_2 + (z - z_2) / (d_3 + ...))."""

    def __init__(self, nodes=(), values=(), weights=None):
        self.nodes = np.asarray(nodes, dtype=complex).ravel()
        self.values = np.asarray(values, dtype=complex).ravel()
        if weights is None:
            w = []
            for z, f in zip(self.nodes, self.values):
                w.append(next_weight(self.nodes[: len(w)], w, z, f))
            weights = w
        self.weights = np.asarray(weights, dtype=complex).ravel()
        if not (len(self.nodes) == len(self.values) == len(self.weights)):
            raise ValueError("nodes, values and weights must have equal lengths")
        self._bary = None

    def __call__(self, z):
        if self.isempty():
            raise ValueError("cannot evaluate an empty interpolant")
        z, scalar = as_complex(z)
        d, zk = self.weights, self.nodes
        acc = np.full(z.shape, d[-1], dtype=complex)
        inf = np.zeros(z.shape, dtype=bool)
        with np.errstate(divide="ignore", invalid="ignore"):
            for k in range(len(d) - 2, -1, -1):
                x = z - zk[k]
                zero = ~inf & (acc == 0) & (x != 0)
                safe = np.where(inf | zero, 1.0, acc)
                # x / inf contributes nothing; x / 0 sends the tail to infinity
                acc = np.where(inf, d[k], d[k] + x / safe)
                inf = zero
        r = np.where(inf, complex(np.inf, 0), acc)
        hit_i, hit_j = np.nonzero(z[:, None] == zk[None, :])
        r[hit_i] = self.values[hit_j]
        return complex(r[0]) if scalar else r

    def __repr__(self):
        m, n = self.degrees()
        return f"Thiele rational function of type ({m},{n})"

    def degrees(self):
        """Type of the interpolant as (m, m) for n = 2m - 1 nodes, (m + 1, m) for n = 2m."""
        n = len(self.nodes)
        if n == 0:
            return 0, 0
        if n % 2:
            m = (n + 1) // 2
            return m, m
        m = n // 2
        return m + 1, m

    def _exact_degrees(self):
        n = len(self.nodes)
        den = max(n - 1, 0) // 2
        return max(n - 1, 0) - den, den

    def _resample_points(self):
        """Points between nearby nodes, where the interpolant has been vetted."""
        z = self.nodes
        n = len(z)
        if n < 2:
            return z.copy()
        D = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(D, np.inf)
        order = np.argsort(D, axis=1)
        nn1 = z[order[:, 0]]
        cand = [z + 0.5 * (nn1 - z), z + 0.25 * (nn1 - z)]
        if n > 2:
            nn2 = z[order[:, 1]]
            cand.append(z + (nn2 - z) / 3.0)
        pts = np.unique(np.round(np.concatenate(cand), 15))
        gap = np.min(np.abs(pts[:, None] - z[None, :]), axis=1)
        return pts[gap > 1e-12 * max(1.0, float(np.max(np.abs(z))))]

    def to_barycentric(self) -> Barycentric:
        """Barycentric interpolant of the same type, fitted to samples of ``self``."""
        if self._bary is None:
            num, den = self._exact_degrees()
            t = self._resample_points()
            pts = np.concatenate([self.nodes, t])
            vals = np.concatenate([self.values, self(t)])
            keep = np.isfinite(vals)
            self._bary = aaa(pts[keep], vals[keep], tol=1e-13, max_nodes=max(num, den) + 1)
        return self._bary

    def poles(self):
        if len(self.nodes) < 3:
            return np.zeros(0, dtype=complex)
        return self.to_barycentric().poles()

    def residues(self):
        """Poles with residues from the trapezoid rule on small circles."""
        s = self.poles()
        res = np.array([self.res(p, self.default_radius(p, s)) for p in s], dtype=complex)
        return s, res

    def roots(self):
        if len(self.nodes) < 2:
            return np.zeros(0, dtype=complex)
        return self.to_barycentric().roots()


def add_nodes(r: Thiele, z_new, f_new) -> Thiele:
    """Append nodes to ``r``; existing weights are left untouched."""
    nodes, values, weights = list(r.nodes), list(r.values), list(r.weights)
    for z, f in zip(np.atleast_1d(z_new), np.atleast_1d(f_new)):
        if z in nodes:
            raise ValueError("duplicate node")
        weights.append(next_weight(nodes, weights, z, f))
        nodes.append(complex(z))
        values.append(complex(f))
    return Thiele(nodes, values, weights)


class ThieleWorkspace:
    """Per-test-point forward convergents so that appending a node updates
    every prediction in O(1) work per test point.

    For each slot it keeps the last two numerator/denominator convergents of
    the continued fraction, rescaled to avoid overflow.
    """

    def __init__(self, capacity: int = 64):
        cap = max(int(capacity), 1)
        self.t = np.zeros(cap, dtype=complex)
        self.f = np.zeros(cap, dtype=complex)
        self.active = np.zeros(cap, dtype=bool)
        self._P = np.zeros((cap, 2), dtype=complex)  # columns: current, previous
        self._Q = np.zeros((cap, 2), dtype=complex)
        self.nodes: list[complex] = []
        self.values: list[complex] = []
        self.weights: list[complex] = []
        self.factorizations = 0

    @property
    def n(self) -> int:
        return len(self.nodes)

    def _ensure(self, rows):
        cap = len(self.t)
        if rows <= cap:
            return
        new = cap
        while new < rows:
            new *= 2
        pad = new - cap
        self.t = np.concatenate([self.t, np.zeros(pad, dtype=complex)])
        self.f = np.concatenate([self.f, np.zeros(pad, dtype=complex)])
        self.active = np.concatenate([self.active, np.zeros(pad, dtype=bool)])
        self._P = np.vstack([self._P, np.zeros((pad, 2), dtype=complex)])
        self._Q = np.vstack([self._Q, np.zeros((pad, 2), dtype=complex)])

    @staticmethod
    def _step(P, Q, d, x):
        P = np.stack([d * P[:, 0] + x * P[:, 1], P[:, 0]], axis=1)
        Q = np.stack([d * Q[:, 0] + x * Q[:, 1], Q[:, 0]], axis=1)
        s = np.maximum(np.abs(P[:, 0]), np.abs(Q[:, 0]))
        s = np.where((s > 0) & np.isfinite(s), s, 1.0)[:, None]
        return P / s, Q / s

    def set_tests(self, slots, points, values):
        slots = np.asarray(slots, dtype=int).ravel()
        points = np.asarray(points, dtype=complex).ravel()
        if len(slots) == 0:
            return
        if np.any(points[:, None] == np.asarray(self.nodes, dtype=complex)[None, :]):
            raise ValueError("test point coincides with a node")
        self._ensure(int(slots.max()) + 1)
        self.t[slots] = points
        self.f[slots] = np.asarray(values, dtype=complex).ravel()
        self.active[slots] = True
        P = np.tile([1.0 + 0j, 0.0], (len(slots), 1))
        Q = np.tile([0.0 + 0j, 1.0], (len(slots), 1))
        for k, d in enumerate(self.weights):
            x = 1.0 if k == 0 else points - self.nodes[k - 1]
            P, Q = self._step(P, Q, d, x)
        self._P[slots], self._Q[slots] = P, Q

    def drop_tests(self, slots):
        self.active[np.asarray(slots, dtype=int)] = False

    def weight_for(self, z, y) -> complex:
        return next_weight(self.nodes, self.weights, z, y)

    def add_nodes(self, new_nodes, new_values, weights=None):
        z = np.atleast_1d(np.asarray(new_nodes, dtype=complex))
        y = np.atleast_1d(np.asarray(new_values, dtype=complex))
        act = np.flatnonzero(self.active)
        for i, (zi, yi) in enumerate(zip(z, y)):
            if zi in self.nodes or np.any(self.t[act] == zi):
                raise ValueError("duplicate node")
            d = self.weight_for(zi, yi) if weights is None else complex(np.atleast_1d(weights)[i])
            k = self.n
            x = 1.0 if k == 0 else self.t[act] - self.nodes[k - 1]
            self._P[act], self._Q[act] = self._step(self._P[act], self._Q[act], d, x)
            self.nodes.append(complex(zi))
            self.values.append(complex(yi))
            self.weights.append(d)

    def active_slots(self):
        return np.flatnonzero(self.active)

    def predict(self):
        act = self.active
        with np.errstate(divide="ignore", invalid="ignore"):
            r = self._P[act, 0] / self._Q[act, 0]
        return np.where(self._Q[act, 0] == 0, complex(np.inf, 0), r)

    def update_test_values(self, slots=(), points=(), values=()):
        self.set_tests(slots, points, values)
        return self.predict()

    def interpolant(self) -> Thiele:
        return Thiele(list(self.nodes), list(self.values), list(self.weights))
