"""Barycentric rational interpolants and the Loewner least-squares machinery of AAA."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .rational import RationalInterpolant, as_complex

__all__ = [
    "Barycentric",
    "LoewnerWorkspace",
    "solve_weights",
    "linearized_residual",
    "aaa",
]


class Barycentric(RationalInterpolant):
    """r(z) = sum(w_j y_j / (z - z_j)) / sum(w_j / (z - z_j))."""

    def __init__(self, nodes, values, weights):
        self.nodes = np.asarray(nodes, dtype=complex).ravel()
        self.values = np.asarray(values, dtype=complex).ravel()
        self.weights = np.asarray(weights, dtype=complex).ravel()
        if not (len(self.nodes) == len(self.values) == len(self.weights)):
            raise ValueError("nodes, values and weights must have equal lengths")
        if len(self.nodes) and not np.any(self.weights != 0):
            raise ValueError("at least one weight must be nonzero")

    def __call__(self, z):
        if self.isempty():
            raise ValueError("cannot evaluate an empty interpolant")
        z, scalar = as_complex(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            C = 1.0 / (z[:, None] - self.nodes[None, :])
            r = (C @ (self.weights * self.values)) / (C @ self.weights)
        hit_i, hit_j = np.nonzero(z[:, None] == self.nodes[None, :])
        r[hit_i] = self.values[hit_j]
        return complex(r[0]) if scalar else r

    def __repr__(self):
        m, n = self.degrees()
        return f"Barycentric rational function of type ({m},{n})"

    def degrees(self):
        n = max(len(self.nodes) - 1, 0)
        return n, n

    # Cauchy sums -----------------------------------------------------------
    def _sums(self, s):
        with np.errstate(all="ignore"):
            C = 1.0 / (s[:, None] - self.nodes[None, :])
            num = C @ (self.weights * self.values)
            den = C @ self.weights
            dnum = -(C**2) @ (self.weights * self.values)
            dden = -(C**2) @ self.weights
        return num, den, dnum, dden

    def _pencil_eigs(self, first_row):
        z = self.nodes
        n = len(z)
        c = z.mean()
        scale = float(np.max(np.abs(z - c))) or 1.0
        row = first_row / np.max(np.abs(first_row))
        E = np.zeros((n + 1, n + 1), dtype=complex)
        E[0, 1:] = row
        E[1:, 0] = 1.0
        E[1:, 1:] = np.diag((z - c) / scale)
        B = np.eye(n + 1, dtype=complex)
        B[0, 0] = 0.0
        ab = scipy.linalg.eig(E, B, left=False, right=False, homogeneous_eigvals=True)
        alpha, beta = ab[0], ab[1]
        norm = max(np.linalg.norm(E), np.linalg.norm(B))
        finite = np.abs(beta) > 1e-13 * norm
        lam = alpha[finite] / beta[finite]
        return c + scale * lam

    def _polish(self, s, which):
        """One Newton step on the denominator (``which=1``) or numerator (``0``),
        kept only when it reduces the residual."""
        if len(s) == 0:
            return s
        num, den, dnum, dden = self._sums(s)
        g, dg = (den, dden) if which else (num, dnum)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = s - g / dg
        ok = np.isfinite(t)
        t = np.where(ok, t, s)
        num2, den2, _, _ = self._sums(t)
        g2 = den2 if which else num2
        better = np.abs(g2) < np.abs(g)
        return np.where(better, t, s)

    def poles(self):
        if len(self.nodes) < 2:
            return np.zeros(0, dtype=complex)
        s = self._pencil_eigs(self.weights)
        s = self._polish(s, 1)
        return self._drop_at_nodes(s)

    def _drop_at_nodes(self, s):
        if len(s) == 0:
            return s
        scale = max(float(np.max(np.abs(self.nodes))), 1.0)
        gap = np.min(np.abs(s[:, None] - self.nodes[None, :]), axis=1)
        near = gap <= 1e-13 * scale
        if not np.any(near):
            return s
        ymax = max(float(np.max(np.abs(self.values))), 1e-300)
        res = self._residues_at(s[near])
        spurious = np.zeros(len(s), dtype=bool)
        spurious[np.flatnonzero(near)] = ~(np.abs(res) > 1e-13 * ymax * scale)
        return s[~spurious]

    def _residues_at(self, s):
        with np.errstate(divide="ignore", invalid="ignore"):
            num, den, dnum, dden = self._sums(s)
            return num / dden

    def residues(self):
        """``(poles, residues)``; residue = N(s)/D'(s) for the barycentric sums N and D.
        A (near-)double pole makes D' vanish and yields a non-finite entry."""
        s = self.poles()
        return s, self._residues_at(s)

    def roots(self):
        if len(self.nodes) < 2 or not np.any(self.values != 0):
            return np.zeros(0, dtype=complex)
        s = self._pencil_eigs(self.weights * self.values)
        return self._polish(s, 0)


def solve_weights(L: np.ndarray) -> np.ndarray:
    """Unit right singular vector of ``L`` for its smallest singular value."""
    L = np.asarray(L, dtype=complex)
    m, n = L.shape
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.ones(1, dtype=complex)
    _, _, Vh = np.linalg.svd(L, full_matrices=m < n)
    return Vh[-1].conj()


class LoewnerWorkspace:
    """Cached Cauchy and Loewner matrices between test points and nodes.

    Test points live in integer *slots* so that callers can replace or drop
    individual test points; only active slots enter the least-squares problem.
    Row ``i`` of the Loewner matrix is ``-(f(t_i) - y_j) / (t_i - z_j)``.
    """

    def __init__(self, capacity: int = 64):
        cap = max(int(capacity), 1)
        self.t = np.zeros(cap, dtype=complex)
        self.f = np.zeros(cap, dtype=complex)
        self.active = np.zeros(cap, dtype=bool)
        self.nodes = np.zeros(0, dtype=complex)
        self.values = np.zeros(0, dtype=complex)
        self._C = np.zeros((cap, 8), dtype=complex)
        self._L = np.zeros((cap, 8), dtype=complex)
        self.weights = np.zeros(0, dtype=complex)
        self.factorizations = 0

    @property
    def n(self) -> int:
        return len(self.nodes)

    def _ensure(self, rows: int, cols: int):
        r0, c0 = self._C.shape
        if rows <= r0 and cols <= c0:
            return
        r1, c1 = max(r0, 1), max(c0, 1)
        while r1 < rows:
            r1 *= 2
        while c1 < cols:
            c1 *= 2
        for name in ("_C", "_L"):
            M = np.zeros((r1, c1), dtype=complex)
            M[:r0, :c0] = getattr(self, name)
            setattr(self, name, M)
        if r1 > len(self.t):
            pad = r1 - len(self.t)
            self.t = np.concatenate([self.t, np.zeros(pad, dtype=complex)])
            self.f = np.concatenate([self.f, np.zeros(pad, dtype=complex)])
            self.active = np.concatenate([self.active, np.zeros(pad, dtype=bool)])

    def set_tests(self, slots, points, values):
        slots = np.asarray(slots, dtype=int).ravel()
        points = np.asarray(points, dtype=complex).ravel()
        values = np.asarray(values, dtype=complex).ravel()
        if len(slots) == 0:
            return
        if np.any(points[:, None] == self.nodes[None, :]):
            raise ValueError("test point coincides with a node")
        self._ensure(int(slots.max()) + 1, self.n)
        self.t[slots] = points
        self.f[slots] = values
        self.active[slots] = True
        n = self.n
        if n:
            C = 1.0 / (points[:, None] - self.nodes[None, :])
            self._C[slots, :n] = C
            self._L[slots, :n] = -(values[:, None] - self.values[None, :]) * C

    def drop_tests(self, slots):
        self.active[np.asarray(slots, dtype=int)] = False

    def add_nodes(self, new_nodes, new_values):
        z = np.atleast_1d(np.asarray(new_nodes, dtype=complex))
        y = np.atleast_1d(np.asarray(new_values, dtype=complex))
        if len(z) != len(y):
            raise ValueError("nodes and values must have equal lengths")
        allz = np.concatenate([self.nodes, z])
        if len(np.unique(allz)) != len(allz):
            raise ValueError("duplicate node")
        act = np.flatnonzero(self.active)
        if np.any(self.t[act][:, None] == z[None, :]):
            raise ValueError("new node coincides with an active test point")
        n0 = self.n
        self._ensure(len(self.t), n0 + len(z))
        self.nodes, self.values = allz, np.concatenate([self.values, y])
        # inactive rows go stale; set_tests rebuilds a row when its slot is reused
        rows = np.flatnonzero(self.active)
        C = 1.0 / (self.t[rows, None] - z[None, :])
        self._C[rows, n0 : self.n] = C
        self._L[rows, n0 : self.n] = -(self.f[rows, None] - y[None, :]) * C
        self.weights = np.concatenate([self.weights, np.zeros(len(z), dtype=complex)])

    def active_slots(self) -> np.ndarray:
        return np.flatnonzero(self.active)

    def loewner(self) -> np.ndarray:
        return self._L[self.active, : self.n]

    def cauchy(self) -> np.ndarray:
        return self._C[self.active, : self.n]

    def solve(self, row_weights=None) -> np.ndarray:
        L = self.loewner()
        if row_weights is not None:
            L = np.sqrt(np.asarray(row_weights, dtype=float))[:, None] * L
        self.factorizations += 1
        self.weights = solve_weights(L)
        return self.weights

    def predict(self, w=None) -> np.ndarray:
        """Interpolant values at the active test points for weights ``w``."""
        w = self.weights if w is None else w
        C = self.cauchy()
        with np.errstate(divide="ignore", invalid="ignore"):
            return (C @ (w * self.values)) / (C @ w)

    def update_test_values(self, slots=(), points=(), values=()) -> np.ndarray:
        """Add test points, re-solve the weights, and return the predicted
        values at every active test point."""
        self.set_tests(slots, points, values)
        self.solve()
        return self.predict()

    def interpolant(self) -> Barycentric:
        return Barycentric(self.nodes.copy(), self.values.copy(), self.weights.copy())


def linearized_residual(ws: LoewnerWorkspace, w) -> np.ndarray:
    return ws.loewner() @ np.asarray(w, dtype=complex)


def aaa(points, values, tol: float = 1e-13, max_nodes: int | None = None) -> Barycentric:
    """Plain discrete AAA on tabulated data (no pole screening)."""
    z = np.asarray(points, dtype=complex).ravel()
    y = np.asarray(values, dtype=complex).ravel()
    if max_nodes is None:
        max_nodes = len(z) // 2
    max_nodes = max(1, min(max_nodes, len(z)))
    ws = LoewnerWorkspace(len(z))
    slots = np.arange(len(z))
    ws.set_tests(slots, z, y)
    fmax = float(np.max(np.abs(y))) if len(y) else 0.0
    k = int(np.argmax(np.abs(y - y.mean())))
    while True:
        ws.drop_tests([k])
        ws.add_nodes([z[k]], [y[k]])
        ws.solve()
        act = ws.active_slots()
        if len(act) == 0:
            break
        err = np.abs(y[act] - ws.predict())
        if ws.n >= max_nodes or err.max() <= tol * fmax:
            break
        k = int(act[np.argmax(err)])
    return ws.interpolant()
