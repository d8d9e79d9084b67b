"""Curves, paths and regions in the complex plane, and adaptive boundary discretization.

Every curve is parameterized over ``t in [0, 1]``. A :class:`Path` joins pieces
with arc-length-proportional parameter ranges. :class:`DiscretizedPath` keeps
the node/test-point bookkeeping used by the continuum greedy iterations.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "DuplicatePointError",
    "Curve",
    "Segment",
    "Circle",
    "Arc",
    "ParametricCurve",
    "Path",
    "Region",
    "DiscretizedPath",
    "polygon",
    "squircle",
    "interior",
    "exterior",
    "point",
    "discretize",
    "add_node",
    "collect",
    "dist_to_boundary",
    "contains",
    "unit_interval",
    "unit_circle",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class DomainError(ValueError):
    """A parameter outside [0, 1] or a malformed domain."""


class DuplicatePointError(ValueError):
    """A promotion would place two discretization points on top of each other."""


def _check_param(t):
    t = np.asarray(t, dtype=float)
    if not np.all((t >= 0.0) & (t <= 1.0)):
        raise DomainError("curve parameter must lie in [0, 1]")
    return t


def _scalar_or_array(t, z):
    if np.ndim(t) == 0:
        return complex(z)
    return z


class Curve:
    """Base class for a parameterized curve ``t -> point(t)``, ``t`` in [0, 1]."""

    closed = False

    def _point(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def point(self, t):
        t = _check_param(t)
        return _scalar_or_array(t, self._point(np.atleast_1d(t)).reshape(t.shape))

    def __call__(self, t):
        return self.point(t)

    def length(self) -> float:
        t = np.linspace(0.0, 1.0, 2049)
        return float(np.sum(np.abs(np.diff(self._point(t)))))

    @property
    def diameter(self) -> float:
        z = self._point(np.linspace(0.0, 1.0, 513))
        return float(np.max(np.abs(z[:, None] - z[None, :])))

    def dist(self, z) -> float:
        return _sampled_distance(self._point, complex(z))

    def _polyline(self, n: int = 2048) -> np.ndarray:
        return self._point(np.linspace(0.0, 1.0, n + 1))


class Segment(Curve):
    def __init__(self, a, b):
        self.a = complex(a)
        self.b = complex(b)
        if self.a == self.b:
            raise DomainError("degenerate segment")

    def _point(self, t):
        return self.a + t * (self.b - self.a)

    def length(self):
        return abs(self.b - self.a)

    @property
    def diameter(self):
        return abs(self.b - self.a)

    def dist(self, z):
        z = complex(z)
        d = self.b - self.a
        s = ((z - self.a) * d.conjugate()).real / abs(d) ** 2
        s = min(max(s, 0.0), 1.0)
        return abs(z - (self.a + s * d))

    def _polyline(self, n=1):
        return np.array([self.a, self.b])

    def __repr__(self):
        return f"Segment({self.a}, {self.b})"


class Circle(Curve):
    closed = True

    def __init__(self, center=0.0, radius=1.0, ccw: bool = True):
        self.center = complex(center)
        self.radius = float(radius)
        if not self.radius > 0:
            raise DomainError("circle radius must be positive")
        self.ccw = ccw

    def _point(self, t):
        s = 1.0 if self.ccw else -1.0
        return self.center + self.radius * np.exp(2j * np.pi * s * t)

    def point(self, t):
        t = _check_param(t)
        z = np.atleast_1d(self._point(np.atleast_1d(t)))
        # snap the quarter turns so that e.g. point(0.25) is exactly i*r
        q = np.atleast_1d(t) * 4.0
        exact = q == np.round(q)
        if np.any(exact):
            s = 1 if self.ccw else -1
            k = (s * np.round(q[exact]).astype(int)) % 4
            z[exact] = self.center + self.radius * np.array([1, 1j, -1, -1j])[k]
        return _scalar_or_array(t, z.reshape(t.shape))

    def length(self):
        return 2 * math.pi * self.radius

    @property
    def diameter(self):
        return 2 * self.radius

    def dist(self, z):
        return abs(abs(complex(z) - self.center) - self.radius)

    def __repr__(self):
        return f"Circle({self.center}, {self.radius})"


class Arc(Curve):
    """Circular arc from angle ``start`` to ``stop`` (radians) about ``center``."""

    def __init__(self, center, radius, start: float, stop: float):
        self.center = complex(center)
        self.radius = float(radius)
        self.start = float(start)
        self.stop = float(stop)
        if not self.radius > 0 or self.start == self.stop:
            raise DomainError("degenerate arc")

    def _point(self, t):
        return self.center + self.radius * np.exp(1j * (self.start + t * (self.stop - self.start)))

    def length(self):
        return self.radius * abs(self.stop - self.start)

    def dist(self, z):
        z = complex(z)
        w = z - self.center
        if w != 0:
            sweep = self.stop - self.start
            s = ((np.angle(w) - self.start) * np.sign(sweep)) % (2 * np.pi)
            if s <= abs(sweep):
                return abs(abs(w) - self.radius)
        ends = self._point(np.array([0.0, 1.0]))
        return float(np.min(np.abs(ends - z)))


class ParametricCurve(Curve):
    """Curve given by a vectorized map ``func: [0, 1] -> C``."""

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], closed: bool = False, name: str = "curve"):
        self.func = func
        self.closed = closed
        self.name = name

    def _point(self, t):
        return np.asarray(self.func(t), dtype=complex)

    def __repr__(self):
        return f"ParametricCurve({self.name})"


def _sampled_distance(fun, z: complex, n: int = 256) -> float:
    """Distance from ``z`` to the image of ``fun`` on [0, 1]: dense sampling,
    then golden-section refinement in the bracket around the best sample."""
    t = np.linspace(0.0, 1.0, n + 1)
    d = np.abs(fun(t) - z)
    k = int(np.argmin(d))
    lo, hi = t[max(k - 1, 0)], t[min(k + 1, n)]
    g = lambda s: float(abs(fun(np.array([s]))[0] - z))
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    e = a + _GOLDEN * (b - a)
    gc, ge = g(c), g(e)
    for _ in range(60):
        if gc < ge:
            b, e, ge = e, c, gc
            c = b - _GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, e, ge
            e = a + _GOLDEN * (b - a)
            ge = g(e)
        if b - a < 1e-15:
            break
    return min(float(d[k]), gc, ge, g(lo), g(hi))


class Path(Curve):
    """Chain of curves joined end to end; parameter ranges are proportional to arc length."""

    def __init__(self, pieces: Sequence[Curve], closed: bool | None = None):
        pieces = list(pieces)
        if not pieces:
            raise DomainError("empty path")
        scale = max(1.0, max(p.diameter for p in pieces))
        for p, q in zip(pieces[:-1], pieces[1:]):
            if abs(p.point(1.0) - q.point(0.0)) > 1e-12 * scale:
                raise DomainError("consecutive path pieces do not share endpoints")
        gap = abs(pieces[-1].point(1.0) - pieces[0].point(0.0))
        if closed is None:
            closed = gap <= 1e-12 * scale
        elif closed and gap > 1e-12 * scale:
            raise DomainError("path is not closed")
        self.pieces = pieces
        self.closed = bool(closed)
        lengths = np.array([p.length() for p in pieces])
        self.breaks = np.concatenate([[0.0], np.cumsum(lengths) / lengths.sum()])
        self.breaks[-1] = 1.0

    def _point(self, t):
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(self.breaks, t, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty(t.shape, dtype=complex)
        for j, piece in enumerate(self.pieces):
            sel = k == j
            if np.any(sel):
                lo, hi = self.breaks[j], self.breaks[j + 1]
                s = np.clip((t[sel] - lo) / (hi - lo), 0.0, 1.0)
                out[sel] = piece._point(s)
        return out

    def length(self):
        return float(sum(p.length() for p in self.pieces))

    def dist(self, z):
        return min(p.dist(z) for p in self.pieces)

    def _polyline(self, n=2048):
        parts = [self.pieces[0]._polyline(n)[:1]]
        for p in self.pieces:
            parts.append(p._polyline(n)[1:])
        return np.concatenate(parts)

    def __repr__(self):
        return f"Path({len(self.pieces)} pieces, closed={self.closed})"


def polygon(vertices) -> Path:
    v = [complex(x) for x in vertices]
    if len(v) < 3:
        raise DomainError("polygon needs at least 3 vertices")
    return Path([Segment(a, b) for a, b in zip(v, v[1:] + v[:1])], closed=True)


def squircle() -> ParametricCurve:
    """The closed curve x^4 + y^4 = 1."""

    def f(t):
        th = 2 * np.pi * np.asarray(t)
        c, s = np.cos(th), np.sin(th)
        return np.sign(c) * np.sqrt(np.abs(c)) + 1j * np.sign(s) * np.sqrt(np.abs(s))

    return ParametricCurve(f, closed=True, name="squircle")


class Region:
    """Interior or exterior of a closed curve or path."""

    def __init__(self, boundary: Curve, side: str = "interior"):
        if not boundary.closed:
            raise DomainError("region boundary must be closed")
        if side not in ("interior", "exterior"):
            raise DomainError(f"unknown region side {side!r}")
        self.boundary = boundary
        self.side = side
        self._poly = None

    @property
    def diameter(self):
        return self.boundary.diameter

    def winding(self, z) -> int:
        z = complex(z)
        b = self.boundary
        if isinstance(b, Circle):
            return int(abs(z - b.center) < b.radius)
        if self._poly is None:
            self._poly = b._polyline(4096)
        w = self._poly - z
        turn = np.angle(w[1:] / w[:-1]).sum() / (2 * np.pi)
        return int(round(abs(turn)))

    def contains(self, z) -> bool:
        if self.boundary.dist(z) <= 1e-13 * self.diameter:
            return True
        inside = self.winding(z) != 0
        return inside if self.side == "interior" else not inside

    def __repr__(self):
        return f"Region({self.side} of {self.boundary!r})"


def interior(curve: Curve) -> Region:
    return Region(curve, "interior")


def exterior(curve: Curve) -> Region:
    return Region(curve, "exterior")


unit_interval = Segment(-1, 1)
unit_circle = Circle(0, 1)


def point(c: Curve, t):
    return c.point(t)


def dist_to_boundary(p, z) -> float:
    if isinstance(p, Region):
        p = p.boundary
    return p.dist(z)


def contains(r: Region, z) -> bool:
    return r.contains(z)


class DiscretizedPath:
    """Nodes and test points along a curve, stored by parameter value.

    Row ``k`` of :attr:`params` holds a node parameter in column 0 and the
    ``refinement`` test parameters of the interval to its right in columns
    ``1..refinement``. Rows are kept in insertion order so that row indices
    (and hence test-point slots ``row * refinement + col - 1``) are stable;
    :attr:`right` holds the right end of each row's interval (NaN when the
    node closes an open path and has no interval).
    """

    def __init__(self, path: Curve, node_params, refinement: int = 3, capacity: int = 2**20):
        if refinement < 1:
            raise DomainError("refinement must be at least 1")
        node_params = np.sort(np.asarray(node_params, dtype=float))
        _check_param(node_params)
        self.path = path
        self.refinement = int(refinement)
        self.capacity = int(capacity)
        n = len(node_params)
        rows = max(16, 2 * n)
        self.params = np.full((rows, self.refinement + 1), np.nan)
        self.right = np.full(rows, np.nan)
        self.nrows = n
        self.params[:n, 0] = node_params
        ends = np.append(node_params[1:], 1.0 if path.closed else np.nan)
        self.right[:n] = ends
        for k in range(n):
            self._fill(k)
        self._scale = max(path.diameter, 1e-300)

    # storage helpers -----------------------------------------------------
    def _grow(self):
        rows = self.params.shape[0]
        if (rows * (self.refinement + 1)) >= self.capacity:
            raise DomainError("discretization capacity exceeded")
        extra = np.full((rows, self.refinement + 1), np.nan)
        self.params = np.vstack([self.params, extra])
        self.right = np.concatenate([self.right, np.full(rows, np.nan)])

    def _test_params(self, a: float, b: float) -> np.ndarray:
        j = np.arange(1, self.refinement + 1)
        return a + (b - a) * j / (self.refinement + 1)

    def _fill(self, k: int):
        a, b = self.params[k, 0], self.right[k]
        self.params[k, 1:] = np.nan if np.isnan(b) else self._test_params(a, b)

    # public API ------------------------------------------------------------
    @property
    def num_nodes(self) -> int:
        return self.nrows

    @property
    def num_tests(self) -> int:
        return int(np.count_nonzero(~np.isnan(self.params[: self.nrows, 1:])))

    def slots(self, rows) -> np.ndarray:
        """Flat test-point slot indices of the given rows."""
        rows = np.atleast_1d(np.asarray(rows, dtype=int))
        s = self.refinement
        return (rows[:, None] * s + np.arange(s)[None, :]).ravel()

    def slot_params(self, slots) -> np.ndarray:
        slots = np.asarray(slots, dtype=int)
        return self.params[slots // self.refinement, 1 + slots % self.refinement]

    def active_slots(self) -> np.ndarray:
        s = self.slots(np.arange(self.nrows))
        return s[~np.isnan(self.slot_params(s))]

    def add_node(self, row: int, col: int):
        """Promote the test point at ``params[row, col]`` to a node.

        Its interval is split in two and both halves get ``refinement`` fresh
        equally spaced test parameters (replacing the old ones of that
        interval). Returns ``(new_node_point, (row, new_row))``.
        """
        if not (0 <= row < self.nrows) or not (1 <= col <= self.refinement):
            raise IndexError("not a test point index")
        tau = self.params[row, col]
        if np.isnan(tau):
            raise IndexError("not a test point index")
        a, b = self.params[row, 0], self.right[row]
        left, right = self._test_params(a, tau), self._test_params(tau, b)
        chain = np.concatenate([[a], left, [tau], right, [b]])
        if np.any(np.diff(chain) <= 0):
            raise DuplicatePointError("parameter spacing underflow")
        z = self.path._point(chain)
        if np.min(np.abs(np.diff(z))) <= 1e-14 * self._scale:
            raise DuplicatePointError("promotion would create coincident points")
        if self.nrows >= self.params.shape[0]:
            self._grow()
        new = self.nrows
        self.nrows += 1
        self.params[new, 0] = tau
        self.right[new] = b
        self.right[row] = tau
        self._fill(row)
        self._fill(new)
        return complex(z[self.refinement + 1]), (row, new)

    def params_of(self, which: str = "all") -> np.ndarray:
        nodes = self.params[: self.nrows, 0]
        tests = self.params[: self.nrows, 1:].ravel()
        tests = tests[~np.isnan(tests)]
        if which == "nodes":
            return np.sort(nodes)
        if which == "test":
            return np.sort(tests)
        if which == "all":
            return np.unique(np.concatenate([nodes, tests]))
        raise ValueError(f"unknown selection {which!r}")

    def collect(self, which: str = "all") -> np.ndarray:
        p = self.params_of(which)
        return self.path._point(p) if len(p) else np.zeros(0, dtype=complex)


def discretize(path: Curve, initial_nodes: int | None = None, refinement: int = 3, capacity: int = 2**20) -> DiscretizedPath:
    """Equally spaced nodes in parameter with ``refinement`` test points per interval."""
    if initial_nodes is None:
        initial_nodes = 16 if path.closed else 17
    if initial_nodes < (3 if path.closed else 2):
        raise DomainError("too few initial nodes")
    if path.closed:
        p = np.arange(initial_nodes) / initial_nodes
    else:
        p = np.linspace(0.0, 1.0, initial_nodes)
    return DiscretizedPath(path, p, refinement, capacity)


def add_node(d: DiscretizedPath, which):
    """Promote test point ``which = (row, col)`` of ``d``; see :meth:`DiscretizedPath.add_node`."""
    row, col = which
    return d.add_node(row, col)


def collect(d: DiscretizedPath, which: str = "all") -> np.ndarray:
    return d.collect(which)
