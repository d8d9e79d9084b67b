"""Greedy rational approximation drivers.

The AAA (barycentric) and greedy Thiele iterations share one loop: evaluate
the current interpolant at the test points, record the worst error, and
promote the worst test point to a node. On a curve, path or region the test
points come from an adaptive :class:`~ratapprox.domain.DiscretizedPath`;
on a point set they are fixed.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import domain as dom
from .bary import Barycentric, LoewnerWorkspace
from .parfrac import PartialFractions, fit_least_squares
from .thiele import Thiele, ThieleBreakdown, ThieleWorkspace

__all__ = [
    "EngineConfig",
    "IterationRecord",
    "ConvergenceHistory",
    "Approximation",
    "NoAllowedIterateError",
    "approximate",
    "approximate_continuum",
    "approximate_discrete",
    "approximate_values",
    "approximate_prescribed",
    "stagnation_check",
    "allowed_default",
    "lawson_update",
    "minimax",
    "check",
]

log = logging.getLogger(__name__)

_METHODS = {"barycentric": "barycentric", "aaa": "barycentric", "thiele": "thiele"}


@dataclass
class EngineConfig:
    method: str = "barycentric"
    tol: float = 1e-13
    max_iter: int = 150
    stagnation: int = 10
    # None: domain default; True: every pole allowed; otherwise a predicate on a pole
    allowed: Callable[[complex], bool] | bool | None = None
    initial_nodes: int | None = None
    refinement: int = 3

    def __post_init__(self):
        if self.method.lower() not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        self.method = _METHODS[self.method.lower()]
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.stagnation < 1:
            raise ValueError("stagnation window must be at least 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class IterationRecord:
    n: int
    max_err: float
    allowed: bool | None


@dataclass
class ConvergenceHistory:
    records: list[IterationRecord] = field(default_factory=list)
    chosen: int | None = None
    converged: bool = False
    factorizations: int = 0

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.max_err for r in self.records])

    @property
    def nodes(self) -> np.ndarray:
        return np.array([r.n for r in self.records], dtype=int)

    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate(self.errors) if self.records else np.zeros(0)

    def to_list(self) -> list[dict]:
        return [{"n": r.n, "max_err": r.max_err, "allowed": r.allowed} for r in self.records]


class NoAllowedIterateError(RuntimeError):
    def __init__(self, msg, history):
        super().__init__(msg)
        self.history = history


@dataclass
class Approximation:
    """A fitted rational function together with its origin and iteration history."""

    f: Callable | None
    domain: object
    fit: Barycentric | Thiele | PartialFractions
    history: ConvergenceHistory
    samples: np.ndarray
    sample_values: np.ndarray
    params: np.ndarray | None = None
    config: EngineConfig | None = None

    def __call__(self, z):
        return self.fit(z)

    def degrees(self):
        return self.fit.degrees()

    def degree(self):
        return self.fit.degree()

    def poles(self):
        return self.fit.poles()

    def residues(self):
        return self.fit.residues()

    def roots(self):
        return self.fit.roots()

    @property
    def nodes(self):
        return self.fit.nodes

    def test_points(self):
        """Samples that are not nodes of the returned fit, with their values."""
        nodes = getattr(self.fit, "nodes", np.zeros(0, dtype=complex))
        keep = ~np.isin(self.samples, nodes)
        return self.samples[keep], self.sample_values[keep]

    def check(self, quiet: bool = True):
        return check(self, quiet=quiet)


# ---------------------------------------------------------------------------
# helpers


def _evaluate(f, z: np.ndarray) -> np.ndarray:
    """Vectorized evaluation of ``f``, falling back to a loop for scalar-only callables."""
    z = np.asarray(z, dtype=complex)
    if len(z) == 0:
        return np.zeros(0, dtype=complex)
    with np.errstate(all="ignore"):
        try:
            y = np.asarray(f(z), dtype=complex)
            if y.shape == z.shape:
                return y
        except (TypeError, ValueError):
            pass
        out = np.empty(z.shape, dtype=complex)
        for i, zi in enumerate(z):
            try:
                out[i] = f(complex(zi))
            except (ZeroDivisionError, OverflowError, ValueError):
                out[i] = complex(np.nan, np.nan)
        return out


def _curve_of(domain):
    return domain.boundary if isinstance(domain, dom.Region) else domain


def allowed_default(domain) -> Callable[[complex], bool]:
    """No poles on a curve or path, none inside a region; anything goes for point sets."""
    if isinstance(domain, dom.Region):
        return lambda p: not domain.contains(p)
    if isinstance(domain, dom.Curve):
        tol = 1e-12 * domain.diameter
        return lambda p: dom.dist_to_boundary(domain, p) > tol
    return lambda p: True


def _resolve_allowed(allowed, domain):
    if allowed is None:
        return allowed_default(domain)
    if allowed is True:
        return lambda p: True
    if allowed is False:
        return lambda p: False
    return allowed


def stagnation_check(history: ConvergenceHistory | list, window: int, fscale: float = 1.0) -> bool:
    """True when the best error of the last ``window`` iterations is no better
    than 0.95 times the best of the ``window`` before, once a usable fit
    (error at most 1e-2 * fscale) exists."""
    errs = history.errors if isinstance(history, ConvergenceHistory) else np.asarray(history, dtype=float)
    if len(errs) < 2 * window:
        return False
    recent = errs[-window:].min()
    before = errs[-2 * window : -window].min()
    best = errs.min()
    return bool(recent >= 0.95 * before and best <= 1e-2 * fscale)


def lawson_update(lam: np.ndarray, errors: np.ndarray) -> np.ndarray:
    """Multiply the weights by the error magnitudes and renormalize to sum 1."""
    lam = lam * np.abs(errors)
    total = lam.sum()
    return lam / total if total > 0 else lam


# ---------------------------------------------------------------------------
# test-point samplers


class _DiscreteSampler:
    def __init__(self, points, values=None, f=None):
        self.points = points
        self.values = values if values is not None else _evaluate(f, points)

    def initial(self):
        slots = np.arange(len(self.points))
        return slots, self.points, self.values

    def promote(self, slot):
        return self.points[slot], [slot], (np.zeros(0, int), np.zeros(0, complex), np.zeros(0, complex))


class _ContinuumSampler:
    def __init__(self, d: dom.DiscretizedPath, f):
        self.d = d
        self.f = f

    def initial(self):
        slots = self.d.active_slots()
        pts = self.d.path._point(self.d.slot_params(slots))
        return slots, pts, _evaluate(self.f, pts)

    def promote(self, slot):
        s = self.d.refinement
        row, col = divmod(int(slot), s)
        z, rows = self.d.add_node(row, col + 1)
        old = self.d.slots([rows[0]])
        new = self.d.slots(rows)
        pts = self.d.path._point(self.d.slot_params(new))
        return z, old, (new, pts, _evaluate(self.f, pts))


# ---------------------------------------------------------------------------
# greedy loop


def _greedy(sampler, cfg: EngineConfig, allowed: Callable[[complex], bool]):
    """Run the greedy iteration; returns ``(fit, history, samples, values)``."""
    thiele = cfg.method == "thiele"
    ws = ThieleWorkspace() if thiele else LoewnerWorkspace()
    slots, pts, vals = sampler.initial()
    ok = np.isfinite(vals)
    if not np.any(ok):
        raise ValueError("function is not finite at any test point")
    ws.set_tests(slots[ok], pts[ok], vals[ok])
    fscale = float(np.max(np.abs(vals[ok])))
    promoted_z: list[complex] = []
    promoted_f: list[complex] = []
    history = ConvergenceHistory()
    iterates: list = []

    def allowed_fit(r) -> bool:
        return all(allowed(p) for p in r.poles())

    def promote(order):
        for slot in order:
            z_t, y_t = ws.t[slot], ws.f[slot]
            try:
                weight = ws.weight_for(z_t, y_t) if thiele else None
                z, old, (new, npts, nvals) = sampler.promote(slot)
            except (ThieleBreakdown, dom.DuplicatePointError):
                continue
            ws.drop_tests(old)
            if thiele:
                ws.add_nodes([z], [y_t], [weight])
            else:
                ws.add_nodes([z], [y_t])
            good = np.isfinite(nvals)
            ws.set_tests(new[good], npts[good], nvals[good])
            promoted_z.append(z)
            promoted_f.append(y_t)
            return True
        return False

    act = ws.active_slots()
    seed = act[np.argsort(-np.abs(ws.f[act]), kind="stable")]
    if not promote(seed):
        raise RuntimeError("no test point could be promoted to a node")

    while True:
        if thiele:
            pred = ws.predict()
        else:
            ws.solve()
            pred = ws.predict()
        act = ws.active_slots()
        fscale = max(fscale, float(np.max(np.abs(ws.f[act]))) if len(act) else 0.0)
        err = np.abs(ws.f[act] - pred)
        err = np.where(np.isfinite(err), err, np.inf)
        max_err = float(err.max()) if len(err) else 0.0
        r = ws.interpolant()
        flag = None if thiele else allowed_fit(r)
        history.records.append(IterationRecord(ws.n, max_err, flag))
        iterates.append(r)
        log.debug("n=%d max_err=%.3e allowed=%s", ws.n, max_err, flag)
        if max_err <= cfg.tol * fscale:
            if thiele:
                flag = history.records[-1].allowed = allowed_fit(r)
            if flag:
                history.converged = True
                break
        if ws.n >= cfg.max_iter or len(act) == 0:
            break
        if stagnation_check(history, cfg.stagnation, fscale):
            break
        if not promote(act[np.argsort(-err, kind="stable")]):
            break

    history.factorizations = ws.factorizations
    chosen = _choose(history, iterates, allowed_fit)
    if chosen is None:
        raise NoAllowedIterateError("no iterate has all poles allowed", history)
    history.chosen = chosen
    act = ws.active_slots()
    samples = np.concatenate([ws.t[act], promoted_z])
    values = np.concatenate([ws.f[act], promoted_f])
    return iterates[chosen], history, samples, values


def _choose(history, iterates, allowed_fit):
    """Index of the allowed iterate with the smallest max error (earliest on ties)."""
    order = np.argsort(history.errors, kind="stable")
    for k in order:
        rec = history.records[k]
        if rec.allowed is None:
            rec.allowed = allowed_fit(iterates[k])
        if rec.allowed:
            return int(k)
    return None


# ---------------------------------------------------------------------------
# public drivers


def _config(cfg, kwargs) -> EngineConfig:
    if cfg is None:
        return EngineConfig(**kwargs)
    if kwargs:
        raise TypeError("pass either an EngineConfig or keyword options, not both")
    return cfg


def approximate_continuum(f, domain, cfg: EngineConfig | None = None, **kwargs) -> Approximation:
    """Greedy rational interpolant of ``f`` on a curve, path or region boundary,
    refining the test points next to each new node."""
    cfg = _config(cfg, kwargs)
    curve = _curve_of(domain)
    d = dom.discretize(curve, cfg.initial_nodes, cfg.refinement)
    allowed = _resolve_allowed(cfg.allowed, domain)
    fit, history, samples, values = _greedy(_ContinuumSampler(d, f), cfg, allowed)
    return Approximation(f, domain, fit, history, samples, values, d.params_of("all"), cfg)


def approximate_discrete(f, points, cfg: EngineConfig | None = None, **kwargs) -> Approximation:
    """Greedy rational interpolant of ``f`` using a fixed set of test points."""
    cfg = _config(cfg, kwargs)
    z = np.asarray(points, dtype=complex).ravel()
    if len(np.unique(z)) < 2:
        raise ValueError("need at least two distinct points")
    if len(np.unique(z)) != len(z):
        raise ValueError("points must be distinct")
    allowed = _resolve_allowed(True if cfg.allowed is None else cfg.allowed, z)
    fit, history, samples, values = _greedy(_DiscreteSampler(z, f=f), cfg, allowed)
    if not history.converged:
        warnings.warn("discrete iteration stopped without reaching the tolerance", RuntimeWarning, stacklevel=2)
    return Approximation(f, z, fit, history, samples, values, None, cfg)


def approximate_values(y, z, cfg: EngineConfig | None = None, **kwargs):
    """Greedy rational interpolant of tabulated values ``y`` at points ``z``; returns the bare interpolant."""
    cfg = _config(cfg, kwargs)
    y = np.asarray(y, dtype=complex).ravel()
    z = np.asarray(z, dtype=complex).ravel()
    if len(y) != len(z):
        raise ValueError("values and points must have equal lengths")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
        raise ValueError("values and points must be finite")
    if len(np.unique(z)) != len(z):
        raise ValueError("points must be distinct")
    if len(z) < 2:
        raise ValueError("need at least two points")
    allowed = _resolve_allowed(True if cfg.allowed is None else cfg.allowed, z)
    fit, *_ = _greedy(_DiscreteSampler(z, values=y), cfg, allowed)
    return fit


def _pole_resolved_params(curve, zeta, init: int, max_passes: int = 60) -> np.ndarray:
    """Equally spaced parameters, bisected until adjacent points are no farther
    apart than half the distance to the nearest prescribed pole."""
    p = np.arange(init) / init if curve.closed else np.linspace(0.0, 1.0, init)
    if len(zeta) == 0:
        return p
    for _ in range(max_passes):
        ends = np.append(p[1:], 1.0) if curve.closed else p[1:]
        starts = p if curve.closed else p[:-1]
        za, zb = curve._point(starts), curve._point(ends)
        mid = 0.5 * (starts + ends)
        dist = np.min(np.abs(curve._point(mid)[:, None] - zeta[None, :]), axis=1)
        split = np.abs(zb - za) > 0.5 * dist
        if not np.any(split):
            break
        p = np.sort(np.concatenate([p, mid[split]]))
    return p


def approximate_prescribed(f, domain, zeta, degree: int = 10, init: int = 400) -> Approximation:
    """Least-squares fit ``p(z) + sum(c_j / (z - zeta_j))`` with the poles given.

    On a continuum domain the boundary is sampled at ``init`` equally spaced
    parameters, refined near the poles; on a point vector the points are used
    as they are.
    """
    zeta = np.asarray(zeta, dtype=complex).ravel()
    if isinstance(domain, (dom.Curve, dom.Region)):
        curve = _curve_of(domain)
        params = _pole_resolved_params(curve, zeta, init)
        z = curve._point(params)
    else:
        params = None
        z = np.asarray(domain, dtype=complex).ravel()
    y = _evaluate(f, z)
    ok = np.isfinite(y)
    fit = fit_least_squares(z[ok], y[ok], zeta, degree)
    err = float(np.max(np.abs(fit(z[ok]) - y[ok])))
    history = ConvergenceHistory([IterationRecord(degree + 1 + len(zeta), err, True)], chosen=0, converged=True)
    return Approximation(f, domain, fit, history, z[ok], y[ok], params, None)


def approximate(f, domain, zeta=None, **kwargs):
    """Dispatch on the arguments, mirroring the call forms

    * ``approximate(f, curve_or_region)``: continuum greedy iteration
    * ``approximate(f, points)``: discrete greedy iteration
    * ``approximate(values, points)``: tabulated data, returns the interpolant
    * ``approximate(f_or_values, domain, zeta, degree=...)``: prescribed poles
    """
    if zeta is not None:
        if not callable(f):
            return fit_least_squares(domain, f, zeta, kwargs.get("degree", 10))
        return approximate_prescribed(f, domain, zeta, **kwargs)
    if not callable(f):
        return approximate_values(f, domain, **kwargs)
    if isinstance(domain, (dom.Curve, dom.Region)):
        return approximate_continuum(f, domain, **kwargs)
    return approximate_discrete(f, domain, **kwargs)


# ---------------------------------------------------------------------------
# post-processing


def _lawson_matrix(t, ft, nodes):
    """Rows ``f_i C_ij | -C_ij`` for the linearized residual ``f D - N`` with
    free numerator and denominator coefficients; rows at nodes are replaced by
    the limit ``f_i beta_j - alpha_j``."""
    n = len(nodes)
    hit = t[:, None] == nodes[None, :]
    C = np.zeros((len(t), n), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        C[~hit] = (1.0 / (t[:, None] - nodes[None, :]))[~hit]
    A = np.hstack([ft[:, None] * C, -C])
    for i, j in zip(*np.nonzero(hit)):
        A[i] = 0.0
        A[i, j] = ft[i]
        A[i, n + j] = -1.0
    return A


def _lawson_fit(A, lam, nodes):
    _, _, Vh = np.linalg.svd(np.sqrt(lam)[:, None] * A, full_matrices=False)
    v = Vh[-1].conj()
    n = len(nodes)
    beta, alpha = v[:n], v[n:]
    if not np.all(beta != 0):
        return None
    return Barycentric(nodes.copy(), alpha / beta, beta)


def minimax(a: Approximation, iterations: int = 60) -> Approximation:
    """Lawson iteration toward a uniform error, with the nodes held fixed.

    Numerator and denominator coefficients are fitted separately, so the
    result no longer interpolates at the nodes. On a continuum domain the
    reweighting runs on the dense check grid. A step that raises the maximum
    error is retried with the error exponent halved. The iterate with the
    smallest ratio of maximum to median error at the test points is returned.
    """
    r = a.fit
    if not isinstance(r, Barycentric):
        raise TypeError("minimax needs a barycentric fit")
    t, ft = a.test_points()
    if len(t) == 0 or not np.any(np.abs(ft - r(t)) > 0):
        return a
    if a.params is not None:
        curve = _curve_of(a.domain)
        z = np.unique(np.concatenate([curve._point(_dense_params(a.params, curve.closed)), r.nodes]))
        fz = _evaluate(a.f, z)
        ok = np.isfinite(fz)
        z, fz = z[ok], fz[ok]
    else:
        z = np.concatenate([t, r.nodes])
        fz = np.concatenate([ft, r.values])
    A = _lawson_matrix(z, fz, r.nodes)

    def ratio(fit):
        e = np.abs(ft - fit(t))
        return e.max() / max(np.median(e), 1e-300) if np.all(np.isfinite(e)) else np.inf

    best, best_ratio = r, ratio(r)
    lam = np.full(len(z), 1.0 / len(z))
    cur = _lawson_fit(A, lam, r.nodes)
    if cur is None:
        return a
    err = np.abs(fz - cur(z))
    p = 1.0
    for _ in range(iterations):
        rho = ratio(cur)
        if rho < best_ratio:
            best, best_ratio = cur, rho
        while True:
            lam2 = lawson_update(lam, err**p)
            nxt = _lawson_fit(A, lam2, r.nodes) if lam2.sum() > 0 else None
            err2 = np.abs(fz - nxt(z)) if nxt is not None else None
            if err2 is not None and np.all(np.isfinite(err2)) and err2.max() <= err.max():
                break
            p /= 2
            if p < 1e-3:
                nxt = None
                break
        if nxt is None:
            break
        lam, cur, err = lam2, nxt, err2
    if ratio(cur) < best_ratio:
        best = cur
    if best is r:
        return a
    return Approximation(a.f, a.domain, best, a.history, a.samples, a.sample_values, a.params, a.config)


def _dense_params(params: np.ndarray, closed: bool, factor: int = 10) -> np.ndarray:
    p = np.sort(params)
    ends = np.append(p[1:], 1.0) if closed else p[1:]
    starts = p if closed else p[:-1]
    frac = np.arange(factor) / factor
    dense = (starts[:, None] + (ends - starts)[:, None] * frac[None, :]).ravel()
    return dense if closed else np.append(dense, p[-1])


def check(a: Approximation, quiet: bool = True):
    """Errors ``f - r`` on a check grid: ten times the final sample density on
    a continuum domain, the full point set otherwise.

    Returns ``(points, errors, max_error)``.
    """
    if a.f is None:
        raise ValueError("approximation has no function to check against")
    if a.params is not None:
        curve = _curve_of(a.domain)
        z = curve._point(_dense_params(a.params, curve.closed))
    elif isinstance(a.domain, (dom.Curve, dom.Region)):
        z = a.samples
    else:
        z = np.asarray(a.domain, dtype=complex)
    fz = _evaluate(a.f, z)
    ok = np.isfinite(fz)
    z, fz = z[ok], fz[ok]
    err = fz - a.fit(z)
    max_err = float(np.max(np.abs(err))) if len(err) else 0.0
    if not quiet:
        print(f"Max error is {max_err:.2e}")
    log.info("max check error %.3e", max_err)
    return z, err, max_err
