import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratapprox import (
    Barycentric,
    EngineConfig,
    NoAllowedIterateError,
    PartialFractions,
    Thiele,
    approximate,
    check,
    exterior,
    interior,
    minimax,
    squircle,
    unit_circle,
    unit_interval,
)
from ratapprox.engine import ConvergenceHistory, _choose, IterationRecord, lawson_update, stagnation_check


def log_fun(z):
    return np.log(1 + 1j + 5j * z)


def test_config_validation():
    assert EngineConfig(method="AAA").method == "barycentric"
    assert EngineConfig(method="thiele").method == "thiele"
    for bad in (dict(method="newton"), dict(tol=0), dict(stagnation=0), dict(max_iter=0)):
        with pytest.raises(ValueError):
            EngineConfig(**bad)


def test_stagnation_rule():
    flat = [1.0] * 10 + [1e-3] * 20
    assert stagnation_check(flat, 10)
    falling = list(np.logspace(0, -10, 30))
    assert not stagnation_check(falling, 10)
    # a plateau far above the usable threshold does not count
    assert not stagnation_check([0.5] * 30, 10)
    assert not stagnation_check([1e-3] * 19, 10)


def test_lawson_update_normalizes():
    lam = lawson_update(np.full(4, 0.25), np.array([1.0, 2.0, 0.0, 1.0]))
    assert lam.sum() == pytest.approx(1.0)
    assert np.allclose(lam, [0.25, 0.5, 0, 0.25])


def test_dispatch_forms():
    z = np.linspace(-1, 1, 50)
    assert isinstance(approximate(np.exp, unit_interval).fit, Barycentric)
    assert isinstance(approximate(np.exp, unit_interval, method="thiele").fit, Thiele)
    assert isinstance(approximate(np.exp, z).fit, Barycentric)
    r = approximate(np.exp(z), z)
    assert isinstance(r, Barycentric) and np.max(np.abs(r(z) - np.exp(z))) < 1e-13
    assert isinstance(approximate(np.exp, unit_interval, [2.0], degree=5).fit, PartialFractions)
    assert isinstance(approximate(np.exp(z), z, [2.0], degree=5), PartialFractions)


def test_values_validation():
    z = np.linspace(-1, 1, 10)
    with pytest.raises(ValueError):
        approximate(np.ones(9), z)
    with pytest.raises(ValueError):
        approximate(np.ones(10), np.zeros(10))
    with pytest.raises(ValueError):
        approximate(np.full(10, np.nan), z)


def test_history_envelope_and_choice():
    a = approximate(log_fun, unit_interval)
    h = a.history
    env = h.best_so_far()
    assert np.all(np.diff(env) <= 0)
    allowed = [k for k, r in enumerate(h.records) if r.allowed]
    assert h.chosen in allowed
    assert h.errors[h.chosen] == min(h.errors[k] for k in allowed)
    assert a.degrees() == (12, 12)
    assert h.converged


def test_determinism():
    a = approximate(log_fun, unit_interval)
    b = approximate(log_fun, unit_interval)
    assert a.history.to_list() == b.history.to_list()
    assert np.array_equal(a.nodes, b.nodes)


@settings(max_examples=10, deadline=None)
@given(c=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_scaling_invariance(c):
    a = approximate(log_fun, unit_interval)
    b = approximate(lambda z: c * log_fun(z), unit_interval)
    assert np.array_equal(a.nodes, b.nodes)
    ea, eb = a.history.errors, b.history.errors
    assert len(ea) == len(eb)
    big = ea > 1e-8 * ea[0]
    assert np.allclose(eb[big], abs(c) * ea[big], rtol=1e-6)
    # near roundoff only the magnitude carries over
    assert np.allclose(eb[~big], abs(c) * ea[~big], rtol=0.1)


def test_continuum_resolves_what_discrete_misses():
    f = lambda z: np.sqrt(z + 1e-6j)
    grid = np.linspace(-1, 1, 1001)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        d = approximate(f, grid)
    c = approximate(f, unit_interval)
    fine = np.linspace(-1e-3, 1e-3, 4001)
    assert np.max(np.abs(f(grid) - d(grid))) < 1e-12
    assert np.max(np.abs(f(fine) - d(fine))) > 1e-4
    assert np.max(np.abs(f(fine) - c(fine))) < 1e-10


def test_no_pole_on_curve_or_in_region():
    a = approximate(lambda z: np.tan(2 * z), unit_circle)
    d = np.abs(np.abs(a.poles()) - 1)
    assert np.all(d > 1e-12)
    r = approximate(lambda z: 1 / np.tanh(1 / z**3), exterior(squircle()))
    region = exterior(squircle())
    assert not any(region.contains(p) for p in r.poles())
    assert r.check()[2] < 1e-8


def test_interior_region_and_unit_circle():
    a = approximate(lambda z: 1 / (z - 1.5) + np.exp(z), interior(unit_circle))
    assert all(abs(p) > 1 for p in a.poles())
    assert check(a)[2] < 1e-12


def test_pole_free_start_is_always_allowed():
    # the initial constant has no poles, so even a reject-all predicate keeps it
    a = approximate(np.exp, unit_interval, allowed=False, max_iter=5)
    assert len(a.poles()) == 0
    assert a.history.chosen == 0


def test_choose_without_allowed_iterate():
    h = ConvergenceHistory([IterationRecord(1, 0.5, None), IterationRecord(2, 0.1, None)])
    assert _choose(h, [None, None], lambda r: False) is None
    assert _choose(h, [None, None], lambda r: r == "b") is None
    h = ConvergenceHistory([IterationRecord(1, 0.5, None), IterationRecord(2, 0.1, None)])
    assert _choose(h, ["a", "b"], lambda r: r == "a") == 0
    err = NoAllowedIterateError("none", h)
    assert err.history is h


def test_exact_recovery_node_budget():
    rng = np.random.default_rng(1)
    for k in range(1, 7):
        p = 1.5 * np.exp(2j * np.pi * (np.arange(k) / k + 0.1))
        c = rng.normal(size=k) + 1j * rng.normal(size=k)
        f = lambda z, p=p, c=c: 0.5 + (1 / (np.asarray(z)[..., None] - p)) @ c
        for method in ("aaa", "thiele"):
            a = approximate(f, unit_circle, method=method, max_iter=2 * k + 3)
            z = unit_circle.point(np.linspace(0, 1, 999))
            scale = np.max(np.abs(f(z)))
            assert np.max(np.abs(f(z) - a(z))) <= 1e-11 * scale, (k, method)


def test_factorization_counts():
    t = approximate(log_fun, unit_interval, method="thiele")
    b = approximate(log_fun, unit_interval)
    assert t.history.factorizations == 0
    assert b.history.factorizations == len(b.history)


def test_minimax_keeps_nodes_and_evens_error():
    f = lambda z: np.abs(z - 0.5 + 0.05j)
    a = approximate(f, unit_interval, max_iter=20)
    b = minimax(a, 20)
    assert np.array_equal(a.nodes, b.nodes)
    t, ft = a.test_points()
    ra = np.max(np.abs(ft - a(t))) / np.median(np.abs(ft - a(t)))
    rb = np.max(np.abs(ft - b(t))) / np.median(np.abs(ft - b(t)))
    assert rb < ra / 5
    assert check(b)[2] < check(a)[2]
    with pytest.raises(TypeError):
        minimax(approximate(f, unit_interval, method="thiele", max_iter=10))


def test_check_grid_is_denser():
    a = approximate(np.exp, unit_interval)
    z, err, m = check(a)
    assert len(z) >= 9 * len(a.samples)
    assert m == pytest.approx(np.max(np.abs(err)))


def test_history_records_roundtrip():
    h = ConvergenceHistory([IterationRecord(1, 0.5, True), IterationRecord(2, 0.1, None)])
    assert h.to_list() == [{"n": 1, "max_err": 0.5, "allowed": True}, {"n": 2, "max_err": 0.1, "allowed": None}]
    assert np.array_equal(h.nodes, [1, 2])
